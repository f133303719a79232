"""A small BER sweep comparing the reduced-complexity detectors.

Runs 8-PSK over a 2x2 Rayleigh channel and writes sweep.csv plus an SVG
plot next to this script.  Roughly a minute of compute; raise max_symbols
for smoother curves.
"""

import pathlib

from mimodetect.sim import SweepConfig, run_sweep, write_csv, write_svg_plot

here = pathlib.Path(__file__).parent

cfg = SweepConfig(
    constellation="8psk",
    detectors=("mmse", "mld", "ring-t1", "ring-t2", "gauss-t1"),
    nr=2,
    ebn0_db=tuple(range(4, 26, 4)),
    target_errors=300,
    max_symbols=300_000,
    seed=1,
)

sweep = run_sweep(cfg, progress=lambda p: print(
    f"{p.detector:10s} {p.ebn0_db:5.1f} dB  ber = {p.ber:.3e}"))

write_csv(here / "sweep.csv", sweep.points)
write_svg_plot(here / "sweep.svg", sweep)
print(f"\nwrote {here / 'sweep.csv'} and {here / 'sweep.svg'}")
