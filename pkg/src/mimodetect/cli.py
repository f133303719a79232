"""Command-line driver: `simulate` (BER sweeps to CSV/SVG + manifest),
`bench` (per-symbol timing table), and `verify` (numerical identity
suite).

Exit codes: 0 success, 2 invalid flags, 3 under-sampled points under
--strict, 1 verification failure.
"""

import argparse
import json
import os
import sys
import time

from . import __version__
from .constellation import CONSTELLATION_NAMES
from .detectors import DETECTOR_NAMES
from .sim import SweepConfig, run_bench, run_sweep, write_csv, write_svg_plot
from .verification import run_all

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNDERSAMPLED = 3


def parse_ebn0_grid(text):
    """start:step:stop (inclusive, dB) or a comma list of dB values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("step must be positive")
        grid = []
        e = start
        while e <= stop + 1e-9:
            grid.append(round(e, 9))
            e += step
        return tuple(grid)
    return tuple(float(p) for p in text.split(","))


def read_config_file(path):
    """Plain key=value lines; '#' starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
    return values


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mimodetect",
        description="Conditional-mean MIMO detection: simulation, "
                    "benchmarking, and numerical verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte-Carlo BER sweep")
    sim.add_argument("--mod", choices=CONSTELLATION_NAMES)
    sim.add_argument("--detector", action="append", default=[])
    sim.add_argument("--nr", type=int, default=2)
    sim.add_argument("--ebn0", default="0:2:24",
                     help="start:step:stop in dB, or comma list")
    sim.add_argument("--target-errors", type=int, default=200)
    sim.add_argument("--max-symbols", type=int, default=1_000_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--threads", type=int,
                     default=int(os.environ.get("MIMO_DETECT_THREADS", "1")))
    sim.add_argument("--out", default="sweep.csv")
    sim.add_argument("--plot", action="store_true")
    sim.add_argument("--maxlog", action="store_true",
                     help="use max-log variants of every approx detector")
    sim.add_argument("--strict", action="store_true",
                     help="exit 3 when any point misses target errors")
    sim.add_argument("--config", help="key=value config file; flags win")

    bench = sub.add_parser("bench", help="per-symbol timing table")
    bench.add_argument("--mod", default="8psk", choices=CONSTELLATION_NAMES)
    bench.add_argument("--detector", action="append", default=[])
    bench.add_argument("--nr", type=int, default=2)
    bench.add_argument("--symbols", type=int, default=1_000_000)
    bench.add_argument("--seed", type=int, default=0)

    ver = sub.add_parser("verify", help="run the numerical identity suite")
    ver.add_argument("--seed", type=int, default=0)
    return parser


def _apply_config_file(args, parser):
    if not getattr(args, "config", None):
        return args
    defaults = parser._subparsers._group_actions[0].choices["simulate"]
    file_values = read_config_file(args.config)
    # flags that were left at their defaults pick up the file value
    for key, raw in file_values.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise ValueError(f"unknown config key {key!r}")
        default = defaults.get_default(dest)
        if getattr(args, dest) == default:
            current = getattr(args, dest)
            if isinstance(default, bool):
                val = raw.lower() in ("1", "true", "yes")
            elif isinstance(default, int):
                val = int(raw)
            elif dest == "detector":
                val = [d.strip() for d in raw.split(",") if d.strip()]
            else:
                val = raw
            setattr(args, dest, val)
    return args


def cmd_simulate(args, parser):
    try:
        args = _apply_config_file(args, parser)
        if not args.mod:
            raise ValueError("--mod is required")
        if not args.detector:
            raise ValueError("at least one --detector is required")
        for d in args.detector:
            base = d[:-4] if d.endswith("-max") else d
            if base not in DETECTOR_NAMES:
                raise ValueError(f"unknown detector {d!r}")
        grid = parse_ebn0_grid(args.ebn0)
        if not grid:
            raise ValueError(f"empty Eb/N0 grid from {args.ebn0!r}")
        detectors = tuple(d + "-max" if args.maxlog and not d.endswith("-max")
                          and d.startswith(("gauss", "square", "ring"))
                          else d for d in args.detector)
        cfg = SweepConfig(constellation=args.mod, detectors=detectors,
                          nr=args.nr, ebn0_db=grid,
                          target_errors=args.target_errors,
                          max_symbols=args.max_symbols, seed=args.seed,
                          threads=args.threads)
    except ValueError as exc:
        parser.exit(EXIT_USAGE, f"error: {exc}\n")

    started = time.time()
    sweep = run_sweep(cfg, progress=lambda p: print(
        f"{p.detector:12s} {p.ebn0_db:6.1f} dB  ber={p.ber:.3e}  "
        f"({p.bit_errors} errors / {p.bits} bits)"))
    write_csv(args.out, sweep.points)
    if args.plot:
        write_svg_plot(os.path.splitext(args.out)[0] + ".svg", sweep)
    manifest = {
        "tool": "mimodetect",
        "version": __version__,
        "config": {
            "constellation": cfg.constellation,
            "detectors": list(cfg.detectors),
            "nr": cfg.nr,
            "ebn0_db": list(cfg.ebn0_db),
            "target_errors": cfg.target_errors,
            "max_symbols": cfg.max_symbols,
            "seed": cfg.seed,
            "threads": cfg.threads,
        },
        "started": started,
        "finished": time.time(),
        "outputs": [args.out],
    }
    with open(os.path.splitext(args.out)[0] + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
    if args.strict and any(p.under_sampled for p in sweep.points):
        print("under-sampled points present", file=sys.stderr)
        return EXIT_UNDERSAMPLED
    return EXIT_OK


def cmd_bench(args, parser):
    detectors = args.detector or ["mmse", "mld", "ring-t1", "ring-t2",
                                  "ring-t1-max", "ring-t2-max"]
    rows = run_bench(args.mod, detectors, nr=args.nr, symbols=args.symbols,
                     seed=args.seed)
    print(f"{'detector':14s} {'ns/symbol':>12s}   ({args.mod}, "
          f"Nr={args.nr}, {rows[0].symbols} symbols)")
    for row in rows:
        print(f"{row.detector:14s} {row.ns_per_symbol:12.1f}")
    return EXIT_OK


def cmd_verify(args, parser):
    results = run_all(seed=args.seed)
    failed = False
    for name, passed, detail in results:
        status = "PASS" if passed else "FAIL"
        print(f"{status}  {name:32s} {detail}")
        failed |= not passed
    return 1 if failed else EXIT_OK


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {"simulate": cmd_simulate, "bench": cmd_bench,
               "verify": cmd_verify}[args.command]
    return handler(args, parser)


if __name__ == "__main__":
    sys.exit(main())
