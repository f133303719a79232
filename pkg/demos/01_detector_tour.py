"""A guided tour of the detectors on a single channel realization.

Transmit two random 8-PSK symbols through a 2x2 Rayleigh channel, then ask
every detector for its estimate and compare against the truth.
"""

import numpy as np

from mimodetect.channel import NoiseSpec, apply_channel, draw_channel, ebn0_to_n0, make_rng
from mimodetect.constellation import from_name, slice_nearest
from mimodetect.detectors import (
    detect_approx_gaussian,
    detect_approx_ring,
    detect_cond_mean_exact,
    detect_linear,
    detect_mld,
    mmse_matrix,
    zf_matrix,
)

rng = make_rng(2024, 0)
c = from_name("8psk")
n0 = ebn0_to_n0(14.0, c.order).n0

H = draw_channel(rng, 2, 2)
idx_tx = rng.integers(0, c.order, size=2)
x = c.points[idx_tx]
y = apply_channel(H, x, NoiseSpec(n0), rng)

print(f"transmitted indices: {idx_tx},  symbols: {np.round(x, 3)}")
print(f"N0 = {n0:.4f} (14 dB Eb/N0)\n")

rows = [
    ("zero forcing", detect_linear(zf_matrix(H), y).xhat),
    ("linear mmse", detect_linear(mmse_matrix(H, n0), y).xhat),
    ("exact cond. mean", detect_cond_mean_exact(y, H, c, n0).xhat),
    ("ring type-1", detect_approx_ring(y, H, c, n0, "type1").xhat),
    ("ring type-2", detect_approx_ring(y, H, c, n0, "type2").xhat),
    ("ring type-1 maxlog", detect_approx_ring(y, H, c, n0, "type1",
                                              maxlog=True).xhat),
    ("gaussian type-1", detect_approx_gaussian(y, H, c, n0, "type1").xhat),
]

print(f"{'detector':22s} {'soft estimate':38s} sliced  correct")
for name, xhat in rows:
    sliced = slice_nearest(xhat, c)
    ok = "yes" if np.array_equal(sliced, idx_tx) else "NO"
    print(f"{name:22s} {np.array2string(np.round(xhat, 3)):38s} "
          f"{sliced}  {ok}")

mld_idx = detect_mld(y, H, c)
print(f"{'mld (hard)':22s} {'-':38s} {mld_idx}  "
      f"{'yes' if np.array_equal(mld_idx, idx_tx) else 'NO'}")
