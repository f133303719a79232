"""The numerical identities that anchor the closed-form detectors.

Each detector formula has an independent slow evaluator in the oracle
module; this script prints the agreement for one random instance of each
identity, then runs the full named check suite.
"""

import numpy as np

from mimodetect.channel import draw_channel, make_rng
from mimodetect.detectors import detect_linear, mmse_matrix, mmse_matrix_receive_form
from mimodetect.oracle import (
    UniformRingPdf,
    closed_alpha_beta_ring_bessel,
    gaussian_prior_cond_mean,
    quad_alpha_beta,
)
from mimodetect.verification import run_all

rng = make_rng(7, 0)
H = draw_channel(rng, 2, 2)
y = rng.standard_normal(2) + 1j * rng.standard_normal(2)
n0 = 0.4

# 1. the two algebraic forms of the linear MMSE matrix
d = np.max(np.abs(mmse_matrix(H, n0) - mmse_matrix_receive_form(H, n0)))
print(f"mmse transmit-form vs receive-form:     max |diff| = {d:.2e}")

# 2. continuous Gaussian prior -> linear MMSE (the generalized-MMSE view)
ref = gaussian_prior_cond_mean(y, H, n0)
lin = detect_linear(mmse_matrix(H, n0), y).xhat
print(f"gaussian-prior quadrature vs G_mmse y:  max |diff| = "
      f"{np.max(np.abs(ref - lin)):.2e}")

# 3. ring-pdf Bessel closed form vs theta quadrature
radii = (np.sqrt(0.4), 2 * np.sqrt(0.4))
x2 = 0.3 - 0.8j
aq, bq = quad_alpha_beta(y, H, x2, n0, UniformRingPdf(radii=radii))
ac, bc = closed_alpha_beta_ring_bessel(y, H, x2, n0, radii)
print(f"ring Bessel closed form vs quadrature:  rel diff = "
      f"{abs(bq - bc) / bc:.2e}\n")

print("full check suite:")
for name, passed, detail in run_all():
    print(f"  {'PASS' if passed else 'FAIL'}  {name:32s} {detail}")
