"""Named numerical identity checks tying the closed-form detectors to the
independent oracle evaluators.  Each check returns (name, passed, detail);
the CLI `verify` subcommand runs them all and exits nonzero on failure.
"""

import numpy as np

from . import oracle
from .channel import draw_channel, make_rng
from .constellation import build_apsk, build_psk, build_qam
from .detectors import (
    detect_approx_batch,
    detect_linear,
    mmse_matrix,
    mmse_matrix_receive_form,
)


def check_mmse_form_equivalence(seed=0, trials=100, tol=1e-10):
    """(H^H H + N0 I)^-1 H^H == H^H (H H^H + N0 I)^-1 elementwise."""
    rng = make_rng(seed, 101)
    worst = 0.0
    for _ in range(trials):
        nr = int(rng.integers(2, 5))
        nt = int(rng.integers(1, 3))
        H = draw_channel(rng, nt, nr)
        n0 = float(rng.uniform(0.01, 2.0))
        d = np.max(np.abs(mmse_matrix(H, n0)
                          - mmse_matrix_receive_form(H, n0)))
        worst = max(worst, float(d))
    return ("mmse-two-forms", worst < tol, f"max |diff| = {worst:.3e}")


def check_gaussian_prior_equals_linear_mmse(seed=0, trials=3, tol=1e-4):
    """Quadrature of the Gaussian-prior conditional mean equals the linear
    MMSE output G y."""
    rng = make_rng(seed, 102)
    worst = 0.0
    q = oracle.QuadratureSpec(grid_halfwidth=6.0, points_per_axis=64)
    for _ in range(trials):
        H = draw_channel(rng, 2, 2)
        n0 = float(rng.uniform(0.2, 1.0))
        y = (rng.standard_normal(2) + 1j * rng.standard_normal(2))
        ref = oracle.gaussian_prior_cond_mean(y, H, n0, q)
        lin = detect_linear(mmse_matrix(H, n0), y).xhat
        worst = max(worst, float(np.max(np.abs(ref - lin))))
    return ("gaussian-prior-is-linear-mmse", worst < tol,
            f"max |diff| = {worst:.3e}")


def check_ring_bessel_vs_quadrature(seed=0, trials=4, tol=1e-8):
    """Pre-surrogate Bessel closed forms match the per-ring theta
    quadrature to relative accuracy."""
    rng = make_rng(seed, 103)
    radii = (np.sqrt(0.4), 2 * np.sqrt(0.4))
    worst = 0.0
    for _ in range(trials):
        H = draw_channel(rng, 2, 2)
        n0 = float(rng.uniform(0.3, 1.0))
        y = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x2 = complex(rng.standard_normal() + 1j * rng.standard_normal())
        aq, bq = oracle.quad_alpha_beta(
            y, H, x2, n0, oracle.UniformRingPdf(radii=radii))
        ac, bc = oracle.closed_alpha_beta_ring_bessel(y, H, x2, n0, radii)
        worst = max(worst,
                    abs(aq - ac) / max(abs(ac), 1e-300),
                    abs(bq - bc) / max(abs(bc), 1e-300))
    return ("ring-bessel-closed-form", worst < tol,
            f"max rel diff = {worst:.3e}")


def check_square_beta_vs_quadrature(seed=0, trials=4, tol=1e-6):
    """The erf-product square-pdf beta (exact) matches 2-D quadrature."""
    rng = make_rng(seed, 104)
    kappa = float(np.sqrt(1.5))
    q = oracle.QuadratureSpec(points_per_axis=2048)
    worst = 0.0
    for _ in range(trials):
        H = draw_channel(rng, 2, 2)
        n0 = float(rng.uniform(0.3, 1.0))
        y = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x2 = complex(rng.standard_normal() + 1j * rng.standard_normal())
        pdf = oracle.UniformSquarePdf(kappa=kappa)
        _, b_half = oracle.quad_alpha_beta(
            y, H, x2, n0, pdf,
            oracle.QuadratureSpec(points_per_axis=q.points_per_axis // 2))
        _, b_full = oracle.quad_alpha_beta(y, H, x2, n0, pdf, q)
        # midpoint error is O(h^2); one Richardson step cancels it
        bq = b_full + (b_full - b_half) / 3.0
        bc = oracle.closed_beta_square(y, H, x2, n0, kappa)
        worst = max(worst, abs(bq - bc) / max(abs(bc), 1e-300))
    return ("square-beta-closed-form", worst < tol,
            f"max rel diff = {worst:.3e}")


def check_log_vs_linear_detectors(seed=0, trials=5, tol=1e-9):
    """exp(log xhat) from the log-domain detectors matches the direct
    linear-domain ratio evaluation."""
    rng = make_rng(seed, 105)
    cases = [("gaussian", build_psk(8)), ("ring", build_psk(8)),
             ("ring", build_apsk([np.sqrt(0.4), 2 * np.sqrt(0.4)], [8, 8])),
             ("square", build_qam(16))]
    worst = 0.0
    for _ in range(trials):
        H = draw_channel(rng, 2, 2)
        n0 = float(rng.uniform(0.3, 1.0))
        y = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        for scheme, c in cases:
            for target in ("type1", "type2"):
                est = detect_approx_batch(y, H, c, n0, scheme, target)
                ref = oracle.linear_domain_soft_estimate(
                    y, H, c, n0, scheme, target)
                worst = max(worst, float(np.max(np.abs(est.xhat - ref))))
    return ("log-vs-linear-detectors", worst < tol,
            f"max |diff| = {worst:.3e}")


ALL_CHECKS = (
    check_mmse_form_equivalence,
    check_gaussian_prior_equals_linear_mmse,
    check_ring_bessel_vs_quadrature,
    check_square_beta_vs_quadrature,
    check_log_vs_linear_detectors,
)


def run_all(seed=0):
    return [check(seed=seed) for check in ALL_CHECKS]
