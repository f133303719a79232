"""Slow-but-trusted numerical references for the detector closed forms.

Everything here is deliberately independent of the detectors module's
evaluation path: the partially-integrated numerator/denominator pair
(alpha, beta) is recomputed by brute-force quadrature, the Gaussian-prior
conditional mean by full 2 Nt-dimensional quadrature, and the discrete
conditional mean by compensated linear-domain enumeration.  Closed-form
twins (with their normalization constants materialized, which the
detectors never need) are provided for direct comparison.
"""

import cmath
import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.special import erf as sp_erf
from scipy.special import iv as sp_iv

from .logdomain import erf_approx


@dataclass(frozen=True)
class QuadratureSpec:
    grid_halfwidth: float = 6.0
    points_per_axis: int = 512
    theta_points: int = 4096

    def __post_init__(self):
        if self.points_per_axis < 64:
            raise ValueError("points_per_axis must be at least 64")


@dataclass(frozen=True)
class GaussianPdf:
    """f(x) = exp(-|x|^2), i.e. unit-variance complex Gaussian without
    the 1/pi factor (constant factors cancel in the conditional mean)."""


@dataclass(frozen=True)
class UniformSquarePdf:
    kappa: float


@dataclass(frozen=True)
class UniformRingPdf:
    radii: tuple


def _aux(y, H, x_other, detect_antenna=1):
    """w, u, v, z for Type-I detection of ``detect_antenna`` given a fixed
    hypothesis of the other symbol."""
    y = np.asarray(y, dtype=complex)
    a = detect_antenna - 1
    b = 1 - a
    ha = np.asarray(H, dtype=complex)[:, a]
    hb = np.asarray(H, dtype=complex)[:, b]
    w = complex(np.vdot(y, hb))
    u = float(np.vdot(ha, ha).real)
    v = float(np.vdot(hb, hb).real)
    z = complex(np.vdot(y - hb * x_other, ha))
    return w, u, v, z, ha, hb


def _lam(y, H, x1_grid, x2, n0):
    """exp(-||y - h1 x - h2 x2||^2 / N0) over an array of x values."""
    y = np.asarray(y, dtype=complex)
    h1 = np.asarray(H, dtype=complex)[:, 0]
    h2 = np.asarray(H, dtype=complex)[:, 1]
    resid = (y[:, None] - np.multiply.outer(h1, x1_grid.ravel())
             - np.outer(h2, np.full(x1_grid.size, x2)))
    d2 = np.sum(resid.real ** 2 + resid.imag ** 2, axis=0)
    return np.exp(-d2 / n0).reshape(x1_grid.shape)


def _midpoint_grid(halfwidth, n):
    h = 2.0 * halfwidth / n
    axis = -halfwidth + h * (np.arange(n) + 0.5)
    return axis, h


def quad_alpha_beta(y, H, x_other, n0, pdf, q=QuadratureSpec()):
    """Brute-force evaluation of the partially-integrated pair

        alpha = integral of x   * lambda(x, x_other) * f(x) dx
        beta  = integral of       lambda(x, x_other) * f(x) dx

    for the Type-I detection of antenna 1, with f the chosen continuous
    symbol pdf.  2-D midpoint quadrature for the Gaussian and square pdfs,
    uniform theta quadrature per ring for the ring pdf (periodic, hence
    spectrally accurate).
    """
    if isinstance(pdf, UniformRingPdf):
        theta = np.linspace(-math.pi, math.pi, q.theta_points,
                            endpoint=False)
        alpha = 0.0 + 0.0j
        beta = 0.0
        k = len(pdf.radii)
        for rho in pdf.radii:
            x = rho * np.exp(1j * theta)
            lam = _lam(y, H, x, x_other, n0)
            dtheta = 2.0 * math.pi / q.theta_points
            # the ring pdf collapses the radial integral to a dtheta-only
            # line integral per ring (no radial Jacobian weight)
            beta += np.sum(lam) * dtheta / (2.0 * math.pi * k)
            alpha += np.sum(x * lam) * dtheta / (2.0 * math.pi * k)
        return complex(alpha), float(beta)

    axis, h = _midpoint_grid(q.grid_halfwidth, q.points_per_axis)
    if isinstance(pdf, UniformSquarePdf):
        kappa = pdf.kappa
        axis, h = _midpoint_grid(kappa, q.points_per_axis)
        weight = 1.0 / (2.0 * kappa) ** 2
    elif isinstance(pdf, GaussianPdf):
        weight = None
    else:
        raise ValueError(f"unknown pdf {pdf!r}")
    re, im = np.meshgrid(axis, axis, indexing="ij")
    x = re + 1j * im
    lam = _lam(y, H, x, x_other, n0)
    if weight is None:
        f = np.exp(-(re ** 2 + im ** 2))
    else:
        f = weight
    cell = h * h
    integrand = lam * f
    beta = float(np.sum(integrand) * cell)
    alpha = complex(np.sum(x * integrand) * cell)
    return alpha, beta


# --- closed forms with the normalization constant C materialized ----------

def closed_alpha_beta_gaussian(y, H, x_other, n0):
    """Gaussian-pdf closed forms: C e^t z*/(u+N0) and C e^t, where t is
    the shared exponent and C = e^{-||y||^2/N0} pi N0 / (u + N0)."""
    w, u, v, z, *_ = _aux(y, H, x_other)
    y2 = float(np.vdot(y, y).real)
    t = (2.0 * (w * x_other).real - v * abs(x_other) ** 2
         + abs(z) ** 2 / (u + n0)) / n0
    cconst = math.exp(-y2 / n0) * math.pi * n0 / (u + n0)
    beta = cconst * math.exp(t)
    alpha = beta * z.conjugate() / (u + n0)
    return alpha, beta


def closed_beta_square(y, H, x_other, n0, kappa):
    """Square-pdf beta: C e^t e_I e_Q (exact), with
    C = e^{-||y||^2/N0} pi N0 / (16 kappa^2 u)."""
    w, u, v, z, *_ = _aux(y, H, x_other)
    y2 = float(np.vdot(y, y).real)
    t = (2.0 * (w * x_other).real - v * abs(x_other) ** 2
         + abs(z) ** 2 / u) / n0
    s = math.sqrt(u / n0)
    c_re = z.real / u
    c_im = -z.imag / u
    e_i = sp_erf(s * (c_re + kappa)) - sp_erf(s * (c_re - kappa))
    e_q = sp_erf(s * (c_im + kappa)) - sp_erf(s * (c_im - kappa))
    cconst = math.exp(-y2 / n0) * math.pi * n0 / (16.0 * kappa ** 2 * u)
    return cconst * math.exp(t) * e_i * e_q


def closed_alpha_square_dropped(y, H, x_other, n0, kappa):
    """Square-pdf alpha with the boundary Gaussian-difference terms
    dropped: beta * z*/u (the detector's default)."""
    _, u, _, z, *_ = _aux(y, H, x_other)
    return closed_beta_square(y, H, x_other, n0, kappa) * z.conjugate() / u


def closed_alpha_beta_ring_bessel(y, H, x_other, n0, radii):
    """Ring-pdf closed forms with exact modified Bessel functions:
    beta  = C sum_k e^{t_k} I0(2 rho_k r_z / N0)
    alpha = C sum_k e^{t_k} rho_k e^{-j phi_z} I1(2 rho_k r_z / N0)
    with C = e^{-||y||^2/N0} / K.  Evaluated before the detector's
    I(x) ~ e^x surrogate, so it validates the pre-surrogate identity.
    """
    w, u, v, z, *_ = _aux(y, H, x_other)
    y2 = float(np.vdot(y, y).real)
    r_z = abs(z)
    phi_z = cmath.phase(z) if z != 0 else 0.0
    k = len(radii)
    cconst = math.exp(-y2 / n0) / k
    alpha = 0.0 + 0.0j
    beta = 0.0
    for rho in radii:
        t = (2.0 * (w * x_other).real - u * rho ** 2
             - v * abs(x_other) ** 2) / n0
        arg = 2.0 * rho * r_z / n0
        beta += cconst * math.exp(t) * sp_iv(0, arg)
        alpha += (cconst * math.exp(t) * rho
                  * cmath.exp(-1j * phi_z) * sp_iv(1, arg))
    return alpha, beta


# --- linear-domain detector twins -----------------------------------------

def linear_domain_soft_estimate(y, H, c, n0, scheme, target):
    """Direct linear-domain evaluation of the approximated detectors'
    numerator/denominator ratios (no log-domain machinery beyond a global
    exponent shift, which cancels in the ratio and only guards against
    overflow of the raw exponentials)."""
    from .constellation import ApskRings, QamGrid

    y = np.asarray(y, dtype=complex)
    H = np.asarray(H, dtype=complex)
    out = np.zeros(2, dtype=complex)
    for antenna in (1, 2):
        a = antenna - 1
        b = 1 - a
        Hsw = H[:, [a, b]]
        expos = []      # per-term exponent
        scales = []     # per-term positive prefactor (erf products)
        coefs = []      # per-term numerator coefficient
        for x in c.points:
            if target == "type1":
                w, u, v, z, *_ = _aux(y, Hsw, x)
            else:
                # Type-II: approximate the interferer; enumerate the
                # desired symbol, z measured against the desired column
                w = complex(np.vdot(y, Hsw[:, 0]))
                u = float(np.vdot(Hsw[:, 1], Hsw[:, 1]).real)
                v = float(np.vdot(Hsw[:, 0], Hsw[:, 0]).real)
                z = complex(np.vdot(y - Hsw[:, 0] * x, Hsw[:, 1]))
            if scheme == "gaussian":
                expos.append((2.0 * (w * x).real - v * abs(x) ** 2
                              + abs(z) ** 2 / (u + n0)) / n0)
                scales.append(1.0)
                coefs.append(z.conjugate() / (u + n0)
                             if target == "type1" else x)
            elif scheme == "square":
                if not isinstance(c.shape, QamGrid):
                    raise ValueError("square scheme needs a QAM grid")
                kappa = c.shape.kappa
                s = math.sqrt(u / n0)
                c_re = z.real / u
                c_im = -z.imag / u
                e_i = (erf_approx(s * (c_re + kappa))
                       - erf_approx(s * (c_re - kappa)))
                e_q = (erf_approx(s * (c_im + kappa))
                       - erf_approx(s * (c_im - kappa)))
                expos.append((2.0 * (w * x).real - v * abs(x) ** 2
                              + abs(z) ** 2 / u) / n0)
                scales.append(e_i * e_q)
                coefs.append(z.conjugate() / u if target == "type1" else x)
            elif scheme == "ring":
                if not isinstance(c.shape, ApskRings):
                    raise ValueError("ring scheme needs a PSK/APSK "
                                     "constellation")
                r_z = abs(z)
                phi_z = cmath.phase(z) if z != 0 else 0.0
                for rho in c.shape.radii:
                    expos.append((2.0 * ((w * x).real + rho * r_z)
                                  - u * rho ** 2
                                  - v * abs(x) ** 2) / n0)
                    scales.append(1.0)
                    coefs.append(rho * cmath.exp(-1j * phi_z)
                                 if target == "type1" else x)
            else:
                raise ValueError(f"unknown scheme {scheme!r}")
        shift = max(expos)
        weights = [s * math.exp(e - shift) for e, s in zip(expos, scales)]
        num = sum(cf * wt for cf, wt in zip(coefs, weights))
        den = sum(weights)
        out[a] = num / den
    return out


# --- full-dimensional references ------------------------------------------

def gaussian_prior_cond_mean(y, H, n0, q=QuadratureSpec(points_per_axis=64)):
    """Conditional mean under a continuous Gaussian symbol prior, by full
    2 Nt-dimensional midpoint quadrature of the posterior-weighted mean.
    Supports Nt in {1, 2, 3}; the uniform-grid rule is spectrally accurate
    for the Gaussian-tailed integrand once the box contains the mass."""
    y = np.asarray(y, dtype=complex)
    H = np.asarray(H, dtype=complex)
    nt = H.shape[1]
    if nt > 3:
        raise ValueError("quadrature reference supports Nt <= 3")
    axis, h = _midpoint_grid(q.grid_halfwidth, q.points_per_axis)
    grid = axis[:, None] + 1j * axis[None, :]          # (p, p) complex cells
    flat = grid.ravel()

    def weights(residual_sq, x_sq):
        return np.exp(-(residual_sq + n0 * x_sq) / n0)

    if nt == 1:
        resid = y[:, None] - np.outer(H[:, 0], flat)
        d2 = np.sum(resid.real ** 2 + resid.imag ** 2, axis=0)
        lam = weights(d2, np.abs(flat) ** 2)
        den = np.sum(lam)
        return np.array([np.sum(flat * lam) / den])

    if nt == 2:
        h1, h2 = H[:, 0], H[:, 1]
        y2 = float(np.vdot(y, y).real)
        p1 = complex(np.vdot(y, h1))
        p2 = complex(np.vdot(y, h2))
        u11 = float(np.vdot(h1, h1).real)
        u22 = float(np.vdot(h2, h2).real)
        g12 = complex(np.vdot(h1, h2))
        a1 = (-2.0 * (flat * p1).real
              + (u11 + n0) * np.abs(flat) ** 2)
        a2 = (-2.0 * (flat * p2).real
              + (u22 + n0) * np.abs(flat) ** 2)
        cross = 2.0 * (np.conj(flat)[:, None] * (g12 * flat)[None, :]).real
        expo = -(y2 + a1[:, None] + a2[None, :] + cross) / n0
        expo -= np.max(expo)
        lam = np.exp(expo)
        den = np.sum(lam)
        x1 = np.sum(flat[:, None] * lam) / den
        x2 = np.sum(flat[None, :] * lam) / den
        return np.array([x1, x2])

    # Nt == 3: loop the outermost symbol over its grid cells
    h3 = H[:, 2]
    num = np.zeros(3, dtype=complex)
    den = 0.0
    for x3 in flat:
        y_eff = y - h3 * x3
        resid_base = float(np.vdot(y_eff, y_eff).real)
        h1, h2 = H[:, 0], H[:, 1]
        p1 = complex(np.vdot(y_eff, h1))
        p2 = complex(np.vdot(y_eff, h2))
        u11 = float(np.vdot(h1, h1).real)
        u22 = float(np.vdot(h2, h2).real)
        g12 = complex(np.vdot(h1, h2))
        a1 = (-2.0 * (flat * p1).real
              + (u11 + n0) * np.abs(flat) ** 2)
        a2 = (-2.0 * (flat * p2).real
              + (u22 + n0) * np.abs(flat) ** 2)
        cross = 2.0 * (np.conj(flat)[:, None] * (g12 * flat)[None, :]).real
        expo = -(resid_base + n0 * abs(x3) ** 2
                 + a1[:, None] + a2[None, :] + cross) / n0
        lam = np.exp(expo)
        s = np.sum(lam)
        num[0] += np.sum(flat[:, None] * lam)
        num[1] += np.sum(flat[None, :] * lam)
        num[2] += x3 * s
        den += s
    return num / den


def enumerate_cond_mean(y, H, points, n0):
    """Linear-domain enumeration of the discrete conditional mean with
    compensated (fsum) accumulation; ``points`` is a Constellation or a
    plain array of symbols."""
    pts = np.asarray(getattr(points, "points", points), dtype=complex)
    y = np.asarray(y, dtype=complex)
    H = np.asarray(H, dtype=complex)
    nt = H.shape[1]
    cands = list(product(pts, repeat=nt))
    d2 = [float(np.vdot(y - H @ np.array(x), y - H @ np.array(x)).real)
          for x in cands]
    dmin = min(d2)
    lam = [math.exp(-(d - dmin) / n0) for d in d2]
    den = math.fsum(lam)
    out = np.zeros(nt, dtype=complex)
    for n in range(nt):
        re = math.fsum(l * x[n].real for l, x in zip(lam, cands))
        im = math.fsum(l * x[n].imag for l, x in zip(lam, cands))
        out[n] = complex(re, im) / den
    return out
