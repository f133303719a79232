"""MIMO signal detectors.

Linear ZF/MMSE, exhaustive MLD/MAP, the exact conditional-mean (soft MAP)
detector, and the reduced-complexity conditional-mean detectors for
Nt = 2 in which one of the two multiplexed symbols is modeled as a
continuous random variable:

* Gaussian pdf            (any constellation)
* uniform square pdf      (square QAM grids)
* uniform ring(s) pdf     (PSK / APSK)

Each approximation comes in Type-I (the desired symbol is approximated,
the interferer is enumerated) and Type-II (the interferer is approximated,
the desired symbol is enumerated) flavors, evaluated in the log domain
with complex/real Jacobian summations or their cheaper max-log variants.

All batched entry points accept y of shape (B, Nr) with H of shape
(B, Nr, Nt); the single-shot wrappers take (Nr,) and (Nr, Nt).
"""

import cmath
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .constellation import ApskRings, QamGrid, slice_nearest
from .logdomain import (
    NEG_INF,
    erf_approx,
    log_sum_complex_reduce,
    log_sum_real_reduce,
    max_log_complex_reduce,
    max_log_real_reduce,
)

MLD_SEARCH_CAP = 65536

FAMILIES = ("zf", "mmse", "mld", "condmean", "approx")
SCHEMES = ("gaussian", "square", "ring")
TARGETS = ("type1", "type2")


@dataclass(frozen=True)
class DetectorSpec:
    family: str                 # zf | mmse | mld | condmean | approx
    scheme: str = ""            # gaussian | square | ring   (approx only)
    target: str = ""            # type1 | type2              (approx only)
    maxlog: bool = False        # approx only

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown detector family {self.family!r}")
        if self.family == "approx":
            if self.scheme not in SCHEMES:
                raise ValueError(f"unknown scheme {self.scheme!r}")
            if self.target not in TARGETS:
                raise ValueError(f"unknown target {self.target!r}")

    @property
    def name(self):
        if self.family != "approx":
            return self.family
        short = {"gaussian": "gauss", "square": "square", "ring": "ring"}
        base = f"{short[self.scheme]}-t{1 if self.target == 'type1' else 2}"
        return base + ("-max" if self.maxlog else "")


_NAME_TO_SPEC = {
    "zf": ("zf", "", ""),
    "mmse": ("mmse", "", ""),
    "mld": ("mld", "", ""),
    "condmean": ("condmean", "", ""),
    "gauss-t1": ("approx", "gaussian", "type1"),
    "gauss-t2": ("approx", "gaussian", "type2"),
    "square-t1": ("approx", "square", "type1"),
    "square-t2": ("approx", "square", "type2"),
    "ring-t1": ("approx", "ring", "type1"),
    "ring-t2": ("approx", "ring", "type2"),
}

DETECTOR_NAMES = tuple(_NAME_TO_SPEC)


def spec_from_name(name, maxlog=False):
    try:
        family, scheme, target = _NAME_TO_SPEC[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown detector {name!r}; choose from {DETECTOR_NAMES}"
        ) from None
    return DetectorSpec(family=family, scheme=scheme, target=target,
                        maxlog=maxlog and family == "approx")


@dataclass(frozen=True)
class SoftEstimate:
    xhat: np.ndarray            # (..., Nt) complex soft symbols
    log_xhat: np.ndarray = None # (..., Nt) complex log of xhat, if produced


@dataclass(frozen=True)
class AuxVars:
    w: complex
    u: float
    v: float
    z: complex
    r_z: float
    phi_z: float


# ---------------------------------------------------------------------------
# linear detection
# ---------------------------------------------------------------------------

def zf_matrix(H):
    """(H^H H)^-1 H^H, the pseudo-inverse of a full-column-rank H."""
    H = np.asarray(H, dtype=complex)
    gram = H.conj().T @ H
    if np.linalg.cond(gram) > 1e12:
        raise np.linalg.LinAlgError("channel matrix is rank deficient")
    return np.linalg.solve(gram, H.conj().T)


def mmse_matrix(H, n0):
    """(H^H H + N0 I)^-1 H^H."""
    H = np.asarray(H, dtype=complex)
    nt = H.shape[-1]
    gram = H.conj().T @ H + n0 * np.eye(nt)
    return np.linalg.solve(gram, H.conj().T)


def mmse_matrix_receive_form(H, n0):
    """H^H (H H^H + N0 I)^-1, algebraically identical to mmse_matrix."""
    H = np.asarray(H, dtype=complex)
    nr = H.shape[-2]
    cov = H @ H.conj().T + n0 * np.eye(nr)
    return np.linalg.solve(cov.T, H.conj()).T


def mmse_matrices(H, n0):
    """Batched (B, Nt, Nr) MMSE matrices for H of shape (B, Nr, Nt)."""
    H = np.asarray(H, dtype=complex)
    nt = H.shape[-1]
    gram = np.einsum("brm,brn->bmn", H.conj(), H) + n0 * np.eye(nt)
    return np.linalg.solve(gram, np.swapaxes(H, -1, -2).conj())


def detect_linear(G, y):
    """xhat = G y, batched when G is (B, Nt, Nr) and y is (B, Nr)."""
    G = np.asarray(G, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if G.ndim == 2:
        return SoftEstimate(xhat=G @ y)
    return SoftEstimate(xhat=np.einsum("bnr,br->bn", G, y))


# ---------------------------------------------------------------------------
# exhaustive detection
# ---------------------------------------------------------------------------

def _candidate_indices(m, nt, cap=MLD_SEARCH_CAP):
    if m ** nt > cap:
        raise ValueError(
            f"search space M^Nt = {m ** nt} exceeds the cap of {cap}")
    return np.array(list(product(range(m), repeat=nt)), dtype=np.int64)


def _candidate_distances(y, H, points, cand):
    """Squared distances ||y - H x|| ** 2 for every candidate index vector.
    y: (B, Nr), H: (B, Nr, Nt), returns (B, n_candidates)."""
    S = points[cand]                                  # (C, Nt)
    Hx = np.einsum("brn,cn->brc", H, S)               # (B, Nr, C)
    diff = y[:, :, None] - Hx
    return np.sum(diff.real ** 2 + diff.imag ** 2, axis=1)


def detect_mld_batch(y, H, c, prior_log=None, cap=MLD_SEARCH_CAP):
    """Hard MLD / MAP over all M^Nt hypotheses.

    Returns (B, Nt) point indices.  With ``prior_log`` (length M^Nt, log
    probabilities in candidate order) the metric becomes the MAP one,
    ||y - Hx||^2 - N0 log P(x); pass it via a (prior_log, n0) tuple.
    Ties resolve to the lexicographically smallest index vector.
    """
    y = np.atleast_2d(np.asarray(y, dtype=complex))
    H = np.asarray(H, dtype=complex)
    if H.ndim == 2:
        H = H[None]
    nt = H.shape[-1]
    cand = _candidate_indices(c.order, nt, cap)
    metric = _candidate_distances(y, H, c.points, cand)
    if prior_log is not None:
        logp, n0 = prior_log
        metric = metric - n0 * np.asarray(logp)[None, :]
    best = np.argmin(metric, axis=1)   # first occurrence = lexicographic
    return cand[best]


def detect_mld(y, H, c, prior_log=None, cap=MLD_SEARCH_CAP):
    """Single-shot MLD; returns a length-Nt index vector."""
    return detect_mld_batch(y, H, c, prior_log=prior_log, cap=cap)[0]


def detect_cond_mean_exact_batch(y, H, c, n0, cap=MLD_SEARCH_CAP):
    """Exact conditional-mean soft estimate: the posterior-weighted mean of
    every transmit hypothesis, with weights exp(-||y - Hx||^2 / N0) under a
    uniform prior.  Evaluated through a max-shifted softmax so it never
    over- or underflows."""
    y = np.atleast_2d(np.asarray(y, dtype=complex))
    H = np.asarray(H, dtype=complex)
    if H.ndim == 2:
        H = H[None]
    nt = H.shape[-1]
    cand = _candidate_indices(c.order, nt, cap)
    d2 = _candidate_distances(y, H, c.points, cand)
    t = -d2 / n0
    t -= np.max(t, axis=1, keepdims=True)
    p = np.exp(t)
    p /= np.sum(p, axis=1, keepdims=True)
    xhat = p @ c.points[cand]                         # (B, Nt)
    with np.errstate(divide="ignore"):
        log_xhat = np.log(xhat)
    return SoftEstimate(xhat=xhat, log_xhat=log_xhat)


def detect_cond_mean_exact(y, H, c, n0, cap=MLD_SEARCH_CAP):
    est = detect_cond_mean_exact_batch(y, H, c, n0, cap)
    return SoftEstimate(xhat=est.xhat[0], log_xhat=est.log_xhat[0])


# ---------------------------------------------------------------------------
# reduced-complexity conditional-mean detectors (Nt = 2)
# ---------------------------------------------------------------------------

def compute_aux(y, H, target, detect_antenna, x_hyp):
    """The per-hypothesis auxiliary quantities for the approximated
    detectors.

    With a = detect_antenna - 1 and b the other antenna:
      Type-I : w = y^H h_b, u = ||h_a||^2, v = ||h_b||^2,
               z = (y - h_b x_hyp)^H h_a
      Type-II: w = y^H h_a, u = ||h_b||^2, v = ||h_a||^2,
               z = (y - h_a x_hyp)^H h_b
    r_z = |z| and phi_z = arg z (arg 0 := 0).
    """
    y = np.asarray(y, dtype=complex)
    H = np.asarray(H, dtype=complex)
    if H.shape[-1] != 2:
        raise ValueError("auxiliary variables are defined for Nt = 2 only")
    if detect_antenna not in (1, 2):
        raise ValueError("detect_antenna must be 1 or 2")
    if target not in TARGETS:
        raise ValueError(f"target must be one of {TARGETS}")
    a = detect_antenna - 1
    b = 1 - a
    ha, hb = H[:, a], H[:, b]
    if target == "type1":
        w = np.vdot(y, hb)
        u = float(np.vdot(ha, ha).real)
        v = float(np.vdot(hb, hb).real)
        z = np.vdot(y - hb * x_hyp, ha)
    else:
        w = np.vdot(y, ha)
        u = float(np.vdot(hb, hb).real)
        v = float(np.vdot(ha, ha).real)
        z = np.vdot(y - ha * x_hyp, hb)
    r_z = abs(z)
    phi_z = cmath.phase(z) if z != 0 else 0.0
    return AuxVars(w=complex(w), u=u, v=v, z=complex(z), r_z=r_z, phi_z=phi_z)


def _reducers(maxlog):
    if maxlog:
        return max_log_complex_reduce, max_log_real_reduce
    return log_sum_complex_reduce, log_sum_real_reduce


def _hyp_aux(y, H, antenna, target):
    """Vectorized auxiliary quantities for every hypothesis.

    Returns (w, u, v, z) where w, u, v have shape (B,) and z has shape
    (B, M): z for hypothesis x is p - conj(x) * g with the role-dependent
    projection p and column cross-correlation g.
    """
    a = antenna
    b = 1 - a
    ha = H[:, :, a]
    hb = H[:, :, b]
    pa = np.einsum("br,br->b", y.conj(), ha)   # y^H h_a
    pb = np.einsum("br,br->b", y.conj(), hb)   # y^H h_b
    na = np.einsum("br,br->b", ha.conj(), ha).real
    nb = np.einsum("br,br->b", hb.conj(), hb).real
    if target == "type1":
        w, u, v = pb, na, nb
        g = np.einsum("br,br->b", hb.conj(), ha)   # h_b^H h_a
        proj = pa
    else:
        w, u, v = pa, nb, na
        g = np.einsum("br,br->b", ha.conj(), hb)   # h_a^H h_b
        proj = pb
    return w, u, v, g, proj


def _log_xhat_antenna(y, H, c, n0, scheme, target, maxlog, antenna):
    """log xhat for one antenna of the approximated detector.

    The hypothesis enumeration runs over the full constellation: the
    interferer for Type-I, the desired symbol itself for Type-II.  The
    denominator log-terms ``t`` carry the shared exponent (plus, for the
    square scheme, the log erf box factors); the numerator terms add
    log r_z - j phi_z (Type-I; the approximated symbol's conditional mean
    points along z*) or log|x| + j arg x (Type-II; the enumerated symbol
    itself is averaged).  In the multi-ring case both sums gain a ring
    axis weighted by log rho_k.
    """
    creduce, rreduce = _reducers(maxlog)
    w, u, v, g, proj = _hyp_aux(y, H, antenna, target)
    X = c.points                                         # (M,) hypotheses
    z = proj[:, None] - X.conj()[None, :] * g[:, None]   # (B, M)
    r_z = np.abs(z)
    wx = 2.0 * (w[:, None] * X[None, :]).real
    ax2 = np.abs(X) ** 2

    if target == "type1":
        num_extra = -1j * np.angle(z)                    # (B, M)
        if scheme != "ring":
            with np.errstate(divide="ignore"):
                num_extra = num_extra + np.log(r_z)
    else:
        with np.errstate(divide="ignore"):
            num_extra = (np.log(np.abs(X)) + 1j * np.angle(X))[None, :]

    if scheme == "gaussian":
        t = (wx - v[:, None] * ax2[None, :]
             + r_z ** 2 / (u + n0)[:, None]) / n0
        prefactor = -np.log(u + n0) if target == "type1" else 0.0
    elif scheme == "square":
        if not isinstance(c.shape, QamGrid):
            raise ValueError("square approximation requires a QAM grid "
                             f"constellation, got {type(c.shape).__name__}")
        kappa = c.shape.kappa
        uc = u[:, None]
        s = np.sqrt(uc / n0)
        c_re = z.real / uc           # Re[z* / u]
        c_im = -z.imag / uc          # Im[z* / u]
        e_i = erf_approx(s * (c_re + kappa)) - erf_approx(s * (c_re - kappa))
        e_q = erf_approx(s * (c_im + kappa)) - erf_approx(s * (c_im - kappa))
        with np.errstate(divide="ignore"):
            log_box = np.log(e_i) + np.log(e_q)
        log_box = np.where(np.isnan(log_box), NEG_INF, log_box)
        t = (wx - v[:, None] * ax2[None, :] + r_z ** 2 / uc) / n0 + log_box
        prefactor = -np.log(u) if target == "type1" else 0.0
    elif scheme == "ring":
        if not isinstance(c.shape, ApskRings):
            raise ValueError("ring approximation requires a PSK/APSK "
                             f"constellation, got {type(c.shape).__name__}")
        rings = c.shape
        prefactor = 0.0
        if rings.is_psk:
            # single unit ring: -(u + v)/N0 is hypothesis-independent and
            # cancels between numerator and denominator sums
            t = (wx + 2.0 * r_z) / n0
        else:
            rho = np.asarray(rings.radii)                # (K,)
            t = (wx[:, :, None] + 2.0 * rho * r_z[:, :, None]
                 - u[:, None, None] * rho ** 2
                 - v[:, None, None] * ax2[None, :, None]) / n0
            num = t + num_extra[..., None]
            if target == "type1":
                # the approximated ring symbol's mean carries the rho_k
                # weight; the denominator does not
                num = num + np.log(rho)
            b, m, k = t.shape
            num = num.reshape(b, m * k)
            t = t.reshape(b, m * k)
            return prefactor + creduce(num, axis=-1) - rreduce(t, axis=-1)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    return prefactor + creduce(t + num_extra, axis=-1) - rreduce(t, axis=-1)


def _as_batch(y, H):
    y = np.asarray(y, dtype=complex)
    H = np.asarray(H, dtype=complex)
    single = H.ndim == 2
    if single:
        y, H = y[None], H[None]
    if H.shape[-1] != 2:
        raise ValueError("approximated detectors support Nt = 2 only")
    return y, H, single


def detect_approx_batch(y, H, c, n0, scheme, target, maxlog=False):
    """Batched Type-I/Type-II approximated conditional-mean detection.
    Returns SoftEstimate with xhat and log_xhat of shape (B, 2)."""
    y, H, single = _as_batch(y, H)
    log_xhat = np.stack(
        [_log_xhat_antenna(y, H, c, n0, scheme, target, maxlog, a)
         for a in (0, 1)], axis=-1)
    with np.errstate(invalid="ignore"):
        xhat = np.exp(log_xhat)
    xhat = np.where(np.isneginf(log_xhat.real), 0.0, xhat)
    if single:
        xhat, log_xhat = xhat[0], log_xhat[0]
    return SoftEstimate(xhat=xhat, log_xhat=log_xhat)


def detect_approx_gaussian(y, H, c, n0, target, maxlog=False):
    return detect_approx_batch(y, H, c, n0, "gaussian", target, maxlog)


def detect_approx_square(y, H, c, n0, target, maxlog=False):
    return detect_approx_batch(y, H, c, n0, "square", target, maxlog)


def detect_approx_ring(y, H, c, n0, target, maxlog=False):
    return detect_approx_batch(y, H, c, n0, "ring", target, maxlog)


# ---------------------------------------------------------------------------
# common dispatch
# ---------------------------------------------------------------------------

def detect_indices_batch(spec, y, H, c, n0):
    """Run any detector and return hard-decision point indices (B, Nt)."""
    y = np.atleast_2d(np.asarray(y, dtype=complex))
    H = np.asarray(H, dtype=complex)
    if H.ndim == 2:
        H = H[None]
    if spec.family == "zf":
        G = np.array([zf_matrix(h) for h in H])
        return slice_nearest(detect_linear(G, y).xhat, c)
    if spec.family == "mmse":
        return slice_nearest(detect_linear(mmse_matrices(H, n0), y).xhat, c)
    if spec.family == "mld":
        return detect_mld_batch(y, H, c)
    if spec.family == "condmean":
        return slice_nearest(detect_cond_mean_exact_batch(y, H, c, n0).xhat, c)
    est = detect_approx_batch(y, H, c, n0, spec.scheme, spec.target,
                              spec.maxlog)
    return slice_nearest(est.xhat, c)
