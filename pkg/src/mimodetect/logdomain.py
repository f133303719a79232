"""Log-domain arithmetic: real and complex Jacobian summations, max-log
variants, and the erf evaluation used by the square-approximation detector.

All quantities named ``a``, ``b`` below are logarithms: a real value a
stands for log A with A > 0, and a complex value a stands for log A of a
nonzero complex A, with the imaginary part (the phase) on the principal
branch (-pi, pi].  ``-inf`` is the sentinel for log 0 and folds through
summation chains as an identity element.
"""

import math
import cmath

import numpy as np

NEG_INF = float("-inf")

# an anchored sum 1 + e^d that cancels below this relative magnitude is
# numerically indistinguishable from exact cancellation
_CANCEL_TOL = 1e-12

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_ERF_SERIES_TERMS = 64
_ERF_SATURATION = 4.0  # erfc(4) = 1.54e-8, below the 1e-7 accuracy budget


class SingularLogSumError(ArithmeticError):
    """Raised when e^a + e^b = 0 exactly (opposed phases, equal magnitudes),
    so the complex log of the sum does not exist."""


def log_sum_real(a, b):
    """Overflow-safe log(e^a + e^b) = max(a,b) + log(1 + e^-|a-b|)."""
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    return max(a, b) + math.log1p(math.exp(-abs(a - b)))


def max_log_real(a, b):
    """max(a, b); ties return the first argument."""
    return a if a >= b else b


def _wrap_phase(phi):
    """Reduce a phase to the principal branch (-pi, pi]."""
    phi = math.remainder(phi, 2.0 * math.pi)
    if phi <= -math.pi:
        phi += 2.0 * math.pi
    return phi


def _principal(c):
    return complex(c.real, _wrap_phase(c.imag))


def log_sum_complex(a, b):
    """Complex-domain Jacobian sum: log(e^a + e^b) anchored on the operand
    with the greater real part, so the correction term never overflows.

    Raises SingularLogSumError when e^a + e^b = 0.
    """
    a = complex(a)
    b = complex(b)
    if a.real == NEG_INF:
        return _principal(b)
    if b.real == NEG_INF:
        return _principal(a)
    # max_Re picks the operand with the greater real part; ties -> first.
    if a.real >= b.real:
        big, small = a, b
    else:
        big, small = b, a
    s = 1.0 + cmath.exp(small - big)
    if abs(s) < _CANCEL_TOL:
        raise SingularLogSumError("e^a + e^b = 0: log of zero sum")
    return _principal(big + cmath.log(s))


def max_log_complex(a, b):
    """max_Re(a, b) with the Jacobian correction dropped; ties -> first
    argument.  Phase is reduced to the principal branch."""
    a = complex(a)
    b = complex(b)
    return _principal(a) if a.real >= b.real else _principal(b)


def log_sum_real_reduce(terms, axis=-1):
    """Jacobian-logarithm reduction of an array of real log-values.

    Equals the exact log(sum(e^terms)), computed with a max-anchor so it
    never overflows.  An all ``-inf`` slice reduces to ``-inf``.
    """
    terms = np.asarray(terms, dtype=float)
    m = np.max(terms, axis=axis, keepdims=True)
    safe_m = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.sum(np.exp(terms - safe_m), axis=axis)
        out = np.squeeze(safe_m, axis=axis) + np.log(s)
    out = np.where(np.squeeze(np.isfinite(m), axis=axis), out, NEG_INF)
    return out[()] if out.ndim == 0 else out


def log_sum_complex_reduce(terms, axis=-1):
    """Complex Jacobian-logarithm reduction of an array of complex
    log-values.  Anchored on the maximum real part; a fully cancelled sum
    (or an all ``-inf`` slice) reduces to the ``-inf`` zero sentinel rather
    than raising, since summation chains treat it as an absent term.
    """
    terms = np.asarray(terms, dtype=complex)
    re = terms.real
    m = np.max(re, axis=axis, keepdims=True)
    safe_m = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.sum(np.exp(terms - safe_m), axis=axis)
        out = np.squeeze(safe_m, axis=axis) + np.log(s)
    bad = ~np.squeeze(np.isfinite(m), axis=axis) | (np.abs(s) < _CANCEL_TOL)
    out = np.where(bad, complex(NEG_INF, 0.0), out)
    return out[()] if out.ndim == 0 else out


def max_log_real_reduce(terms, axis=-1):
    """Max-log reduction: the plain maximum along ``axis``."""
    return np.max(np.asarray(terms, dtype=float), axis=axis)


def max_log_complex_reduce(terms, axis=-1):
    """Max-log complex reduction: the element with the greatest real part
    (first occurrence on ties), phase already principal by construction."""
    terms = np.asarray(terms, dtype=complex)
    idx = np.argmax(terms.real, axis=axis)
    out = np.take_along_axis(terms, np.expand_dims(idx, axis), axis=axis)
    out = np.squeeze(out, axis=axis)
    return out[()] if out.ndim == 0 else out


def erf_approx(t):
    """erf via its Maclaurin series below |t| = 4 and saturation beyond.

    Absolute error is below 1e-7 everywhere (series truncation and the
    saturated tail are both under 2e-8).  Odd symmetry is bit-exact.
    """
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    x = np.atleast_1d(np.abs(t))
    out = np.ones_like(x)
    small = x < _ERF_SATURATION
    xs = x[small]
    x2 = xs * xs
    p = xs.copy()       # p_n = (-1)^n x^(2n+1) / n!
    acc = xs.copy()
    for n in range(1, _ERF_SERIES_TERMS):
        p *= -x2 / n
        acc += p / (2 * n + 1)
    out[small] = _TWO_OVER_SQRT_PI * acc
    res = np.copysign(out, np.atleast_1d(t))
    return float(res[0]) if scalar else res
