"""Flat Rayleigh-fading MIMO channel: i.i.d. unit-variance complex
Gaussian coefficients, complex AWGN with per-entry variance N0, and the
Eb/N0 -> N0 mapping for unit-energy constellations.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NoiseSpec:
    n0: float

    def __post_init__(self):
        if not self.n0 > 0:
            raise ValueError(f"N0 must be positive, got {self.n0}")


def make_rng(seed, *stream_key):
    """Counter-based stream: the same (seed, key...) tuple always yields
    the same generator, so parallel batches reproduce the sequential
    partition exactly."""
    return np.random.default_rng(np.random.SeedSequence((seed,) + stream_key))


def draw_channel(rng, nt, nr):
    """One Nr x Nt realization with i.i.d. CN(0, 1) entries."""
    if nt > nr:
        raise ValueError(f"need Nt <= Nr, got Nt={nt}, Nr={nr}")
    return draw_channels(rng, 1, nt, nr)[0]


def draw_channels(rng, batch, nt, nr):
    """(batch, Nr, Nt) i.i.d. CN(0, 1) realizations."""
    if nt > nr:
        raise ValueError(f"need Nt <= Nr, got Nt={nt}, Nr={nr}")
    re = rng.standard_normal((batch, nr, nt))
    im = rng.standard_normal((batch, nr, nt))
    return math.sqrt(0.5) * (re + 1j * im)


def draw_noise(rng, shape, n0):
    """Complex AWGN, variance n0 per complex entry."""
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return math.sqrt(0.5 * n0) * (re + 1j * im)


def apply_channel(H, x, noise, rng=None):
    """y = H x + w.  ``noise`` is a NoiseSpec or None for a noiseless pass.
    Accepts a single (Nr, Nt) H with (Nt,) x, or batches (B, Nr, Nt) with
    (B, Nt)."""
    H = np.asarray(H)
    x = np.asarray(x, dtype=complex)
    if H.ndim == 2:
        y = H @ x
    else:
        y = np.einsum("brn,bn->br", H, x)
    if noise is not None:
        y = y + draw_noise(rng, y.shape, noise.n0)
    return y


def ebn0_to_n0(ebn0_db, m):
    """N0 for a given Eb/N0 in dB at modulation order M.

    Unit-energy symbols carry log2(M) bits per antenna, so Eb = 1/log2(M)
    and N0 = 1 / (log2(M) * 10^(Eb/N0 / 10)) independently of Nt.
    """
    if m < 2:
        raise ValueError(f"modulation order must be >= 2, got {m}")
    return NoiseSpec(1.0 / (math.log2(m) * 10.0 ** (ebn0_db / 10.0)))
