"""Constellation construction (QAM grids, PSK/APSK rings), Gray bit
mapping, and nearest-point hard decisions.

All constellations are normalized to unit average symbol energy, which the
detectors and the Eb/N0 -> N0 mapping rely on.
"""

import math
from dataclasses import dataclass, field

import numpy as np

QAM_SQUARE_HALFWIDTH = math.sqrt(1.5)  # half-width of the uniform square
                                       # that the QAM grid fills as M -> inf


@dataclass(frozen=True)
class QamGrid:
    m: int
    kappa: float = QAM_SQUARE_HALFWIDTH


@dataclass(frozen=True)
class ApskRings:
    radii: tuple          # normalized radii, strictly increasing
    counts: tuple         # points per ring, sum is a power of two
    phase_offsets: tuple

    @property
    def num_rings(self):
        return len(self.radii)

    @property
    def is_psk(self):
        return self.num_rings == 1


@dataclass(frozen=True)
class Constellation:
    points: np.ndarray          # (M,) complex, unit average energy
    bits: np.ndarray            # (M, bit_width) uint8, Gray mapped
    shape: object               # QamGrid or ApskRings
    name: str = ""
    _min_distance: float = field(init=False, default=0.0)

    def __post_init__(self):
        self.points.setflags(write=False)
        self.bits.setflags(write=False)
        d = np.abs(self.points[:, None] - self.points[None, :])
        md = float(np.min(d[d > 0])) if len(self.points) > 1 else math.inf
        object.__setattr__(self, "_min_distance", md)

    @property
    def order(self):
        return len(self.points)

    @property
    def bit_width(self):
        return self.bits.shape[1]

    @property
    def min_distance(self):
        return self._min_distance


def _gray(n):
    return n ^ (n >> 1)


def _int_to_bits(values, width):
    values = np.asarray(values)
    shifts = np.arange(width - 1, -1, -1)
    return ((values[..., None] >> shifts) & 1).astype(np.uint8)


def build_qam(m, name=""):
    """Square M-QAM on the {-(sqrt(M)-1)+2n} grid per axis, scaled to unit
    average energy, Gray coded independently per axis.

    M must be an even power of 2 (4, 16, 64, ...).
    """
    if m < 4 or (m & (m - 1)) != 0 or (m.bit_length() - 1) % 2 != 0:
        raise ValueError(f"QAM order must be an even power of 2, got {m}")
    side = int(round(math.sqrt(m)))
    scale = math.sqrt(2.0 * (m - 1) / 3.0)
    levels = (-(side - 1) + 2.0 * np.arange(side)) / scale
    re_idx, im_idx = np.meshgrid(np.arange(side), np.arange(side),
                                 indexing="ij")
    re_idx = re_idx.ravel()
    im_idx = im_idx.ravel()
    points = levels[re_idx] + 1j * levels[im_idx]
    half = side.bit_length() - 1
    bits = np.concatenate([_int_to_bits(_gray(re_idx), half),
                           _int_to_bits(_gray(im_idx), half)], axis=-1)
    return Constellation(points=points, bits=bits, shape=QamGrid(m=m),
                         name=name or f"{m}qam")


def build_apsk(radii, counts, phase_offsets=None, name=""):
    """APSK: counts[k] points uniformly spaced on a circle of radius
    radii[k] (optionally phase-offset), renormalized to unit average
    energy.  K = 1 with a single ring is plain M-PSK.
    """
    radii = [float(r) for r in radii]
    counts = [int(c) for c in counts]
    if len(radii) != len(counts):
        raise ValueError("radii and counts must have equal length")
    if any(r <= 0 for r in radii):
        raise ValueError("ring radii must be strictly positive")
    if any(b >= a for a, b in zip(radii[1:], radii)):
        raise ValueError("ring radii must be strictly increasing")
    m = sum(counts)
    if m < 2 or (m & (m - 1)) != 0:
        raise ValueError(f"total number of points must be a power of 2, got {m}")
    if phase_offsets is None:
        phase_offsets = [0.0] * len(radii)
    phase_offsets = [float(p) for p in phase_offsets]
    if len(phase_offsets) != len(radii):
        raise ValueError("need one phase offset per ring")

    energy = sum(c * r * r for c, r in zip(counts, radii)) / m
    scale = 1.0 / math.sqrt(energy)
    radii = [r * scale for r in radii]

    points = []
    for rho, mk, phi in zip(radii, counts, phase_offsets):
        n = np.arange(mk)
        points.append(rho * np.exp(1j * (2.0 * np.pi * n / mk + phi)))
    points = np.concatenate(points)

    k = len(radii)
    width = m.bit_length() - 1
    if k == 1:
        bits = _int_to_bits(_gray(np.arange(m)), width)
    elif (k & (k - 1)) == 0 and len(set(counts)) == 1:
        # ring-select bits Gray coded, then Gray within the ring
        ring_w = k.bit_length() - 1
        pos_w = width - ring_w
        ring_idx = np.repeat(np.arange(k), counts)
        pos_idx = np.concatenate([np.arange(c) for c in counts])
        bits = np.concatenate([_int_to_bits(_gray(ring_idx), ring_w),
                               _int_to_bits(_gray(pos_idx), pos_w)], axis=-1)
    else:
        bits = _int_to_bits(_gray(np.arange(m)), width)

    return Constellation(points=points, bits=bits,
                         shape=ApskRings(radii=tuple(radii),
                                         counts=tuple(counts),
                                         phase_offsets=tuple(phase_offsets)),
                         name=name or f"{m}apsk")


def build_psk(m, name=""):
    return build_apsk([1.0], [m], name=name or f"{m}psk")


# the 16-APSK of two concentric 8-point rings with ring ratio 1:2; the raw
# radii sqrt(2/5) and 2 sqrt(2/5) already give unit average energy
_NAMED = {
    "qpsk": lambda: build_psk(4, name="qpsk"),
    "8psk": lambda: build_psk(8),
    "16psk": lambda: build_psk(16),
    "16apsk": lambda: build_apsk([math.sqrt(0.4), 2.0 * math.sqrt(0.4)],
                                 [8, 8], name="16apsk"),
    "16qam": lambda: build_qam(16),
    "64qam": lambda: build_qam(64),
}

CONSTELLATION_NAMES = tuple(_NAMED)


def from_name(name):
    try:
        factory = _NAMED[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown constellation {name!r}; choose from {CONSTELLATION_NAMES}"
        ) from None
    return factory()


def slice_nearest(estimates, constellation):
    """Index of the closest constellation point for each estimate.
    Ties break to the lowest index.  Accepts scalars or arrays."""
    est = np.asarray(estimates, dtype=complex)
    scalar = est.ndim == 0
    d2 = np.abs(est[..., None] - constellation.points) ** 2
    idx = np.argmin(d2, axis=-1)
    return int(idx) if scalar else idx
