"""Monte-Carlo BER harness and per-symbol timing benchmark.

Every trial draws a fresh channel realization and a fresh pair of random
symbols (fast fading).  Work is split into fixed-size batches whose random
streams are keyed by (seed, point index, batch index), so the error counts
are bit-identical regardless of how batches are scheduled.
"""

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import channel as ch
from .constellation import from_name, slice_nearest
from .detectors import detect_indices_batch, spec_from_name

BATCH_VECTORS = 4096


class NotBracketedError(ValueError):
    """The requested BER level is not crossed by the sweep."""


@dataclass(frozen=True)
class SweepConfig:
    constellation: str
    detectors: tuple                 # detector names; "-max" suffix = maxlog
    nr: int = 2
    ebn0_db: tuple = tuple(range(0, 25, 2))
    target_errors: int = 200
    max_symbols: int = 1_000_000
    seed: int = 0
    threads: int = 1
    noiseless: bool = False          # diagnostic override: skip the AWGN

    def __post_init__(self):
        grid = tuple(float(e) for e in self.ebn0_db)
        if len(grid) == 0:
            raise ValueError("empty Eb/N0 grid")
        if any(b <= a for a, b in zip(grid, grid[1:])) and len(grid) > 1:
            raise ValueError("Eb/N0 grid must be strictly increasing")
        object.__setattr__(self, "ebn0_db", grid)
        object.__setattr__(self, "detectors", tuple(self.detectors))


@dataclass(frozen=True)
class BerPoint:
    detector: str
    constellation: str
    nr: int
    ebn0_db: float
    symbols: int                     # transmitted symbol vectors
    bits: int
    bit_errors: int
    ns_per_symbol: float
    under_sampled: bool = False

    @property
    def ber(self):
        return self.bit_errors / self.bits if self.bits else 0.0

    def ber_ci(self, z=1.96):
        """Normal-approximation confidence interval on the BER."""
        p = self.ber
        half = z * math.sqrt(max(p * (1.0 - p), 1e-300) / max(self.bits, 1))
        return max(p - half, 0.0), min(p + half, 1.0)


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    points: tuple                    # BerPoint in (detector, ebn0) order

    def for_detector(self, name):
        return [p for p in self.points if p.detector == name]


def _parse_detector(name):
    if name.endswith("-max"):
        return spec_from_name(name[:-4], maxlog=True)
    return spec_from_name(name)


def _run_batch(spec, c, nr, n0, seed, point_idx, batch_idx, batch_vectors,
               noiseless=False):
    rng = ch.make_rng(seed, point_idx, batch_idx)
    m = c.order
    idx_tx = rng.integers(0, m, size=(batch_vectors, 2))
    x = c.points[idx_tx]
    H = ch.draw_channels(rng, batch_vectors, 2, nr)
    noise = None if noiseless else ch.NoiseSpec(n0)
    y = ch.apply_channel(H, x, noise, rng)
    t0 = time.perf_counter_ns()
    idx_rx = detect_indices_batch(spec, y, H, c, n0)
    elapsed = time.perf_counter_ns() - t0
    errors = int(np.sum(c.bits[idx_tx] != c.bits[idx_rx]))
    bits = batch_vectors * 2 * c.bit_width
    return errors, bits, batch_vectors, elapsed


def run_ber_point(cfg, ebn0_db, detector=None, point_idx=None):
    """One Monte-Carlo BER point.  Stops at the first of target_errors
    accumulated bit errors or max_symbols transmitted vectors."""
    name = detector if detector is not None else cfg.detectors[0]
    spec = _parse_detector(name)
    c = from_name(cfg.constellation)
    n0 = ch.ebn0_to_n0(ebn0_db, c.order).n0
    if point_idx is None:
        point_idx = cfg.ebn0_db.index(float(ebn0_db))

    total_err = total_bits = total_sym = total_ns = 0
    n_batches = max(1, math.ceil(cfg.max_symbols / BATCH_VECTORS))
    threads = max(1, cfg.threads)
    batch_idx = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while batch_idx < n_batches:
            chunk = range(batch_idx, min(batch_idx + threads, n_batches))
            results = list(pool.map(
                lambda b: _run_batch(spec, c, cfg.nr, n0, cfg.seed,
                                     point_idx, b, BATCH_VECTORS,
                                     cfg.noiseless), chunk))
            for err, bits, sym, ns in results:
                total_err += err
                total_bits += bits
                total_sym += sym
                total_ns += ns
            batch_idx += len(chunk)
            if total_err >= cfg.target_errors:
                break
    return BerPoint(detector=name, constellation=cfg.constellation,
                    nr=cfg.nr, ebn0_db=float(ebn0_db), symbols=total_sym,
                    bits=total_bits, bit_errors=total_err,
                    ns_per_symbol=total_ns / max(total_sym, 1),
                    under_sampled=total_err < cfg.target_errors)


def run_sweep(cfg, progress=None):
    """Full (detector x Eb/N0) sweep."""
    points = []
    for det in cfg.detectors:
        for i, e in enumerate(cfg.ebn0_db):
            p = run_ber_point(cfg, e, detector=det, point_idx=i)
            points.append(p)
            if progress:
                progress(p)
    return SweepResult(config=cfg, points=tuple(points))


def interpolate_required_snr(points, target_ber):
    """Eb/N0 (dB) at which the BER curve crosses target_ber, by log-linear
    interpolation between the bracketing sweep points."""
    usable = [(p.ebn0_db, p.ber) for p in sorted(points,
                                                 key=lambda p: p.ebn0_db)
              if p.ber > 0]
    for (e0, b0), (e1, b1) in zip(usable, usable[1:]):
        if (b0 >= target_ber >= b1) and b0 > b1:
            frac = ((math.log10(b0) - math.log10(target_ber))
                    / (math.log10(b0) - math.log10(b1)))
            return e0 + frac * (e1 - e0)
    raise NotBracketedError(
        f"BER {target_ber} not bracketed by the sweep")


# ---------------------------------------------------------------------------
# timing benchmark
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchRow:
    detector: str
    constellation: str
    ns_per_symbol: float
    symbols: int


def run_bench(constellation, detectors, nr=2, symbols=1_000_000,
              ebn0_db=16.0, seed=0, repeats=3):
    """Median steady-state per-symbol detection time over fixed channel
    draws.  The measured section covers detection plus slicing only."""
    c = from_name(constellation)
    n0 = ch.ebn0_to_n0(ebn0_db, c.order).n0
    rng = ch.make_rng(seed, 0, 0)
    batch = BATCH_VECTORS
    idx_tx = rng.integers(0, c.order, size=(batch, 2))
    x = c.points[idx_tx]
    H = ch.draw_channels(rng, batch, 2, nr)
    y = ch.apply_channel(H, x, ch.NoiseSpec(n0), rng)
    n_batches = max(1, symbols // batch)

    rows = []
    for name in detectors:
        spec = _parse_detector(name)
        detect_indices_batch(spec, y, H, c, n0)      # warm-up
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter_ns()
            for _ in range(n_batches):
                detect_indices_batch(spec, y, H, c, n0)
            times.append((time.perf_counter_ns() - t0)
                         / (n_batches * batch))
        rows.append(BenchRow(detector=name, constellation=constellation,
                             ns_per_symbol=float(np.median(times)),
                             symbols=n_batches * batch))
    return rows


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

CSV_HEADER = ("detector", "constellation", "nr", "ebn0_db", "symbols",
              "bits", "bit_errors", "ber", "ns_per_symbol")


def write_csv(path, points):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for p in points:
            writer.writerow([p.detector, p.constellation, p.nr,
                             f"{p.ebn0_db:g}", p.symbols, p.bits,
                             p.bit_errors, f"{p.ber:.6e}",
                             f"{p.ns_per_symbol:.1f}"])


def write_svg_plot(path, sweep):
    """BER-vs-Eb/N0 line plot of a sweep, one series per detector."""
    import matplotlib
    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 5))
    for det in sweep.config.detectors:
        pts = sweep.for_detector(det)
        e = [p.ebn0_db for p in pts if p.ber > 0]
        b = [p.ber for p in pts if p.ber > 0]
        ax.semilogy(e, b, marker="o", label=det)
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("BER")
    ax.set_title(f"{sweep.config.constellation}, Nr={sweep.config.nr}")
    ax.grid(True, which="both", alpha=0.4)
    ax.legend()
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
