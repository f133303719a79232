"""Constellation construction, normalization, Gray mapping, slicing."""

import math

import numpy as np
import pytest

from mimodetect.constellation import (
    CONSTELLATION_NAMES,
    ApskRings,
    QamGrid,
    build_apsk,
    build_psk,
    build_qam,
    from_name,
    slice_nearest,
)


def _as_set(points, digits=12):
    return {complex(round(p.real, digits), round(p.imag, digits))
            for p in points}


class TestBuildQam:
    def test_qpsk_grid(self):
        c = build_qam(4)
        want = {complex(i / math.sqrt(2), q / math.sqrt(2))
                for i in (-1, 1) for q in (-1, 1)}
        assert _as_set(c.points) == _as_set(want)

    def test_16qam_grid(self):
        # independent evaluation: levels {-3,-1,1,3}/sqrt(10) per axis
        c = build_qam(16)
        lv = np.array([-3.0, -1.0, 1.0, 3.0]) / math.sqrt(10.0)
        want = {complex(i, q) for i in lv for q in lv}
        assert _as_set(c.points) == _as_set(want)

    def test_odd_power_of_two_rejected(self):
        with pytest.raises(ValueError):
            build_qam(8)

    @pytest.mark.parametrize("m", [2, 3, 12, 0])
    def test_non_square_orders_rejected(self, m):
        with pytest.raises(ValueError):
            build_qam(m)

    def test_records_square_halfwidth(self):
        c = build_qam(16)
        assert isinstance(c.shape, QamGrid)
        assert c.shape.kappa == pytest.approx(math.sqrt(1.5), abs=1e-15)

    def test_axis_neighbors_differ_in_one_bit(self):
        c = build_qam(64)
        side = 8
        bits = c.bits.reshape(side, side, -1)
        for axis in (0, 1):
            diff = np.abs(np.diff(bits.astype(int), axis=axis))
            assert np.all(np.sum(diff, axis=-1) == 1)


class TestBuildApsk:
    def test_8psk_points(self):
        c = build_psk(8)
        want = [np.exp(1j * math.pi * n / 4.0) for n in range(8)]
        np.testing.assert_allclose(c.points, want, atol=1e-14)

    def test_psk_points_on_unit_circle(self):
        for m in (2, 4, 8, 16, 32):
            c = build_psk(m)
            np.testing.assert_allclose(np.abs(c.points), 1.0, atol=1e-14)

    def test_two_ring_16apsk(self):
        r = math.sqrt(0.4)
        c = build_apsk([r, 2.0 * r], [8, 8])
        assert isinstance(c.shape, ApskRings)
        assert c.shape.num_rings == 2
        # radii ratio 1:2 and unit energy preserved without rescaling
        assert c.shape.radii[1] / c.shape.radii[0] == pytest.approx(2.0)
        assert c.shape.radii[0] == pytest.approx(r, abs=1e-14)

    def test_nonincreasing_radii_rejected(self):
        with pytest.raises(ValueError):
            build_apsk([1.0, 0.5], [8, 8])

    def test_nonpositive_radius_rejected(self):
        with pytest.raises(ValueError):
            build_apsk([0.0, 1.0], [8, 8])

    def test_non_power_of_two_total_rejected(self):
        with pytest.raises(ValueError):
            build_apsk([1.0, 2.0], [5, 7])

    def test_renormalizes_arbitrary_radii(self):
        c = build_apsk([3.0, 7.0], [4, 4])
        energy = np.mean(np.abs(c.points) ** 2)
        assert energy == pytest.approx(1.0, abs=1e-12)
        assert c.shape.radii[1] / c.shape.radii[0] == pytest.approx(7.0 / 3.0)

    def test_phase_offsets(self):
        c = build_apsk([1.0], [4], phase_offsets=[math.pi / 4.0])
        want = [np.exp(1j * (math.pi / 2.0 * n + math.pi / 4.0))
                for n in range(4)]
        np.testing.assert_allclose(c.points, want, atol=1e-14)

    def test_psk_ring_neighbors_differ_in_one_bit(self):
        c = build_psk(16)
        bits = c.bits.astype(int)
        for i in range(16):
            d = np.sum(bits[i] != bits[(i + 1) % 16])
            assert d == 1


class TestNamedConstellations:
    @pytest.mark.parametrize("name", CONSTELLATION_NAMES)
    def test_unit_energy(self, name):
        c = from_name(name)
        assert np.mean(np.abs(c.points) ** 2) == pytest.approx(1.0,
                                                               abs=1e-12)

    @pytest.mark.parametrize("name", CONSTELLATION_NAMES)
    def test_points_distinct_and_power_of_two(self, name):
        c = from_name(name)
        m = c.order
        assert m >= 2 and (m & (m - 1)) == 0
        assert len(_as_set(c.points)) == m
        assert c.bit_width == int(math.log2(m))
        assert len({tuple(b) for b in c.bits}) == m

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            from_name("1024apsk")

    def test_points_are_immutable(self):
        c = from_name("qpsk")
        with pytest.raises(ValueError):
            c.points[0] = 0.0


class TestSliceNearest:
    @pytest.mark.parametrize("name", CONSTELLATION_NAMES)
    def test_exact_point_maps_to_own_index(self, name):
        c = from_name(name)
        idx = slice_nearest(c.points, c)
        np.testing.assert_array_equal(idx, np.arange(c.order))

    def test_origin_on_qpsk_takes_lowest_index(self):
        c = from_name("qpsk")
        assert slice_nearest(0.0 + 0.0j, c) == 0

    def test_near_unity_on_8psk(self):
        c = from_name("8psk")
        est = 0.9 + 0.1j
        # independent brute-force scan
        want = int(min(range(c.order),
                       key=lambda i: abs(est - c.points[i])))
        assert slice_nearest(est, c) == want
        assert c.points[want] == pytest.approx(1.0 + 0.0j, abs=1e-14)

    @pytest.mark.parametrize("name", CONSTELLATION_NAMES)
    def test_small_perturbations_recovered(self, name):
        c = from_name(name)
        rng = np.random.default_rng(31)
        eps = 0.49 * c.min_distance
        for _ in range(20):
            delta = eps * np.exp(1j * rng.uniform(0, 2 * math.pi,
                                                  size=c.order))
            idx = slice_nearest(c.points + delta, c)
            np.testing.assert_array_equal(idx, np.arange(c.order))

    def test_batched_shapes(self):
        c = from_name("qpsk")
        est = np.tile(c.points[:2], (3, 1))
        idx = slice_nearest(est, c)
        assert idx.shape == (3, 2)
        np.testing.assert_array_equal(idx, np.tile([0, 1], (3, 1)))


class TestMinDistance:
    def test_qpsk(self):
        c = from_name("qpsk")
        assert c.min_distance == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_16qam(self):
        c = from_name("16qam")
        assert c.min_distance == pytest.approx(2.0 / math.sqrt(10.0),
                                               abs=1e-12)
