"""Log-domain arithmetic: Jacobian summations, max-log variants, erf."""

import cmath
import math

import numpy as np
import pytest
from scipy.special import erf as scipy_erf

from mimodetect.logdomain import (
    NEG_INF,
    SingularLogSumError,
    erf_approx,
    log_sum_complex,
    log_sum_complex_reduce,
    log_sum_real,
    log_sum_real_reduce,
    max_log_complex,
    max_log_complex_reduce,
    max_log_real,
    max_log_real_reduce,
)


class TestLogSumReal:
    def test_symmetric_case(self):
        assert log_sum_real(0.0, 0.0) == pytest.approx(math.log(2.0),
                                                       abs=1e-15)

    def test_neg_inf_is_identity(self):
        assert log_sum_real(5.0, NEG_INF) == 5.0
        assert log_sum_real(NEG_INF, 5.0) == 5.0
        assert log_sum_real(NEG_INF, NEG_INF) == NEG_INF

    def test_one_two(self):
        # log(e^1 + e^2) evaluated directly
        assert log_sum_real(1.0, 2.0) == pytest.approx(
            2.3132616875182228, abs=1e-14)

    def test_matches_direct_log_sum(self):
        rng = np.random.default_rng(11)
        for _ in range(2000):
            a, b = rng.uniform(-30, 30, size=2)
            assert log_sum_real(a, b) == pytest.approx(
                float(np.logaddexp(a, b)), abs=1e-12)

    def test_never_overflows_for_large_inputs(self):
        assert log_sum_real(800.0, 799.0) == pytest.approx(
            800.0 + math.log1p(math.exp(-1.0)), abs=1e-9)

    def test_commutative(self):
        rng = np.random.default_rng(12)
        for _ in range(500):
            a, b = rng.uniform(-30, 30, size=2)
            assert log_sum_real(a, b) == pytest.approx(
                log_sum_real(b, a), abs=1e-10)

    def test_associative(self):
        rng = np.random.default_rng(13)
        for _ in range(500):
            a, b, c = rng.uniform(-30, 30, size=3)
            left = log_sum_real(log_sum_real(a, b), c)
            right = log_sum_real(a, log_sum_real(b, c))
            assert left == pytest.approx(right, abs=1e-10)


class TestMaxLogReal:
    def test_simple(self):
        assert max_log_real(1.0, 2.0) == 2.0

    def test_tie_returns_first(self):
        assert max_log_real(0.0, 0.0) == 0.0

    def test_bounds_jacobian_sum(self):
        rng = np.random.default_rng(14)
        for _ in range(500):
            a, b = rng.uniform(-30, 30, size=2)
            ml = max_log_real(a, b)
            js = log_sum_real(a, b)
            assert ml <= js <= ml + math.log(2.0) + 1e-12


class TestLogSumComplex:
    def test_log_one_plus_j(self):
        got = log_sum_complex(0.0 + 0.0j, complex(0.0, math.pi / 2.0))
        want = cmath.log(1.0 + 1.0j)
        assert got == pytest.approx(want, abs=1e-14)
        assert got.real == pytest.approx(0.34657359027997264, abs=1e-14)
        assert got.imag == pytest.approx(0.7853981633974483, abs=1e-14)

    def test_neg_inf_is_identity(self):
        a = 1.5 + 0.3j
        assert log_sum_complex(a, complex(NEG_INF, 0.0)) == a
        assert log_sum_complex(complex(NEG_INF, 0.0), a) == a

    def test_total_cancellation_raises(self):
        with pytest.raises(SingularLogSumError):
            log_sum_complex(0.0 + 0.0j, complex(0.0, math.pi))

    def test_matches_direct_complex_sum(self):
        rng = np.random.default_rng(15)
        for _ in range(2000):
            a = complex(rng.uniform(-20, 20), rng.uniform(-math.pi, math.pi))
            b = complex(rng.uniform(-20, 20), rng.uniform(-math.pi, math.pi))
            s = cmath.exp(a) + cmath.exp(b)
            if abs(s) < 1e-12 * max(abs(cmath.exp(a)), abs(cmath.exp(b))):
                continue  # near the singular set
            got = cmath.exp(log_sum_complex(a, b))
            assert abs(got - s) <= 1e-10 * abs(s)

    def test_phase_on_principal_branch(self):
        rng = np.random.default_rng(16)
        for _ in range(500):
            a = complex(rng.uniform(-5, 5), rng.uniform(-10, 10))
            b = complex(rng.uniform(-5, 5), rng.uniform(-10, 10))
            out = log_sum_complex(a, b)
            assert -math.pi < out.imag <= math.pi

    def test_anchored_on_larger_real_part_no_overflow(self):
        out = log_sum_complex(800.0 + 0.1j, 700.0 + 0.2j)
        assert out.real == pytest.approx(800.0, abs=1e-9)


class TestMaxLogComplex:
    def test_larger_real_part_wins(self):
        assert max_log_complex(0.0 + 1.0j, -3.0 + 2.0j) == 0.0 + 1.0j

    def test_tie_returns_first(self):
        assert max_log_complex(1.0 + 0.5j, 1.0 - 0.5j) == 1.0 + 0.5j


class TestReductions:
    def test_real_reduce_matches_pairwise_chain(self):
        rng = np.random.default_rng(17)
        terms = rng.uniform(-25, 25, size=16)
        acc = NEG_INF
        for t in terms:
            acc = log_sum_real(acc, float(t))
        assert log_sum_real_reduce(terms) == pytest.approx(acc, abs=1e-10)

    def test_real_reduce_all_neg_inf(self):
        assert log_sum_real_reduce(np.full(5, NEG_INF)) == NEG_INF

    def test_real_reduce_matches_direct(self):
        rng = np.random.default_rng(18)
        terms = rng.uniform(-30, 30, size=(50, 12))
        got = log_sum_real_reduce(terms, axis=-1)
        want = np.log(np.sum(np.exp(terms), axis=-1))
        np.testing.assert_allclose(got, want, atol=1e-10)

    def test_max_log_reduce_bounds_jacobian_reduce(self):
        rng = np.random.default_rng(19)
        n = 16
        terms = rng.uniform(-30, 30, size=(100, n))
        ml = max_log_real_reduce(terms, axis=-1)
        js = log_sum_real_reduce(terms, axis=-1)
        assert np.all(ml <= js + 1e-12)
        assert np.all(js <= ml + math.log(n) + 1e-12)

    def test_complex_reduce_matches_direct(self):
        rng = np.random.default_rng(20)
        re = rng.uniform(-20, 20, size=(40, 10))
        im = rng.uniform(-math.pi, math.pi, size=(40, 10))
        terms = re + 1j * im
        got = np.exp(log_sum_complex_reduce(terms, axis=-1))
        want = np.sum(np.exp(terms), axis=-1)
        np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-280)

    def test_complex_reduce_cancelled_sum_is_sentinel(self):
        terms = np.array([0.0 + 0.0j, complex(0.0, math.pi)])
        out = log_sum_complex_reduce(terms)
        assert out.real == NEG_INF

    def test_max_log_complex_reduce_first_occurrence(self):
        terms = np.array([1.0 + 0.5j, 1.0 - 0.5j, 0.0 + 0.0j])
        assert max_log_complex_reduce(terms) == 1.0 + 0.5j


class TestErfApprox:
    def test_zero(self):
        assert erf_approx(0.0) == 0.0

    def test_saturation(self):
        for t in (6.0, 10.0, 1e3):
            assert abs(erf_approx(t) - 1.0) < 1e-12
            assert abs(erf_approx(-t) + 1.0) < 1e-12

    def test_erf_of_one(self):
        assert erf_approx(1.0) == pytest.approx(0.8427007929497149,
                                                abs=1e-7)

    def test_absolute_error_budget(self):
        t = np.linspace(-8.0, 8.0, 40001)
        err = np.max(np.abs(erf_approx(t) - scipy_erf(t)))
        assert err <= 1e-7

    def test_odd_symmetry_bit_exact(self):
        rng = np.random.default_rng(21)
        t = rng.uniform(0.0, 8.0, size=1000)
        np.testing.assert_array_equal(erf_approx(-t), -erf_approx(t))

    def test_monotone_nondecreasing(self):
        t = np.linspace(-8.0, 8.0, 20001)
        v = erf_approx(t)
        assert np.all(np.diff(v) >= 0.0)

    def test_scalar_in_scalar_out(self):
        out = erf_approx(0.5)
        assert isinstance(out, float)
