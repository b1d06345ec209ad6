"""Bessel kernel: branch agreement, ODE residuals, growth bound, zeros.

Expected values marked as derived are computed here by independent
oracles (plain partial sums, bisection, central differences, mpmath)
and frozen, never copied from the implementation under test.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from scipy import special

from wentzell_disk.bessel import (
    DEFAULT_EVALUATOR,
    BesselEvaluator,
    McMahonSeed,
    bessel_j,
    bessel_j_prime,
    bessel_zero,
    bessel_zero_iterations,
    hankel_j0,
    hankel_j0_prime,
)
from wentzell_disk.errors import DomainError, InvalidArgumentError


def naive_j0(x: float, terms: int = 40) -> float:
    """Independent power-series oracle (plain Python, no shared code)."""
    total = 0.0
    term = 1.0
    for m in range(terms):
        if m > 0:
            term *= -(x / 2.0) ** 2 / (m * m)
        total += term
    return total


def bisect_first_zero() -> float:
    lo, hi = 2.0, 3.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if naive_j0(lo) * naive_j0(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


class TestPointValues:
    def test_trivial_origin(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(1, 0.0) == 0.0
        assert bessel_j_prime(0, 0.0) == 0.0
        assert bessel_j_prime(1, 0.0) == 0.5

    def test_j0_at_one(self):
        # oracle: 40-term partial sum, stable under doubling the truncation
        oracle = naive_j0(1.0, 40)
        assert abs(naive_j0(1.0, 80) - oracle) < 1e-16
        assert abs(oracle - 0.765197686557967) < 1e-12
        assert abs(bessel_j(0, 1.0) - 0.765197686557967) < 1e-12

    def test_first_zero_value(self):
        alpha = bisect_first_zero()
        assert abs(alpha - 2.404825557695773) < 1e-12
        assert abs(bessel_j(0, 2.404825557695773)) < 1e-12

    def test_j0_prime_at_first_zero(self):
        # central difference of bessel_j with one Richardson level
        x = 2.404825557695773
        h = 1e-6

        def diff(step):
            return (bessel_j(0, x + step) - bessel_j(0, x - step)) / (2 * step)

        oracle = (4 * diff(h / 2) - diff(h)) / 3
        assert abs(oracle - (-0.519147)) < 1e-5
        assert abs(bessel_j_prime(0, x) - oracle) < 1e-9

    def test_against_scipy_sweep(self):
        rng = np.random.default_rng(42)
        z = rng.uniform(-40, 40, 50) + 1j * rng.uniform(-3, 3, 50)
        for n in range(4):
            ours = bessel_j(n, z)
            ref = special.jv(n, z)
            assert np.max(np.abs(ours - ref) / (1 + np.abs(ref))) < 1e-10
            ours_p = bessel_j_prime(n, z)
            ref_p = special.jvp(n, z)
            assert np.max(np.abs(ours_p - ref_p) / (1 + np.abs(ref_p))) < 1e-10


class TestHankelBranch:
    def test_matches_series_at_12(self):
        # |z| = 12 sits on the default switch radius, so evaluate the two
        # branches with evaluators that each admit the point.
        series = bessel_j(0, 12.0, BesselEvaluator(switch_radius=20.0))
        hank = hankel_j0(12.0, BesselEvaluator(switch_radius=10.0))
        assert abs(hank - series) < 1e-8

    def test_near_zero_of_j0_bounded_by_envelope(self):
        val = hankel_j0(30.6305)
        assert abs(val) <= 0.15

    def test_ode_residual_complex_point(self):
        z = 20.0 + 0.5j
        j = hankel_j0(z)
        jp = hankel_j0_prime(z)
        h = 1e-5
        jpp = (hankel_j0_prime(z + h) - hankel_j0_prime(z - h)) / (2 * h)
        resid = abs(z * z * jpp + z * jp + z * z * j)
        assert np.isfinite(j) and np.isfinite(jp)
        assert resid / abs(z * z) < 1e-6

    def test_domain_error_inside_switch_radius(self):
        with pytest.raises(DomainError):
            hankel_j0(5.0)
        with pytest.raises(DomainError):
            hankel_j0_prime(12.0)  # boundary |z| == switch not allowed


class TestInvariants:
    def test_branch_consistency_annulus(self):
        # 200 samples in {10 <= |z| <= 20, |Im z| <= 2}
        rng = np.random.default_rng(7)
        pts = []
        while len(pts) < 200:
            re = rng.uniform(-20, 20)
            im = rng.uniform(-2, 2)
            if 10.01 <= abs(complex(re, im)) <= 20 and abs(re) > 10.01:
                pts.append(complex(abs(re), im))  # Hankel branch: Re > 0
        z = np.array(pts)
        series = bessel_j(0, z, BesselEvaluator(switch_radius=25.0, series_terms=90))
        hank = hankel_j0(z, BesselEvaluator(switch_radius=10.0))
        assert np.max(np.abs(series - hank) / (1 + np.abs(series))) <= 1e-8

    def test_ode_residual_sweep(self):
        rng = np.random.default_rng(11)
        mags = rng.uniform(0.5, 50.0, 200)
        args = rng.uniform(-0.15, 0.15, 200)
        z = mags * np.exp(1j * args)
        z = np.where(np.abs(z.imag) > 3, z.real + 0.0j, z)
        for n in range(4):
            j = bessel_j(n, z)
            jp = bessel_j_prime(n, z)
            # Richardson-extrapolated central difference: step wide enough
            # not to amplify series-cancellation noise near the switch
            h = 1e-4 * (1 + np.abs(z))
            d1 = (bessel_j_prime(n, z + h) - bessel_j_prime(n, z - h)) / (2 * h)
            d2 = (bessel_j_prime(n, z + h / 2) - bessel_j_prime(n, z - h / 2)) / h
            jpp = (4 * d2 - d1) / 3
            resid = np.abs(z * z * jpp + z * jp + (z * z - n * n) * j)
            tol = 1e-8 * (1 + np.abs(z) ** 2) * np.exp(np.abs(z.imag))
            assert np.all(resid <= tol)

    def test_growth_bound(self):
        rng = np.random.default_rng(13)
        z = rng.uniform(-50, 50, 200) + 1j * rng.uniform(-3, 3, 200)
        for n in range(4):
            assert np.all(np.abs(bessel_j(n, z)) <= np.exp(np.abs(z.imag)) + 1e-12)

    def test_zero_interlacing(self):
        zeros = np.array([bessel_zero(k) for k in range(1, 102)])
        gaps = np.diff(zeros)
        assert np.all(gaps > math.pi - 0.2)
        assert np.all(gaps < math.pi + 0.2)

    def test_series_truncation_at_switch_radius(self):
        # last retained term at |z| = switch_radius is < 1e-16 of the sum
        ev = DEFAULT_EVALUATOR
        zh = ev.switch_radius / 2.0
        term = 1.0
        total = 0.0
        for m in range(ev.series_terms):
            if m > 0:
                term *= -(zh * zh) / (m * m)
            total += term
        assert abs(term) < 1e-16 * abs(total)


class TestZeros:
    def test_low_zeros_frozen(self):
        assert abs(bessel_zero(1) - 2.404825557695773) < 1e-12
        assert abs(bessel_zero(2) - 5.520078110286311) < 1e-12

    def test_seed_vs_refined_k5(self):
        seed = McMahonSeed(5)
        assert abs(seed.seed_value - 14.9309417) < 1e-6
        gap = abs(bessel_zero(5) - seed.seed_value)
        assert 2e-5 < gap < 3e-5  # consistent with the O(1/k^3) remainder

    def test_mcmahon_seed_invariants(self):
        for k in (1, 2, 10, 1000):
            seed = McMahonSeed(k)
            assert seed.seed_value > seed.phi_k > 0
        with pytest.raises(InvalidArgumentError):
            McMahonSeed(0)

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 100, 100000])
    def test_zero_residual_and_iterations(self, k):
        alpha = bessel_zero(k)
        with mp.workdps(30):
            assert abs(mp.besselj(0, mp.mpf(alpha))) <= 1e-13
        assert bessel_zero_iterations(k) <= 8


class TestErrors:
    def test_order_exceeds_max(self):
        with pytest.raises(InvalidArgumentError):
            bessel_j(51, 1.0)
        with pytest.raises(InvalidArgumentError):
            bessel_j_prime(51, 1.0)

    def test_nonfinite_input(self):
        with pytest.raises(InvalidArgumentError):
            bessel_j(0, float("nan"))
        with pytest.raises(InvalidArgumentError):
            bessel_j(0, complex(float("inf"), 0.0))

    def test_magnitude_cap(self):
        with pytest.raises(InvalidArgumentError):
            bessel_j(0, 2e4)

    def test_negative_order(self):
        with pytest.raises(InvalidArgumentError):
            bessel_j(-1, 1.0)

    def test_evaluator_validation(self):
        with pytest.raises(InvalidArgumentError):
            BesselEvaluator(switch_radius=5.0)
        with pytest.raises(InvalidArgumentError):
            BesselEvaluator(hankel_terms=1)
