"""Pencil root solver: characteristic values, Newton, winding counts,
certified tables, asymptotics, and the 1-D interval oracle.

High-precision reference roots were computed independently with mpmath
(besselj at 40 digits):

    lambda_1  = 2.7113451415055258 + 0.0902879732164981j
    lambda_10 = 30.6671513533038145 + 0.0010587941552740j
    1d z_3    = -0.0106664081387866 + 9.5282506826327653j  (l = 1)

Note the asymptotic seed for the 1-D root (-0.011133 + 9.52970j) sits
~1.5e-3 away; the converged value above satisfies
|tanh z + 1/(1+z)| <= 1e-12.
"""

import math

import numpy as np
import pytest

from wentzell_disk.errors import (
    BoundaryTooCloseError,
    InvalidArgumentError,
    SpuriousRootError,
)
from wentzell_disk.roots import (
    SearchBox,
    asymptotic_root,
    certification_box,
    char_fn,
    count_roots,
    eigenfunction,
    newton_root,
    oracle_1d_char,
    oracle_1d_roots,
    root_table,
    sharpness_report,
)

LAMBDA_1_REF = 2.7113451415055258 + 0.0902879732164981j
LAMBDA_10_REF = 30.6671513533038145 + 0.0010587941552740j
ORACLE_Z3_REF = -0.0106664081387866 + 9.5282506826327653j
# |lambda_10 - asymptotic_root(10)|, 40-digit referee; the O(1/k^3)
# remainder constant is ~0.07.
LAMBDA_10_GAP_REF = 7.0571242855e-5


class TestCharFn:
    def test_composed_value_at_first_dirichlet_zero(self):
        # (i a - a^2) J_0(a) + a J_0'(a) = a J_0'(a) at a zero of J_0
        val = char_fn(0, 2.404825557695773)
        assert abs(val - 2.404826 * (-0.519147)) < 1e-4

    def test_removable_zero_at_origin(self):
        assert char_fn(0, 0.0) == 0.0
        assert char_fn(1, 0.0) == 0.0

    def test_vectorized(self):
        lams = np.array([1.0, 2.0 + 0.1j, 30.0])
        vals = char_fn(0, lams)
        assert vals.shape == (3,)
        assert np.allclose(vals[0], char_fn(0, 1.0))


class TestAsymptoticRoot:
    def test_frozen_values(self):
        # direct evaluation of the closed form, phi_k = k pi - pi/4
        assert abs(asymptotic_root(10) - (30.6672217 + 0.0010647j)) < 5e-7
        assert abs(asymptotic_root(5) - (14.9976550 + 0.0044706j)) < 5e-7

    def test_formula_direct(self):
        for k in (5, 8, 20):
            phi = k * math.pi - math.pi / 4
            want = phi + 1 / (8 * phi) + phi / (1 + phi * phi) + 1j / (1 + phi * phi)
            assert asymptotic_root(k) == pytest.approx(want)

    def test_imaginary_part_decreasing(self):
        ims = [asymptotic_root(k).imag for k in range(5, 40)]
        assert all(a > b for a, b in zip(ims, ims[1:]))
        assert ims[-1] > 0

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            asymptotic_root(0)


class TestNewton:
    def test_root_near_asymptotic_seed_k10(self):
        r = newton_root(0, asymptotic_root(10), 1e-12)
        assert abs(r.lam - LAMBDA_10_REF) < 1e-10
        gap = abs(r.lam - asymptotic_root(10))
        assert abs(gap - LAMBDA_10_GAP_REF) < 1e-9
        assert r.residual <= 1e-12 * (1 + abs(r.lam) ** 2)

    def test_k1_root_from_dirichlet_seed(self):
        r = newton_root(0, 2.404825557695773 + 0.1j, 1e-12)
        assert abs(r.lam - LAMBDA_1_REF) < 1e-9
        assert r.lam.imag > 0
        box = SearchBox(lo=2.0 + 0.0j, hi=3.0 + 0.5j)
        assert count_roots(0, box) == 1

    def test_conjugate_seed_reflects_to_branch(self):
        direct = newton_root(0, asymptotic_root(10), 1e-12)
        mirrored = newton_root(0, asymptotic_root(10).conjugate(), 1e-12)
        assert abs(mirrored.lam - direct.lam) < 1e-9
        assert mirrored.lam.imag >= 0
        assert abs(char_fn(0, mirrored.lam)) <= 1e-12 * (1 + abs(mirrored.lam) ** 2)

    def test_spurious_root_rejection(self):
        with pytest.raises(InvalidArgumentError):
            newton_root(0, 0.3 + 0.1j)

    def test_tol_validation(self):
        with pytest.raises(InvalidArgumentError):
            newton_root(0, 3.0 + 0.1j, tol=1e-16)

    def test_z_is_i_lambda(self):
        r = newton_root(0, asymptotic_root(7))
        assert r.z == 1j * r.lam
        assert r.sigma < 0
        assert r.omega > 0


class TestCountRoots:
    def test_box_around_k10(self):
        # True winding is 1: F_0 has no conjugate root (the +i*lambda term
        # breaks lambda -> conj(lambda) symmetry; the partner of z_10's
        # conjugate eigenvalue sits at Re lambda < 0).
        center = asymptotic_root(10).real
        box = SearchBox(lo=complex(center - 1, -0.5), hi=complex(center + 1, 0.5))
        assert count_roots(0, box) == 1

    def test_empty_box(self):
        box = SearchBox(lo=0.5 - 0.2j, hi=1.5 + 0.2j)
        assert count_roots(0, box) == 0
        assert box.winding == 0

    def test_degenerate_box_rejected(self):
        with pytest.raises(InvalidArgumentError):
            SearchBox(lo=1 + 1j, hi=1 + 1j)

    def test_boundary_too_close(self):
        # Bottom edge passes through the root and a quadrature node lands
        # on it exactly (width 0.8 over 64 bottom nodes puts node 32 at
        # the box center), so the |F| floor must fire.
        r = newton_root(0, asymptotic_root(10))
        box = SearchBox(lo=complex(r.lam.real - 0.4, r.lam.imag),
                        hi=complex(r.lam.real + 0.4, r.lam.imag + 0.5))
        with pytest.raises(BoundaryTooCloseError):
            count_roots(0, box)

    def test_quadrature_node_validation(self):
        with pytest.raises(InvalidArgumentError):
            SearchBox(lo=0j, hi=1 + 1j, quadrature_nodes=0)


class TestRootTable:
    def test_n0_table(self, table60):
        assert len(table60) == 60
        assert all(r.certified for r in table60)
        assert all(r.winding == 1 for r in table60)
        res = [r.lam.real for r in table60]
        assert res == sorted(res)
        assert all(r.sigma < 0 for r in table60)
        for a, b in zip(table60, table60[1:]):
            assert abs(b.lam - a.lam) > 1e-6

    def test_asymptotic_error_slope(self, table60):
        ks = np.arange(20, 61)
        errs = np.array([abs(table60[k - 1].lam - asymptotic_root(k)) for k in ks])
        slope = np.polyfit(np.log(ks), np.log(errs), 1)[0]
        assert slope <= -2.5

    def test_certification_soundness(self, table60):
        for r in (table60[0], table60[9], table60[39]):
            assert count_roots(0, certification_box(r.lam)) == 1

    def test_branch_symmetry(self, table60):
        for r in (table60[2], table60[29]):
            mirrored = abs(char_fn(0, -r.lam.conjugate()))
            assert mirrored <= 1e-10 * (1 + abs(r.lam) ** 2)

    def test_generic_mode_table(self):
        table = root_table(3, 10)
        assert len(table) == 10
        assert all(r.certified for r in table)
        assert all(r.residual <= 1e-10 * (1 + abs(r.lam) ** 2) for r in table)
        assert all(r.predicted is None for r in table)

    def test_threads_deterministic(self, table60):
        other = root_table(0, 60, threads=4)
        assert [r.lam for r in other] == [r.lam for r in table60]

    def test_k_max_validation(self):
        with pytest.raises(InvalidArgumentError):
            root_table(0, 0)
        with pytest.raises(InvalidArgumentError):
            root_table(0, 10 ** 4 + 1)


class TestEigenfunction:
    def test_center_values(self):
        lam = LAMBDA_10_REF
        assert eigenfunction(0, lam, 0.0, 0.3) == 1.0
        assert eigenfunction(1, lam, 0.0, 0.3) == 0.0

    def test_angular_factor(self):
        lam = LAMBDA_1_REF
        v1 = eigenfunction(2, lam, 0.5, 0.0)
        v2 = eigenfunction(2, lam, 0.5, math.pi / 4)
        assert abs(v2 - v1 * np.exp(1j * math.pi / 2)) < 1e-12


class TestSharpness:
    def test_report_on_table(self, table60):
        report = sharpness_report(table60)
        assert report.ok
        # k = 10 row: the closed-form values give sigma*omega^2 ~ -1.0013
        asym = asymptotic_root(10)
        assert abs(-asym.imag * asym.real ** 2 + 1.0013) < 2e-4
        row = report.rows[9]
        assert row.sigma < 0
        assert -1.05 < row.product < -0.95

    def test_all_sigmas_negative(self, table60):
        report = sharpness_report(table60)
        assert all(row.sigma < 0 for row in report.rows)

    def test_empty_table(self):
        report = sharpness_report([])
        assert report.rows == []
        assert report.ok

    def test_failure_detection(self, table60):
        bad = table60[:30]
        fake = type(bad[25])(n=0, k=26, lam=bad[25].lam.conjugate(),
                             residual=0.0, certified=True)
        report = sharpness_report(bad[:25] + [fake])
        assert not report.ok
        assert "not negative" in report.failures[0]
        assert "FAIL" in report.render()


class TestOracle1D:
    def test_k3_frozen_root(self):
        roots = oracle_1d_roots(1.0, 3)
        z3 = roots[2]
        assert abs(z3 - ORACLE_Z3_REF) < 1e-9
        g = oracle_1d_char(1.0)
        assert abs(g(z3)) <= 1e-12
        # the asymptotic seed sits ~1.5e-3 from the converged root
        seed = 3j * math.pi - 1 / (1 + 3j * math.pi)
        assert 1e-3 < abs(z3 - seed) < 2e-3

    def test_product_limit(self):
        roots = oracle_1d_roots(1.0, 30)
        prods = [roots[k - 1].real * (1 + (k * math.pi) ** 2) for k in range(5, 31)]
        assert abs(prods[-1] + 1.0) < 5e-3
        assert max(abs(p + 1.0) for p in prods) < 2e-2

    def test_winding_box(self):
        g = oracle_1d_char(1.0)
        box = SearchBox(lo=complex(-1.0, 3 * math.pi - 0.5),
                        hi=complex(0.0, 3 * math.pi + 0.5))
        assert count_roots(0, box, fn=g) == 1

    def test_all_upper_half_plane(self):
        assert all(z.imag > 0 for z in oracle_1d_roots(1.0, 5))

    def test_length_validation(self):
        with pytest.raises(InvalidArgumentError):
            oracle_1d_roots(0.01, 3)
