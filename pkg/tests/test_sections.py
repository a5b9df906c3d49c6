"""KT sections: basis, tensor law, shift products, separating sections."""

import cmath

import numpy as np
import pytest

from ktheta import (
    EquivalentPoints,
    GENERATORS,
    IllConditioned,
    KTPoint,
    SectionIndex,
    ShiftSumNonzero,
    ThetaArgument,
    ThetaBasisIndex,
    ZetaShift,
    act,
    fit_in_span,
    fundamental_domain_samples,
    multiplicator,
    product_of_shifts,
    section,
    section_gradient,
    section_matrix,
    separating_section,
    separating_value,
    theta,
    theta_degree_k,
    theta_kt,
    zeta_action,
)
from ktheta.sections import BASE_TAU, section_matrix_with_gradients

U0 = KTPoint(0.31, 0.57, 0.12, 0.83)


def leaf_samples(n, seed, y):
    pts = fundamental_domain_samples(n, seed).copy()
    pts[:, 1] = y
    return [KTPoint.from_array(p) for p in pts]


class TestThetaKT:
    def test_definition(self):
        u = U0
        expected = theta(ThetaArgument(u.z + 1j * u.x, u.y + 1j)) * theta(
            ThetaArgument(u.y + 1j * u.t, 1j)
        )
        assert abs(theta_kt(u) - expected) < 1e-13 * max(1.0, abs(expected))

    def test_base_tau_is_i(self):
        assert BASE_TAU == 1j

    def test_degree_one_section_is_theta_kt(self):
        val = section(SectionIndex(1, 0, 0), U0)
        assert abs(val - theta_kt(U0)) < 1e-13


class TestSectionBasis:
    def test_matches_factor_definition(self):
        k = 3
        u = U0
        for p in range(k):
            for q in range(k):
                got = section(SectionIndex(k, p, q), u)
                fib = theta_degree_k(
                    ThetaBasisIndex(k, p), ThetaArgument(u.z + 1j * u.x, u.y + 1j)
                )
                base = theta_degree_k(
                    ThetaBasisIndex(k, q), ThetaArgument(u.y + 1j * u.t, 1j)
                )
                assert abs(got - fib * base) < 1e-12 * max(1.0, abs(fib * base))

    def test_flattening_order(self):
        k = 3
        mat = section_matrix(k, U0.as_array())
        for p in range(k):
            for q in range(k):
                direct = section(SectionIndex(k, p, q), U0)
                assert abs(mat[0, p * k + q] - direct) < 1e-12 * max(1.0, abs(direct))

    def test_rank_k_squared(self):
        for k in (2, 3):
            pts = fundamental_domain_samples(8 * k * k, 100 + k)
            mat = section_matrix(k, pts)
            sv = np.linalg.svd(mat, compute_uv=False)
            assert (sv > 1e-8 * sv[0]).sum() == k * k

    def test_index_validation(self):
        with pytest.raises(ValueError):
            SectionIndex(2, 2, 0)
        with pytest.raises(ValueError):
            SectionIndex(0, 0, 0)


class TestTensorPowerLaw:
    @pytest.mark.parametrize("k", [1, 2, 3])
    @pytest.mark.parametrize("gen", ["a", "b", "c", "d"])
    def test_generator_transformation(self, k, gen):
        g = GENERATORS[gen]
        u = U0
        factor = multiplicator(g, u) ** k
        for p in range(k):
            for q in range(k):
                idx = SectionIndex(k, p, q)
                lhs = section(idx, act(g, u))
                rhs = factor * section(idx, u)
                assert abs(lhs - rhs) < 1e-10 * max(abs(lhs), abs(rhs), 1e-6)


class TestGradients:
    def test_cauchy_riemann_in_fiber(self):
        idx = SectionIndex(3, 1, 2)
        grad = section_gradient(idx, U0)
        # holomorphic in z + ix: (d_z + i d_x) s = 0 exactly by construction
        assert abs(grad[2] + 1j * grad[0]) < 1e-12

    def test_finite_difference(self):
        idx = SectionIndex(3, 2, 1)
        h = 1e-5
        grad = section_gradient(idx, U0)
        base = U0.as_array()
        for axis in range(4):
            e = np.zeros(4)
            e[axis] = h
            fd = (
                section(idx, KTPoint.from_array(base + e))
                - section(idx, KTPoint.from_array(base - e))
            ) / (2 * h)
            assert abs(fd - grad[axis]) / max(1.0, abs(grad[axis])) < 1e-6

    def test_batch_matches_scalar(self):
        pts = fundamental_domain_samples(5, 3)
        vals, grads = section_matrix_with_gradients(2, pts)
        for i in range(5):
            u = KTPoint.from_array(pts[i])
            for p in range(2):
                for q in range(2):
                    idx = SectionIndex(2, p, q)
                    assert abs(vals[i, 2 * p + q] - section(idx, u)) < 1e-11
                    g = section_gradient(idx, u)
                    assert np.allclose(grads[i, :, 2 * p + q], g, rtol=1e-9, atol=1e-11)


class TestZetaAction:
    def test_zero_shift_is_theta_kt(self):
        assert abs(zeta_action(ZetaShift(0, 0), U0) - theta_kt(U0)) < 1e-13

    def test_unit_shift_is_periodic(self):
        a = zeta_action(ZetaShift(1.0, 0.0), U0)
        b = theta_kt(U0)
        assert abs(a - b) < 1e-12 * max(1.0, abs(b))

    def test_shift_onto_zero(self):
        zeta = ZetaShift(0.5 - (U0.z + 1j * U0.x), 0.0)
        assert abs(zeta_action(zeta, U0)) < 1e-12


class TestProductOfShifts:
    def test_nonzero_sum_rejected(self):
        with pytest.raises(ShiftSumNonzero):
            product_of_shifts([ZetaShift(0.1, 0.0), ZetaShift(0.0, 0.0)], U0)

    def test_zero_shifts_cube(self):
        zetas = [ZetaShift(0, 0)] * 3
        got = product_of_shifts(zetas, U0)
        assert abs(got - theta_kt(U0) ** 3) < 1e-10 * max(1.0, abs(got))

    def test_cube_fits_span_on_leaf(self):
        pts = leaf_samples(64, 21, 0.42)
        zetas = [ZetaShift(0, 0)] * 3
        samples = [(p, product_of_shifts(zetas, p)) for p in pts]
        _, res = fit_in_span(samples, 3)
        assert res < 1e-8

    @pytest.mark.parametrize("k", [2, 3])
    def test_random_zero_sum_fits_span_on_leaf(self, k):
        rng = np.random.default_rng(17 + k)
        z1 = rng.random(k - 1) + 1j * 0.4 * (rng.random(k - 1) - 0.5)
        z2 = rng.random(k - 1) + 1j * 0.4 * (rng.random(k - 1) - 0.5)
        zetas = [ZetaShift(complex(a), complex(b)) for a, b in zip(z1, z2)]
        zetas.append(ZetaShift(-z1.sum(), -z2.sum()))
        pts = leaf_samples(64, 50 + k, 0.13)
        samples = [(p, product_of_shifts(zetas, p)) for p in pts]
        _, res = fit_in_span(samples, k)
        assert res < 1e-8

    def test_membership_is_leafwise_only(self):
        # the same zero-sum product sampled across varying y leaves the span:
        # the fiber modulus y + i enters the expansion coefficients
        zetas = [
            ZetaShift(0.3 + 0.1j, 0.2),
            ZetaShift(0.25 - 0.05j, 0.15),
            ZetaShift(-0.55 - 0.05j, -0.35),
        ]
        pts = [KTPoint.from_array(p) for p in fundamental_domain_samples(64, 60)]
        samples = [(p, product_of_shifts(zetas, p)) for p in pts]
        _, res = fit_in_span(samples, 3)
        assert res > 1e-5


class TestFitInSpan:
    def test_recovers_basis_element(self):
        pts = [KTPoint.from_array(p) for p in fundamental_domain_samples(32, 8)]
        idx = SectionIndex(2, 1, 0)
        samples = [(p, section(idx, p)) for p in pts]
        coeff, res = fit_in_span(samples, 2)
        assert res < 1e-12
        unit = np.zeros(4, dtype=complex)
        unit[2] = 1.0  # flat index p*k+q = 2
        assert np.allclose(coeff, unit, atol=1e-10)

    def test_negative_control_non_member(self):
        pts = [KTPoint.from_array(p) for p in fundamental_domain_samples(32, 9)]
        samples = [(p, cmath.exp(p.x)) for p in pts]
        _, res = fit_in_span(samples, 2)
        assert res > 0.1

    def test_too_few_samples(self):
        pts = [KTPoint.from_array(p) for p in fundamental_domain_samples(5, 10)]
        with pytest.raises(ValueError):
            fit_in_span([(p, 1.0) for p in pts], 2)

    def test_ill_conditioned(self):
        # repeating one sample point makes the design matrix rank deficient
        p = U0
        samples = [(p, theta_kt(p))] * 16
        with pytest.raises(IllConditioned):
            fit_in_span(samples, 2)


class TestSeparatingSections:
    def test_generic_pair(self):
        u = KTPoint(0.1, 0.2, 0.3, 0.4)
        v = KTPoint(0.8, 0.6, 0.9, 0.1)
        res = separating_section(u, v, seed=5)
        assert abs(res.value_at_u) < 1e-8 * res.scale
        assert abs(res.value_at_v) > 1e-3 * res.scale

    def test_shared_base_coordinates(self):
        # same (y, t): the zero must be placed in the fiber factor
        u = KTPoint(0.15, 0.5, 0.25, 0.6)
        v = KTPoint(0.75, 0.5, 0.65, 0.6)
        res = separating_section(u, v, seed=6)
        assert res.branch == "fiber"
        assert abs(res.value_at_u) < 1e-8 * res.scale
        assert abs(res.value_at_v) > 1e-3 * res.scale

    def test_zetas_have_zero_sum(self):
        res = separating_section(KTPoint(0.1, 0.2, 0.3, 0.4), KTPoint(0.9, 0.8, 0.7, 0.6), seed=7)
        z1 = sum(z.zeta1 for z in res.zetas)
        z2 = sum(z.zeta2 for z in res.zetas)
        assert abs(z1) < 1e-12 and abs(z2) < 1e-12

    def test_separating_value_consistent(self):
        u = KTPoint(0.1, 0.2, 0.3, 0.4)
        v = KTPoint(0.8, 0.6, 0.9, 0.1)
        res = separating_section(u, v, seed=8)
        assert abs(separating_value(res, u) - res.value_at_u) < 1e-12 * res.scale
        assert abs(separating_value(res, v) - res.value_at_v) < 1e-12 * res.scale

    def test_equivalent_points_rejected(self):
        u = KTPoint(0.1, 0.2, 0.3, 0.4)
        v = act(GENERATORS["a"], u)
        with pytest.raises(EquivalentPoints):
            separating_section(u, v)

    def test_section_property_of_constructed_product(self):
        # the separating product transforms with the cube of the multiplicator
        u = KTPoint(0.1, 0.2, 0.3, 0.4)
        v = KTPoint(0.8, 0.6, 0.9, 0.1)
        res = separating_section(u, v, seed=9)
        w = KTPoint(0.51, 0.23, 0.77, 0.35)
        g = GENERATORS["a"]
        lhs = separating_value(res, act(g, w))
        rhs = multiplicator(g, w) ** 3 * separating_value(res, w)
        assert abs(lhs - rhs) < 1e-9 * max(abs(lhs), abs(rhs))
