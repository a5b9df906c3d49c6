"""Projective maps: factorization, ranks, injectivity, invariance."""

import numpy as np
import pytest

from ktheta import (
    AllSectionsVanish,
    DimensionMismatch,
    GENERATORS,
    GroupWord,
    KTPoint,
    ProjectivePoint,
    act,
    chordal_distance,
    fundamental_domain_samples,
    injectivity_scan,
    jacobian,
    phi,
    phi_batch,
    projective_rank,
    psi_double_prime,
    psi_prime,
    segre,
)
from ktheta.embedding import generator_invariance_residual

U0 = KTPoint(0.31, 0.57, 0.12, 0.83)


class TestProjectivePoint:
    def test_zero_vector_rejected(self):
        with pytest.raises(AllSectionsVanish):
            ProjectivePoint(np.zeros(3, dtype=complex))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ProjectivePoint(np.array([], dtype=complex))

    def test_single_coordinate_allowed(self):
        # CP^0 appears for k = 1
        p = ProjectivePoint(np.array([2.0 + 0j]))
        assert p.coords.size == 1


class TestChordalDistance:
    def test_identical(self):
        p = ProjectivePoint(np.array([1.0, 2.0j, -0.5]))
        assert chordal_distance(p, p) < 1e-15

    def test_scale_invariance(self):
        p = ProjectivePoint(np.array([1.0, 2.0j, -0.5]))
        q = ProjectivePoint((3.0 - 1.0j) * np.array([1.0, 2.0j, -0.5]))
        assert chordal_distance(p, q) < 1e-15

    def test_orthogonal(self):
        p = ProjectivePoint(np.array([1.0, 0.0j]))
        q = ProjectivePoint(np.array([0.0j, 1.0]))
        assert abs(chordal_distance(p, q) - 1.0) < 1e-15

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            chordal_distance(
                ProjectivePoint(np.array([1.0 + 0j])),
                ProjectivePoint(np.array([1.0 + 0j, 0.0j])),
            )

    def test_resolves_tiny_distances(self):
        # the projection-residual formula resolves distances near 1e-12,
        # which the naive sqrt(1 - cos^2) cannot
        v = np.array([1.0 + 0j, 0.0j])
        w = np.array([1.0 + 0j, 1e-12 + 0j])
        d = chordal_distance(ProjectivePoint(v), ProjectivePoint(w))
        assert abs(d - 1e-12) < 1e-14


class TestSegre:
    def test_basis_pair(self):
        p = ProjectivePoint(np.array([1.0 + 0j, 0.0j]))
        q = ProjectivePoint(np.array([1.0 + 0j, 0.0j]))
        out = segre(p, q)
        assert np.allclose(out.coords, [1.0, 0.0, 0.0, 0.0])

    def test_scale_invariance(self):
        rng = np.random.default_rng(2)
        a = rng.random(3) + 1j * rng.random(3)
        b = rng.random(3) + 1j * rng.random(3)
        s1 = segre(ProjectivePoint(a), ProjectivePoint(b))
        s2 = segre(ProjectivePoint(2.5j * a), ProjectivePoint(-1.7 * b))
        assert chordal_distance(s1, s2) < 1e-14

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            segre(
                ProjectivePoint(np.array([1.0 + 0j, 0.0j])),
                ProjectivePoint(np.array([1.0 + 0j, 0.0j, 0.0j])),
            )


class TestPhi:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_segre_factorization(self, k):
        got = phi(k, U0)
        combined = segre(psi_prime(k, U0), psi_double_prime(k, U0))
        assert chordal_distance(got, combined) < 1e-12

    def test_k1_constant_map(self):
        a = phi(1, U0)
        b = phi(1, KTPoint(0.9, 0.1, 0.5, 0.3))
        assert a.coords.size == 1 and b.coords.size == 1
        assert chordal_distance(a, b) < 1e-15

    @pytest.mark.parametrize("gen", ["a", "b", "c", "d"])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_well_defined_on_quotient(self, gen, k):
        g = GENERATORS[gen]
        d = chordal_distance(phi(k, act(g, U0)), phi(k, U0))
        assert d < 1e-10

    def test_generator_invariance_residual_helper(self):
        assert generator_invariance_residual(3, U0) < 1e-10

    def test_batch_matches_scalar(self):
        pts = fundamental_domain_samples(6, 4)
        batch = phi_batch(3, pts)
        for i in range(6):
            single = phi(3, KTPoint.from_array(pts[i]))
            assert chordal_distance(ProjectivePoint(batch[i]), single) < 1e-12


class TestPsiMaps:
    def test_psi_prime_invariant_under_c(self):
        d = chordal_distance(psi_prime(3, act(GENERATORS["c"], U0)), psi_prime(3, U0))
        assert d < 1e-10

    def test_psi_double_prime_depends_only_on_base(self):
        u = KTPoint(0.11, 0.52, 0.73, 0.29)
        v = KTPoint(0.94, 0.52, 0.18, 0.29)
        assert chordal_distance(psi_double_prime(3, u), psi_double_prime(3, v)) < 1e-14

    @pytest.mark.parametrize("gen", ["b", "d"])
    def test_psi_double_prime_invariance(self, gen):
        g = GENERATORS[gen]
        d = chordal_distance(psi_double_prime(3, act(g, U0)), psi_double_prime(3, U0))
        assert d < 1e-10


class TestJacobian:
    def test_row_zero_is_lift(self):
        J = jacobian(3, U0).matrix
        lift = phi(3, U0).coords
        assert np.allclose(J[0], lift, rtol=1e-12, atol=1e-12)

    def test_cauchy_riemann_row_combination(self):
        J = jacobian(3, U0).matrix
        # rows: (s, d_x, d_y, d_z, d_t); (d_z + i d_x) s = 0
        comb = J[3] + 1j * J[1]
        assert np.abs(comb).max() < 1e-10 * np.abs(J).max()

    def test_finite_difference_rows(self):
        h = 1e-5
        J = jacobian(3, U0).matrix
        base = U0.as_array()
        for axis in range(4):
            e = np.zeros(4)
            e[axis] = h
            fp = phi(3, KTPoint.from_array(base + e)).coords
            fm = phi(3, KTPoint.from_array(base - e)).coords
            fd = (fp - fm) / (2 * h)
            scale = max(1.0, np.abs(J[1 + axis]).max())
            assert np.abs(fd - J[1 + axis]).max() / scale < 1e-6

    def test_realified_rank_five(self):
        # over C the CR relation kills one row, so the rank statement
        # is about the realified matrix
        J = jacobian(3, U0).matrix
        real = np.concatenate([J.real, J.imag], axis=1)
        sv = np.linalg.svd(real, compute_uv=False)
        assert sv[4] > 1e-6 * sv[0]


class TestProjectiveRank:
    def test_rank_four_for_k3(self):
        pts = fundamental_domain_samples(25, 12)
        for p in pts:
            assert projective_rank(3, KTPoint.from_array(p), tol=1e-6) == 4

    def test_rank_four_for_k4(self):
        assert projective_rank(4, U0, tol=1e-6) == 4

    def test_rank_zero_for_k1(self):
        assert projective_rank(1, U0) == 0

    def test_invariance_under_group(self):
        w = GroupWord(1, -1, 2, 1)
        assert projective_rank(3, U0) == projective_rank(3, act(w, U0))

    def test_tol_validation(self):
        with pytest.raises(ValueError):
            projective_rank(3, U0, tol=0.0)


class TestInjectivityScan:
    def test_passes_for_k3(self):
        report = injectivity_scan(3, 300, 42)
        assert report.passed
        assert report.min_image_distance > 1e-6
        assert report.witness_quotient_distance > 1e-3

    def test_deterministic(self):
        a = injectivity_scan(3, 200, 7)
        b = injectivity_scan(3, 200, 7)
        assert a == b

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            injectivity_scan(3, 1, 0)
