import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import hull_contains_zero_exact
from tfscale import Config, hull_membership, null_space, perceptron_witness, sym_eigen
from tfscale.errors import IterationCap, NoConvergence, NotPSD, NotSymmetric
from tfscale.kernel import nearest_point, perceptron


class TestSymEigen:
    def test_identity(self):
        e = sym_eigen(np.eye(3))
        assert np.array_equal(e.values, [1, 1, 1])

    def test_rank_one(self):
        e = sym_eigen([[1, -1, 1], [-1, 1, -1], [1, -1, 1]])
        assert np.allclose(e.values, [0, 0, 3], atol=1e-14)

    def test_diagonal_sorted(self):
        assert np.array_equal(sym_eigen(np.diag([2.0, 1.0])).values, [1.0, 2.0])

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            sym_eigen([[1.0, 2.0], [0.0, 1.0]])
        with pytest.raises(NotSymmetric):
            sym_eigen(np.ones((2, 3)))

    def test_sweep_budget(self):
        m = np.random.default_rng(0).normal(size=(8, 8))
        with pytest.raises(NoConvergence):
            sym_eigen(m + m.T, Config(jacobi_max_sweeps=1))

    @pytest.mark.parametrize("k", [1, 2, 5, 17, 50])
    def test_reconstruction_and_orthogonality(self, k):
        a = np.random.default_rng(k).normal(size=(k, k))
        m = a + a.T
        e = sym_eigen(m)
        v = e.vectors
        assert np.linalg.norm(v @ np.diag(e.values) @ v.T - m) <= 1e-10 * np.linalg.norm(m)
        assert np.allclose(v.T @ v, np.eye(k), atol=1e-10)
        assert np.all(np.diff(e.values) >= 0)
        assert np.allclose(e.values, np.linalg.eigvalsh(m), atol=1e-10 * np.linalg.norm(m))


class TestNullSpace:
    def test_invertible(self):
        assert null_space(np.eye(3)).nullity == 0

    def test_worked_example_span(self):
        g = np.array([[1, -1, 1], [-1, 1, -1], [1, -1, 1]], dtype=float)
        ns = null_space(g)
        assert ns.nullity == 2 and ns.rank == 1
        b = ns.basis
        for v in ([-1, 0, 1], [1, 1, 0]):
            v = np.array(v, dtype=float)
            assert np.linalg.norm(v - b @ (b.T @ v)) <= 1e-9

    def test_two_by_two(self):
        ns = null_space([[1.0, -1.0], [-1.0, 1.0]])
        assert ns.nullity == 1
        assert np.allclose(ns.rows, [[2**-0.5], [2**-0.5]], atol=1e-14)

    def test_not_psd(self):
        with pytest.raises(NotPSD):
            null_space(np.diag([1.0, -0.5]))

    def test_borderline_flag(self):
        assert null_space(np.diag([1.0, 1e-8])).borderline
        assert not null_space(np.diag([1.0, 1e-3])).borderline

    def test_residuals(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(9, 4))
        m = a @ a.T
        ns = null_space(m)
        assert ns.nullity == 5
        assert np.all(np.linalg.norm(m @ ns.basis, axis=0) <= 1e-8 * np.linalg.norm(m))
        kept = ns.eigenvalues[ns.eigenvalues > ns.threshold]
        assert kept.size == 4 and ns.rank_gap > 0


class TestHullMembership:
    def test_symmetric_pair_on_line(self):
        h = hull_membership([1.0, -1.0])
        assert h.contains_zero and np.allclose(h.weights, [0.5, 0.5])

    def test_worked_example_is_separated(self):
        pts = [(-1, 1), (0, 1), (1, 0)]
        h = hull_membership(pts)
        y = h.witness
        assert not h.contains_zero and y[0] > 0 and y[1] > 0 and y[1] > y[0]
        assert h.check(pts, 1e-9)

    def test_triangle_around_origin(self):
        h = hull_membership([(1, 0), (0, 1), (-1, -1)])
        assert h.contains_zero and np.allclose(h.weights, [1 / 3] * 3, atol=1e-10)

    def test_borderline_separation(self):
        h = hull_membership([(1.0, 5e-9), (-1.0, 5e-9)])
        assert not h.contains_zero and h.borderline

    def test_nearest_point_matches_projection(self):
        p, t = nearest_point([(2.0, 1.0), (2.0, -1.0), (3.0, 0.0)])
        assert np.allclose(p, [2.0, 0.0], atol=1e-14)
        assert np.allclose(t, [0.5, 0.5, 0.0], atol=1e-14)

    def test_nearest_point_against_qp(self):
        # small instances checked against a brute-force scan over faces
        rng = np.random.default_rng(2)
        for _ in range(100):
            r = rng.normal(size=(int(rng.integers(2, 7)), int(rng.integers(1, 4))))
            p, t = nearest_point(r)
            best = np.inf
            for size in range(1, r.shape[0] + 1):
                for sub in itertools.combinations(range(r.shape[0]), size):
                    a = r[list(sub)]
                    kkt = np.block([[a @ a.T, np.ones((size, 1))], [np.ones((1, size)), np.zeros((1, 1))]])
                    sol = np.linalg.lstsq(kkt, np.r_[np.zeros(size), 1.0], rcond=None)[0][:size]
                    if np.all(sol >= -1e-12) and abs(sol.sum() - 1) < 1e-9:
                        best = min(best, np.linalg.norm(sol @ a))
            assert np.linalg.norm(p) <= best + 1e-12
            assert np.all(t >= 0) and abs(t.sum() - 1) < 1e-12 and np.allclose(t @ r, p)


class TestPerceptron:
    def test_single_point(self):
        y, updates = perceptron([1.0], np.zeros(1))
        assert updates == 1 and y[0] == 1.0

    def test_worked_example(self):
        pts = np.array([(-1, 1), (0, 1), (1, 0)], dtype=float)
        y = perceptron_witness(pts, np.zeros(2))
        assert np.all(pts @ y > 0)

    def test_infeasible(self):
        with pytest.raises(IterationCap):
            perceptron_witness([(1.0, 0.0), (-1.0, 0.0)], cap=1000)

    def test_zero_point(self):
        with pytest.raises(IterationCap):
            perceptron_witness([(0.0, 0.0), (1.0, 0.0)])


small_rational = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 2).flatmap(lambda l: st.lists(st.lists(small_rational, min_size=l, max_size=l), min_size=1, max_size=6)))
def test_hull_agrees_with_exact_enumeration(points):
    want = hull_contains_zero_exact(points)
    r = np.array([[float(x) for x in p] for p in points])
    h = hull_membership(r)
    assert h.check(r, 1e-9)
    if not h.borderline:
        assert h.contains_zero == want


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_hull_certificates_self_validate(k, l, seed):
    r = np.random.default_rng(seed).normal(size=(k, l))
    h = hull_membership(r)
    assert (h.weights is None) != (h.witness is None)
    assert h.check(r, 1e-9)


def test_exact_oracle_sanity():
    assert hull_contains_zero_exact([(Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0))])
    assert not hull_contains_zero_exact([(1, 1), (2, 0)])
