import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import SQ2, random_unit_frame, unit_frame
from oracles import outer_sum
from tfscale import Config, Field, Frame, check_tight, frame_operator, gramian, scale_frame
from tfscale.errors import InvalidFrame, LengthMismatch, NegativeCoefficient, NotUnitNorm

TWO_BASES = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [SQ2, SQ2, 0], [SQ2, -SQ2, 0]]


class TestFrameType:
    def test_field_inferred_from_dtype(self):
        assert Frame.create(np.eye(2)).field is Field.REAL
        assert Frame.create(np.eye(2, dtype=complex)).field is Field.COMPLEX

    def test_shape_properties(self):
        f = Frame.create(np.ones((3, 4)))
        assert (f.k, f.n) == (3, 4)

    def test_vectors_are_read_only(self):
        f = Frame.create(np.eye(2))
        with pytest.raises(ValueError):
            f.vectors[0, 0] = 5.0

    def test_input_array_is_copied(self):
        a = np.eye(2)
        f = Frame.create(a)
        a[0, 0] = 9
        assert f.vectors[0, 0] == 1

    @pytest.mark.parametrize("bad", [[[np.nan, 0.0]], [[np.inf, 1.0]]])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(InvalidFrame):
            Frame.create(np.array(bad))

    @pytest.mark.parametrize("shape", [(0, 2), (2, 1), (3,)])
    def test_bad_shapes_rejected(self, shape):
        with pytest.raises(InvalidFrame):
            Frame.create(np.zeros(shape))

    def test_unit_norm_flag_is_enforced(self):
        with pytest.raises(NotUnitNorm):
            Frame.create(np.array([[1.0, 0.0], [0.9, 0.0]]), unit_norm=True)

    def test_unit_norm_tolerance(self):
        Frame.create(np.array([[1 + 5e-9, 0.0]]), unit_norm=True)
        with pytest.raises(NotUnitNorm):
            Frame.create(np.array([[1 + 5e-9, 0.0]]), unit_norm=True, config=Config(tau_unit=1e-9))


class TestFrameOperator:
    def test_onb_gives_identity(self, e1e2):
        assert np.array_equal(frame_operator(e1e2).matrix, np.eye(2))

    def test_e1_e2_minus_e1(self, e1e2_minus_e1):
        assert np.allclose(frame_operator(e1e2_minus_e1).matrix, np.diag([2.0, 1.0]), atol=0)

    def test_two_bases(self):
        s = frame_operator(unit_frame(TWO_BASES)).matrix
        assert np.allclose(s, np.diag([2.0, 2.0, 1.0]), atol=1e-15)

    def test_matches_loop_oracle_complex(self):
        f = random_unit_frame(np.random.default_rng(0), 5, 3, complex_field=True)
        s = frame_operator(f).matrix
        assert np.allclose(s, outer_sum(f.vectors), atol=1e-14)
        assert np.array_equal(s, s.conj().T)


class TestGramian:
    def test_onb(self, e1e2):
        assert np.array_equal(gramian(e1e2).matrix, np.eye(2))

    def test_e1_e2_minus_e1(self, e1e2_minus_e1):
        assert np.array_equal(gramian(e1e2_minus_e1).matrix, [[1, 0, -1], [0, 1, 0], [-1, 0, 1]])

    def test_single_vector(self):
        assert np.allclose(gramian(unit_frame([[0.6, 0.8]])).matrix, [[1.0]])

    def test_conjugate_in_second_slot(self):
        f = Frame.create(np.array([[1j, 0], [1, 0]]))
        # <f1, f2> = f1(0) * conj(f2(0)) = 1j
        assert gramian(f).matrix[0, 1] == 1j


class TestCheckTight:
    def test_parseval(self, e1e2):
        r = check_tight(e1e2)
        assert r.is_tight and r.is_frame and r.lam == 1 and r.residual == 0

    def test_not_tight(self, e1e2_minus_e1):
        r = check_tight(e1e2_minus_e1)
        assert not r.is_tight and r.lam == pytest.approx(1.5)

    def test_rescaled_tight(self, e1e2_minus_e1):
        r = check_tight(scale_frame(e1e2_minus_e1, [1, math.sqrt(2), 1]))
        assert r.is_tight and r.lam == pytest.approx(2.0)

    def test_zero_frame_is_not_a_frame(self, e1e2):
        r = check_tight(scale_frame(e1e2, [0, 0]))
        assert not r.is_frame and not r.is_tight and r.rank == 0


class TestScaleFrame:
    def test_identity_scaling_keeps_flag(self, e1e2):
        g = scale_frame(e1e2, [1, 1])
        assert g.unit_norm and np.array_equal(g.vectors, e1e2.vectors)

    def test_nontrivial_scaling_clears_flag(self, e1e2_minus_e1):
        g = scale_frame(e1e2_minus_e1, [1, math.sqrt(2), 1])
        assert not g.unit_norm
        assert np.allclose(frame_operator(g).matrix, 2 * np.eye(2))

    def test_zero_scaling_allowed(self, e1e2):
        assert not np.any(scale_frame(e1e2, [0, 0]).vectors)

    def test_errors(self, e1e2):
        with pytest.raises(LengthMismatch):
            scale_frame(e1e2, [1, 1, 1])
        with pytest.raises(NegativeCoefficient):
            scale_frame(e1e2, [1, -1])


frames = st.tuples(st.integers(1, 7), st.integers(2, 5), st.booleans(), st.integers(0, 2**32 - 1))


@settings(max_examples=60, deadline=None)
@given(frames)
def test_trace_equals_sum_of_squared_norms(case):
    k, n, cplx, seed = case
    f = random_unit_frame(np.random.default_rng(seed), k, n, cplx)
    v = f.vectors * np.random.default_rng(seed + 1).uniform(0.1, 3, size=(k, 1))
    g = Frame.create(v)
    total = float(np.sum(np.abs(v) ** 2))
    assert abs(np.trace(frame_operator(g).matrix).real - total) <= 1e-12 * total


@settings(max_examples=60, deadline=None)
@given(frames)
def test_gramian_and_frame_operator_share_spectrum(case):
    k, n, cplx, seed = case
    f = random_unit_frame(np.random.default_rng(seed), k, n, cplx)
    a = np.sort(np.linalg.eigvalsh(frame_operator(f).matrix))
    b = np.sort(np.linalg.eigvalsh(gramian(f).matrix))
    m = min(k, n)
    assert np.allclose(a[-m:], b[-m:], atol=1e-10)
    assert np.all(np.abs(a[:-m]) < 1e-10) and np.all(np.abs(b[:-m]) < 1e-10)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.1, 5), min_size=3, max_size=3))
def test_lambda_of_scaled_unit_frame(c):
    f = unit_frame([[1.0, 0.0], [0.0, 1.0], [SQ2, SQ2]])
    r = check_tight(scale_frame(f, c))
    assert r.lam == pytest.approx(sum(x * x for x in c) / 2, rel=1e-12)
