import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import SQ2, angle_frame, random_unit_frame, unit_frame
from tfscale import (
    CertificateKind,
    Frame,
    Verdict,
    check_tight,
    decide_scaling,
    normalize_scalars,
    perturbed_frame,
    scale_frame,
    solution_region,
    two_bases_frame,
    validate_certificate,
    verify_scaling,
)
from tfscale.errors import EmptyNullSpace, LengthMismatch, NegativeCoefficient, NotUnitNorm


def _assert_valid(frame, res):
    assert res.verification.passed
    assert res.lam == pytest.approx(float(np.sum(res.coefficients**2)) / frame.n, rel=1e-12)
    assert check_tight(scale_frame(frame, res.coefficients)).is_tight
    assert validate_certificate(frame, res)


class TestDecideScaling:
    def test_worked_example(self, e1e2_minus_e1):
        res = decide_scaling(e1e2_minus_e1)
        assert res.verdict is Verdict.STRICTLY_SCALABLE
        c2 = res.coefficients**2
        assert abs(c2[1] - c2[0] - c2[2]) <= 1e-9
        assert np.all(res.coefficients > 0)
        assert res.diagnostics["nullity"] == 2
        _assert_valid(e1e2_minus_e1, res)

    def test_two_bases(self):
        f = two_bases_frame()
        res = decide_scaling(f)
        assert res.verdict is Verdict.STRICTLY_SCALABLE
        _assert_valid(f, res)

    def test_perturbed_frame_not_scalable(self):
        f = perturbed_frame(1 / 8)
        res = decide_scaling(f)
        assert res.verdict is Verdict.NOT_SCALABLE
        assert res.coefficients is None
        assert res.certificate.kind is CertificateKind.HULL_WEIGHTS
        assert validate_certificate(f, res)

    def test_onb(self, e1e2):
        res = decide_scaling(e1e2)
        assert res.verdict is Verdict.STRICTLY_SCALABLE
        assert res.coefficients[0] == pytest.approx(res.coefficients[1], rel=1e-12)
        assert res.lam == pytest.approx(res.coefficients[0] ** 2)

    def test_invertible_gramian(self):
        f = unit_frame([[1.0, 0.0], [SQ2, SQ2]])
        res = decide_scaling(f)
        assert res.verdict is Verdict.NOT_SCALABLE
        assert res.certificate.kind is CertificateKind.INVERTIBLE_GRAMIAN
        assert validate_certificate(f, res)

    def test_subset_scalable(self):
        # ONB plus a diagonal: only the ONB part can be balanced
        f = unit_frame([[1.0, 0.0], [0.0, 1.0], [SQ2, SQ2]])
        res = decide_scaling(f)
        assert res.verdict is Verdict.SUBSET_SCALABLE
        assert res.coefficients[2] == 0 and np.all(res.coefficients[:2] > 0)
        _assert_valid(f, res)

    def test_complex_frame(self):
        # columns of the 3x3 DFT matrix, plus a repeated vector
        w = np.exp(2j * np.pi / 3)
        dft = np.array([[w ** (a * b) for b in range(3)] for a in range(3)]) / math.sqrt(3)
        f = unit_frame(np.vstack([dft, np.eye(3, dtype=complex)]))
        res = decide_scaling(f)
        assert res.verdict is Verdict.STRICTLY_SCALABLE
        _assert_valid(f, res)

    def test_requires_unit_norm(self):
        with pytest.raises(NotUnitNorm):
            decide_scaling(Frame.create(np.array([[2.0, 0.0], [0.0, 1.0]])))

    def test_parseval_normalization(self):
        res = decide_scaling(two_bases_frame())
        assert float(np.sum(res.coefficients**2)) == pytest.approx(3.0, rel=1e-12)
        assert res.lam == 1.0


class TestVerifyScaling:
    def test_worked_example_passes(self, e1e2_minus_e1):
        assert verify_scaling(e1e2_minus_e1, [1, math.sqrt(2), 1], 2.0).passed

    def test_onb_passes(self, e1e2):
        assert verify_scaling(e1e2, [1, 1], 1.0).passed

    def test_failure_pinpointed(self, e1e2_minus_e1):
        rep = verify_scaling(e1e2_minus_e1, [1, 1, 1], 1.5)
        assert not rep.passed and not rep.gdg_ok and not rep.tight_ok and rep.trace_ok

    def test_reference_solution_for_two_bases(self):
        f = two_bases_frame()
        c = np.array([1, 1, math.sqrt(2), 1, 1]) / math.sqrt(2)
        rep = verify_scaling(f, c)
        assert rep.passed and rep.lam * 3 == pytest.approx(float(np.sum(c**2)), rel=1e-15)

    def test_errors(self, e1e2):
        with pytest.raises(LengthMismatch):
            verify_scaling(e1e2, [1.0])
        with pytest.raises(NegativeCoefficient):
            verify_scaling(e1e2, [1.0, -1.0])


@pytest.mark.parametrize(
    "d, want",
    [((-2, 3), (2, 3)), ((1j, 1 + 1j), (1, math.sqrt(2))), ((0, 0), (0, 0))],
)
def test_normalize_scalars(d, want):
    assert np.allclose(normalize_scalars(d), want)


class TestSolutionRegion:
    def test_worked_example_region(self, e1e2_minus_e1):
        reg = solution_region(e1e2_minus_e1)
        assert reg.dimension == 2
        # reference basis columns (-1,0,1) and (1,1,0): point (x, y) -> x*(-1,0,1) + y*(1,1,0)
        p = np.array([[-1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
        rng = np.random.default_rng(0)
        for x, y in rng.uniform(-1, 1, size=(300, 2)):
            inside = x > 0 and y > 0 and y > x
            yy = reg.basis.T @ (p @ [x, y])
            assert reg.contains(yy, strict=True) == inside
        assert reg.contains(reg.interior_point, strict=True)
        c = reg.coefficients(reg.interior_point)
        assert verify_scaling(e1e2_minus_e1, c).passed

    def test_onb_region(self, e1e2):
        reg = solution_region(e1e2)
        assert reg.dimension == 1
        assert np.allclose(reg.coefficients([2.0]), np.sqrt(2.0 / math.sqrt(2)) * np.ones(2))
        assert not reg.contains([-1.0])

    def test_empty(self):
        with pytest.raises(EmptyNullSpace):
            solution_region(unit_frame([[1.0, 0.0], [SQ2, SQ2]]))

    def test_outside_region(self, e1e2_minus_e1):
        reg = solution_region(e1e2_minus_e1)
        with pytest.raises(NegativeCoefficient):
            reg.coefficients(-reg.interior_point)


frame_specs = st.tuples(st.integers(2, 7), st.integers(2, 3), st.booleans(), st.integers(0, 2**32 - 1))


@settings(max_examples=80, deadline=None)
@given(frame_specs)
def test_round_trip_and_scale_equivalence(case):
    k, n, cplx, seed = case
    f = random_unit_frame(np.random.default_rng(seed), k, n, cplx)
    res = decide_scaling(f)
    if res.coefficients is None:
        return
    assert res.verification.passed
    for s in (0.5, 2.0, 10.0):
        assert verify_scaling(f, s * res.coefficients, s * s * res.lam).passed


@settings(max_examples=60, deadline=None)
@given(frame_specs)
def test_permutation_equivariance(case):
    k, n, cplx, seed = case
    rng = np.random.default_rng(seed)
    f = random_unit_frame(rng, k, n, cplx)
    perm = rng.permutation(k)
    g = Frame.create(f.vectors[perm], f.field, unit_norm=True)
    a, b = decide_scaling(f), decide_scaling(g)
    assert a.verdict is b.verdict
    if b.coefficients is not None:
        assert verify_scaling(g, b.coefficients).passed
        if a.diagnostics["nullity"] == 1:
            assert np.allclose(np.sort(a.coefficients), np.sort(b.coefficients), atol=1e-9)


def test_scalable_frames_from_tight_unions():
    # a union of orthonormal bases is tight with c = 1; any scaling found must verify
    rng = np.random.default_rng(21)
    for _ in range(30):
        n = int(rng.integers(2, 5))
        v = np.vstack([np.linalg.qr(rng.normal(size=(n, n)))[0] for _ in range(2)])
        f = unit_frame(v)
        res = decide_scaling(f)
        assert res.verdict is Verdict.STRICTLY_SCALABLE
        assert res.verification.passed


def test_planar_random_verdicts_have_valid_certificates():
    rng = np.random.default_rng(3)
    for _ in range(100):
        f = angle_frame(rng.uniform(0, math.pi, int(rng.integers(2, 8))))
        res = decide_scaling(f)
        assert res.verdict is not Verdict.BORDERLINE
        assert validate_certificate(f, res)
