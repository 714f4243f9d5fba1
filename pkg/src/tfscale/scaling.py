"""Deciding whether a unit-norm frame can be scaled to a tight frame.

The squared coefficients ``w_i = c_i^2`` of a tight scaling are exactly the
nonnegative vectors in the null space of the diagram Gramian ``G~``.  Writing
that null space as ``{B y}`` with ``B = [v_1 ... v_l]`` and ``r_i`` the rows of
``B``, strictly positive coefficients exist iff some ``y`` has ``<y, r_i> > 0``
for all ``i``, i.e. iff the origin is outside ``conv{r_i}``.

:func:`decide_scaling` runs that test, extracts coefficients from the
separating ``y`` and re-verifies them with :func:`verify_scaling`.  When the
origin is inside the hull it keeps looking for a nonnegative (some zero)
solution by forcing the hull-supporting indices to zero and repeating on the
remaining ones.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Config
from .diagram import diagram_gramian
from .errors import EmptyNullSpace, IterationCap, IterationLimit, LengthMismatch, NegativeCoefficient
from .frames import Frame, frame_operator, gramian, require_unit_norm
from .kernel import HullDecision, hull_membership, null_space, sym_eigen


class Verdict(str, enum.Enum):
    STRICTLY_SCALABLE = "StrictlyScalable"
    SUBSET_SCALABLE = "SubsetScalable"
    NOT_SCALABLE = "NotScalable"
    BORDERLINE = "Borderline"


class CertificateKind(str, enum.Enum):
    STRICT_WITNESS = "strict_witness"
    HULL_WEIGHTS = "hull_weights"
    INVERTIBLE_GRAMIAN = "invertible_gramian"
    NECESSARY_CONDITION_VIOLATION = "necessary_condition_violation"


@dataclass(frozen=True, eq=False)
class Certificate:
    """Evidence behind a verdict.

    ``vector`` holds the witness ``y``, the hull weights ``t``, or the violating
    unit vector ``f``, depending on ``kind``; it is ``None`` for an invertible
    diagram Gramian, whose smallest eigenvalue sits in ``detail``.
    """

    kind: CertificateKind
    vector: np.ndarray | None = None
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    gdg_residual: float
    tight_residual: float
    trace_residual: float
    gdg_ok: bool
    tight_ok: bool
    trace_ok: bool
    lam: float


@dataclass(frozen=True, eq=False)
class ScalingResult:
    verdict: Verdict
    coefficients: np.ndarray | None
    lam: float | None
    certificate: Certificate | None
    diagnostics: dict = field(default_factory=dict)
    verification: VerificationReport | None = None

    @property
    def weights(self) -> np.ndarray | None:
        return None if self.coefficients is None else self.coefficients**2


@dataclass(frozen=True, eq=False)
class SolutionRegion:
    """All tight scalings ``c_i = sqrt(<y, r_i>)`` for ``y`` in ``{<y, r_i> >= 0}``.

    ``normals`` are the ``r_i`` (rows), ``basis`` is ``B`` (same array, named
    for the column view), ``interior_point`` a ``y`` with every ``<y, r_i> > 0``
    when one was found.
    """

    normals: np.ndarray
    basis: np.ndarray
    interior_point: np.ndarray | None

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def contains(self, y, strict: bool = False) -> bool:
        v = self.normals @ np.asarray(y, dtype=float)
        return bool(np.all(v > 0) if strict else np.all(v >= 0))

    def coefficients(self, y) -> np.ndarray:
        w = self.basis @ np.asarray(y, dtype=float)
        if np.any(w < 0):
            raise NegativeCoefficient("y lies outside the solution region")
        return np.sqrt(w)


def normalize_scalars(d) -> np.ndarray:
    """Moduli ``|d_i|``: any real or complex scaling can be made nonnegative."""
    return np.abs(np.asarray(d))


def verify_scaling(frame: Frame, c, lam: float | None = None, config: Config = DEFAULT) -> VerificationReport:
    """Check ``{c_i f_i}`` three independent ways.

    (a) ``||G D G - lambda G||_F <= tau * lambda * ||G||_F`` with ``D = diag(c^2)``;
    (b) ``||S_scaled - lambda I||_F <= tau * lambda``;
    (c) ``|sum c_i^2 - lambda n| <= tau * lambda * n``.

    ``lam`` defaults to ``sum c_i^2 / n``.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (frame.k,):
        raise LengthMismatch(f"expected {frame.k} coefficients, got shape {c.shape}")
    if np.any(c < 0):
        raise NegativeCoefficient("coefficients must be nonnegative")
    n = frame.n
    w = c**2
    if lam is None:
        lam = float(w.sum()) / n
    tau = config.tau_tight
    g = gramian(frame).matrix
    gdg = (g * w) @ g
    gdg_res = float(np.linalg.norm(gdg - lam * g))
    s = frame_operator(Frame(frame.vectors * c[:, None], frame.field)).matrix
    tight_res = float(np.linalg.norm(s - lam * np.eye(n)))
    trace_res = abs(float(w.sum()) - lam * n)
    gdg_ok = gdg_res <= tau * lam * float(np.linalg.norm(g))
    tight_ok = tight_res <= tau * lam
    trace_ok = trace_res <= tau * lam * n
    ok = lam > 0 and gdg_ok and tight_ok and trace_ok
    return VerificationReport(bool(ok), gdg_res, tight_res, trace_res, bool(gdg_ok), bool(tight_ok), bool(trace_ok), float(lam))


def _parseval(w: np.ndarray, n: int) -> tuple[np.ndarray, float]:
    w = np.clip(w, 0.0, None)
    w = w * (n / w.sum())
    return np.sqrt(w), 1.0


def _complement_basis(rows: np.ndarray, config: Config) -> np.ndarray:
    """Orthonormal basis of the vectors orthogonal to every given row."""
    l = rows.shape[1]
    eig = sym_eigen(rows.T @ rows, config)
    top = max(float(eig.values[-1]), 0.0)
    mask = eig.values <= config.tau_null * max(top, np.finfo(float).tiny)
    return eig.vectors[:, mask] if l else np.zeros((0, 0))


def _nonnegative_null_vector(rows: np.ndarray, hull: HullDecision, config: Config):
    """Find ``y != 0`` with every ``<y, r_i> >= 0``, starting from a hull certificate.

    If ``sum t_i r_i = 0`` with ``t >= 0`` then any such ``y`` has ``<y, r_i> = 0``
    on the support of ``t``; those indices are fixed at zero, ``y`` restricted
    to the orthogonal complement of their rows, and the test repeated on what
    is left.  Returns ``(w, chain, borderline)`` with ``w = B y`` or ``None``.
    """
    k = rows.shape[0]
    zero = np.zeros(k, dtype=bool)
    active = np.arange(k)
    chain = []
    borderline = hull.borderline
    while True:
        support = active[hull.weights > config.tau_hull]
        chain.append({"eliminated": support.tolist(), "weights": hull.weights.tolist()})
        zero[support] = True
        if zero.all():
            return None, chain, borderline
        q = _complement_basis(rows[zero], config)
        if q.shape[1] == 0:
            return None, chain, borderline
        active = np.flatnonzero(~zero)
        proj = rows[active] @ q
        hull = hull_membership(proj, config=config)
        borderline |= hull.borderline
        if not hull.contains_zero:
            w = rows @ (q @ hull.witness)
            w[zero] = 0.0
            return w, chain, borderline


def decide_scaling(frame: Frame, config: Config = DEFAULT) -> ScalingResult:
    """Decide tight scalability of a unit-norm frame and return coefficients.

    Returned coefficients are normalized so ``sum c_i^2 = n`` (``lambda = 1``).
    """
    require_unit_norm(frame, config)
    n = frame.n
    gt = diagram_gramian(frame, config).matrix
    ns = null_space(gt, config=config)
    diagnostics = {
        "rank": ns.rank,
        "nullity": ns.nullity,
        "rank_gap": ns.rank_gap,
        "null_threshold": ns.threshold,
        "eigenvalues": ns.eigenvalues.tolist(),
        "rank_borderline": ns.borderline,
    }
    borderline = ns.borderline

    if ns.nullity == 0:
        cert = Certificate(
            CertificateKind.INVERTIBLE_GRAMIAN,
            None,
            {"min_eigenvalue": float(ns.eigenvalues[0]), "threshold": ns.threshold},
        )
        verdict = Verdict.BORDERLINE if borderline else Verdict.NOT_SCALABLE
        return ScalingResult(verdict, None, None, cert, diagnostics)

    rows = ns.rows
    try:
        hull = hull_membership(rows, config=config)
    except (IterationLimit, IterationCap) as exc:
        # undecided within budget: surfaced as Borderline, never guessed
        diagnostics["error"] = f"{type(exc).__name__}: {exc}"
        return ScalingResult(Verdict.BORDERLINE, None, None, None, diagnostics)
    borderline |= hull.borderline
    diagnostics["hull_distance"] = hull.distance
    diagnostics["hull_iterations"] = hull.iterations
    diagnostics["hull_borderline"] = hull.borderline

    if not hull.contains_zero:
        y, updates = hull.witness, hull.perceptron_updates
        w = rows @ y
        c, lam = _parseval(w, n)
        cert = Certificate(
            CertificateKind.STRICT_WITNESS,
            y,
            {"min_margin": float(w.min()), "perceptron_updates": updates},
        )
        rep = verify_scaling(frame, c, lam, config)
        verdict = Verdict.STRICTLY_SCALABLE if rep.passed and not borderline else Verdict.BORDERLINE
        return ScalingResult(verdict, c, lam, cert, diagnostics, rep)

    cert = Certificate(
        CertificateKind.HULL_WEIGHTS,
        hull.weights,
        {"residual": float(np.linalg.norm(hull.weights @ rows))},
    )
    try:
        w, chain, sub_borderline = _nonnegative_null_vector(rows, hull, config)
    except (IterationLimit, IterationCap) as exc:
        diagnostics["error"] = f"{type(exc).__name__}: {exc}"
        return ScalingResult(Verdict.BORDERLINE, None, None, cert, diagnostics)
    borderline |= sub_borderline
    diagnostics["reduction"] = chain
    if w is None:
        verdict = Verdict.BORDERLINE if borderline else Verdict.NOT_SCALABLE
        return ScalingResult(verdict, None, None, cert, diagnostics)
    c, lam = _parseval(w, n)
    rep = verify_scaling(frame, c, lam, config)
    verdict = Verdict.SUBSET_SCALABLE if rep.passed and not borderline else Verdict.BORDERLINE
    return ScalingResult(verdict, c, lam, cert, diagnostics, rep)


def validate_certificate(frame: Frame, result: ScalingResult, config: Config = DEFAULT) -> bool:
    """Re-derive the null space and re-check the certificate's inequality."""
    cert = result.certificate
    if cert is None:
        return False
    if cert.kind is CertificateKind.NECESSARY_CONDITION_VIOLATION:
        f = cert.vector
        m = np.abs(frame.vectors.conj() @ f) - 1.0 / math.sqrt(frame.n)
        return bool(abs(np.linalg.norm(f) - 1) <= 1e-12 and m.min() >= -1e-12 and m.max() > 1e-9)
    gt = diagram_gramian(frame, config).matrix
    ns = null_space(gt, config=config)
    if cert.kind is CertificateKind.INVERTIBLE_GRAMIAN:
        return ns.nullity == 0 and float(ns.eigenvalues[0]) > ns.threshold
    rows = ns.rows
    if cert.kind is CertificateKind.STRICT_WITNESS:
        return rows.shape[1] == cert.vector.shape[0] and bool(np.min(rows @ cert.vector) > 0)
    t = cert.vector
    return bool(
        np.all(t >= 0)
        and abs(t.sum() - 1) <= 1e-12
        and np.linalg.norm(t @ rows) <= config.tau_hull
    )


def solution_region(frame: Frame, config: Config = DEFAULT) -> SolutionRegion:
    """Half-space description ``{y : <y, r_i> >= 0}`` of every tight scaling."""
    require_unit_norm(frame, config)
    gt = diagram_gramian(frame, config).matrix
    ns = null_space(gt, config=config)
    if ns.nullity == 0:
        raise EmptyNullSpace("diagram Gramian is invertible: no tight scaling exists")
    rows = ns.rows
    hull = hull_membership(rows, config=config)
    interior = None
    if not hull.contains_zero:
        interior = hull.witness
    return SolutionRegion(rows, rows, interior)
