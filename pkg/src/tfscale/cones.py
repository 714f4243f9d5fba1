"""Cones ``cone(f) = {g : |<g, f>| >= 1/sqrt(n)}`` and the search for a unit
vector lying in every cone of a frame.

A tight scalable frame admits no unit ``f`` with ``|<f, f_i>| >= 1/sqrt(n)`` for
all ``i`` and strict inequality for at least one, so any such ``f`` is a
certificate of non-scalability.  In the plane this is decided exactly
(:func:`cone_violation_r2`); for ``n >= 3`` :func:`cone_violation_search` is a
seeded multi-start heuristic whose negative answer proves nothing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Config
from .diagram import diagram_matrix
from .errors import DimensionMismatch, OutOfRange, UnsupportedDimension
from .frames import Field, Frame, require_unit_norm
from .kernel import nearest_point
from .scaling import Certificate, CertificateKind

SLACK = 1e-12
STRICT = 1e-9


@dataclass(frozen=True, eq=False)
class ViolationReport:
    """Outcome of a cone-violation test.

    ``margins`` are ``|<f, f_i>| - 1/sqrt(n)`` for the best candidate ``f``.
    ``found`` means every margin is at least ``-1e-12`` and one exceeds
    ``1e-9``; ``boundary_contact`` marks a candidate whose margins all vanish.
    """

    found: bool
    f: np.ndarray | None
    margins: np.ndarray | None
    boundary_contact: bool = False
    exact: bool = False
    detail: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        if self.found:
            return "violation found"
        if self.exact:
            return "no violation exists"
        return "no violation found"


def cone_margins(frame: Frame, f) -> np.ndarray:
    f = np.asarray(f)
    return np.abs(frame.vectors.conj() @ f) - 1.0 / math.sqrt(frame.n)


def _certify(frame: Frame, f: np.ndarray | None, exact: bool, detail: dict) -> ViolationReport:
    if f is None:
        return ViolationReport(False, None, None, False, exact, detail)
    f = f / np.linalg.norm(f)
    m = cone_margins(frame, f)
    found = bool(m.min() >= -SLACK and m.max() > STRICT)
    contact = bool(not found and np.all(np.abs(m) <= STRICT))
    return ViolationReport(found, f, m, contact, exact, detail)


def _require_real_plane(frame: Frame, n_ok) -> None:
    if frame.field is not Field.REAL:
        raise DimensionMismatch("cone search works on real frames")
    if not n_ok(frame.n):
        raise DimensionMismatch(f"unsupported ambient dimension {frame.n}")


def cone_violation_r2(frame: Frame, config: Config = DEFAULT) -> ViolationReport:
    """Exact test in the plane.

    A violating ``f`` exists iff some unit ``g`` has ``<g, f~_i> >= 0`` for all
    ``i`` and ``> 0`` for one, i.e. iff the origin is not in the relative
    interior of ``conv{f~_i}``.  The diagram vectors of unit planar vectors are
    unit vectors at twice the original angle, so this reduces to the largest
    angular gap between them: at least ``pi`` is necessary.  The candidate ``g``
    bisects the arc the points occupy, and ``f`` sits at half its angle.
    """
    _require_real_plane(frame, lambda n: n == 2)
    require_unit_norm(frame, config)
    d = diagram_matrix(frame)
    ang = np.sort(np.mod(np.arctan2(d[:, 1], d[:, 0]), 2 * math.pi))
    gaps = np.diff(np.append(ang, ang[0] + 2 * math.pi))
    j = int(np.argmax(gaps))
    gap = float(gaps[j])
    detail = {"largest_gap": gap}
    if gap < math.pi - 1e-12:
        return ViolationReport(False, None, None, False, True, detail)
    start = ang[(j + 1) % len(ang)]
    psi = start + 0.5 * (2 * math.pi - gap)
    f = np.array([math.cos(psi / 2), math.sin(psi / 2)])
    return _certify(frame, f, True, detail)


def _ascend(u: np.ndarray, f: np.ndarray, steps: int, eta: float) -> np.ndarray:
    """Fixed-step projected ascent of ``min_i |<f, u_i>|`` on the sphere.

    ``f`` holds one starting point per row; the rows evolve independently.
    """
    rows = np.arange(f.shape[0])
    for _ in range(steps):
        s = f @ u.T
        i = np.argmin(np.abs(s), axis=1)
        g = u[i] * np.where(s[rows, i] >= 0, 1.0, -1.0)[:, None]
        g -= np.einsum("ij,ij->i", g, f)[:, None] * f
        f = f + eta * g
        f /= np.linalg.norm(f, axis=1, keepdims=True)
    return f


def _starts(u: np.ndarray, seed: int, budget: int) -> np.ndarray:
    k, n = u.shape
    out = np.empty((budget, n))
    for r in range(budget):
        if r < k:
            out[r] = u[r]
        else:
            g = np.random.default_rng([seed, r]).normal(size=n)
            out[r] = g / np.linalg.norm(g)
    return out


def cone_violation_search(
    frame: Frame,
    seed: int = 0,
    budget: int = 64,
    steps: int = 200,
    eta: float = 0.05,
    config: Config = DEFAULT,
) -> ViolationReport:
    """Heuristic search for a unit vector in every cone (real frames, ``n >= 3``).

    Restart ``r`` starts from ``f_r`` for ``r < k`` and afterwards from a random
    unit vector drawn with ``default_rng([seed, r])``, so each restart depends
    only on its own index.  A short ascent settles on a sign pattern ``s``; for
    that pattern the best direction is exact: the maximum of
    ``min_i <f, s_i f_i>`` over unit ``f`` is the distance from the origin to
    ``conv{s_i f_i}``, attained at the normalized nearest point.  The best
    candidate (largest minimum margin, lowest restart on ties) is then
    certified.  Not finding a violation is not a proof that none exists.
    """
    _require_real_plane(frame, lambda n: n >= 3)
    require_unit_norm(frame, config)
    u = frame.vectors
    ends = _ascend(u, _starts(u, seed, budget), steps, eta) if budget > 0 else np.zeros((0, frame.n))
    seen: dict[tuple, tuple[float, np.ndarray | None]] = {}
    best = (-math.inf, None, -1)
    for r, f in enumerate(ends):
        s = np.where(u @ f >= 0, 1.0, -1.0)
        if s[0] < 0:
            s = -s
        key = tuple(s.astype(int))
        if key not in seen:
            p, _ = nearest_point(s[:, None] * u, config)
            dist = float(np.linalg.norm(p))
            seen[key] = (dist, p / dist if dist > 0 else None)
        dist, cand = seen[key]
        if cand is not None and dist > best[0]:
            best = (dist, cand, r)
    detail = {"restarts": budget, "patterns": len(seen), "best_restart": best[2], "seed": seed}
    return _certify(frame, best[1], False, detail)


def violation_certificate(report: ViolationReport) -> Certificate:
    """Turn a certified violation into a non-scalability certificate."""
    if not report.found:
        raise ValueError("report holds no certified violation")
    return Certificate(
        CertificateKind.NECESSARY_CONDITION_VIOLATION,
        report.f,
        {"min_margin": float(report.margins.min()), "max_margin": float(report.margins.max())},
    )


def sphere_grid(n: int, resolution: int) -> tuple[np.ndarray, float]:
    """Grid on the unit circle or sphere and its angular spacing ``pi / N``.

    The circle gets ``2N`` equally spaced points; the sphere ``N + 1`` polar
    angles times ``2N`` azimuths with the poles kept once.
    """
    if resolution < 1:
        raise ValueError("grid resolution must be positive")
    h = math.pi / resolution
    if n == 2:
        a = h * np.arange(2 * resolution)
        return np.column_stack([np.cos(a), np.sin(a)]), h
    if n == 3:
        theta = h * np.arange(1, resolution)
        phi = h * np.arange(2 * resolution)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        body = np.column_stack(
            [(np.sin(tt) * np.cos(pp)).ravel(), (np.sin(tt) * np.sin(pp)).ravel(), np.cos(tt).ravel()]
        )
        return np.vstack([[0.0, 0.0, 1.0], body, [0.0, 0.0, -1.0]]), h
    raise UnsupportedDimension(f"sample export supports n = 2 or 3, got {n}")


def export_cone_samples(frame: Frame, subset=(), resolution: int = 180, slack: float | None = None) -> np.ndarray:
    """Grid points of the circle/sphere lying in every ``cone(f_i)``, ``i`` in ``subset``.

    ``subset`` holds 0-based indices; empty means no constraint (the full grid).
    A point is kept when ``|<g, f_i>| >= 1/sqrt(n) - slack``; ``slack``
    defaults to the grid spacing so that isolated cone intersections still
    catch nearby grid points.
    """
    if frame.field is not Field.REAL:
        raise DimensionMismatch("sample export works on real frames")
    if frame.n > 3:
        raise UnsupportedDimension(f"sample export supports n = 2 or 3, got {frame.n}")
    grid, h = sphere_grid(frame.n, resolution)
    idx = list(subset)
    for i in idx:
        if not 0 <= i < frame.k:
            raise OutOfRange(f"index {i} outside 0..{frame.k - 1}")
    if not idx:
        return grid
    slack = h if slack is None else slack
    m = np.abs(grid @ frame.vectors[idx].T).min(axis=1) - 1.0 / math.sqrt(frame.n)
    return grid[m >= -slack]


def cluster_centers(points: np.ndarray, radius: float) -> np.ndarray:
    """Greedy clustering: each point joins the first cluster whose seed is within
    ``radius``; returns the normalized mean of every cluster."""
    seeds: list[np.ndarray] = []
    members: list[list[np.ndarray]] = []
    for x in np.asarray(points, dtype=float):
        for j, s in enumerate(seeds):
            if np.linalg.norm(x - s) <= radius:
                members[j].append(x)
                break
        else:
            seeds.append(x)
            members.append([x])
    out = np.array([np.mean(m, axis=0) for m in members])
    return out / np.linalg.norm(out, axis=1, keepdims=True)


def format_samples(points: np.ndarray, n: int, subset=()) -> str:
    """Plain-text export: header ``# n=<n> subset=<1-based indices>`` then one point per row."""
    head = f"# n={n} subset={','.join(str(i + 1) for i in subset)}"
    rows = [" ".join(repr(float(x)) for x in p) for p in points]
    return "\n".join([head, *rows]) + "\n"


def perturbed_frame(v: float) -> Frame:
    """``{(u,v,v), (v,u,v), (v,v,u), (e1+e2)/sqrt2, (e1-e2)/sqrt2}`` with ``u = sqrt(1 - 2v^2)``."""
    v = float(v)
    if not 0.0 < v < 1.0 / math.sqrt(2.0):
        raise OutOfRange(f"v must lie in (0, 1/sqrt(2)), got {v!r}")
    u = math.sqrt(1.0 - 2.0 * v * v)
    s = 1.0 / math.sqrt(2.0)
    vecs = [[u, v, v], [v, u, v], [v, v, u], [s, s, 0.0], [s, -s, 0.0]]
    return Frame.create(np.array(vecs), Field.REAL, unit_norm=True)


def two_bases_frame() -> Frame:
    """The standard basis of R^3 together with ``(e1 +- e2)/sqrt2``."""
    s = 1.0 / math.sqrt(2.0)
    vecs = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [s, s, 0], [s, -s, 0]]
    return Frame.create(np.array(vecs, dtype=float), Field.REAL, unit_norm=True)
