"""Scaling of unit-norm frames in the plane.

In R^2 a unit-norm frame is strictly scalable exactly when it has property
(Q): no unit ``f`` satisfies ``|<f, f_i>| >= 1/sqrt(2)`` for all ``i`` with
strict inequality somewhere.  Every vector of such a frame belongs to an
orthogonal pair or to a triple that is itself scalable, and the squared
coefficients of those small pieces add up to a tight scaling of the whole.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Config
from .cones import cone_violation_r2
from .diagram import diagram_matrix, diagram_vector
from .errors import AccumulationFailed, DimensionMismatch, PropertyQViolated
from .frames import Field, Frame, require_unit_norm

ZERO = 1e-12
TRIPLE_CHECK = 1e-10
FINAL_CHECK = 1e-9


def rotate_j(g) -> np.ndarray:
    """Quarter turn counter-clockwise: ``(x, y) -> (-y, x)``."""
    x, y = np.asarray(g, dtype=float)
    return np.array([-y, x])


def _check_plane(frame: Frame, config: Config) -> None:
    if frame.field is not Field.REAL or frame.n != 2:
        raise DimensionMismatch("planar routines need a real frame in R^2")
    require_unit_norm(frame, config)


def property_q(frame: Frame, config: Config = DEFAULT) -> bool:
    _check_plane(frame, config)
    return not cone_violation_r2(frame, config).found


def solve_triple(f1, f2, f3) -> tuple[float, float, float] | None:
    """Coefficients making ``{c1 f1, c2 f2, c3 f3}`` tight, or ``None``.

    With ``p_j = <J f~_1, f~_j>`` the triple is scalable only if both vanish or
    they have opposite signs; ``c2, c3`` balance the component along ``J f~_1``
    and ``c1`` then cancels what is left along ``f~_1``.
    """
    d1, d2, d3 = (diagram_vector(np.asarray(f, dtype=float)).data for f in (f1, f2, f3))
    if any(len(d) != 2 for d in (d1, d2, d3)):
        raise DimensionMismatch("solve_triple works on vectors in R^2")
    return _triple_from_lifts(d1, d2, d3)


def _triple_from_lifts(d1: np.ndarray, d2: np.ndarray, d3: np.ndarray):
    j1 = np.array([-d1[1], d1[0]])
    p2, p3 = float(j1 @ d2), float(j1 @ d3)
    if abs(p2) <= ZERO and abs(p3) <= ZERO:
        w2 = w3 = 1.0
    elif p2 * p3 < 0:
        w2, w3 = (-p3, p2) if p2 > 0 else (p3, -p2)
    else:
        return None
    rad = -float(d1 @ (w2 * d2 + w3 * d3))
    if rad < -ZERO:
        return None
    w1 = max(rad, 0.0)
    if np.linalg.norm(w1 * d1 + w2 * d2 + w3 * d3) > TRIPLE_CHECK:
        return None
    return math.sqrt(w1), math.sqrt(w2), math.sqrt(w3)


@dataclass(frozen=True, eq=False)
class PlanarDecomposition:
    """Pieces used to build the scaling and the accumulated squared coefficients.

    ``pairs`` and ``triples`` hold 0-based indices; each triple comes with its
    local coefficients, anchor first.
    """

    pairs: list
    triples: list
    accumulated: np.ndarray

    @property
    def coefficients(self) -> np.ndarray:
        return np.sqrt(self.accumulated)

    @property
    def lam(self) -> float:
        return float(self.accumulated.sum()) / 2.0


def planar_scaling(frame: Frame, require_q: bool = True, config: Config = DEFAULT) -> PlanarDecomposition:
    """Tight scaling of a planar frame from orthogonal pairs and scalable triples.

    Indices orthogonal to some other vector contribute 1 per orthogonal pair.
    Every remaining index ``a`` is combined with each unordered pair ``{b, c}``
    of other indices; whenever :func:`solve_triple` succeeds its squared
    coefficients are added.  The total is checked to cancel the diagram sum.
    """
    _check_plane(frame, config)
    if require_q and not property_q(frame, config):
        raise PropertyQViolated("frame lacks property (Q): no strictly positive tight scaling exists")
    v = frame.vectors
    k = frame.k
    acc = np.zeros(k)
    ortho = np.abs(v @ v.T) <= config.tau_orth
    np.fill_diagonal(ortho, False)
    in_pair = ortho.any(axis=1)
    pairs = []
    for a, b in itertools.combinations(np.flatnonzero(in_pair), 2):
        if ortho[a, b]:
            acc[a] += 1.0
            acc[b] += 1.0
            pairs.append((int(a), int(b)))
    d = diagram_matrix(frame)
    triples = []
    for a in np.flatnonzero(~in_pair):
        others = [i for i in range(k) if i != a]
        for b, c in itertools.combinations(others, 2):
            sol = _triple_from_lifts(d[a], d[b], d[c])
            if sol is None:
                continue
            ca, cb, cc = sol
            acc[a] += ca * ca
            acc[b] += cb * cb
            acc[c] += cc * cc
            triples.append(((int(a), int(b), int(c)), sol))
    total = float(acc.sum())
    residual = float(np.linalg.norm(acc @ d))
    if total <= 0 or residual > FINAL_CHECK * total or np.any(acc <= 0):
        missing = np.flatnonzero(acc <= 0).tolist()
        raise AccumulationFailed(
            f"accumulated weights do not give a tight scaling (residual {residual!r}, uncovered {missing})",
            residual,
        )
    return PlanarDecomposition(pairs, triples, acc)
