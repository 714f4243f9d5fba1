"""Diagram vectors.

The diagram vector of ``f`` is a quadratic lift whose inner products satisfy

    (n - 1) <f~, g~> = n |<f, g>|^2 - ||f||^2 ||g||^2

so a sequence is tight exactly when its diagram vectors sum to zero.

Entry layout, for every pair ``i < j`` in lexicographic order:

* real ``f``: first the ``n(n-1)/2`` differences ``f(i)^2 - f(j)^2``, then the
  ``n(n-1)/2`` products ``sqrt(2n) f(i) f(j)``;
* complex ``f``: first the differences ``|f(i)|^2 - |f(j)|^2``, then for each
  pair the two entries ``sqrt(n) f(i) conj(f(j))`` and ``sqrt(n) conj(f(i)) f(j)``.

Everything is divided by ``sqrt(n - 1)``.  Note the differences run over all
pairs ``i < j``, not only adjacent indices; that is what makes the lengths
``n(n-1)`` and ``3n(n-1)/2`` and the inner-product identity work out.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Config
from .frames import Field, Frame, require_unit_norm
from .errors import AllZeroFrame, DimensionMismatch, DimensionTooSmall, LengthMismatch, NotUnitNorm


@dataclass(frozen=True, eq=False)
class DiagramVector:
    data: np.ndarray
    field: Field
    n: int

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def inner(self, other: "DiagramVector") -> float:
        # imaginary part cancels between the conjugate product entries
        return float(np.vdot(other.data, self.data).real)


@dataclass(frozen=True, eq=False)
class DiagramGramian:
    matrix: np.ndarray


def diagram_length(n: int, field=Field.REAL) -> int:
    if Field(field) is Field.COMPLEX:
        return 3 * n * (n - 1) // 2
    return n * (n - 1)


def _lift_rows(v: np.ndarray, complex_field: bool) -> np.ndarray:
    """Diagram vectors of every row of ``v`` (shape ``(m, n)``)."""
    m, n = v.shape
    iu, ju = np.triu_indices(n, k=1)
    if complex_field:
        sq = (v * v.conj()).real
        diffs = sq[:, iu] - sq[:, ju]
        prod = np.sqrt(n) * v[:, iu] * v[:, ju].conj()
        out = np.empty((m, 3 * len(iu)), dtype=np.complex128)
        out[:, : len(iu)] = diffs
        out[:, len(iu) :: 2] = prod
        out[:, len(iu) + 1 :: 2] = prod.conj()
    else:
        sq = v * v
        diffs = sq[:, iu] - sq[:, ju]
        prod = np.sqrt(2 * n) * v[:, iu] * v[:, ju]
        out = np.concatenate([diffs, prod], axis=1)
    return out / np.sqrt(n - 1)


def diagram_vector(f, field=None, n: int | None = None) -> DiagramVector:
    """Diagram vector of a single vector ``f``."""
    f = np.asarray(f)
    if field is None:
        field = Field.COMPLEX if np.iscomplexobj(f) else Field.REAL
    field = Field(field)
    if f.ndim != 1:
        raise DimensionMismatch(f"expected a 1-d vector, got shape {f.shape}")
    if n is None:
        n = f.shape[0]
    if n < 2:
        raise DimensionTooSmall(f"diagram vectors need n >= 2, got {n}")
    if f.shape[0] != n:
        raise DimensionMismatch(f"vector has {f.shape[0]} components, expected {n}")
    complex_field = field is Field.COMPLEX
    v = f.astype(np.complex128 if complex_field else np.float64)[None, :]
    return DiagramVector(_lift_rows(v, complex_field)[0], field, n)


def diagram_matrix(frame: Frame) -> np.ndarray:
    """All diagram vectors of ``frame`` as rows of a ``(k, d)`` array."""
    return _lift_rows(frame.vectors, frame.is_complex)


def diagram_inner(f, g) -> float:
    """``<f~, g~>`` from the closed form, without building either lift."""
    f = np.asarray(f)
    g = np.asarray(g)
    if f.ndim != 1 or f.shape != g.shape:
        raise DimensionMismatch(f"shapes {f.shape} and {g.shape} do not match")
    n = f.shape[0]
    if n < 2:
        raise DimensionTooSmall(f"diagram vectors need n >= 2, got {n}")
    ip = np.vdot(g, f)
    ff = np.vdot(f, f).real
    gg = np.vdot(g, g).real
    return float((n * abs(ip) ** 2 - ff * gg) / (n - 1))


def diagram_gramian(frame: Frame, config: Config = DEFAULT) -> DiagramGramian:
    """``G~[i, j] = <f~_i, f~_j>`` for a unit-norm frame; always real symmetric."""
    if not frame.unit_norm:
        raise NotUnitNorm("diagram Gramian needs a frame flagged unit-norm")
    require_unit_norm(frame, config)
    v = frame.vectors
    n = frame.n
    sq = np.abs(v @ v.conj().T) ** 2
    nrm = np.sum(np.abs(v) ** 2, axis=1)
    g = (n * sq - np.outer(nrm, nrm)) / (n - 1)
    g = 0.5 * (g + g.T)
    return DiagramGramian(g)


def diagram_sum(frame: Frame, weights=None) -> DiagramVector:
    """``sum_i w_i f~_i``; ``weights`` are the squared coefficients ``c_i^2``."""
    k = frame.k
    w = np.ones(k) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (k,):
        raise LengthMismatch(f"expected {k} weights, got shape {w.shape}")
    return DiagramVector(w @ diagram_matrix(frame), frame.field, frame.n)


def is_tight_by_diagram(frame: Frame, tau: float | None = None, config: Config = DEFAULT) -> bool:
    """Tightness via ``||sum f~_i|| <= tau * sum ||f_i||^2``."""
    tau = config.tau_tight if tau is None else tau
    total = float(np.sum(np.abs(frame.vectors) ** 2))
    if total == 0.0:
        raise AllZeroFrame("every vector of the frame is zero")
    return diagram_sum(frame).norm() <= tau * total
