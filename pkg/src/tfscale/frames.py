"""Frames and their classical operators.

A frame here is just an ordered list of ``k`` vectors in R^n or C^n stored as
the rows of a ``(k, n)`` array.  Row ``i`` is ``f_i``; the analysis operator is
then ``conj(V)`` and the synthesis operator its adjoint, so neither is stored.

Inner products are linear in the first slot and conjugate-linear in the
second: ``<f, g> = sum_l f(l) * conj(g(l))``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field

import numpy as np

from .config import DEFAULT, Config
from .errors import InvalidFrame, LengthMismatch, NegativeCoefficient, NotUnitNorm


class Field(str, enum.Enum):
    REAL = "R"
    COMPLEX = "C"


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Frame:
    """Ordered sequence of ``k`` vectors in ``R^n`` or ``C^n``.

    ``vectors`` has shape ``(k, n)``.  Construct through :meth:`create` to get
    the unit-norm flag validated against a :class:`Config`.
    """

    vectors: np.ndarray
    field: Field = Field.REAL
    unit_norm: bool = False

    def __post_init__(self):
        field = Field(self.field)
        dtype = np.complex128 if field is Field.COMPLEX else np.float64
        try:
            v = np.asarray(self.vectors, dtype=dtype)
        except (TypeError, ValueError) as exc:
            raise InvalidFrame(f"cannot read vectors as {field.name.lower()} numbers: {exc}") from None
        if v.ndim != 2:
            raise InvalidFrame(f"vectors must form a (k, n) array, got shape {v.shape}")
        k, n = v.shape
        if k < 1:
            raise InvalidFrame("a frame needs at least one vector")
        if n < 2:
            raise InvalidFrame(f"ambient dimension must be >= 2, got {n}")
        if not np.all(np.isfinite(v)):
            raise InvalidFrame("vectors contain NaN or infinite entries")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "vectors", _readonly(v))

    @classmethod
    def create(cls, vectors, field=None, unit_norm=False, config: Config = DEFAULT) -> "Frame":
        """Build a frame, inferring the field from the dtype when not given.

        With ``unit_norm=True`` every vector must have norm ``1 +- tau_unit``.
        """
        if field is None:
            field = Field.COMPLEX if np.iscomplexobj(np.asarray(vectors)) else Field.REAL
        frame = cls(vectors, Field(field), bool(unit_norm))
        if frame.unit_norm:
            require_unit_norm(frame, config)
        return frame

    @property
    def k(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    @property
    def is_complex(self) -> bool:
        return self.field is Field.COMPLEX

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.vectors, axis=1)

    def __len__(self):
        return self.k

    def __getitem__(self, i):
        return self.vectors[i]

    def __repr__(self):
        return f"Frame(k={self.k}, n={self.n}, field={self.field.value}, unit_norm={self.unit_norm})"


def require_unit_norm(frame: Frame, config: Config = DEFAULT) -> None:
    """Raise :class:`NotUnitNorm` unless every vector has norm 1 within ``tau_unit``."""
    dev = np.abs(frame.norms() - 1.0)
    bad = np.flatnonzero(dev > config.tau_unit)
    if bad.size:
        i = int(bad[0])
        raise NotUnitNorm(f"vector {i} has norm {frame.norms()[i]!r}")


def hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True, eq=False)
class FrameOperator:
    matrix: np.ndarray
    field: Field


@dataclass(frozen=True, eq=False)
class Gramian:
    matrix: np.ndarray
    field: Field


@dataclass(frozen=True)
class TightnessReport:
    is_frame: bool
    is_tight: bool
    lam: float
    residual: float
    rank: int = dc_field(default=0)


def frame_operator(frame: Frame) -> FrameOperator:
    """``S = sum_i f_i f_i^*`` as an ``n x n`` Hermitian matrix."""
    v = frame.vectors
    s = np.einsum("ia,ib->ab", v, v.conj())
    if not frame.is_complex:
        s = s.real
    return FrameOperator(hermitize(s), frame.field)


def gramian(frame: Frame) -> Gramian:
    """``G[i, j] = <f_i, f_j>``."""
    v = frame.vectors
    g = v @ v.conj().T
    if not frame.is_complex:
        g = g.real
    return Gramian(hermitize(g), frame.field)


def check_tight(frame: Frame, tau_tight: float | None = None, config: Config = DEFAULT) -> TightnessReport:
    """Estimate ``lambda = tr(S)/n`` and measure ``||S - lambda I||_F``."""
    tau = config.tau_tight if tau_tight is None else tau_tight
    s = frame_operator(frame).matrix
    n = frame.n
    lam = float(np.trace(s).real) / n
    residual = float(np.linalg.norm(s - lam * np.eye(n)))
    eig = np.linalg.eigvalsh(s)
    top = float(eig[-1])
    rank = int(np.sum(eig > config.tau_rank * top)) if top > 0 else 0
    is_frame = rank == n
    is_tight = is_frame and residual <= tau * max(1.0, lam)
    return TightnessReport(is_frame=is_frame, is_tight=bool(is_tight), lam=lam, residual=residual, rank=rank)


def scale_frame(frame: Frame, c) -> Frame:
    """Return ``{c_i f_i}``.  The unit-norm flag survives only an all-ones ``c``."""
    c = np.asarray(c, dtype=float)
    if c.shape != (frame.k,):
        raise LengthMismatch(f"expected {frame.k} coefficients, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise NegativeCoefficient("coefficients must be finite")
    if np.any(c < 0):
        raise NegativeCoefficient(f"coefficient {int(np.flatnonzero(c < 0)[0])} is negative")
    keep = frame.unit_norm and bool(np.all(c == 1.0))
    return Frame(frame.vectors * c[:, None], frame.field, keep)
