"""Dense numerical routines used by the scaling pipeline.

* :func:`sym_eigen` -- cyclic Jacobi eigensolver for real symmetric matrices.
* :func:`null_space` -- tolerance-based null space of a PSD matrix.
* :func:`hull_membership` -- does the origin lie in ``conv{r_i}``?  Answered
  with a certificate either way.
* :func:`perceptron_witness` -- classical perceptron for ``<y, r_i> > 0``.

All routines are deterministic: fixed sweep orders and lowest-index tie breaks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Config
from .errors import IterationCap, IterationLimit, NoConvergence, NotPSD, NotSymmetric


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    values: np.ndarray  # ascending
    vectors: np.ndarray  # columns
    sweeps: int = 0


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def sym_eigen(m, config: Config = DEFAULT) -> EigenDecomposition:
    """Full eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Sweeps visit ``(p, q)``, ``p < q`` in row order and stop once the
    off-diagonal Frobenius norm is at most ``1e-12 * ||M||_F``.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    k = a.shape[0]
    scale = float(np.linalg.norm(a))
    if float(np.max(np.abs(a - a.T), initial=0.0)) > config.tau_sym * max(1.0, scale):
        raise NotSymmetric("matrix is not symmetric within tau_sym")
    a = 0.5 * (a + a.T)
    v = np.eye(k)
    target = 1e-12 * scale
    sweeps = 0
    while _off_norm(a) > target:
        if sweeps >= config.jacobi_max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {sweeps} sweeps")
        sweeps += 1
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], v[:, order], sweeps)


def _fix_signs(basis: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of each column made positive (lowest index on ties)
    if basis.size == 0:
        return basis
    idx = np.argmax(np.abs(basis), axis=0)
    signs = np.sign(basis[idx, np.arange(basis.shape[1])])
    signs[signs == 0] = 1.0
    return basis * signs


@dataclass(frozen=True, eq=False)
class NullSpaceData:
    """Orthonormal null-space basis ``[v_1 ... v_l]`` (a ``k x l`` array).

    Row ``i`` of ``basis`` is the vector ``r_i``; :attr:`rows` is an alias.
    """

    basis: np.ndarray
    eigenvalues: np.ndarray
    threshold: float
    rank_gap: float
    borderline: bool

    @property
    def rows(self) -> np.ndarray:
        return self.basis

    @property
    def nullity(self) -> int:
        return self.basis.shape[1]

    @property
    def rank(self) -> int:
        return self.basis.shape[0] - self.basis.shape[1]


def null_space(m, tau_null: float | None = None, config: Config = DEFAULT) -> NullSpaceData:
    """Eigenvectors of a PSD matrix with eigenvalue ``<= tau_null * max(1, lambda_max)``."""
    tau = config.tau_null if tau_null is None else tau_null
    m = np.asarray(m, dtype=float)
    eig = sym_eigen(m, config)
    vals = eig.values
    norm = float(np.linalg.norm(m))
    if vals.size and vals[0] < -config.tau_psd * norm:
        raise NotPSD(f"smallest eigenvalue {vals[0]!r} is below -tau_psd * ||M||")
    top = max(float(vals[-1]), 0.0) if vals.size else 0.0
    thr = tau * max(1.0, top)
    mask = vals <= thr
    basis = _fix_signs(eig.vectors[:, mask])
    kept = vals[~mask]
    dropped = vals[mask]
    if kept.size and dropped.size:
        gap = float(kept.min() - dropped.max())
    elif kept.size:
        gap = float(kept.min())
    else:
        gap = math.inf
    f = config.borderline_factor
    borderline = bool(np.any((vals >= thr / f) & (vals <= thr * f)))
    return NullSpaceData(basis, vals, thr, gap, borderline)


@dataclass(frozen=True, eq=False)
class HullDecision:
    """Outcome of :func:`hull_membership`.

    Exactly one of ``weights`` (convex weights with ``sum t_i r_i ~ 0``) and
    ``witness`` (``y`` with ``min <y, r_i> > 0``) is set.
    """

    contains_zero: bool
    weights: np.ndarray | None
    witness: np.ndarray | None
    distance: float
    iterations: int
    borderline: bool = False
    perceptron_updates: int = 0

    def check(self, points, tau_hull: float) -> bool:
        r = _as_points(points)
        if self.contains_zero:
            t = self.weights
            return bool(
                np.all(t >= 0)
                and abs(t.sum() - 1.0) <= 1e-12
                and np.linalg.norm(t @ r) <= tau_hull
            )
        return bool(np.min(r @ self.witness) > 0)


def _as_points(points) -> np.ndarray:
    r = np.asarray(points, dtype=float)
    if r.ndim == 1:
        r = r[:, None]
    return r


def _min_norm_walk(r: np.ndarray, zero_tol: float, exact: bool, max_iter: int):
    """Away-step conditional gradient on ``min ||t @ r||`` over the simplex.

    Returns ``(t, p, iterations, status)`` with status ``"zero"`` (``||p|| <=
    zero_tol``), ``"separated"`` (``min <p, r_i> >= ||p||^2 / 2``; only when not
    ``exact``), ``"optimal"`` (duality gap at roundoff level) or ``"stalled"``.
    """
    k = r.shape[0]
    sq = np.einsum("ij,ij->i", r, r)
    gap_floor = 1e-14 * float(sq.max())
    i0 = int(np.argmin(sq))
    t = np.zeros(k)
    t[i0] = 1.0
    p = r[i0].copy()
    it = 0
    while True:
        pp = float(p @ p)
        if math.sqrt(pp) <= zero_tol:
            t /= t.sum()
            p = t @ r
            pp = float(p @ p)
            if math.sqrt(pp) <= zero_tol:
                return t, p, it, "zero"
        scores = r @ p
        s = int(np.argmin(scores))
        gap = pp - scores[s]
        if not exact and scores[s] > 0 and gap <= 0.5 * pp:
            return t, p, it, "separated"
        if exact and gap <= gap_floor:
            return t, p, it, "optimal"
        active = np.flatnonzero(t > 0)
        a = int(active[np.argmax(scores[active])])
        away_gap = scores[a] - pp
        if gap >= away_gap or t[a] >= 1.0:
            d = r[s] - p
            gmax = 1.0
            fw = True
        else:
            d = p - r[a]
            gmax = t[a] / (1.0 - t[a])
            fw = False
        dd = float(d @ d)
        if dd == 0.0 or it >= max_iter:
            return t, p, it, "stalled"
        gamma = min(max(-float(p @ d) / dd, 0.0), gmax)
        if fw:
            t *= 1.0 - gamma
            t[s] += gamma
        else:
            t *= 1.0 + gamma
            t[a] -= gamma
            if gamma == gmax:
                t[a] = 0.0
        t[t < 0] = 0.0
        it += 1
        if it % 64 == 0:
            t /= t.sum()
            p = t @ r
        else:
            p = p + gamma * d
        # corrective (Wolfe minor) cycle: head for the min-norm point of the
        # active face's affine hull, dropping atoms whose weight reaches zero
        t = _minor_cycle(r, t)
        p = t @ r


def _minor_cycle(r: np.ndarray, t: np.ndarray) -> np.ndarray:
    active = np.flatnonzero(t > 0)
    while active.size > 1:
        w = _affine_min_norm(r[active])
        if w is None:
            break
        cur = t[active]
        if np.all(w > 0):
            t = np.zeros_like(t)
            t[active] = w
            break
        neg = np.flatnonzero(w <= 0)
        ratios = cur[neg] / (cur[neg] - w[neg])
        j = int(np.argmin(ratios))
        new = cur + ratios[j] * (w - cur)
        new[neg[j]] = 0.0
        new[new < 0] = 0.0
        t = np.zeros_like(t)
        t[active] = new / new.sum()
        active = np.flatnonzero(t > 0)
    return t


def hull_membership(points, tau_hull: float | None = None, config: Config = DEFAULT) -> HullDecision:
    """Decide ``0 in conv{r_i}`` via the nearest point of the hull to the origin.

    Runs the away-step conditional-gradient method over the simplex of convex
    weights, ties broken by lowest index.  Stops when

    * ``||p|| <= tau_hull / borderline_factor``: origin inside, weights returned;
    * ``min_i <p, r_i> >= ||p||^2 / 2``: ``p`` separates, the direction
      ``p / ||p||`` is polished by :func:`perceptron_witness` and returned.

    A separation with ``||p|| <= borderline_factor * tau_hull`` is flagged
    borderline, as is containment decided only at ``||p|| <= tau_hull`` after
    the iteration stalled.  One-dimensional input is read as ``k`` points on a
    line.
    """
    tau = config.tau_hull if tau_hull is None else tau_hull
    r = _as_points(points)
    f = config.borderline_factor
    t, p, it, status = _min_norm_walk(r, tau / f, False, config.hull_max_iter)
    dist = float(np.linalg.norm(p))
    if status == "zero":
        return HullDecision(True, t, None, dist, it)
    if status == "separated":
        y, updates = perceptron(r, p / dist, config.perceptron_cap)
        return HullDecision(False, None, y, dist, it, dist <= f * tau, updates)
    if dist <= tau:
        return HullDecision(True, t, None, dist, it, borderline=True)
    raise IterationLimit(f"no decision after {it} iterations (distance {dist!r})")


def nearest_point(points, config: Config = DEFAULT) -> tuple[np.ndarray, np.ndarray]:
    """Point of ``conv{r_i}`` closest to the origin, with its convex weights.

    Same iteration as :func:`hull_membership` but run to optimality instead of
    stopping at the first separating iterate.
    """
    r = _as_points(points)
    t, p, _, status = _min_norm_walk(r, 0.0, True, config.hull_max_iter)
    if status == "stalled" and np.linalg.norm(p) > config.tau_hull:
        scores = r @ p
        gap = float(p @ p - scores.min())
        if gap > config.tau_hull**2:
            raise IterationLimit(f"nearest point not reached (gap {gap!r})")
    return p, t


def _affine_min_norm(ra: np.ndarray) -> np.ndarray | None:
    """Weights of the point of minimum norm in the affine hull of the rows."""
    m = ra.shape[0]
    kkt = np.zeros((m + 1, m + 1))
    kkt[:m, :m] = ra @ ra.T
    kkt[:m, m] = 1.0
    kkt[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    w = sol[:m]
    if not np.all(np.isfinite(w)) or abs(w.sum() - 1.0) > 1e-9:
        return None
    return w / w.sum()


def perceptron(points, y0=None, cap: int | None = None) -> tuple[np.ndarray, int]:
    """Run the perceptron on normalized rows; return ``(y, number_of_updates)``."""
    r = _as_points(points)
    cap = DEFAULT.perceptron_cap if cap is None else cap
    norms = np.linalg.norm(r, axis=1)
    if np.any(norms == 0):
        raise IterationCap("a zero point can never be strictly separated")
    u = r / norms[:, None]
    y = np.zeros(r.shape[1]) if y0 is None else np.array(y0, dtype=float)
    updates = 0
    while True:
        bad = np.flatnonzero(u @ y <= 0)
        if bad.size == 0:
            return y, updates
        if updates >= cap:
            raise IterationCap(f"no separating vector after {updates} updates")
        y = y + u[bad[0]]
        updates += 1


def perceptron_witness(points, y0=None, cap: int | None = None) -> np.ndarray:
    """``y`` with ``<y, r_i> > 0`` for every point, or :class:`IterationCap`."""
    return perceptron(points, y0, cap)[0]
