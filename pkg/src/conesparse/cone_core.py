"""Elements, instances, cone-order utilities and Caratheodory reduction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from conesparse.barriers import MEMBERSHIP_TOL, Cone, scale_of
from conesparse.errors import Inconsistent, InputError, NoBracket, NonInterior

SUM_TOL = 1e-9
ZERO_TOL = 1e-12
BRACKET_CAP = 1e12


@dataclass(frozen=True)
class ConeElement:
    """A point of an ambient space with its shape tag.

    ``shape`` is one of ``("vector", n)``, ``("sym", d)`` or
    ``("matrix_scalar", n, k)``; ``coords`` is the canonical flattening.
    Arrays convert transparently via ``np.asarray(element)``.
    """

    shape: tuple
    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float).ravel()
        object.__setattr__(self, "coords", coords)
        tag = self.shape[0]
        if tag == "vector":
            expected = self.shape[1]
        elif tag == "sym":
            d = self.shape[1]
            expected = d * d
            if coords.size == expected:
                a = coords.reshape(d, d)
                tol = 1e-12 * (1.0 + np.max(np.abs(a), initial=0.0))
                if np.max(np.abs(a - a.T), initial=0.0) > tol:
                    raise InputError("symmetric-matrix element is not symmetric")
        elif tag == "matrix_scalar":
            expected = self.shape[1] * self.shape[2] + 1
        else:
            raise InputError(f"unknown element shape {self.shape!r}")
        if coords.size != expected:
            raise InputError(f"element of shape {self.shape} needs {expected} coordinates, got {coords.size}")

    @classmethod
    def vector(cls, v):
        v = np.asarray(v, dtype=float).ravel()
        return cls(("vector", v.size), v)

    @classmethod
    def sym_matrix(cls, a):
        a = np.asarray(a, dtype=float)
        return cls(("sym", a.shape[0]), a.ravel())

    @classmethod
    def matrix_scalar(cls, X, t):
        X = np.asarray(X, dtype=float)
        return cls(("matrix_scalar", *X.shape), np.concatenate([X.ravel(), [float(t)]]))

    def __array__(self, dtype=None, copy=None):
        return self.coords if dtype is None else self.coords.astype(dtype)


@dataclass(frozen=True)
class OrderNorm:
    value: float
    converged: bool
    iterations: int


@dataclass(frozen=True)
class SandwichCertificate:
    """Membership slacks of ``y - (1-eps) e`` and ``(1+eps) e - y``."""

    passed: bool
    lower_slack: float
    upper_slack: float
    achieved_eps: float
    eps: float

    def to_dict(self):
        return {
            "pass": bool(self.passed),
            "lower_slack": self.lower_slack,
            "upper_slack": self.upper_slack,
            "achieved_eps": self.achieved_eps,
            "eps": self.eps,
        }


@dataclass(frozen=True)
class SparsificationInstance:
    """Nonzero atoms in K summing to an interior target.

    ``elements`` is an ``(m, dim)`` array of canonical coordinates.  ``kept``
    maps each row back to its index in the caller's original list, since zero
    atoms are dropped at construction.
    """

    cone: Cone
    elements: np.ndarray
    target: np.ndarray
    epsilon: float
    kept: np.ndarray

    @property
    def m(self):
        return self.elements.shape[0]

    def rows_for(self, support):
        """Translate original indices into rows of ``elements``."""
        support = np.asarray(support, dtype=int)
        pos = np.searchsorted(self.kept, support)
        ok = (pos < self.kept.size) & (self.kept[np.minimum(pos, self.kept.size - 1)] == support)
        return pos, ok


def make_instance(cone, elements, epsilon, target=None):
    """Validate and build a :class:`SparsificationInstance`.

    Zero atoms are dropped, the target defaults to the atom sum, and a supplied
    target must agree with that sum.
    """
    if not (0.0 < float(epsilon) < 1.0):
        raise InputError(f"epsilon must lie in (0, 1), got {epsilon}")
    rows = np.atleast_2d(np.asarray([np.asarray(x, dtype=float).ravel() for x in elements], dtype=float))
    if rows.size == 0:
        raise InputError("instance has no elements")
    if rows.shape[1] != cone.dim:
        raise InputError(f"elements have {rows.shape[1]} coordinates, {cone.describe()} needs {cone.dim}")
    if not np.all(np.isfinite(rows)):
        raise InputError("elements contain non-finite values")
    rows = np.vstack([cone.canonical(r) for r in rows])
    total = rows.sum(axis=0)
    if target is None:
        target = total
    else:
        target = cone.canonical(np.asarray(target, dtype=float).ravel())
        if np.max(np.abs(total - target)) > SUM_TOL * scale_of(target):
            raise Inconsistent("elements do not sum to the target")
    if not cone.is_interior(target):
        raise NonInterior(f"target is not strictly inside {cone.describe()}")
    for i, r in enumerate(rows):
        if not cone.contains(r):
            raise InputError(f"element {i} is not in {cone.describe()} (slack {cone.slack(r):.3e})")
    norms = np.max(np.abs(rows), axis=1)
    kept = np.flatnonzero(norms > ZERO_TOL * np.max(np.abs(target)))
    return SparsificationInstance(cone, rows[kept], np.asarray(target), float(epsilon), kept)


@dataclass
class SparsifierResult:
    """Support (original indices), positive weights and bookkeeping."""

    support: np.ndarray
    weights: np.ndarray
    achieved_eps: float
    bound: int
    engine: str
    iterations: int = 0
    trace: list = field(default_factory=list)
    certificate: SandwichCertificate | None = None

    def to_dict(self):
        out = {
            "engine": self.engine,
            "support": [int(i) for i in self.support],
            "weights": [float(w) for w in self.weights],
            "achieved_eps": float(self.achieved_eps),
            "bound": int(self.bound),
            "iterations": int(self.iterations),
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        return out


def weighted_sum(instance, support, weights):
    pos, ok = instance.rows_for(support)
    if not np.all(ok):
        raise InputError("support refers to atoms not present in the instance")
    return np.asarray(weights, dtype=float) @ instance.elements[pos]


# -- order norm -----------------------------------------------------------------


def _bisect_order_norm(cone, x, u, tol, max_iter=200):
    def feasible(t):
        return cone.slack(t * x - u) >= 0.0 and cone.slack(t * x + u) >= 0.0

    hi, steps = 1.0, 0
    while not feasible(hi):
        hi *= 2.0
        steps += 1
        if hi > BRACKET_CAP:
            raise NoBracket("order norm bracket exceeded 1e12")
    lo = 0.0
    it = 0
    while hi - lo > tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    return OrderNorm(hi, hi - lo <= tol, it + steps)


def order_norm(cone, x, u, tol=1e-10, method="auto"):
    """``inf {t : t x - u in K and t x + u in K}`` for interior ``x``.

    ``method="auto"`` uses the cone's closed form when available and falls back
    to bisection on the membership oracle; ``method="bisect"`` forces the latter.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    x = cone.check_interior(x)
    u = np.asarray(u, dtype=float)
    if not np.any(u):
        return OrderNorm(0.0, True, 0)
    if method == "auto":
        val = cone.order_norm_exact(x, u)
        if val is not None:
            return OrderNorm(val, True, 0)
    elif method != "bisect":
        raise InputError(f"unknown order_norm method {method!r}")
    return _bisect_order_norm(cone, x, u, tol)


def in_order_interval(cone, e, y, eps, tol=MEMBERSHIP_TOL):
    """Check ``(1-eps) e <= y <= (1+eps) e`` in the order of ``cone``."""
    e = cone.check_interior(e, "target")
    y = np.asarray(y, dtype=float)
    lo = y - (1.0 - eps) * e
    hi = (1.0 + eps) * e - y
    ls, us = cone.slack(lo), cone.slack(hi)
    passed = ls >= -tol * scale_of(lo) and us >= -tol * scale_of(hi)
    achieved = order_norm(cone, e, y - e).value
    return SandwichCertificate(bool(passed), float(ls), float(us), float(achieved), float(eps))


# -- Caratheodory -----------------------------------------------------------------


def _rank_tol(a):
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0:
        return 0, s
    return int(np.sum(s > max(a.shape) * np.finfo(float).eps * 1e3 * s[0])), s


def caratheodory_reduce(instance):
    """Exact re-expression of the target using at most ``rank`` atoms.

    Repeatedly takes a null-space direction of the last ``r + 1`` supported
    atoms (``r`` = rank of all supported atoms) and moves along it until a
    weight hits zero.  Between the two orientations, the one that drops the
    later index is used, so early atoms are preferred; ties within an
    orientation drop the smallest index.
    """
    a = instance.elements
    lam = np.ones(instance.m)
    support = list(range(instance.m))
    r, _ = _rank_tol(a)
    pivots = 0
    while len(support) > r:
        block = support[-(r + 1):]
        _, _, vt = np.linalg.svd(a[block].T)
        d = vt[-1]
        best = None
        for sign in (1.0, -1.0):
            dd = sign * d
            pos = dd > 1e-14 * np.max(np.abs(dd))
            if not np.any(pos):
                continue
            ratios = np.full(dd.size, np.inf)
            ratios[pos] = lam[block][pos] / dd[pos]
            k = int(np.argmin(ratios))
            if best is None or block[k] > best[0]:
                best = (block[k], ratios[k], dd)
        drop, theta, dd = best
        lam[block] = np.maximum(lam[block] - theta * dd, 0.0)
        lam[drop] = 0.0
        support.remove(drop)
        pivots += 1
    # refine the surviving weights by least squares on the final support
    sol, *_ = np.linalg.lstsq(a[support].T, instance.target, rcond=None)
    if np.all(sol > 0):
        lam_s = sol
    else:
        lam_s = lam[support]
    keep = lam_s > 0
    idx = np.asarray(support)[keep]
    w = lam_s[keep]
    y = w @ a[idx]
    achieved = order_norm(instance.cone, instance.target, y - instance.target).value
    return SparsifierResult(
        support=instance.kept[idx],
        weights=w,
        achieved_eps=achieved,
        bound=r,
        engine="caratheodory",
        iterations=pivots,
    )
