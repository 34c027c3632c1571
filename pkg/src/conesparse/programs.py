"""Packing and covering programs over the nonnegative orthant.

    cover(b, c) = min <b, y>  s.t.  sum_i y_i a_i >= c,  y >= 0
    pack(b, c)  = max <c, x>  s.t.  <a_i, x> <= b_i,     x >= 0

Both are solved exactly by enumerating basic solutions, which is only meant
for desk-scale instances.  Combinations are visited in lexicographic order and
the first optimal basis wins, which fixes the answer on degenerate problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, islice
from math import comb

import numpy as np

from conesparse.barriers import Orthant
from conesparse.bss import bss_sparsify
from conesparse.cone_core import in_order_interval, make_instance
from conesparse.errors import Infeasible, InputError, PremiseFailed, Unbounded

FEAS_TOL = 1e-9
OPT_TOL = 1e-9
MAX_BASES = 3_000_000
CHUNK = 20_000


@dataclass(frozen=True)
class PackCoverInstance:
    cone: Orthant
    a: np.ndarray  # (k, d), row i is a_i
    b: np.ndarray  # (k,)
    c: np.ndarray  # (d,)

    @property
    def k(self):
        return self.a.shape[0]

    @property
    def d(self):
        return self.a.shape[1]


def make_pack_cover(a, b, c):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    c = np.asarray(c, dtype=float).ravel()
    k, d = a.shape
    if b.shape != (k,) or c.shape != (d,):
        raise InputError(f"shape mismatch: a is {a.shape}, b has {b.size}, c has {c.size}")
    cone = Orthant(d)
    if np.any(b <= 0):
        raise InputError("b must be strictly positive")
    if not cone.is_interior(c):
        raise InputError("c must be strictly positive")
    if np.any(a < 0):
        raise InputError("every a_i must lie in the orthant")
    return PackCoverInstance(cone, a, b, c)


def _check_bounded(inst):
    uncovered = np.flatnonzero(np.all(inst.a <= 0, axis=0) & (inst.c > 0))
    if uncovered.size:
        j = int(uncovered[0])
        raise Infeasible(f"no a_i covers coordinate {j}: cover is infeasible and pack is unbounded")


def _enumerate(G, h, size):
    """Yield ``(rows, point)`` for every nonsingular basis, in lexicographic order.

    ``G`` has one constraint per row; ``size`` rows are made tight.
    """
    n = G.shape[0]
    total = comb(n, size)
    if total > MAX_BASES:
        raise InputError(f"{total} candidate bases exceed the enumeration cap {MAX_BASES}")
    it = combinations(range(n), size)
    while True:
        block = np.array(list(islice(it, CHUNK)), dtype=int)
        if block.size == 0:
            return
        mats = G[block]
        rhs = h[block]
        det = np.linalg.det(mats)
        scale = np.prod(np.linalg.norm(mats, axis=2), axis=1)
        ok = np.abs(det) > 1e-10 * np.maximum(scale, 1e-300)
        if not np.any(ok):
            continue
        pts = np.linalg.solve(mats[ok], rhs[ok][..., None])[..., 0]
        yield block[ok], pts


def _best_vertex(G, h, size, objective, sense):
    best_val, best = None, None
    for rows, pts in _enumerate(G, h, size):
        viol = pts @ G.T - h
        feas = np.all(viol <= FEAS_TOL * (1.0 + np.abs(h)), axis=1)
        if not np.any(feas):
            continue
        vals = pts[feas] @ objective
        idx = int(np.argmax(vals) if sense == "max" else np.argmin(vals))
        v = float(vals[idx])
        better = best_val is None or (v > best_val + OPT_TOL * (1 + abs(best_val)) if sense == "max"
                                      else v < best_val - OPT_TOL * (1 + abs(best_val)))
        if better:
            # first occurrence of the chunk optimum, in lexicographic order
            close = np.flatnonzero(np.abs(vals - v) <= OPT_TOL * (1 + abs(v)))
            idx = int(close[0])
            best_val, best = float(vals[idx]), (rows[feas][idx], pts[feas][idx])
    if best is None:
        raise Infeasible("no feasible basic solution")
    return best_val, best[0], best[1]


def _pack_system(inst):
    G = np.vstack([inst.a, -np.eye(inst.d)])
    h = np.concatenate([inst.b, np.zeros(inst.d)])
    return G, h


def solve_pack(inst):
    """Exact ``pack(b, c)`` by vertex enumeration; returns ``(value, x)``."""
    _check_bounded(inst)
    G, h = _pack_system(inst)
    val, _, x = _best_vertex(G, h, inst.d, inst.c, "max")
    return val, np.maximum(x, 0.0)


def _cover_by_vertices(inst):
    G = np.vstack([-inst.a.T, -np.eye(inst.k)])
    h = np.concatenate([-inst.c, np.zeros(inst.k)])
    val, _, y = _best_vertex(G, h, inst.k, inst.b, "min")
    return val, np.maximum(y, 0.0)


def _cover_by_dual_basis(inst):
    """Optimal cover multipliers read off a dual-feasible optimal pack basis."""
    G, h = _pack_system(inst)
    pack_val, _, _ = _best_vertex(G, h, inst.d, inst.c, "max")
    for rows, pts in _enumerate(G, h, inst.d):
        viol = pts @ G.T - h
        feas = np.all(viol <= FEAS_TOL * (1.0 + np.abs(h)), axis=1)
        opt = feas & (np.abs(pts @ inst.c - pack_val) <= 1e-7 * (1 + abs(pack_val)))
        for r in rows[opt]:
            mu = np.linalg.solve(G[r].T, inst.c)
            if np.all(mu >= -1e-9 * (1 + np.max(np.abs(mu)))):
                y = np.zeros(inst.k)
                sel = r < inst.k
                y[r[sel]] = np.maximum(mu[sel], 0.0)
                return float(inst.b @ y), y
    raise Infeasible("no dual-feasible optimal basis found")


def solve_cover(inst, method="auto"):
    """Exact ``cover(b, c)``; returns ``(value, y)``.

    ``method="vertices"`` enumerates covering vertices directly (``k`` small);
    ``method="dual"`` enumerates the ``d``-dimensional packing polytope and
    reads the multipliers off an optimal basis.  ``"auto"`` picks by size.
    """
    _check_bounded(inst)
    if method == "auto":
        method = "vertices" if comb(inst.k + inst.d, inst.k) <= comb(inst.k + inst.d, inst.d) and inst.k <= 10 else "dual"
    if method == "vertices":
        return _cover_by_vertices(inst)
    if method == "dual":
        return _cover_by_dual_basis(inst)
    raise InputError(f"unknown cover method {method!r}")


def duality_gap(inst):
    cv, _ = solve_cover(inst)
    pv, _ = solve_pack(inst)
    return cv, pv, abs(cv - pv) / (1.0 + abs(cv))


@dataclass
class PackSandwichReport:
    pack: float
    pack_prime: float
    eps: float
    lower_slack: float
    upper_slack: float

    @property
    def passed(self):
        return self.lower_slack >= -1e-9 * (1 + abs(self.pack)) and self.upper_slack >= -1e-9 * (1 + abs(self.pack))

    def to_dict(self):
        return {"pack": self.pack, "pack_prime": self.pack_prime, "eps": self.eps,
                "lower_slack": self.lower_slack, "upper_slack": self.upper_slack, "pass": self.passed}


def pack_cost_sandwich(inst, c_prime, eps):
    """Solve ``pack(b, c)`` and ``pack(b, c')`` and compare them.

    Requires ``(1-eps) c <= c' <= (1+eps) c``; the values then satisfy
    ``(1-eps) pack(b, c) <= pack(b, c') <= (1+eps) pack(b, c)``.
    """
    c_prime = np.asarray(c_prime, dtype=float)
    cert = in_order_interval(inst.cone, inst.c, c_prime, eps)
    if not cert.passed:
        raise PremiseFailed("c' is not within the (1 +/- eps) order interval of c")
    p, _ = solve_pack(inst)
    pp, _ = solve_pack(PackCoverInstance(inst.cone, inst.a, inst.b, c_prime))
    return PackSandwichReport(p, pp, eps, pp - (1 - eps) * p, (1 + eps) * p - pp)


@dataclass
class SparseCoverReport:
    cover: float
    value_prime: float
    support: int
    bound: int
    eps: float
    feasibility_slack: float

    @property
    def lower_gap(self):
        return self.cover - (1 - self.eps) / (1 + self.eps) * self.value_prime

    @property
    def upper_gap(self):
        return self.value_prime - self.cover

    @property
    def passed(self):
        tol = 1e-9 * (1 + abs(self.cover))
        return (self.feasibility_slack >= -tol and self.support <= self.bound
                and self.lower_gap >= -tol and self.upper_gap >= -tol)

    def to_dict(self):
        return {"cover": self.cover, "value_prime": self.value_prime, "support": self.support,
                "bound": self.bound, "eps": self.eps, "feasibility_slack": self.feasibility_slack,
                "lower_gap": self.lower_gap, "upper_gap": self.upper_gap, "pass": self.passed}


def sparse_cover_solution(inst, eps, y=None, cover_value=None):
    """Sparsify an optimal covering solution.

    The atoms ``y_i a_i`` sum to ``e >= c``; a BSS sparsifier of them with
    weights ``lambda`` gives ``y'_i = lambda_i y_i / (1 - eps)``.
    """
    if y is None:
        cover_value, y = solve_cover(inst)
    elif cover_value is None:
        cover_value = float(inst.b @ y)
    active = np.flatnonzero(y > 0)
    sp_inst = make_instance(inst.cone, [y[i] * inst.a[i] for i in active], eps)
    res = bss_sparsify(sp_inst)
    y_prime = np.zeros(inst.k)
    idx = active[res.support]
    y_prime[idx] = res.weights * y[idx] / (1.0 - eps)
    slack = float(np.min(y_prime @ inst.a - inst.c))
    report = SparseCoverReport(float(cover_value), float(inst.b @ y_prime), int(idx.size), res.bound, eps, slack)
    return y_prime, report


def random_pack_cover(d, k, rng, density=0.7):
    a = rng.uniform(0.0, 1.0, size=(k, d)) * (rng.random((k, d)) < density)
    # guarantee every coordinate is covered
    for j in range(d):
        if not np.any(a[:, j] > 0):
            a[rng.integers(k), j] = rng.uniform(0.2, 1.0)
    return make_pack_cover(a, rng.uniform(0.5, 2.0, size=k), rng.uniform(0.5, 2.0, size=d))
