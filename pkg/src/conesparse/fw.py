"""Frank-Wolfe sparsifier over the barrier-rescaled atoms.

The atoms are rescaled by ``w_i = -D phi(e)[x_i] / nu`` so that ``e`` is their
barycentre, then ``f(z) = 0.5 * ||z - e||_e^2`` is minimized over their convex
hull with the open-loop step ``2 / (t + 2)``.  After ``ceil(16 nu^2 / eps^2)``
steps, ``||z - e||_e <= eps`` and hence ``|z - e|_e <= eps``.

Everything is done in weight space: with ``P`` the Gram matrix of the rescaled
atoms in the local inner product at ``e``, the objective and its gradient are
quadratic in the convex weights, so each step costs ``O(m)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from conesparse.cone_core import SparsifierResult, order_norm
from conesparse.errors import DegenerateElement


def fw_bound(nu, eps):
    return math.ceil(16.0 * nu**2 / eps**2)


@dataclass
class FwState:
    t: int
    z: np.ndarray
    weights: np.ndarray
    objective: float


def fw_rescale(instance):
    """Return ``(atoms_tilde, w)`` with ``atoms_tilde[i] = x_i / w_i``."""
    cone, e = instance.cone, instance.target
    ge = cone.grad(cone.check_interior(e, "target"))
    w = -(instance.elements @ ge) / cone.nu
    if np.any(w <= 1e-14):
        bad = int(np.flatnonzero(w <= 1e-14)[0])
        raise DegenerateElement(f"atom {int(instance.kept[bad])} has rescaling weight {w[bad]:.3e}")
    return instance.elements / w[:, None], w


def fw_linear_oracle(cone, e, z, atoms):
    """Index of the atom minimizing ``D^2 phi(e)[z - e, atom]``; first on ties."""
    g = cone.hess_apply(np.asarray(e, dtype=float), np.asarray(z, dtype=float) - e)
    scores = np.asarray(atoms) @ g
    best = scores.min()
    tie = np.abs(scores - best) <= 1e-12 * (1.0 + abs(best))
    return int(np.flatnonzero(tie)[0])


def _gram(cone, e, atoms):
    h = np.vstack([cone.hess_apply(e, a) for a in atoms])
    p = atoms @ h.T
    return 0.5 * (p + p.T), h @ e


def fw_sparsify(instance, early_exit=True, log_every=1):
    """Plain Frank-Wolfe with ``alpha_t = 2 / (t + 2)``.

    Starts from the rescaled atom with the smallest objective.  Stops after
    ``ceil(16 nu^2 / eps^2)`` steps, or earlier once ``f(z_t) <= eps^2 / 2``
    when ``early_exit`` is set.  The trace logs ``f(z_t)`` at every
    ``log_every``-th iteration.
    """
    cone, e, eps = instance.cone, instance.target, instance.epsilon
    e = cone.check_interior(e, "target")
    atoms, w = fw_rescale(instance)
    T = fw_bound(cone.nu, eps)
    P, r = _gram(cone, e, atoms)
    s = float(cone.hess_apply(e, e) @ e)

    # f(c) = 0.5 * (c'Pc - 2 c'r + s);  grad pairing with atom j = (Pc - r)_j
    f_atoms = 0.5 * (np.diag(P) - 2.0 * r + s)
    j0 = int(np.argmin(f_atoms))
    c = np.zeros(instance.m)
    c[j0] = 1.0
    pc = P[:, j0].copy()
    f = float(f_atoms[j0])
    target_f = eps**2 / 2.0
    trace = [{"t": 0, "objective": f, "j": int(instance.kept[j0])}]

    t = 0
    while t < T and not (early_exit and f <= target_f):
        scores = pc - r
        best = scores.min()
        j = int(np.flatnonzero(scores <= best + 1e-12 * (1.0 + abs(best)))[0])
        alpha = 2.0 / (t + 2.0)
        c *= 1.0 - alpha
        c[j] += alpha
        pc = (1.0 - alpha) * pc + alpha * P[:, j]
        f = 0.5 * float(c @ pc - 2.0 * c @ r + s)
        t += 1
        if t % log_every == 0 or t == T:
            trace.append({"t": t, "objective": f, "j": int(instance.kept[j]), "alpha": alpha})

    rows = np.flatnonzero(c > 0)
    weights = c[rows] / w[rows]
    y = weights @ instance.elements[rows]
    achieved = order_norm(cone, e, y - e).value
    return SparsifierResult(
        support=instance.kept[rows],
        weights=weights,
        achieved_eps=achieved,
        bound=T,
        engine="fw",
        iterations=t,
        trace=trace,
    )


def fw_state(instance, result):
    """Reconstruct the iterate ``z`` and its objective from a result (for checks)."""
    cone, e = instance.cone, instance.target
    pos, _ = instance.rows_for(result.support)
    _, w = fw_rescale(instance)
    conv = result.weights * w[pos]
    z = result.weights @ instance.elements[pos]
    d = z - e
    return FwState(result.iterations, z, conv, 0.5 * float(cone.hess_apply(e, d) @ d))
