"""Barrier-guided greedy sparsifier (BSS-style) for general cones.

Each iteration shifts the upper barrier by ``1 + eps/2`` and the lower one by
``1 - eps/2``, then adds ``alpha * x_j`` for the atom maximizing
``L[x_j] - U[x_j]``.  The two step functionals are linear, so one gradient and
one Hessian-times-``e`` vector at each shifted point pair them against every
atom in a single matrix product.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from conesparse.barriers import scale_of
from conesparse.cone_core import SparsifierResult, order_norm
from conesparse.errors import NonPairwiseBarrier, StepNotFound

MONOTONE_SLACK = 1e-8
GUARD_SLACK = 1e-10


def bss_bound(nu, eps):
    return math.ceil(4.0 * nu / eps**2)


def default_threads():
    try:
        return max(1, int(os.environ.get("CONESPARSE_THREADS", "1")))
    except ValueError:
        return 1


def pair_atoms(atoms, vec, threads=1):
    """``atoms @ vec``, optionally split row-wise over a thread pool."""
    if threads <= 1 or atoms.shape[0] < 2 * threads:
        return atoms @ vec
    chunks = np.array_split(np.arange(atoms.shape[0]), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda idx: atoms[idx] @ vec, chunks))
    return np.concatenate(parts)


@dataclass
class BssState:
    t: int
    z: np.ndarray
    y: np.ndarray
    u: float
    ell: float
    phi_upper: float
    phi_lower: float


@dataclass
class StepFunctionals:
    U_vals: np.ndarray
    L_vals: np.ndarray
    chosen_j: int
    alpha: float


def barrier_upper(cone, e, x, u_shift):
    """``-D phi(u e - x)[e]``."""
    p = cone.check_interior(u_shift * np.asarray(e) - np.asarray(x), "u e - x")
    return -float(cone.grad(p) @ e)


def barrier_lower(cone, e, x, ell_shift):
    """``-D phi(x - l e)[e]``."""
    p = cone.check_interior(np.asarray(x) - ell_shift * np.asarray(e), "x - l e")
    return -float(cone.grad(p) @ e)


def initial_state(instance):
    nu, eps = instance.cone.nu, instance.epsilon
    u0 = 2.0 * nu / eps
    e = instance.target
    z0 = np.zeros(instance.cone.dim)
    phi_u = barrier_upper(instance.cone, e, z0, u0)
    phi_l = barrier_lower(instance.cone, e, z0, -u0)
    return BssState(0, z0, np.zeros(instance.m), u0, -u0, phi_u, phi_l)


def step_functionals(state, instance, threads=1):
    """Evaluate ``U[x_j]`` and ``L[x_j]`` at the shifted barriers and pick a step."""
    cone, e, eps = instance.cone, instance.target, instance.epsilon
    du, dl = 1.0 + eps / 2.0, 1.0 - eps / 2.0
    up = (state.u + du) * e - state.z
    lo = state.z - (state.ell + dl) * e

    g_up, h_up = cone.grad(up), cone.hess_apply(up, e)
    g_lo, h_lo = cone.grad(lo), cone.hess_apply(lo, e)
    U = pair_atoms(instance.elements, h_up / (du * (h_up @ e)) - g_up, threads)
    L = pair_atoms(instance.elements, h_lo / (dl * (h_lo @ e)) + g_lo, threads)

    gap = np.where(U > 0, L - U, -np.inf)
    j = int(np.argmax(gap))  # argmax returns the first maximizer
    if not np.isfinite(gap[j]) or gap[j] < -1e-9:
        raise StepNotFound(
            f"no atom satisfies L >= U at iteration {state.t + 1}",
            iteration=state.t + 1,
            diagnostics={"max_gap": float(np.max(L - U)), "U_sum": float(U.sum()), "L_sum": float(L.sum())},
        )
    alpha = 2.0 / (L[j] + U[j])
    return StepFunctionals(U, L, j, float(alpha))


def bss_sparsify(instance, threads=None, check_monotone=True):
    """Run the generalized BSS iteration for ``ceil(4 nu / eps^2)`` steps.

    Returns weights ``y_T / T`` on the selected atoms.  Raises
    :class:`StepNotFound` if no admissible atom exists or a shifted point
    loses strict interiority (both signal numerical breakdown).
    """
    cone = instance.cone
    if not cone.pairwise:
        raise NonPairwiseBarrier(f"{cone.describe()} carries a barrier that is not pairwise-self-concordant")
    threads = default_threads() if threads is None else threads
    e, eps = instance.target, instance.epsilon
    T = bss_bound(cone.nu, eps)
    du, dl = 1.0 + eps / 2.0, 1.0 - eps / 2.0

    state = initial_state(instance)
    trace = [{"t": 0, "u": state.u, "ell": state.ell, "phi_upper": state.phi_upper,
              "phi_lower": state.phi_lower}]
    for t in range(1, T + 1):
        step = step_functionals(state, instance, threads)
        j, alpha = step.chosen_j, step.alpha
        z = state.z + alpha * instance.elements[j]
        u, ell = state.u + du, state.ell + dl

        up, lo = u * e - z, z - ell * e
        for name, p in (("u e - z", up), ("z - l e", lo)):
            if cone.slack(p) < GUARD_SLACK * scale_of(p):
                raise StepNotFound(
                    f"{name} lost strict interiority at iteration {t}",
                    iteration=t,
                    diagnostics={"slack": cone.slack(p), "j": j, "alpha": alpha},
                )
        phi_u = -float(cone.grad(up) @ e)
        phi_l = -float(cone.grad(lo) @ e)
        if check_monotone and (
            phi_u > state.phi_upper + MONOTONE_SLACK or phi_l > state.phi_lower + MONOTONE_SLACK
        ):
            raise StepNotFound(
                f"barrier increased at iteration {t}",
                iteration=t,
                diagnostics={"phi_upper": phi_u, "prev_upper": state.phi_upper,
                             "phi_lower": phi_l, "prev_lower": state.phi_lower},
            )
        y = state.y.copy()
        y[j] += alpha
        trace.append({
            "t": t, "u": u, "ell": ell, "phi_upper": phi_u, "phi_lower": phi_l,
            "j": int(instance.kept[j]), "alpha": alpha,
            "U_j": float(step.U_vals[j]), "L_j": float(step.L_vals[j]),
        })
        state = BssState(t, z, y, u, ell, phi_u, phi_l)

    rows = np.flatnonzero(state.y > 0)
    weights = state.y[rows] / T
    ysum = weights @ instance.elements[rows]
    achieved = order_norm(cone, e, ysum - e).value
    return SparsifierResult(
        support=instance.kept[rows],
        weights=weights,
        achieved_eps=achieved,
        bound=T,
        engine="bss",
        iterations=T,
        trace=trace,
    )
