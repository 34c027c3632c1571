"""Seeded instance generators shared by the bench, scripts and tests."""

from __future__ import annotations

import numpy as np

from conesparse.barriers import Orthant, Psd, SecondOrder
from conesparse.cone_core import make_instance


def psd_rank1_instance(d, m, eps, rng):
    """``m`` random rank-one atoms rescaled so that they sum to the identity."""
    g = rng.standard_normal((m, d))
    w, v = np.linalg.eigh(g.T @ g)
    h = g @ (v @ np.diag(w**-0.5) @ v.T)
    atoms = np.einsum("ij,ik->ijk", h, h).reshape(m, d * d)
    return make_instance(Psd(d), atoms, eps, target=np.eye(d).ravel())


def conic_instance(cone, m, eps, rng):
    """``m`` boundary generators of ``cone``; the target is their sum."""
    return make_instance(cone, [cone.sample_generator(rng) for _ in range(m)], eps)


def orthant_instance(n, m, eps, rng):
    """Random nonnegative vectors with about half their entries zero."""
    x = rng.uniform(0.0, 1.0, size=(m, n)) * (rng.random((m, n)) < 0.5)
    x[np.arange(n) % m, np.arange(n)] += 0.1  # keep every coordinate covered
    return make_instance(Orthant(n), x, eps)


def soc_instance(n, m, eps, rng):
    return conic_instance(SecondOrder(n), m, eps, rng)
