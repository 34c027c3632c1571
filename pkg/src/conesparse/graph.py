"""Graph spectral sparsification on top of the PSD engines.

Laplacians live on the complement of the all-ones vector, so every edge atom
``w (e_i - e_j)(e_i - e_j)^T`` is compressed with a fixed Helmert basis ``Q``
to ``w (Q^T b)(Q^T b)^T`` in ``Psd(n - 1)``, where the reduced Laplacian of a
connected graph is positive definite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from conesparse.barriers import Psd
from conesparse.bss import bss_bound, bss_sparsify
from conesparse.cone_core import SandwichCertificate, make_instance
from conesparse.errors import Disconnected, InputError
from conesparse.fw import fw_sparsify
from conesparse.verify import certify


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: tuple  # of (i, j, w) with i < j, w > 0

    @classmethod
    def from_edges(cls, n, edges):
        """Normalize orientation, merge duplicates by summing weights, validate."""
        merged = {}
        for i, j, w in edges:
            i, j, w = int(i), int(j), float(w)
            if i == j:
                raise InputError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"edge ({i}, {j}) out of range for n={n}")
            if not w > 0:
                raise InputError(f"edge ({i}, {j}) has non-positive weight {w}")
            key = (min(i, j), max(i, j))
            merged[key] = merged.get(key, 0.0) + w
        return cls(int(n), tuple((i, j, w) for (i, j), w in sorted(merged.items())))

    def laplacian(self):
        L = np.zeros((self.n, self.n))
        for i, j, w in self.edges:
            L[i, i] += w
            L[j, j] += w
            L[i, j] -= w
            L[j, i] -= w
        return L

    def to_text(self):
        return "".join(f"{i} {j} {w:.17g}\n" for i, j, w in self.edges)


def read_edge_list(text, n=None):
    """Parse whitespace ``i j w`` lines (0-based; ``#`` starts a comment)."""
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"line {lineno}: expected 'i j w', got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError:
            raise InputError(f"line {lineno}: cannot parse {line!r}") from None
    if not edges:
        raise InputError("graph has no edges")
    if n is None:
        n = 1 + max(max(i, j) for i, j, _ in edges)
    return WeightedGraph.from_edges(n, edges)


def helmert_basis(n):
    """Orthonormal ``n x (n-1)`` basis of the vectors orthogonal to all-ones."""
    q = np.zeros((n, n - 1))
    for k in range(1, n):
        q[:k, k - 1] = 1.0
        q[k, k - 1] = -float(k)
        q[:, k - 1] /= math.sqrt(k * (k + 1))
    return q


@dataclass(frozen=True)
class ReducedInstance:
    graph: WeightedGraph
    basis: np.ndarray
    instance: object  # SparsificationInstance over Psd(n - 1)


def graph_to_instance(g, eps):
    if g.n < 2:
        raise InputError("graph needs at least two vertices")
    q = helmert_basis(g.n)
    atoms = []
    for i, j, w in g.edges:
        b = q[i] - q[j]
        atoms.append(w * np.outer(b, b).ravel())
    reduced = q.T @ g.laplacian() @ q
    reduced = 0.5 * (reduced + reduced.T)
    ev = np.linalg.eigvalsh(reduced)
    if ev[0] <= 1e-9 * (1.0 + np.max(np.abs(reduced))):
        raise Disconnected("graph is disconnected (reduced Laplacian is singular)")
    inst = make_instance(Psd(g.n - 1), atoms, eps, target=reduced.ravel())
    return ReducedInstance(g, q, inst)


def sparsify_graph(g, eps, engine="bss", threads=None):
    """Return ``(sparse_graph, certificate, result)``.

    Output edges are a subset of the input with weights ``lambda_e * w_e``.
    """
    red = graph_to_instance(g, eps)
    if engine == "bss":
        result = bss_sparsify(red.instance, threads=threads)
    elif engine == "fw":
        result = fw_sparsify(red.instance)
    else:
        raise InputError(f"unknown engine {engine!r}")
    cert = certify(red.instance, result)
    result.certificate = cert
    edges = [(g.edges[k][0], g.edges[k][1], g.edges[k][2] * lam) for k, lam in zip(result.support, result.weights)]
    return WeightedGraph(g.n, tuple(edges)), cert, result


def edge_bound(n, eps):
    return bss_bound(n - 1, eps)


def quadratic_form_ratio(g, h, v):
    """``v^T L_h v / v^T L_g v``."""
    return float(v @ h.laplacian() @ v) / float(v @ g.laplacian() @ v)


def whitened_spectrum(g, h):
    """Eigenvalues of ``L_g^{-1/2} L_h L_g^{-1/2}`` on the complement of all-ones."""
    q = helmert_basis(g.n)
    a = q.T @ g.laplacian() @ q
    b = q.T @ h.laplacian() @ q
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    s = v @ np.diag(w**-0.5) @ v.T
    return np.linalg.eigvalsh(0.5 * (s @ b @ s + (s @ b @ s).T))


def complete_graph(n, weight=1.0):
    return WeightedGraph.from_edges(n, [(i, j, weight) for i in range(n) for j in range(i + 1, n)])


def random_graph(n, p, rng):
    """Erdos-Renyi graph with uniform(0.5, 2) weights, plus a path to keep it connected."""
    edges = [(i, i + 1, rng.uniform(0.5, 2.0)) for i in range(n - 1)]
    for i in range(n):
        for j in range(i + 2, n):
            if rng.random() < p:
                edges.append((i, j, rng.uniform(0.5, 2.0)))
    return WeightedGraph.from_edges(n, edges)


__all__ = [
    "WeightedGraph",
    "ReducedInstance",
    "SandwichCertificate",
    "read_edge_list",
    "helmert_basis",
    "graph_to_instance",
    "sparsify_graph",
    "edge_bound",
    "whitened_spectrum",
    "quadratic_form_ratio",
    "complete_graph",
    "random_graph",
]
