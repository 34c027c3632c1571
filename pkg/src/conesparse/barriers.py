"""Catalogue of cones with logarithmically homogeneous barrier oracles.

Every cone works on points given as flat ``float64`` vectors in a canonical
coordinate layout:

* ``Orthant(n)``: the vector itself.
* ``Psd(d)``: the full ``d x d`` symmetric matrix, row-major.
* ``SecondOrder(n)``: ``(x0, xbar)`` with ``xbar`` of length ``n - 1``.
* ``SpectralEpigraph(n, k)``: ``X`` (``n x k``, row-major) followed by ``t``.
* ``Product(parts)``: the parts' coordinates concatenated.

Derivative oracles are exposed in two forms.  The vector forms
(:meth:`Cone.grad`, :meth:`Cone.hess_apply`) return the coefficient vector of a
linear functional in these coordinates, so that ``grad(x) @ u`` equals
``D phi(x)[u]`` and ``hess_apply(x, v) @ u`` equals ``D^2 phi(x)[u, v]``.  The
engines pair those vectors against all candidate atoms at once.  The scalar
module-level functions (:func:`grad_dir`, :func:`hess_bilin`, ...) validate
their inputs first and are what user code should call.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from conesparse.errors import InputError, NegativeQuadraticForm, NonInterior

#: relative tolerance for "x is in K"
MEMBERSHIP_TOL = 1e-9
#: relative margin for "x is strictly inside K"
INTERIOR_TOL = 1e-7


def scale_of(x):
    return 1.0 + float(np.max(np.abs(x))) if np.size(x) else 1.0


def _sym(a):
    return 0.5 * (a + a.T)


class Cone:
    """Base class for a catalogued cone and its barrier.

    Subclasses implement the raw oracles, which assume a strictly interior
    point and do not check it.
    """

    kind = "cone"
    nu: float
    dim: int
    #: whether the barrier is known to be pairwise-self-concordant
    pairwise = True

    # -- membership ---------------------------------------------------------
    def slack(self, x) -> float:
        """Signed distance-like membership slack; ``>= 0`` iff ``x`` is in K."""
        raise NotImplementedError

    def contains(self, x, tol=MEMBERSHIP_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        return self.slack(x) >= -tol * scale_of(x)

    def is_interior(self, x, tol=INTERIOR_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        return self.slack(x) >= tol * scale_of(x)

    def check_interior(self, x, what="point"):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise InputError(f"{what} has length {x.size}, expected {self.dim}")
        if not np.all(np.isfinite(x)):
            raise NonInterior(f"{what} has non-finite coordinates")
        s = self.slack(x)
        if s < INTERIOR_TOL * scale_of(x):
            raise NonInterior(f"{what} is not strictly inside {self.describe()} (slack {s:.3e})")
        return x

    def canonical(self, x):
        """Project raw coordinates onto the canonical layout (e.g. symmetrize)."""
        return np.asarray(x, dtype=float).reshape(self.dim)

    # -- barrier oracles ----------------------------------------------------
    def value(self, x) -> float:
        raise NotImplementedError

    def grad(self, x):
        raise NotImplementedError

    def hess_apply(self, x, v):
        raise NotImplementedError

    def third(self, x, u, v, w) -> float:
        raise NotImplementedError

    def order_norm_exact(self, x, u):
        """Closed-form ``|u|_x``; ``None`` when the cone has none."""
        return None

    # -- sampling (property tests, benches) ---------------------------------
    def identity(self):
        """A canonical, well-centred interior point."""
        raise NotImplementedError

    def sample_interior(self, rng):
        raise NotImplementedError

    def sample_generator(self, rng):
        """A random boundary point of K, used as an extreme-ray-like generator."""
        raise NotImplementedError

    def sample_member(self, rng, count=None):
        count = count or max(2, min(self.dim, 6))
        c = rng.uniform(0.0, 1.0, size=count)
        return sum(ci * self.sample_generator(rng) for ci in c)

    def sample_direction(self, rng):
        return self.canonical(rng.standard_normal(self.dim))

    # -- misc ----------------------------------------------------------------
    def to_spec(self) -> dict:
        raise NotImplementedError

    def describe(self) -> str:
        return self.kind


ConeHandle = Cone


@dataclass(frozen=True)
class Orthant(Cone):
    n: int
    kind = "orthant"

    @property
    def dim(self):
        return self.n

    @property
    def nu(self):
        return float(self.n)

    def slack(self, x):
        return float(np.min(x))

    def value(self, x):
        return -float(np.sum(np.log(x)))

    def grad(self, x):
        return -1.0 / x

    def hess_apply(self, x, v):
        return v / x**2

    def third(self, x, u, v, w):
        return -2.0 * float(np.sum(u * v * w / x**3))

    def order_norm_exact(self, x, u):
        return float(np.max(np.abs(u / x)))

    def identity(self):
        return np.ones(self.n)

    def sample_interior(self, rng):
        return rng.uniform(0.5, 2.0, size=self.n)

    def sample_generator(self, rng):
        g = np.zeros(self.n)
        g[rng.integers(self.n)] = 1.0
        return g

    def to_spec(self):
        return {"type": "orthant", "n": self.n}

    def describe(self):
        return f"Orthant({self.n})"


@dataclass(frozen=True)
class Psd(Cone):
    d: int
    kind = "psd"

    @property
    def dim(self):
        return self.d * self.d

    @property
    def nu(self):
        return float(self.d)

    def mat(self, x):
        return np.asarray(x, dtype=float).reshape(self.d, self.d)

    def canonical(self, x):
        return _sym(self.mat(x)).ravel()

    def slack(self, x):
        return float(np.linalg.eigvalsh(_sym(self.mat(x)))[0])

    def _chol(self, x):
        return sla.cho_factor(_sym(self.mat(x)), lower=True)

    def _inv(self, x):
        return sla.cho_solve(self._chol(x), np.eye(self.d))

    def value(self, x):
        c, _ = self._chol(x)
        return -2.0 * float(np.sum(np.log(np.diag(c))))

    def grad(self, x):
        return -_sym(self._inv(x)).ravel()

    def hess_apply(self, x, v):
        xi = self._inv(x)
        return _sym(xi @ self.mat(v) @ xi).ravel()

    def third(self, x, u, v, w):
        xi = self._inv(x)
        a, b, c = (xi @ self.mat(m) for m in (u, v, w))
        return -float(np.trace(a @ b @ c) + np.trace(b @ a @ c))

    def order_norm_exact(self, x, u):
        c, _ = self._chol(x)
        y = sla.solve_triangular(c, self.mat(u), lower=True)
        y = sla.solve_triangular(c, y.T, lower=True)
        ev = np.linalg.eigvalsh(_sym(y))
        return float(max(abs(ev[0]), abs(ev[-1])))

    def identity(self):
        return np.eye(self.d).ravel()

    def sample_interior(self, rng):
        g = rng.standard_normal((self.d, self.d))
        return (g @ g.T / self.d + 0.3 * np.eye(self.d)).ravel()

    def sample_generator(self, rng):
        g = rng.standard_normal(self.d)
        return np.outer(g, g).ravel() / self.d

    def to_spec(self):
        return {"type": "psd", "d": self.d}

    def describe(self):
        return f"Psd({self.d})"


@dataclass(frozen=True)
class SecondOrder(Cone):
    """Lorentz cone ``x0 >= |xbar|`` with the degree-2 barrier ``-log(x0^2 - |xbar|^2)``."""

    n: int
    kind = "soc"

    def __post_init__(self):
        if self.n < 2:
            raise InputError("SecondOrder needs n >= 2")

    @property
    def dim(self):
        return self.n

    @property
    def nu(self):
        return 2.0

    def _jx(self, x):
        j = -np.asarray(x, dtype=float)
        j[0] = -j[0]
        return j

    def _q(self, x):
        return float(x[0] ** 2 - x[1:] @ x[1:])

    def slack(self, x):
        return float(x[0] - np.linalg.norm(x[1:]))

    def value(self, x):
        return -float(np.log(self._q(x)))

    def grad(self, x):
        return -2.0 * self._jx(x) / self._q(x)

    def hess_apply(self, x, v):
        q = self._q(x)
        jx = self._jx(x)
        return -2.0 * self._jx(v) / q + 4.0 * jx * (jx @ v) / q**2

    def third(self, x, u, v, w):
        q = self._q(x)
        jx = self._jx(x)
        au, av, aw = jx @ u, jx @ v, jx @ w
        buv, buw, bvw = self._jx(u) @ v, self._jx(u) @ w, self._jx(v) @ w
        return float(4.0 * (buv * aw + buw * av + bvw * au) / q**2 - 16.0 * au * av * aw / q**3)

    def order_norm_exact(self, x, u):
        # roots of q(u - s x) = 0, i.e. the hyperbolic eigenvalues of u relative to x
        qx, qu, a = self._q(x), self._q(u), self._jx(x) @ u
        disc = max(a * a - qx * qu, 0.0)
        r = np.sqrt(disc)
        return float(max(abs(a + r), abs(a - r)) / qx)

    def identity(self):
        e = np.zeros(self.n)
        e[0] = 1.0
        return e

    def sample_interior(self, rng):
        xb = rng.standard_normal(self.n - 1) / np.sqrt(self.n)
        return np.concatenate([[np.linalg.norm(xb) * rng.uniform(1.2, 2.0) + 0.3], xb])

    def sample_generator(self, rng):
        xb = rng.standard_normal(self.n - 1) / np.sqrt(self.n)
        return np.concatenate([[np.linalg.norm(xb)], xb])

    def to_spec(self):
        return {"type": "soc", "n": self.n}

    def describe(self):
        return f"SecondOrder({self.n})"


@dataclass(frozen=True)
class SpectralEpigraph(Cone):
    """Epigraph ``{(X, t): sigma_max(X) <= t}`` of the spectral norm on ``n x k`` matrices.

    ``barrier="hyperbolic"`` is ``-log det(t^2 I - X^T X)`` (parameter ``2k``,
    pairwise-self-concordant).  ``barrier="kplus1"`` is
    ``-log det(t I - X^T X / t) - log t`` (parameter ``k + 1``), which is only
    accepted by the Frank-Wolfe engine.
    """

    n: int
    k: int
    barrier: str = "hyperbolic"
    kind = "spectral_epigraph"

    def __post_init__(self):
        if self.k < 1 or self.n < self.k:
            raise InputError("SpectralEpigraph needs n >= k >= 1")
        if self.barrier not in ("hyperbolic", "kplus1"):
            raise InputError(f"unknown spectral epigraph barrier {self.barrier!r}")

    @property
    def dim(self):
        return self.n * self.k + 1

    @property
    def nu(self):
        return float(2 * self.k if self.barrier == "hyperbolic" else self.k + 1)

    @property
    def pairwise(self):
        return self.barrier == "hyperbolic"

    def split(self, x):
        x = np.asarray(x, dtype=float)
        return x[:-1].reshape(self.n, self.k), float(x[-1])

    def join(self, X, t):
        return np.concatenate([np.asarray(X, dtype=float).ravel(), [t]])

    def slack(self, x):
        X, t = self.split(x)
        return t - float(np.linalg.norm(X, 2))

    def _m(self, x):
        X, t = self.split(x)
        return X, t, t * t * np.eye(self.k) - X.T @ X

    # extra term (k - 1) log t turns the hyperbolic barrier into the (k+1) one
    @property
    def _log_t_coef(self):
        return 0.0 if self.barrier == "hyperbolic" else float(self.k - 1)

    def value(self, x):
        X, t, m = self._m(x)
        c, _ = sla.cho_factor(m, lower=True)
        return -2.0 * float(np.sum(np.log(np.diag(c)))) + self._log_t_coef * np.log(t)

    def grad(self, x):
        X, t, m = self._m(x)
        mi = np.linalg.inv(m)
        g = self.join(2.0 * X @ mi, -2.0 * t * np.trace(mi))
        g[-1] += self._log_t_coef / t
        return g

    def _a(self, X, t, d):
        U, s = self.split(d)
        return 2.0 * t * s * np.eye(self.k) - X.T @ U - U.T @ X

    def _b(self, d1, d2):
        U, s = self.split(d1)
        V, r = self.split(d2)
        return 2.0 * s * r * np.eye(self.k) - U.T @ V - V.T @ U

    def hess_apply(self, x, v):
        X, t, m = self._m(x)
        mi = np.linalg.inv(m)
        V, r = self.split(v)
        c = mi @ self._a(X, t, v) @ mi
        h = self.join(-2.0 * X @ c + 2.0 * V @ mi, 2.0 * t * np.trace(c) - 2.0 * r * np.trace(mi))
        h[-1] -= self._log_t_coef * r / t**2
        return h

    def third(self, x, u, v, w):
        X, t, m = self._m(x)
        mi = np.linalg.inv(m)
        au, av, aw = (mi @ self._a(X, t, d) for d in (u, v, w))
        buv, buw, bvw = (mi @ self._b(p, q) for p, q in ((u, v), (u, w), (v, w)))
        val = (
            -np.trace(aw @ av @ au)
            - np.trace(av @ aw @ au)
            + np.trace(bvw @ au)
            + np.trace(av @ buw)
            + np.trace(aw @ buv)
        )
        if self._log_t_coef:
            val += self._log_t_coef * 2.0 * u[-1] * v[-1] * w[-1] / t**3
        return float(val)

    def embed(self, x):
        """Linear map onto ``(n+k) x (n+k)`` symmetric matrices; K is the PSD preimage."""
        X, t = self.split(x)
        top = np.hstack([t * np.eye(self.k), X.T])
        bottom = np.hstack([X, t * np.eye(self.n)])
        return np.vstack([top, bottom])

    def order_norm_exact(self, x, u):
        c = np.linalg.cholesky(self.embed(x))
        y = sla.solve_triangular(c, self.embed(u), lower=True)
        y = sla.solve_triangular(c, y.T, lower=True)
        ev = np.linalg.eigvalsh(_sym(y))
        return float(max(abs(ev[0]), abs(ev[-1])))

    def identity(self):
        return self.join(np.zeros((self.n, self.k)), 1.0)

    def sample_interior(self, rng):
        X = rng.standard_normal((self.n, self.k)) / np.sqrt(self.n)
        return self.join(X, np.linalg.norm(X, 2) * rng.uniform(1.2, 2.0) + 0.2)

    def sample_generator(self, rng):
        X = rng.standard_normal((self.n, self.k)) / np.sqrt(self.n)
        return self.join(X, np.linalg.norm(X, 2))

    def to_spec(self):
        spec = {"type": "spectral_epigraph", "n": self.n, "k": self.k}
        if self.barrier != "hyperbolic":
            spec["barrier"] = self.barrier
        return spec

    def describe(self):
        suffix = "" if self.barrier == "hyperbolic" else ", k+1 barrier"
        return f"SpectralEpigraph({self.n},{self.k}{suffix})"


@dataclass(frozen=True)
class Product(Cone):
    parts: tuple = field(default_factory=tuple)
    kind = "product"

    def __post_init__(self):
        if not self.parts:
            raise InputError("Product needs at least one part")
        object.__setattr__(self, "parts", tuple(self.parts))

    @property
    def dim(self):
        return sum(p.dim for p in self.parts)

    @property
    def nu(self):
        return float(sum(p.nu for p in self.parts))

    @property
    def pairwise(self):
        return all(p.pairwise for p in self.parts)

    def _slices(self):
        start = 0
        for p in self.parts:
            yield p, slice(start, start + p.dim)
            start += p.dim

    def _cat(self, fn):
        return np.concatenate([fn(p, s) for p, s in self._slices()])

    def canonical(self, x):
        x = np.asarray(x, dtype=float)
        return self._cat(lambda p, s: p.canonical(x[s]))

    def slack(self, x):
        return min(p.slack(x[s]) for p, s in self._slices())

    def value(self, x):
        return sum(p.value(x[s]) for p, s in self._slices())

    def grad(self, x):
        return self._cat(lambda p, s: p.grad(x[s]))

    def hess_apply(self, x, v):
        return self._cat(lambda p, s: p.hess_apply(x[s], v[s]))

    def third(self, x, u, v, w):
        return sum(p.third(x[s], u[s], v[s], w[s]) for p, s in self._slices())

    def order_norm_exact(self, x, u):
        vals = [p.order_norm_exact(x[s], u[s]) for p, s in self._slices()]
        if any(v is None for v in vals):
            return None
        return max(vals)

    def identity(self):
        return self._cat(lambda p, s: p.identity())

    def sample_interior(self, rng):
        return self._cat(lambda p, s: p.sample_interior(rng))

    def sample_generator(self, rng):
        # a generator of the product lives in a single factor
        which = rng.integers(len(self.parts))
        return self._cat(lambda p, s: p.sample_generator(rng) if p is self.parts[which] else np.zeros(p.dim))

    def sample_member(self, rng, count=None):
        return self._cat(lambda p, s: p.sample_member(rng, count))

    def sample_direction(self, rng):
        return self._cat(lambda p, s: p.sample_direction(rng))

    def to_spec(self):
        return {"type": "product", "parts": [p.to_spec() for p in self.parts]}

    def describe(self):
        return "Product(" + ", ".join(p.describe() for p in self.parts) + ")"


def cone_from_spec(spec) -> Cone:
    """Build a cone from its JSON description, e.g. ``{"type": "psd", "d": 4}``."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise InputError(f"cone spec must be an object with a 'type' field, got {spec!r}")
    kind = spec["type"]
    try:
        if kind == "orthant":
            return Orthant(int(spec["n"]))
        if kind == "psd":
            return Psd(int(spec["d"]))
        if kind == "soc":
            return SecondOrder(int(spec["n"]))
        if kind == "spectral_epigraph":
            return SpectralEpigraph(int(spec["n"]), int(spec["k"]), spec.get("barrier", "hyperbolic"))
        if kind == "product":
            return Product(tuple(cone_from_spec(p) for p in spec["parts"]))
    except KeyError as exc:
        raise InputError(f"cone spec {spec!r} is missing field {exc}") from None
    raise InputError(f"unknown cone type {kind!r}")


# -- checked scalar oracles ----------------------------------------------------


def barrier_value(cone, x):
    x = cone.check_interior(x)
    return cone.value(x)


def grad_dir(cone, x, u):
    x = cone.check_interior(x)
    return float(cone.grad(x) @ np.asarray(u, dtype=float))


def hess_bilin(cone, x, u, v):
    x = cone.check_interior(x)
    return float(cone.hess_apply(x, np.asarray(v, dtype=float)) @ np.asarray(u, dtype=float))


def third_trilin(cone, x, u, v, w):
    x = cone.check_interior(x)
    return cone.third(x, *(np.asarray(a, dtype=float) for a in (u, v, w)))


def hessian_norm(cone, e, u):
    """Local norm ``sqrt(D^2 phi(e)[u, u])``."""
    q = hess_bilin(cone, e, u, u)
    if q < -1e-10:
        raise NegativeQuadraticForm(f"D^2 phi(e)[u,u] = {q:.3e} < 0")
    return float(np.sqrt(max(q, 0.0)))
