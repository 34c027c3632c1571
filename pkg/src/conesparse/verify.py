"""Certificates and sampled falsification suites for barrier oracles.

The suites draw random interior points and random cone members from a seeded
PCG64 generator (``numpy.random.default_rng``), so a report is reproducible
from ``(cone, samples, seed)``.  They can only falsify a law, never prove it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from conesparse.barriers import MEMBERSHIP_TOL, scale_of
from conesparse.cone_core import SandwichCertificate, in_order_interval, order_norm
from conesparse.errors import BadResult, InputError

__all__ = [
    "SandwichCertificate",
    "SuiteReport",
    "certify",
    "barrier_law_suite",
    "pairwise_sc_suite",
    "derivative_suite",
]


@dataclass
class SuiteReport:
    name: str
    cone: str
    samples: int
    seed: int
    tolerance: float
    max_violation: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(v <= self.tolerance for v in self.max_violation.values())

    def to_dict(self):
        return {
            "suite": self.name,
            "cone": self.cone,
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "max_violation": {k: float(v) for k, v in self.max_violation.items()},
            "pass": self.passed,
        }


def certify(instance, result):
    """Recompute ``y = sum lambda_i x_i`` from scratch and check the sandwich."""
    support = np.asarray(result.support, dtype=int)
    weights = np.asarray(result.weights, dtype=float)
    if support.shape != weights.shape:
        raise BadResult("support and weights differ in length")
    if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
        raise BadResult("weights must be positive and finite")
    pos, ok = instance.rows_for(support)
    if support.size and (support.min() < 0 or not np.all(ok)):
        raise BadResult("support index out of range")
    y = weights @ instance.elements[pos] if support.size else np.zeros(instance.cone.dim)
    return in_order_interval(instance.cone, instance.target, y, instance.epsilon)


def _unit(cone, e, u):
    n = np.sqrt(max(float(cone.hess_apply(e, u) @ u), 0.0))
    return u / n if n > 0 else u


def barrier_law_suite(cone, samples=100, seed=0, tolerance=1e-6):
    """Sampled checks of the four standard log-homogeneous barrier facts.

    (i) ``D phi(e)[e] = -nu``; (ii) ``-D phi(e)[u] >= ||u||_e`` for ``u`` in K;
    (iii) the Dikin ellipsoid of radius 0.999 lies in K;
    (iv) ``||u||_e >= |u|_e`` for any ``u``.
    """
    rng = np.random.default_rng(seed)
    worst = {"i": 0.0, "ii": 0.0, "iii": 0.0, "iv": 0.0}
    for _ in range(samples):
        e = cone.sample_interior(rng)
        g = cone.grad(e)
        worst["i"] = max(worst["i"], abs(g @ e + cone.nu) / cone.nu)

        u = cone.sample_member(rng)
        hn = np.sqrt(max(float(cone.hess_apply(e, u) @ u), 0.0))
        worst["ii"] = max(worst["ii"], max(0.0, hn - (-(g @ u))) / (1.0 + hn))

        d = _unit(cone, e, cone.sample_direction(rng))
        z = e + 0.999 * d
        worst["iii"] = max(worst["iii"], max(0.0, -cone.slack(z)) / scale_of(z))

        v = cone.sample_direction(rng)
        hv = np.sqrt(max(float(cone.hess_apply(e, v) @ v), 0.0))
        ov = order_norm(cone, e, v).value
        worst["iv"] = max(worst["iv"], max(0.0, ov - hv) / (1.0 + hv))
    return SuiteReport("barrier_law", cone.describe(), samples, seed, tolerance, worst)


def pairwise_sc_suite(cone, samples=200, seed=0, abs_tol=1e-7, rel_tol=1e-6):
    """Sampled checks of ``0 <= -D^3 phi(x)[v,u,u] <= 2 D^2 phi(x)[v,u] |u|_x``.

    Also spot-checks the Hessian control bound
    ``D^2 phi(x + t v)[u, v] >= D^2 phi(x)[u, v] / (1 + t |v|_x)^2`` at
    ``t`` in ``{0.1, 0.5, 1.0}``.  Violations are reported after subtracting
    the tolerances, so the report passes iff every entry is ``<= 0``.
    """
    if not cone.pairwise:
        raise InputError(f"{cone.describe()} is not flagged pairwise-self-concordant")
    rng = np.random.default_rng(seed)
    worst = {"lower": -np.inf, "upper": -np.inf, "hessian_control": -np.inf}
    for _ in range(samples):
        x = cone.sample_interior(rng)
        u = cone.sample_member(rng)
        v = cone.sample_member(rng)
        d3 = -cone.third(x, v, u, u)
        d2 = float(cone.hess_apply(x, u) @ v)
        nu_ = order_norm(cone, x, u).value
        rhs = 2.0 * d2 * nu_
        worst["lower"] = max(worst["lower"], -d3 - abs_tol)
        worst["upper"] = max(worst["upper"], d3 - rhs - rel_tol * (1.0 + abs(rhs)))
        vn = order_norm(cone, x, v).value
        for t in (0.1, 0.5, 1.0):
            lhs = float(cone.hess_apply(x + t * v, u) @ v)
            bound = d2 / (1.0 + t * vn) ** 2
            worst["hessian_control"] = max(worst["hessian_control"], bound - lhs - rel_tol * (1.0 + abs(bound)))
    return SuiteReport("pairwise_sc", cone.describe(), samples, seed, 0.0, worst)


def derivative_suite(cone, samples=50, seed=0, tolerance=1e-5):
    """Central finite differences of each oracle against the next one up.

    Steps are ``1e-5 * (1 + |x|_inf)`` for gradient and Hessian and
    ``1e-4 * (1 + |x|_inf)`` for the third derivative.  The error is measured
    as ``|fd - exact| / max(1, |exact|)``.
    """
    rng = np.random.default_rng(seed)
    worst = {"grad": 0.0, "hess": 0.0, "third": 0.0}

    def err(fd, exact):
        return abs(fd - exact) / max(1.0, abs(exact))

    for _ in range(samples):
        x = cone.sample_interior(rng)
        u, v, w = (_unit(cone, x, cone.sample_direction(rng)) for _ in range(3))
        h1 = 1e-5 * scale_of(x)
        h3 = 1e-4 * scale_of(x)
        fd = (cone.value(x + h1 * u) - cone.value(x - h1 * u)) / (2 * h1)
        worst["grad"] = max(worst["grad"], err(fd, cone.grad(x) @ u))
        fd = (cone.grad(x + h1 * v) @ u - cone.grad(x - h1 * v) @ u) / (2 * h1)
        worst["hess"] = max(worst["hess"], err(fd, cone.hess_apply(x, v) @ u))
        fd = (cone.hess_apply(x + h3 * w, v) @ u - cone.hess_apply(x - h3 * w, v) @ u) / (2 * h3)
        worst["third"] = max(worst["third"], err(fd, cone.third(x, u, v, w)))
    return SuiteReport("derivatives", cone.describe(), samples, seed, tolerance, worst)


def certificate_ok(cert, tol=MEMBERSHIP_TOL):
    return cert.passed and cert.achieved_eps <= cert.eps + 1e-7
