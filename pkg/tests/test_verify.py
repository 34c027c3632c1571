import numpy as np
import pytest

from conesparse.barriers import Orthant, Psd, SpectralEpigraph
from conesparse.bss import bss_sparsify
from conesparse.cone_core import SparsifierResult, caratheodory_reduce
from conesparse.errors import BadResult, InputError
from conesparse.generators import psd_rank1_instance
from conesparse.verify import barrier_law_suite, certify, derivative_suite, pairwise_sc_suite


def test_certify_caratheodory(rng):
    inst = psd_rank1_instance(3, 30, 0.5, rng)
    cert = certify(inst, caratheodory_reduce(inst))
    assert cert.passed and cert.achieved_eps <= 1e-7


def test_certify_detects_halved_weights(rng):
    inst = psd_rank1_instance(4, 100, 0.5, rng)
    res = bss_sparsify(inst)
    assert certify(inst, res).passed
    res.weights = res.weights / 2
    cert = certify(inst, res)
    assert not cert.passed and cert.lower_slack < 0


def test_certify_rejects_malformed(rng):
    inst = psd_rank1_instance(2, 10, 0.5, rng)
    bad = SparsifierResult([0, 1], [1.0], 0.0, 0, "x", 0, [], None)
    with pytest.raises(BadResult):
        certify(inst, bad)
    bad = SparsifierResult([99], [1.0], 0.0, 0, "x", 0, [], None)
    with pytest.raises(BadResult):
        certify(inst, bad)


def test_barrier_laws(cone):
    rep = barrier_law_suite(cone, samples=50, seed=3)
    assert rep.passed, rep.max_violation


def test_barrier_laws_psd_tight():
    rep = barrier_law_suite(Psd(3), samples=100, seed=0)
    assert max(rep.max_violation.values()) <= 1e-7


def test_pairwise(pairwise_cone):
    assert pairwise_sc_suite(pairwise_cone, samples=100, seed=5).passed


def test_pairwise_orthant_identity(rng):
    # -D3 phi(x)[v,u,u] = 2 sum u^2 v / x^3 against 2 (sum u v / x^2) max(u/x)
    for _ in range(100):
        x = rng.uniform(0.1, 2, 4)
        u = rng.standard_normal(4)
        v = rng.uniform(0, 1, 4)
        cone = Orthant(4)
        lhs = -cone.third(x, v, u, u)
        assert lhs == pytest.approx(2 * np.sum(u**2 * v / x**3))
        rhs = 2 * float(cone.hess_apply(x, v) @ u) * np.max(np.abs(u / x))
        assert lhs <= np.max(np.abs(u / x)) * 2 * np.sum(np.abs(u) * v / x**2) + 1e-12
        assert np.isfinite(rhs)


def test_pairwise_refuses_kplus1():
    with pytest.raises(InputError):
        pairwise_sc_suite(SpectralEpigraph(4, 2, barrier="kplus1"), samples=5)


def test_derivatives(cone):
    rep = derivative_suite(cone, samples=20, seed=1)
    assert rep.passed, rep.max_violation
