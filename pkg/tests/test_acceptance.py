"""Acceptance gate: one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import functools
import time

import numpy as np
import pytest

from conesparse.barriers import Orthant, Product, Psd, SecondOrder, SpectralEpigraph
from conesparse.bss import bss_bound, bss_sparsify
from conesparse.cone_core import caratheodory_reduce, make_instance, order_norm, weighted_sum
from conesparse.errors import StepNotFound
from conesparse.fw import fw_sparsify
from conesparse.generators import conic_instance, orthant_instance, psd_rank1_instance
from conesparse.graph import complete_graph, sparsify_graph, whitened_spectrum
from conesparse.programs import duality_gap, make_pack_cover, pack_cost_sandwich, sparse_cover_solution
from conesparse.verify import barrier_law_suite, certify, derivative_suite, pairwise_sc_suite

CATALOGUE = [
    Orthant(5), Psd(3), Psd(4), SecondOrder(4), SpectralEpigraph(4, 2),
    SpectralEpigraph(4, 2, barrier="kplus1"), Product((Psd(3), Orthant(2))),
]
PAIRWISE = [Orthant(5), Psd(4), SecondOrder(4), SpectralEpigraph(4, 2), Product((Psd(3), Orthant(2)))]


def _run(inst):
    try:
        res = bss_sparsify(inst)
    except StepNotFound as exc:
        return None, None, exc
    return res, certify(inst, res), None


@functools.lru_cache(maxsize=None)
def bss_runs():
    """Shared seeded BSS runs: (family, instance, result, certificate, error, seconds)."""
    runs = []
    families = [
        ("psd4", 20, lambda rng: psd_rank1_instance(4, 200, 0.5, rng)),
        ("soc5", 20, lambda rng: conic_instance(SecondOrder(5), 300, 0.4, rng)),
        ("se62", 10, lambda rng: conic_instance(SpectralEpigraph(6, 2), 150, 0.5, rng)),
        ("product", 10, lambda rng: conic_instance(Product((Psd(3), Orthant(2))), 120, 0.4, rng)),
    ]
    for name, count, make in families:
        for seed in range(count):
            inst = make(np.random.default_rng(seed))
            t0 = time.perf_counter()
            res, cert, err = _run(inst)
            runs.append((name, inst, res, cert, err, time.perf_counter() - t0))
    return runs


def _family(name):
    return [r for r in bss_runs() if r[0] == name]


def _support_check(name, bound, eps):
    rows = _family(name)
    ok = all(err is None and len(res.support) <= bound and cert.passed and cert.achieved_eps <= eps + 1e-7
             for _, _, res, cert, err, _ in rows)
    worst = max((len(r[2].support) for r in rows if r[2] is not None), default=-1)
    return ok, f"{len(rows)} seeds, max support {worst} <= {bound}"


def c01_bss_psd():
    ok, msg = _support_check("psd4", 64, 0.5)
    secs = sum(r[5] for r in _family("psd4"))
    return ok and secs <= 10.0 and bss_bound(4, 0.5) == 64, f"{msg}, {secs:.2f}s total"


def c02_bss_soc():
    return _support_check("soc5", 50, 0.4)


def c03_bss_spectral_epigraph():
    return _support_check("se62", 64, 0.5)


def c04_no_step_failures():
    runs = bss_runs()
    fails = sum(r[4] is not None for r in runs)
    return len(runs) >= 50 and fails == 0, f"{fails} StepNotFound in {len(runs)} instances"


def c05_barrier_monotone():
    worst_rise, worst_init = 0.0, 0.0
    for _, inst, res, _, err, _ in bss_runs():
        if err is not None:
            return False, "run aborted"
        tr = res.trace
        half = inst.epsilon / 2
        worst_init = max(worst_init, abs(tr[0]["phi_upper"] - half), abs(tr[0]["phi_lower"] - half))
        for a, b in zip(tr, tr[1:]):
            worst_rise = max(worst_rise, b["phi_upper"] - a["phi_upper"], b["phi_lower"] - a["phi_lower"])
    return worst_rise <= 1e-8 and worst_init <= 1e-9, f"max rise {worst_rise:.2e}, initial offset {worst_init:.2e}"


def c06_frank_wolfe():
    ok, worst_norm, nu = True, 0.0, 3
    for seed in range(10):
        inst = orthant_instance(3, 50, 0.4, np.random.default_rng(seed))
        res = fw_sparsify(inst, early_exit=False)
        ok &= all(r["objective"] <= 8 * nu**2 / (r["t"] + 2) for r in res.trace)
        y = weighted_sum(inst, res.support, res.weights)
        norm = order_norm(inst.cone, inst.target, y - inst.target).value
        worst_norm = max(worst_norm, norm)
        ok &= certify(inst, res).passed
    return ok and worst_norm <= 0.4, f"10 seeds, max final order norm {worst_norm:.4f}"


def c07_graph():
    g = complete_graph(40)
    t0 = time.perf_counter()
    h, cert, _ = sparsify_graph(g, 0.6)
    secs = time.perf_counter() - t0
    ev = whitened_spectrum(g, h)
    ok = len(h.edges) <= 434 and ev.min() >= 0.4 - 1e-9 and ev.max() <= 1.6 + 1e-9 and cert.passed and secs <= 60
    return ok, f"{len(h.edges)} edges, spectrum [{ev.min():.3f}, {ev.max():.3f}], {secs:.2f}s"


def c08_pairwise():
    reps = [pairwise_sc_suite(c, samples=200, seed=0, abs_tol=1e-7, rel_tol=1e-6) for c in PAIRWISE]
    bad = [r.cone for r in reps if not r.passed]
    return not bad, f"{len(reps)} cones x 200 samples, failing: {bad or 'none'}"


def c09_barrier_laws():
    reps = [barrier_law_suite(c, samples=100, seed=0) for c in CATALOGUE]
    worst = max(max(r.max_violation.values()) for r in reps)
    return worst <= 1e-6, f"{len(reps)} cones, max violation {worst:.2e}"


def c10_derivatives():
    reps = [derivative_suite(c, samples=50, seed=0) for c in CATALOGUE]
    worst = max(max(r.max_violation.values()) for r in reps)
    return worst <= 1e-5, f"{len(reps)} cones, max relative error {worst:.2e}"


def c11_pack_cover():
    ok, worst_gap = True, 0.0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        d, k = 3, 6
        parts = rng.uniform(0, 1, size=(30, d))
        a = rng.uniform(0, 1, size=(k, d)) * (rng.random((k, d)) < 0.7)
        a[rng.integers(k, size=d), np.arange(d)] += 0.2
        inst = make_pack_cover(a, rng.uniform(0.5, 2.0, k), parts.sum(axis=0))
        _, _, gap = duality_gap(inst)
        worst_gap = max(worst_gap, gap)
        sp = make_instance(inst.cone, parts, 0.3)
        res = bss_sparsify(sp)
        sandwich = pack_cost_sandwich(inst, weighted_sum(sp, res.support, res.weights), 0.3)
        _, cover = sparse_cover_solution(inst, 0.3)
        ok &= gap <= 1e-7 and sandwich.passed and cover.passed
        ok &= cover.feasibility_slack >= -1e-9 and cover.lower_gap >= -1e-9 and cover.upper_gap >= -1e-9
    return ok, f"20 instances, max duality gap {worst_gap:.2e}"


def c12_caratheodory():
    ok, worst = True, 0.0
    cones = [Orthant(4), Psd(3), SecondOrder(4), SpectralEpigraph(3, 2)]
    for seed in range(20):
        rng = np.random.default_rng(seed)
        inst = conic_instance(cones[seed % len(cones)], 25, 0.5, rng)
        rank = np.linalg.matrix_rank(inst.elements)
        res = caratheodory_reduce(inst)
        cert = certify(inst, res)
        worst = max(worst, cert.achieved_eps)
        ok &= len(res.support) <= rank and cert.passed
    return ok and worst <= 1e-7, f"20 instances, max achieved eps {worst:.2e}"


CRITERIA = [c01_bss_psd, c02_bss_soc, c03_bss_spectral_epigraph, c04_no_step_failures, c05_barrier_monotone,
            c06_frank_wolfe, c07_graph, c08_pairwise, c09_barrier_laws, c10_derivatives, c11_pack_cover,
            c12_caratheodory]


def _line(fn, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] {fn.__name__}: {detail}"


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion, capsys):
    ok, detail = criterion()
    with capsys.disabled():
        print("\n" + _line(criterion, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    import sys

    results = [(fn, *fn()) for fn in CRITERIA]
    for fn, ok, detail in results:
        print(_line(fn, ok, detail))
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
