import numpy as np
import pytest

from conesparse.bss import bss_sparsify
from conesparse.cone_core import make_instance, weighted_sum
from conesparse.errors import Infeasible, PremiseFailed
from conesparse.programs import (
    make_pack_cover,
    pack_cost_sandwich,
    random_pack_cover,
    solve_cover,
    solve_pack,
    sparse_cover_solution,
)


def _linprog_oracle(inst):
    # independent check with scipy's HiGHS solver
    from scipy.optimize import linprog

    res = linprog(inst.b, A_ub=-inst.a.T, b_ub=-inst.c, bounds=(0, None), method="highs")
    return res.fun


def test_scalar_instance():
    inst = make_pack_cover([[1.0]], [1.0], [1.0])
    assert solve_cover(inst)[0] == pytest.approx(1.0)
    assert solve_pack(inst)[0] == pytest.approx(1.0)


def test_diagonal_instance():
    c = np.array([0.5, 2.0, 1.5])
    inst = make_pack_cover(np.eye(3), np.ones(3), c)
    assert solve_cover(inst)[0] == pytest.approx(c.sum())


def test_strong_duality_random(rng):
    for _ in range(5):
        inst = random_pack_cover(3, 5, rng)
        cv, y = solve_cover(inst, method="vertices")
        cd, _ = solve_cover(inst, method="dual")
        pv, x = solve_pack(inst)
        assert cv == pytest.approx(pv, abs=1e-7)
        assert cd == pytest.approx(cv, abs=1e-7)
        assert cv == pytest.approx(_linprog_oracle(inst), abs=1e-7)
        assert np.all(y @ inst.a >= inst.c - 1e-9)
        assert np.all(inst.a @ x <= inst.b + 1e-9)


def test_uncovered_coordinate():
    inst = make_pack_cover([[1.0, 0.0]], [1.0], [1.0, 1.0])
    with pytest.raises(Infeasible):
        solve_cover(inst)


def test_pack_sandwich_trivial(rng):
    inst = random_pack_cover(3, 4, rng)
    rep = pack_cost_sandwich(inst, inst.c, 0.3)
    assert rep.pack_prime == pytest.approx(rep.pack)
    rep = pack_cost_sandwich(inst, 1.3 * inst.c, 0.3)
    assert rep.pack_prime == pytest.approx(1.3 * rep.pack)
    assert rep.passed


def test_pack_sandwich_premise(rng):
    inst = random_pack_cover(2, 3, rng)
    with pytest.raises(PremiseFailed):
        pack_cost_sandwich(inst, 2 * inst.c, 0.3)


def test_pack_sandwich_from_bss(rng):
    parts = rng.uniform(0, 1, size=(30, 3))
    c = parts.sum(axis=0)
    a = rng.uniform(0.1, 1, size=(5, 3))
    inst = make_pack_cover(a, rng.uniform(0.5, 2, 5), c)
    sp = make_instance(inst.cone, parts, 0.3)
    res = bss_sparsify(sp)
    rep = pack_cost_sandwich(inst, weighted_sum(sp, res.support, res.weights), 0.3)
    assert rep.passed
    p2, _ = solve_pack(make_pack_cover(a, inst.b, weighted_sum(sp, res.support, res.weights)))
    assert rep.pack_prime == pytest.approx(p2)


def test_sparse_cover_one_sparse():
    inst = make_pack_cover([[1.0, 2.0], [3.0, 0.5]], [1.0, 5.0], [1.0, 2.0])
    y = np.array([1.0, 0.0])
    yp, rep = sparse_cover_solution(inst, 0.4, y=y)
    assert rep.passed
    assert np.count_nonzero(yp) == 1
    lam = yp[0] * (1 - 0.4) / y[0]
    assert 1 - 0.4 - 1e-12 <= lam <= 1 + 0.4 + 1e-12


def test_sparse_cover_small(rng):
    inst = random_pack_cover(2, 8, rng)
    yp, rep = sparse_cover_solution(inst, 0.5)
    assert rep.support <= 32 and rep.passed
    assert np.all(yp @ inst.a >= inst.c - 1e-9)


def test_sparse_cover_d4_k60(rng):
    inst = random_pack_cover(4, 60, rng)
    cover = _linprog_oracle(inst)
    yp, rep = sparse_cover_solution(inst, 0.5)
    assert rep.support <= 64
    assert rep.cover == pytest.approx(cover, abs=1e-7)
    assert (1 - 0.5) / (1 + 0.5) * float(inst.b @ yp) <= cover + 1e-9
    assert rep.passed
