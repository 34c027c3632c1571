"""Seeded benchmark suites comparing the two engines against their bounds."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass

import numpy as np

from conesparse.bss import bss_sparsify
from conesparse.errors import InputError
from conesparse.fw import fw_sparsify
from conesparse.generators import orthant_instance, psd_rank1_instance, soc_instance
from conesparse.graph import complete_graph, graph_to_instance, random_graph
from conesparse.verify import certify

SUITES = ("psd-rank1", "orthant-random", "soc-random", "graph-complete", "graph-random")
COLUMNS = ("engine", "support", "bound", "achieved_eps", "iters", "millis")


@dataclass
class BenchConfig:
    suite: str
    d: int = 4
    m: int = 200
    n: int = 20
    eps: float = 0.5
    seed: int = 0
    runs: int = 1
    engines: tuple = ("bss", "fw")
    timing: bool = False  # millis are written as 0 unless enabled
    threads: int = 1


def _instance(cfg, rng):
    if cfg.suite == "psd-rank1":
        return psd_rank1_instance(cfg.d, cfg.m, cfg.eps, rng)
    if cfg.suite == "orthant-random":
        return orthant_instance(cfg.d, cfg.m, cfg.eps, rng)
    if cfg.suite == "soc-random":
        return soc_instance(cfg.d, cfg.m, cfg.eps, rng)
    if cfg.suite == "graph-complete":
        return graph_to_instance(complete_graph(cfg.n), cfg.eps).instance
    if cfg.suite == "graph-random":
        return graph_to_instance(random_graph(cfg.n, 0.3, rng), cfg.eps).instance
    raise InputError(f"unknown bench suite {cfg.suite!r}; choose from {', '.join(SUITES)}")


def run_bench(cfg):
    """Return one row per (run, engine); each row carries its certificate flag."""
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for _ in range(cfg.runs):
        inst = _instance(cfg, rng)
        for engine in cfg.engines:
            start = time.perf_counter()
            if engine == "bss":
                res = bss_sparsify(inst, threads=cfg.threads)
            elif engine == "fw":
                res = fw_sparsify(inst)
            else:
                raise InputError(f"unknown engine {engine!r}")
            millis = (time.perf_counter() - start) * 1e3
            cert = certify(inst, res)
            rows.append({
                "engine": engine,
                "support": len(res.support),
                "bound": res.bound,
                "achieved_eps": cert.achieved_eps,
                "iters": res.iterations,
                "millis": millis if cfg.timing else 0.0,
                "pass": cert.passed,
            })
    return rows


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([r["engine"], r["support"], r["bound"], f"{r['achieved_eps']:.12g}", r["iters"],
                    f"{r['millis']:.3f}"])
    return buf.getvalue()
