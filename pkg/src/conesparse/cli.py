"""``conesparse`` command-line entry point.

Exit codes: 0 success, 1 certificate failure, 2 input error, 3 engine error.
Random data is drawn from numpy's PCG64 generator seeded with ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from conesparse import io
from conesparse.barriers import cone_from_spec
from conesparse.bench import SUITES, BenchConfig, rows_to_csv, run_bench
from conesparse.bss import bss_sparsify
from conesparse.cone_core import caratheodory_reduce, make_instance
from conesparse.errors import EngineError, InputError
from conesparse.fw import fw_sparsify
from conesparse.graph import read_edge_list, sparsify_graph
from conesparse.programs import duality_gap, pack_cost_sandwich, sparse_cover_solution
from conesparse.verify import barrier_law_suite, certify, derivative_suite, pairwise_sc_suite

EXIT_OK, EXIT_CERT, EXIT_INPUT, EXIT_ENGINE = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    engine: str = "bss"
    eps: float | None = None
    seed: int = 0
    trace: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.eps is not None and not (0.0 < self.eps < 1.0):
            raise InputError(f"--eps must lie in (0, 1), got {self.eps}")


def _threads(args):
    if args.threads is not None:
        return max(1, args.threads)
    try:
        return max(1, int(os.environ.get("CONESPARSE_THREADS", "1")))
    except ValueError:
        raise InputError("CONESPARSE_THREADS must be an integer") from None


def _emit(obj, path):
    if path:
        io.dump_json(obj, path)
    else:
        json.dump(obj, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")


def _finish(result, cert, out, trace_path=None):
    result.certificate = cert
    _emit(result.to_dict(), out)
    if trace_path:
        with open(trace_path, "w") as fh:
            for row in result.trace:
                fh.write(json.dumps(row, sort_keys=True) + "\n")
    if not cert.passed:
        print(f"certificate FAILED: lower slack {cert.lower_slack:.3e}, upper slack {cert.upper_slack:.3e}",
              file=sys.stderr)
        return EXIT_CERT
    print(f"{result.engine}: support {len(result.support)} (bound {result.bound}), "
          f"achieved eps {cert.achieved_eps:.6g}", file=sys.stderr)
    return EXIT_OK


def cmd_engine(args):
    inst = io.instance_from_doc(io.load_json(args.instance), args.eps)
    if args.command == "bss":
        result = bss_sparsify(inst, threads=_threads(args))
    elif args.command == "fw":
        result = fw_sparsify(inst)
    else:
        result = caratheodory_reduce(inst)
    return _finish(result, certify(inst, result), args.out, getattr(args, "trace", None))


def cmd_verify(args):
    doc = io.load_json(args.result)
    eps = args.eps
    if eps is None:
        eps = doc.get("certificate", {}).get("eps")
    inst = io.instance_from_doc(io.load_json(args.instance), eps)

    class _R:
        support = doc.get("support", [])
        weights = doc.get("weights", [])

    cert = certify(inst, _R)
    _emit(cert.to_dict(), args.out)
    return EXIT_OK if cert.passed else EXIT_CERT


def cmd_selftest(args):
    try:
        cone = cone_from_spec(json.loads(args.cone))
    except json.JSONDecodeError as exc:
        raise InputError(f"--cone is not valid JSON ({exc})") from None
    reports = [barrier_law_suite(cone, args.samples, args.seed),
               derivative_suite(cone, args.samples, args.seed)]
    if cone.pairwise:
        reports.append(pairwise_sc_suite(cone, args.samples, args.seed))
    doc = {"cone": cone.to_spec(), "reports": [r.to_dict() for r in reports],
           "pass": all(r.passed for r in reports)}
    _emit(doc, args.out)
    return EXIT_OK if doc["pass"] else EXIT_CERT


def cmd_graph(args):
    try:
        with open(args.input) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{args.input}: {exc.strerror}") from None
    g = read_edge_list(text)
    h, cert, result = sparsify_graph(g, args.eps, args.engine, threads=_threads(args))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(h.to_text())
    else:
        sys.stdout.write(h.to_text())
    doc = cert.to_dict()
    doc.update({"edges_in": len(g.edges), "edges_out": len(h.edges), "bound": result.bound, "engine": args.engine})
    if args.cert:
        io.dump_json(doc, args.cert)
    print(f"graph: {len(g.edges)} -> {len(h.edges)} edges (bound {result.bound}), "
          f"achieved eps {cert.achieved_eps:.6g}", file=sys.stderr)
    return EXIT_OK if cert.passed else EXIT_CERT


def cmd_packcover(args):
    inst, parts = io.pack_cover_from_doc(io.load_json(args.instance))
    cover, pack, gap = duality_gap(inst)
    y_prime, sparse = sparse_cover_solution(inst, args.eps)
    doc = {"cover": cover, "pack": pack, "duality_gap": gap, "sparse_cover": sparse.to_dict(),
           "y_prime": [float(v) for v in y_prime]}
    ok = gap <= 1e-7 and sparse.passed
    if parts is not None:
        sp_inst = make_instance(inst.cone, parts, args.eps, target=inst.c)
        res = bss_sparsify(sp_inst, threads=_threads(args))
        c_prime = res.weights @ sp_inst.elements[sp_inst.rows_for(res.support)[0]]
        sandwich = pack_cost_sandwich(inst, c_prime, args.eps)
        doc["pack_sandwich"] = sandwich.to_dict()
        doc["pack_sandwich"]["support"] = len(res.support)
        ok = ok and sandwich.passed
    doc["pass"] = bool(ok)
    _emit(doc, args.out)
    return EXIT_OK if ok else EXIT_CERT


def cmd_bench(args):
    if args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    engines = ("bss", "fw") if args.engine == "both" else (args.engine,)
    cfg = BenchConfig(args.suite, d=args.d, m=args.m, n=args.n, eps=args.eps, seed=args.seed, runs=args.runs,
                      engines=engines, timing=args.timing, threads=_threads(args))
    rows = run_bench(cfg)
    text = rows_to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_CERT


def build_parser():
    p = argparse.ArgumentParser(prog="conesparse", description="Sparsify conic sums with certificates.")
    p.add_argument("--threads", type=int, default=None,
                   help="bound on concurrent candidate scans (default: $CONESPARSE_THREADS or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    for name, helptext in (("bss", "generalized BSS sparsifier"), ("fw", "Frank-Wolfe sparsifier"),
                           ("caratheodory", "exact Caratheodory reduction")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--instance", required=True)
        s.add_argument("--eps", type=float)
        s.add_argument("--out")
        if name == "bss":
            s.add_argument("--trace", help="write per-iteration trace as JSON lines")
        s.set_defaults(func=cmd_engine)

    s = sub.add_parser("verify", help="recompute the sandwich certificate of a result")
    s.add_argument("--instance", required=True)
    s.add_argument("--result", required=True)
    s.add_argument("--eps", type=float)
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", help="sampled barrier-law, derivative and pairwise suites")
    s.add_argument("--cone", required=True, help='JSON cone spec, e.g. \'{"type":"psd","d":4}\'')
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_selftest)

    s = sub.add_parser("graph", help="spectral sparsification of a weighted edge list")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--engine", choices=("bss", "fw"), default="bss")
    s.add_argument("--out")
    s.add_argument("--cert")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("packcover", help="packing/covering demo over the orthant")
    s.add_argument("--instance", required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_packcover)

    s = sub.add_parser("bench", help="seeded benchmark, CSV output")
    s.add_argument("--suite", required=True, help=", ".join(SUITES))
    s.add_argument("--d", type=int, default=4, help="cone size for psd/orthant/soc suites")
    s.add_argument("--m", type=int, default=200, help="number of atoms")
    s.add_argument("--n", type=int, default=20, help="vertex count for graph suites")
    s.add_argument("--eps", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--runs", type=int, default=1)
    s.add_argument("--engine", choices=("bss", "fw", "both"), default="both")
    s.add_argument("--timing", action="store_true",
                   help="record wall-clock millis (off by default so reruns are byte-identical)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        RunConfig(args.command, eps=getattr(args, "eps", None), seed=getattr(args, "seed", 0),
                  threads=args.threads or 1)
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EngineError as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return EXIT_ENGINE


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
