"""Run every bench suite for both engines and write one CSV per suite."""

import argparse
from pathlib import Path

from conesparse.bench import SUITES, BenchConfig, rows_to_csv, run_bench


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="bench_out")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--runs", type=int, default=3)
    ap.add_argument("--timing", action="store_true")
    args = ap.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for suite in SUITES:
        cfg = BenchConfig(suite, seed=args.seed, runs=args.runs, timing=args.timing)
        if suite == "graph-complete":
            cfg.n, cfg.eps = 40, 0.6
        rows = run_bench(cfg)
        (out / f"{suite}.csv").write_text(rows_to_csv(rows))
        worst = max(r["support"] / r["bound"] for r in rows)
        ok = all(r["pass"] for r in rows)
        print(f"{suite:15s} rows={len(rows)} max support/bound={worst:.3f} certificates={'ok' if ok else 'FAILED'}")


if __name__ == "__main__":
    main()
