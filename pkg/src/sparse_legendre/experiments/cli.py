"""Command line entry point: ``sparse-legendre <command> [options]``.

Commands
--------
fig1, quintiles, msweep, ssweep
    Run an experiment; writes ``<name>_trials.csv``, ``<name>_summary.csv``
    and ``<name>_error.svg`` / ``<name>_success.svg`` into ``--out-dir``.
check-lemmas
    Monte Carlo / quadrature checks of the lemma inequalities, ``lemmas.csv``.
complexity
    Print the univariate, multivariate and bounded-system sample counts.
score-sets
    Rank sample-set CSV files by test value and write ``scores.csv``.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .. import lemmas, theory
from ..sampling import (estimate_percentile_threshold, group_labels, is_preferable_1d,
                        preferable_threshold_1d, read_sample_set_csv, test_value)
from .records import emit_csv, write_trials_csv
from .spec import DEFAULT_SPECS, apply_config, load_config
from .svg import emit_svg

log = logging.getLogger("sparse_legendre")


def _common(p):
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--out-dir", default="results", help="output directory (default ./results)")
    p.add_argument("--scale", type=float, default=1.0,
                   help="multiply trial counts by this factor in (0, 1]; at least 10 trials remain")
    p.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--config", default=None, help="key-value config file overriding defaults")
    p.add_argument("--no-timing", action="store_true",
                   help="write wall_ms = 0 so trial CSVs are byte-reproducible")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sparse-legendre", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in DEFAULT_SPECS:
        _common(sub.add_parser(name, help=f"run the {name} experiment"))

    p = sub.add_parser("check-lemmas", help="validate lemma inequalities numerically")
    _common(p)
    p.add_argument("--samples", type=int, default=200_000, help="Monte Carlo budget per check (>= 1e5)")

    p = sub.add_parser("complexity", help="evaluate the sample-complexity formulas")
    _common(p)
    p.add_argument("--s", type=int, default=5)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--gamma0", type=float, default=0.1)
    p.add_argument("--N", type=int, default=200)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--theta2", type=float, default=None,
                   help="squared uniform bound for the bounded-system formula (default 2*maxdeg+1 with maxdeg=N)")

    p = sub.add_parser("score-sets", help="rank sample-set CSV files by test value")
    _common(p)
    p.add_argument("files", nargs="+", help="sample-set CSV files")
    p.add_argument("--gamma0", type=float, default=0.8)
    p.add_argument("--groups", type=int, default=5)
    p.add_argument("--n-ref", type=int, default=5000, help="reference sets for the percentile criterion")
    return ap


def _run_experiment(args, out: Path) -> int:
    spec = DEFAULT_SPECS[args.command](master_seed=args.seed, out_dir=str(out))
    spec = apply_config(spec, load_config(args.config) if args.config else None)
    if args.scale != 1.0:
        spec = spec.scaled(args.scale)
    from .runs import RUNNERS

    def progress(i, n):
        if i % max(1, n // 20) == 0 or i == n:
            log.info("%s: %d/%d trials", spec.kind, i, n)

    table, recs = RUNNERS[spec.kind](spec, threads=args.threads, timing=not args.no_timing, progress=progress)
    write_trials_csv(recs, out / f"{spec.kind}_trials.csv")
    emit_csv(table, out / f"{spec.kind}_summary.csv")
    emit_svg(table, out / f"{spec.kind}_error.svg", "error")
    emit_svg(table, out / f"{spec.kind}_success.svg", "success")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["case", "group", "s", "m", "n", "mean_rel_l2", "success_rate"])
    for r in table.rows:
        w.writerow([r.case, r.group, r.s, r.m, r.n, f"{r.mean_rel_l2:.3e}", f"{r.success_rate:.3f}"])
    return 0


def _check_lemmas(args, out: Path) -> int:
    cfg = lemmas.LemmaConfig(n_samples=args.samples, seed=args.seed)
    rows = lemmas.lemma_validators(cfg)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "lemmas.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lemma", "params", "lhs", "rhs", "sigma3", "pass", "method", "note"])
        for r in rows:
            flag = "" if r.passed is None else str(int(r.passed))
            w.writerow([r.lemma, r.params, repr(r.lhs), repr(r.rhs), repr(r.sigma3), flag, r.method, r.note])
    for r in rows:
        flag = "report" if r.passed is None else ("PASS" if r.passed else "FAIL")
        print(f"{flag:6s} {r.lemma:26s} {r.params:34s} lhs={r.lhs:.6g} rhs={r.rhs:.6g} 3sd={r.sigma3:.2g}")
    return 0 if lemmas.all_passed(rows) else 1


def _complexity(args) -> int:
    p = theory.REParams(s=args.s, alpha=args.alpha, delta=args.delta, gamma=args.gamma,
                        gamma0=args.gamma0, N=args.N, d=args.d, C=args.C)
    theta2 = args.theta2 if args.theta2 is not None else 2 * args.N + 1
    print(f"parameters: {p}")
    if p.d == 1:
        print(f"univariate:              m >= {theory.complexity_1d(p):.6e}")
        print(f"univariate, preferable:  m >= {theory.complexity_1d(p, preferable=True):.6e}")
    fp = theory.complexity_multi(p, full_output=True)
    print(f"multivariate (d={p.d}):     m >= {fp.m:.6e}  ({fp.iterations} iterations, residual {fp.residual:.1e})")
    print(f"multivariate, preferable: m >= {theory.complexity_multi(p, preferable=True):.6e}")
    print(f"bounded system (Theta^2={theta2:g}): m >= {theory.complexity_bos(p, theta2 ** 0.5):.6e}  (N = {p.N})")
    return 0


def _score_sets(args, out: Path) -> int:
    sets = [read_sample_set_csv(f) for f in args.files]
    dims = {Q.dim for Q in sets}
    ms = {Q.m for Q in sets}
    vals = [test_value(Q, args.gamma0).value for Q in sets]
    labels = group_labels(vals, args.groups, [Q.seed for Q in sets]) if len(sets) >= args.groups else None
    thr = None
    if len(dims) == 1 and len(ms) == 1:
        thr = estimate_percentile_threshold(next(iter(ms)), next(iter(dims)), args.gamma0, args.n_ref, args.seed)
    out.mkdir(parents=True, exist_ok=True)
    order = sorted(range(len(sets)), key=lambda i: (vals[i], sets[i].seed or 0, i))
    with open(out / "scores.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "file", "m", "d", "test_value", "group", "preferable_1d", "preferable_percentile"])
        for rank, i in enumerate(order, 1):
            Q = sets[i]
            p1 = int(is_preferable_1d(Q, args.gamma0)) if Q.dim == 1 else ""
            pp = int(vals[i] <= thr) if thr is not None else ""
            grp = int(labels[i]) + 1 if labels is not None else ""
            row = [rank, args.files[i], Q.m, Q.dim, repr(vals[i]), grp, p1, pp]
            w.writerow(row)
            print(*row, sep=",")
    if thr is not None:
        print(f"# percentile threshold (gamma0={args.gamma0}, n_ref={args.n_ref}): {thr:.6g}")
    if dims == {1} and len(ms) == 1:
        m = sets[0].m
        print(f"# analytic 1d threshold: {preferable_threshold_1d(m, args.gamma0):.6g}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        raise SystemExit("--threads must be >= 1")
    out = Path(args.out_dir)
    if args.command in DEFAULT_SPECS:
        return _run_experiment(args, out)
    if args.command == "check-lemmas":
        return _check_lemmas(args, out)
    if args.command == "complexity":
        return _complexity(args)
    return _score_sets(args, out)


if __name__ == "__main__":
    sys.exit(main())
