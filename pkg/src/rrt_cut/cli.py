"""Command line entry point.

Subcommands: split (joint splitting table as CSV), exact (PMF as JSON),
simulate (replicate CSV, optional JSONL trace), verify (internal
cross-checks), limit (convergence report as JSON).  Exit status 0 on
success, 1 when a verification check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys

from rrt_cut import distributions, series, simulate
from rrt_cut.cutting import exact_pmf_for_tree, isolate, select_labels
from rrt_cut.limits import alpha_closed, alpha_recurrence
from rrt_cut.splitting import (
    Rat,
    joint_L,
    joint_R,
    joint_Y,
    joint_support,
    verify_against_enumeration,
)
from rrt_cut.trees import enumerate_all, grow_random

_JOINTS = {"first": joint_R, "last": joint_L, "random": joint_Y}


def _add_common(p, seed=False):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--rule", choices=distributions.RULES, required=True)
    if seed:
        p.add_argument("--seed", type=int, required=True)


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def cmd_split(args) -> int:
    out, close = _open_out(args.out)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["k", "r", "num", "den"])
        joint = _JOINTS[args.rule]
        for k, r in joint_support(args.rule, args.n, args.ell):
            p = joint(args.n, args.ell, k, r)
            if p:
                w.writerow([k, r, int(p.numerator), int(p.denominator)])
    finally:
        if close:
            out.close()
    return 0


def cmd_exact(args) -> int:
    pmf = distributions.pmf(args.rule, args.n, args.ell, backend=args.backend)
    out, close = _open_out(args.emit)
    try:
        json.dump(pmf.to_json_dict(), out)
        out.write("\n")
    finally:
        if close:
            out.close()
    return 0


def cmd_simulate(args) -> int:
    cfg = simulate.ExperimentConfig(
        rule=args.rule, n=args.n, ell=args.ell, replicates=args.reps, seed=args.seed
    )
    if args.trace:
        # traced runs use the reference implementation, replicate i seeded
        # by (seed, i) so the file is reproducible
        trace_path = (args.out or "trace") + ".trace.jsonl"
        counts = []
        with open(trace_path, "w") as tf:
            for i in range(cfg.replicates):
                rng = random.Random(cfg.seed * (2**32) + i)
                tree = grow_random(cfg.n, rng)
                labels = select_labels(cfg.rule, cfg.n, cfg.ell, rng)
                rec = isolate(tree, labels, rng, want_trace=True)
                counts.append(rec.cuts)
                tf.write(rec.trace_jsonl())
                tf.write("\n")
    else:
        counts = simulate.run_counts(cfg)
    out, close = _open_out(args.out)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["replicate_index", "cuts"])
        for i, c in enumerate(counts):
            w.writerow([i, int(c)])
    finally:
        if close:
            out.close()
    return 0


def cmd_limit(args) -> int:
    grid = [int(float(s)) for s in args.grid.split(",")]
    stats = args.stat.split(",")
    report = simulate.convergence_sweep(
        args.rule, args.ell, grid, args.reps, stats, args.seed
    )
    out, close = _open_out(args.out)
    try:
        json.dump(report.to_json_dict(), out)
        out.write("\n")
    finally:
        if close:
            out.close()
    return 0 if report.all_trends_ok() else 1


def _verify_split(max_n: int, norm_n: int = 40):
    for n in range(2, max_n + 1):
        for ell in range(1, n + 1):
            rep = verify_against_enumeration(n, ell)
            yield f"split n={n} ell={ell}", rep["ok"]
    for n in range(2, norm_n + 1):
        for ell in range(1, n + 1):
            for rule, joint in _JOINTS.items():
                tot = sum(
                    joint(n, ell, k, r) for k, r in joint_support(rule, n, ell)
                )
                yield f"normalization rule={rule} n={n} ell={ell}", tot == 1


def _verify_oracle(max_n: int):
    for n in range(2, max_n + 1):
        trees = list(enumerate_all(n))
        for ell in range(1, n + 1):
            for rule in distributions.RULES:
                avg: dict[int, object] = {}
                if rule == "random":
                    import itertools

                    label_sets = list(itertools.combinations(range(1, n + 1), ell))
                else:
                    label_sets = [select_labels(rule, n, ell)]
                weight = Rat(1, len(trees) * len(label_sets))
                for tree in trees:
                    for labels in label_sets:
                        for m, p in exact_pmf_for_tree(tree, labels).items():
                            avg[m] = avg.get(m, 0) + weight * p
                want = distributions.pmf(rule, n, ell).probs
                same = {m: p for m, p in avg.items() if p} == dict(want)
                yield f"oracle rule={rule} n={n} ell={ell}", same


def _verify_gf(max_n: int, max_ell: int):
    bad = series.m_coefficient_residuals(max_n, max_ell)
    yield f"pgf coefficients n<={max_n} ell<={max_ell}", not bad


def _verify_ode(max_ell: int, z_m: int = 20, z_n: int = 16, z_g: int = 14):
    for ell in range(1, max_ell + 1):
        yield f"first-order ODE ell={ell} Z={z_m}", series.check_ode_M(ell, z_m).is_zero()
        yield f"second-order ODE (fringe) ell={ell} Z={z_n}", series.check_ode_N(
            ell, z_n
        ).is_zero()
        yield f"second-order ODE (random) ell={ell} Z={z_g}", series.check_ode_G(
            ell, z_g
        ).is_zero()


def _verify_alpha(max_ell: int = 20, max_s: int = 20):
    for ell in range(1, max_ell + 1):
        for s in range(0, max_s + 1):
            yield f"alpha ell={ell} s={s}", alpha_closed(ell, s) == alpha_recurrence(ell, s)


def _verify_moments(n_values=(50, 100, 200, 400), ell: int = 2):
    import math

    scaled = distributions.mean_scaled_last(n_values, ell)
    target = ell / (ell + 1)
    cs = [abs(v - target) * math.log(n) for n, v in scaled.items()]
    ok = max(cs) <= 1.25 * min(cs)
    yield f"fitted constant stable over n={list(n_values)}", ok


def cmd_verify(args) -> int:
    if args.suite == "split":
        checks = _verify_split(args.max_n or 7)
    elif args.suite == "oracle":
        checks = _verify_oracle(args.max_n or 6)
    elif args.suite == "gf":
        checks = _verify_gf(args.max_n or 15, args.max_ell or 4)
    elif args.suite == "ode":
        checks = _verify_ode(args.max_ell or 4)
    elif args.suite == "alpha":
        checks = _verify_alpha()
    else:
        checks = _verify_moments()
    failures = 0
    results = []
    for name, ok in checks:
        results.append((name, ok))
        if not ok:
            failures += 1
            print(f"FAIL  {name}")
    print(f"{args.suite}: {len(results) - failures}/{len(results)} checks passed")
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump({name: bool(ok) for name, ok in results}, fh)
            fh.write("\n")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rrt-cut",
        description="multi-node isolation process on random recursive trees",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="joint splitting table as CSV")
    _add_common(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("exact", help="exact cut-count PMF as JSON")
    _add_common(p)
    p.add_argument("--backend", choices=("rational", "float"), default="rational")
    p.add_argument("--emit", default=None)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("simulate", help="Monte Carlo replicates as CSV")
    _add_common(p, seed=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("limit", help="convergence sweep toward the limit law")
    p.add_argument("--rule", choices=distributions.RULES, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--grid", required=True, help="comma-separated n values")
    p.add_argument("--stat", required=True, help="comma-separated: ks,moments,cf")
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("verify", help="internal cross-check suites")
    p.add_argument(
        "--suite",
        choices=("split", "oracle", "gf", "ode", "alpha", "moments"),
        required=True,
    )
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--max-ell", type=int, default=None)
    p.add_argument("--emit", default=None)
    p.set_defaults(func=cmd_verify)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
