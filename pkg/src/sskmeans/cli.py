"""Command line entry point: ``sskmeans {gen,cluster,sweep,ari,bound,oracle}``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np

from .datagen import MixtureSpec, generate_mixture, load_csv, write_csv
from .harness import (
    ALGORITHMS,
    ExperimentConfig,
    format_bound_table,
    gm_preset,
    iris_preset,
    level_bound,
    report_bound,
    run_once,
    run_sweep,
    standard_error,
)
from .metrics import adjusted_rand_index
from .theory import oracle_suites


def _levels(text: str) -> tuple[float, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if "/" in tok:
            num, den = tok.split("/")
            out.append(float(num) / float(den))
        else:
            out.append(float(tok))
    return tuple(out)


def _algorithms(text: str) -> tuple[str, ...]:
    if text == "all":
        return ALGORITHMS
    algs = tuple(a.strip() for a in text.split(",") if a.strip())
    bad = [a for a in algs if a not in ALGORITHMS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown algorithm(s) {bad}; choose from {ALGORITHMS}")
    return algs


def _label_col(text: str):
    return int(text) if text.lstrip("-").isdigit() else text


def _add_mixture_args(p):
    g = p.add_argument_group("generated mixture")
    g.add_argument("--k", type=int, default=24, help="number of components / clusters")
    g.add_argument("--d", type=int, default=15, help="dimension")
    g.add_argument("--side", type=float, default=10.0, help="hypercube side length")
    g.add_argument("--sigma", type=float, default=1.0, help="noise standard deviation")
    g.add_argument("--n-per-cluster", type=int, default=100)


def _add_input_args(p):
    p.add_argument("--input", help="CSV dataset (features + one label column)")
    p.add_argument("--label-col", type=_label_col, default=-1,
                   help="label column name or zero-based index (default: last)")
    p.add_argument("--no-header", action="store_true", help="CSV has no header row")


def _mixture(args) -> MixtureSpec:
    return MixtureSpec(k=args.k, d=args.d, side=args.side,
                       n_per_cluster=args.n_per_cluster, sigma=args.sigma)


def _source(args) -> dict:
    if args.input:
        return dict(input_path=args.input, label_column=args.label_col, header=not args.no_header)
    return dict(mixture=_mixture(args))


def cmd_gen(args) -> int:
    ds = generate_mixture(_mixture(args), np.random.default_rng(args.seed))
    write_csv(ds, args.output or sys.stdout)
    return 0


def cmd_cluster(args) -> int:
    config = ExperimentConfig(levels=(args.level,), algorithms=(args.algorithm,),
                              per_class=args.per_class, replicates=1, base_seed=args.seed,
                              max_iter=args.max_iter, **_source(args))
    rec = run_once(config, 0, 0, args.algorithm)
    text = json.dumps(rec.as_dict(), indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    print(text)
    return 0


def _sweep_config(args) -> ExperimentConfig:
    overrides = dict(base_seed=args.seed, max_iter=args.max_iter)
    for name in ("replicates", "per_class"):
        if getattr(args, name) is not None:
            overrides[name] = getattr(args, name)
    if args.algorithm is not None:
        overrides["algorithms"] = args.algorithm
    else:
        overrides["algorithms"] = ("ss_kpp", "constrained", "ss_kpp_init_only",
                                   "constrained_init_only", "true_centroids")
    if args.levels is not None:
        overrides["levels"] = args.levels
    if args.preset == "gm":
        return gm_preset(**overrides)
    if args.preset == "iris":
        return iris_preset(**overrides)
    source = _source(args)
    if "levels" not in overrides:
        k = source["mixture"].k if "mixture" in source else load_csv(
            args.input, args.label_col, not args.no_header).k
        overrides["levels"] = tuple(g / k for g in range(k + 1))
    overrides.setdefault("per_class", 5)
    overrides.setdefault("replicates", 100)
    return ExperimentConfig(**overrides, **source)


def cmd_sweep(args) -> int:
    config = _sweep_config(args)
    report = run_sweep(config, workers=args.workers)
    text = report.to_csv()
    if args.output:
        out = Path(args.output)
        out.write_text(text)
        summary = Path(args.summary) if args.summary else out.with_suffix(".summary.json")
        summary.write_text(report.summary_json() + "\n")
        print(f"wrote {len(report.rows)} rows to {out} and summary to {summary}", file=sys.stderr)
    else:
        sys.stdout.write(text)
        if args.summary:
            Path(args.summary).write_text(report.summary_json() + "\n")
    if args.bound:
        print(format_bound_table(report_bound(config, report)), file=sys.stderr)
    return 0


def _read_labels(path, label_col, header) -> list[str]:
    if label_col is None:
        return [line.strip() for line in Path(path).read_text().splitlines() if line.strip()]
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if header:
        names = [c.strip() for c in rows[0]]
        rows = rows[1:]
        if isinstance(label_col, str):
            if label_col not in names:
                raise ValueError(f"{path}: no column {label_col!r}")
            label_col = names.index(label_col)
    return [r[label_col].strip() for r in rows]


def cmd_ari(args) -> int:
    a = _read_labels(args.first, args.label_col, not args.no_header)
    b = _read_labels(args.second, args.label_col, not args.no_header)
    print(repr(adjusted_rand_index(a, b)))
    return 0


def cmd_bound(args) -> int:
    if args.sweep:
        groups = defaultdict(list)
        with open(args.sweep, newline="") as fh:
            for row in csv.DictReader(fh):
                key = (row["algorithm"], float(row["supervision_level"]), int(row["supervised_classes"]))
                groups[key].append(float(row["fraction_of_optimal"]))
        lines = [f"{'algorithm':<24}{'level':>8}{'G':>5}{'bound':>10}{'mean':>10}  flag"]
        bad = False
        for (alg, lvl, G), vals in sorted(groups.items()):
            b = level_bound(args.k, G, [args.class_size] * args.k, args.per_class)
            mean = float(np.mean(vals))
            above = mean - 2 * standard_error(vals) > b
            flag = "ABOVE" if above else "ok"
            bad |= above
            lines.append(f"{alg:<24}{lvl:>8.4f}{G:>5d}{b:>10.4f}{mean:>10.4f}  {flag}")
        print("\n".join(lines))
        return 1 if bad else 0
    print(f"{'G':>4}{'level':>9}{'bound':>11}")
    for G in range(args.k + 1):
        b = level_bound(args.k, G, [args.class_size] * args.k, args.per_class)
        print(f"{G:>4d}{G / args.k:>9.4f}{b:>11.4f}")
    return 0


def cmd_oracle(args) -> int:
    results = oracle_suites(np.random.default_rng(args.seed), datasets_per_cell=args.datasets,
                            max_n=args.max_n, shift_instances=args.shift_instances,
                            d2_instances=args.d2_instances)
    failed = False
    for name, r in results.items():
        status = "PASS" if r["failures"] == 0 else "FAIL"
        failed |= r["failures"] > 0
        print(f"{status}  {name:<26} checked={r['checked']:<6d} failures={r['failures']:<4d} "
              f"worst={r['worst']:.3e}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sskmeans", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a Gaussian mixture dataset as CSV")
    _add_mixture_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("cluster", help="run one algorithm once and print its metrics as JSON")
    _add_mixture_args(p)
    _add_input_args(p)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="ss_kpp")
    p.add_argument("--level", type=float, default=0.0, help="fraction of classes supervised")
    p.add_argument("--per-class", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--output", help="also write the JSON here")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("sweep", help="Monte Carlo sweep over supervision levels")
    _add_mixture_args(p)
    _add_input_args(p)
    p.add_argument("--preset", choices=("gm", "iris"))
    p.add_argument("--levels", type=_levels, help="comma list, fractions allowed (e.g. 0,1/3,1)")
    p.add_argument("--algorithm", type=_algorithms, help="comma list or 'all'")
    p.add_argument("--replicates", type=int)
    p.add_argument("--per-class", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", help="CSV path (default: stdout)")
    p.add_argument("--summary", help="JSON summary path (default: <output>.summary.json)")
    p.add_argument("--bound", action="store_true", help="print the bound table to stderr")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ari", help="Adjusted Rand Index between two label files")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--label-col", type=_label_col, default=None,
                   help="read this CSV column instead of one label per line")
    p.add_argument("--no-header", action="store_true")
    p.set_defaults(func=cmd_ari)

    p = sub.add_parser("bound", help="expected-cost bound per number of supervised classes")
    p.add_argument("--k", type=int, default=24)
    p.add_argument("--per-class", type=int, default=5)
    p.add_argument("--class-size", type=int, default=100, help="points per class (for G = k)")
    p.add_argument("--sweep", help="sweep CSV; compare its mean fraction-of-optimal")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("oracle", help="check closed forms against enumeration oracles")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--datasets", type=int, default=50, help="random datasets per (n, g)")
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--shift-instances", type=int, default=1000)
    p.add_argument("--d2-instances", type=int, default=100)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"sskmeans {args.command}: error: {exc}", file=sys.stderr)
        return 2
