"""Batch command-line front end.

Every command reads JSON files, prints exactly one JSON record on standard
output (numbers at 9 significant digits; files keep full double
precision), and reports diagnostics on standard error.

Exit codes: 0 success or check passed, 2 invalid input, 3 check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from .audit import dominance_check, privacy_ratio_audit, random_instances
from .core import PrivacyParams, ProbabilityTable, validate_instance
from .errors import DpSelectError
from .formats import (
    load_neighbor_pairs,
    load_quality_vector,
    probability_table_to_dict,
    write_audit_report,
    write_probability_table,
    write_utility_report,
)
from .mechanisms import MECHANISMS
from .noise import RngState
from .oracle import (
    EXACT_ORACLES,
    QUADRATURE_FAMILIES,
    chi_square_gof,
    empirical_counts,
    rnm_exact_quadrature,
    tv_distance,
)

MECHANISM_NAMES = sorted(MECHANISMS)


def _nine_significant(obj: Any) -> Any:
    if isinstance(obj, float):
        return float(f"{obj:.9g}")
    if isinstance(obj, list):
        return [_nine_significant(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _nine_significant(v) for k, v in obj.items()}
    return obj


def _emit(record: dict) -> None:
    print(json.dumps(_nine_significant(record)))


def _invalid(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _instance(args: argparse.Namespace):
    quality = load_quality_vector(args.scores)
    return validate_instance(quality, PrivacyParams(args.epsilon, args.sensitivity))


def cmd_select(args: argparse.Namespace) -> int:
    inst = _instance(args)
    result = MECHANISMS[args.mechanism](inst, RngState(args.seed))
    _emit({"label": result.label, "index": result.index})
    return 0


def cmd_dist(args: argparse.Namespace) -> int:
    inst = _instance(args)
    if args.mode == "exact":
        oracle = EXACT_ORACLES.get(args.mechanism)
        if oracle is None:
            return _invalid(
                f"no exact oracle for {args.mechanism!r}; "
                f"exact mode supports {sorted(EXACT_ORACLES)}"
            )
        table = oracle(inst)
    elif args.mode == "quadrature":
        family = QUADRATURE_FAMILIES.get(args.mechanism)
        if family is None:
            return _invalid(
                f"no quadrature route for {args.mechanism!r}; "
                f"quadrature mode supports {sorted(QUADRATURE_FAMILIES)}"
            )
        table = rnm_exact_quadrature(inst, family)
    else:
        counts = empirical_counts(args.mechanism, inst, args.n, args.seed)
        table = ProbabilityTable(
            inst.quality.labels,
            [c / args.n for c in counts],
            f"empirical(n={args.n},seed={args.seed})",
        )
    if args.out:
        write_probability_table(table, args.out)
    _emit(probability_table_to_dict(table))
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    mechanisms = args.mechanism or []
    if len(mechanisms) != 2:
        return _invalid("compare needs exactly two --mechanism flags")
    inst = _instance(args)
    first, second = mechanisms

    if args.mode in ("exact", "quadrature"):
        if args.mode == "exact":
            missing = [m for m in mechanisms if m not in EXACT_ORACLES]
            if missing:
                return _invalid(
                    f"no exact oracle for {missing[0]!r}; "
                    f"exact mode supports {sorted(EXACT_ORACLES)}"
                )
            tables = [EXACT_ORACLES[m](inst) for m in mechanisms]
        else:
            missing = [m for m in mechanisms if m not in QUADRATURE_FAMILIES]
            if missing:
                return _invalid(
                    f"no quadrature route for {missing[0]!r}; "
                    f"quadrature mode supports {sorted(QUADRATURE_FAMILIES)}"
                )
            tables = [rnm_exact_quadrature(inst, QUADRATURE_FAMILIES[m]) for m in mechanisms]
        tv = tv_distance(tables[0], tables[1])
        passed = tv <= args.tolerance
        _emit(
            {
                "mechanisms": mechanisms,
                "mode": args.mode,
                "tv_distance": tv,
                "tolerance": args.tolerance,
                "pass": passed,
            }
        )
        return 0 if passed else 3

    # empirical: sample the first mechanism, test against the second's exact table
    reference_oracle = EXACT_ORACLES.get(second)
    if reference_oracle is None:
        return _invalid(
            f"empirical mode needs an exact reference; {second!r} is not in "
            f"{sorted(EXACT_ORACLES)}"
        )
    counts = empirical_counts(first, inst, args.n, args.seed)
    reference = reference_oracle(inst)
    empirical = ProbabilityTable(
        inst.quality.labels,
        [c / args.n for c in counts],
        f"empirical(n={args.n},seed={args.seed})",
    )
    gof = chi_square_gof(counts, reference, args.significance)
    _emit(
        {
            "mechanisms": mechanisms,
            "mode": "empirical",
            "n": args.n,
            "tv_distance": tv_distance(empirical, reference),
            "chi_square": {
                "statistic": gof.statistic,
                "degrees_of_freedom": gof.degrees_of_freedom,
                "p_value": gof.p_value,
                "pass": gof.passed,
            },
            "significance": args.significance,
            "pass": gof.passed,
        }
    )
    return 0 if gof.passed else 3


def cmd_audit(args: argparse.Namespace) -> int:
    pairs = load_neighbor_pairs(args.pairs)
    params = PrivacyParams(args.epsilon, args.sensitivity)
    report = privacy_ratio_audit(args.mechanism, pairs, params)
    if args.out:
        write_audit_report(report, args.out)
    _emit(
        {
            "mechanism": args.mechanism,
            "pairs": len(pairs),
            "bound": report.bound,
            "worst_ratio": report.worst_ratio,
            "pass": report.passed,
        }
    )
    return 0 if report.passed else 3


def cmd_utility(args: argparse.Namespace) -> int:
    params = PrivacyParams(args.epsilon, args.sensitivity)
    if args.scores and args.random:
        return _invalid("give either --scores or --random, not both")
    if args.scores:
        instances = [validate_instance(load_quality_vector(args.scores), params)]
    elif args.random:
        instances = random_instances(
            args.random,
            args.epsilon,
            args.sensitivity,
            k_max=args.k_max,
            seed=args.seed,
        )
    else:
        return _invalid("give --scores FILE or --random COUNT")
    report = dominance_check(instances)
    if args.out:
        write_utility_report(report, args.out)
    record = {
        "instances": len(instances),
        "dominance_violations": report.dominance_violations,
        "pass": report.dominance_violations == 0,
    }
    if len(instances) == 1:
        record["expected_error_pf"] = report.per_instance[0].expected_error_pf
        record["expected_error_em"] = report.per_instance[0].expected_error_em
    _emit(record)
    return 0 if report.dominance_violations == 0 else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpselect",
        description=(
            "Differentially private selection: run mechanisms, compute their "
            "output distributions, compare them, and audit the privacy bound."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    privacy = argparse.ArgumentParser(add_help=False)
    privacy.add_argument("--epsilon", type=float, required=True,
                         help="privacy loss budget, must be > 0")
    privacy.add_argument("--sensitivity", type=float, required=True,
                         help="quality-score sensitivity, must be > 0")
    privacy.add_argument("--seed", type=int, default=0,
                         help="unsigned 64-bit stream seed (default: 0)")

    p = sub.add_parser("select", parents=[privacy],
                       help="run one selection and print the chosen outcome")
    p.add_argument("--mechanism", required=True, choices=MECHANISM_NAMES)
    p.add_argument("--scores", required=True, help="quality-vector JSON file")
    p.set_defaults(handler=cmd_select)

    p = sub.add_parser("dist", parents=[privacy],
                       help="compute a mechanism's output distribution")
    p.add_argument("--mechanism", required=True, choices=MECHANISM_NAMES)
    p.add_argument("--scores", required=True, help="quality-vector JSON file")
    p.add_argument("--mode", choices=["exact", "quadrature", "empirical"],
                   default="exact", help="how to compute the table (default: exact)")
    p.add_argument("--n", type=int, default=100000,
                   help="samples for empirical mode (default: 100000)")
    p.add_argument("--out", help="write the distribution table to this file")
    p.set_defaults(handler=cmd_dist)

    p = sub.add_parser("compare", parents=[privacy],
                       help="compare two mechanisms' output distributions")
    p.add_argument("--mechanism", action="append", choices=MECHANISM_NAMES,
                   help="give exactly twice; in empirical mode the first is "
                        "sampled and the second is the exact reference")
    p.add_argument("--scores", required=True, help="quality-vector JSON file")
    p.add_argument("--mode", choices=["exact", "quadrature", "empirical"],
                   default="exact", help="comparison mode (default: exact)")
    p.add_argument("--n", type=int, default=100000,
                   help="samples for empirical mode (default: 100000)")
    p.add_argument("--tolerance", type=float, default=1e-8,
                   help="TV-distance acceptance bound for exact/quadrature "
                        "modes (default: 1e-8)")
    p.add_argument("--significance", type=float, default=0.001,
                   help="chi-square significance for empirical mode "
                        "(default: 0.001)")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("audit", parents=[privacy],
                       help="check per-outcome probability ratios against e^epsilon")
    p.add_argument("--mechanism", required=True, choices=sorted(EXACT_ORACLES),
                   help="mechanism with an exact oracle")
    p.add_argument("--pairs", required=True, help="neighbor-pairs JSON file")
    p.add_argument("--out", help="write the full audit report to this file")
    p.set_defaults(handler=cmd_audit)

    p = sub.add_parser("utility", parents=[privacy],
                       help="compare expected error of pf vs em")
    p.add_argument("--scores", help="quality-vector JSON file (single instance)")
    p.add_argument("--random", type=int,
                   help="audit this many random instances instead")
    p.add_argument("--k-max", type=int, default=10, dest="k_max",
                   help="largest outcome count for --random (default: 10)")
    p.add_argument("--out", help="write the full utility report to this file")
    p.set_defaults(handler=cmd_utility)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (DpSelectError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main(sys.argv[1:]))
