"""Command-line front end.

Commands: validate, check, distance, cross-ratio, defect, rcircle.
Algebras are selected as built-in names (``heisenberg:k``,
``quaternionic:k``, ``octonionic``) or a JSON file path.  Reports are
JSON (canonical) or flattened CSV.  Exit status: 0 on success or pass,
1 on a verification failure (witness included in the report), 2 on a
usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

from .algebra import HTypeAlgebra, heisenberg, octonionic, quaternionic, validate_htype
from .group import distance, point_from_json, word_from_json
from .moebius import cross_ratio, ptolemaean_defects, rcircle_equality_check
from .verify import DEFAULT_TOLERANCES, SuiteConfig, run_suites

_SUITE_ALIASES = {
    "all": "all",
    "expansion": "expansion_identity",
    "expansion_identity": "expansion_identity",
    "inequalities": "inequality_chain",
    "inequality_chain": "inequality_chain",
    "calibration": "calibration",
    "iwasawa": "iwasawa",
    "ptolemaean": "ptolemaean",
}


def _resolve_algebra(selector: str) -> tuple[HTypeAlgebra, str]:
    if selector.endswith(".json") or os.path.exists(selector):
        with open(selector) as fh:
            data = json.load(fh)
        return HTypeAlgebra.from_dict(data), selector
    name, _, arg = selector.partition(":")
    if name in ("heisenberg", "quaternionic"):
        try:
            k = int(arg) if arg else 1
        except ValueError:
            raise ValueError(f"algebra parameter in {selector!r} must be an integer") from None
        return (heisenberg if name == "heisenberg" else quaternionic)(k), selector
    if name == "octonionic":
        if arg:
            raise ValueError(f"octonionic takes no parameter, got {selector!r}")
        return octonionic(), selector
    raise ValueError(
        f"unknown algebra {selector!r}; expected heisenberg:k, quaternionic:k, "
        "octonionic, or a JSON file path"
    )


def _load_points(path: str, alg: HTypeAlgebra, expected: int) -> list:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, list) or len(data) != expected:
        raise ValueError(f"points file {path!r} must hold a list of {expected} points")
    return [point_from_json(obj) for obj in data]


def _parse_reals(text: str, field: str) -> list[float]:
    values = []
    for token in text.split(","):
        token = token.strip()
        try:
            values.append(float(token))
        except ValueError as exc:
            raise ValueError(f"bad {field} entry {token!r}") from exc
    return values


def _tolerances(args) -> dict:
    if getattr(args, "tol", None) is None:
        return dict(DEFAULT_TOLERANCES)
    return {name: args.tol for name in DEFAULT_TOLERANCES}


# ---------------------------------------------------------------------------
# commands: each returns (results, tolerances, exit_code)


def _cmd_validate(args, alg):
    report = validate_htype(
        alg,
        sample_count=args.samples if args.samples is not None else 100,
        tol=args.tol if args.tol is not None else 1e-9,
        seed=args.seed,
    )
    code = 0 if (report.htype_ok and report.iwasawa_ok) else 1
    return report.to_dict(), {"axioms": report.tol}, code


def _cmd_check(args, alg):
    suite = _SUITE_ALIASES.get(args.suite)
    if suite is None:
        raise ValueError(f"unknown suite {args.suite!r}; choose from {sorted(_SUITE_ALIASES)}")
    tolerances = _tolerances(args)
    cfg = SuiteConfig(
        algebra=alg,
        samples=args.samples if args.samples is not None else 10000,
        seed=args.seed,
        tolerances={} if args.tol is None else tolerances,
        sampler=args.sampler,
        workers=args.workers,
    )
    results = run_suites(cfg, (suite,))
    code = 0 if all(r.passed for r in results) else 1
    return [r.to_dict() for r in results], tolerances, code


def _cmd_distance(args, alg):
    p, q = _load_points(args.points, alg, 2)
    value = distance(alg, p, q)
    return {"distance": "inf" if math.isinf(value) else value}, {}, 0


def _cmd_cross_ratio(args, alg):
    points = _load_points(args.points, alg, 4)
    value = cross_ratio(alg, *points)
    return {"sqrt_value": value.sqrt_value}, {}, 0


def _cmd_defect(args, alg):
    points = _load_points(args.points, alg, 4)
    report = ptolemaean_defects(alg, *points)
    results = {
        "pairings": report.to_records(),
        "min_defect": report.min_defect,
        "argmin_pairing": report.argmin_pairing,
    }
    return results, {}, 0


def _cmd_rcircle(args, alg):
    direction = _parse_reals(args.direction, "direction")
    parameters = _parse_reals(args.lambdas, "lambda")
    word = ()
    if args.word:
        with open(args.word) as fh:
            word = word_from_json(json.load(fh))
    tol = args.tol if args.tol is not None else 1e-8
    report = rcircle_equality_check(alg, direction, parameters, word, tol)
    return report.to_dict(), {"rcircle": tol}, 0 if report.passed else 1


_COMMANDS = {
    "validate": _cmd_validate,
    "check": _cmd_check,
    "distance": _cmd_distance,
    "cross-ratio": _cmd_cross_ratio,
    "defect": _cmd_defect,
    "rcircle": _cmd_rcircle,
}


# ---------------------------------------------------------------------------
# output


def _csv_rows(command: str, results):
    if command == "check":
        fields = ["suite", "passed", "worst", "tol", "samples", "duration"]
        rows = []

        def add(entry, prefix=""):
            rows.append(
                {
                    "suite": prefix + entry["suite"],
                    "passed": entry["passed"],
                    "worst": entry["worst"],
                    "tol": entry["tol"],
                    "samples": entry["samples"],
                    "duration": entry["duration"],
                }
            )
            for sub in entry.get("subresults", ()):
                add(sub, prefix=entry["suite"] + "/")

        for entry in results:
            add(entry)
        return fields, rows
    if command == "validate":
        fields = ["field", "value"]
        return fields, [
            {"field": k, "value": v} for k, v in results.items() if k != "witness"
        ]
    if command == "defect":
        row = {"min_defect": results["min_defect"], "argmin_pairing": results["argmin_pairing"]}
        for record in results["pairings"]:
            row[f"defect_{record['pairing'].replace('|', '_')}"] = record["defect"]
        return list(row), [row]
    # distance, cross-ratio, rcircle: one flat row
    flat = {k: v for k, v in results.items() if not isinstance(v, (list, dict))}
    return list(flat), [flat]


def _emit(report: dict, args) -> None:
    if args.format == "csv":
        fields, rows = _csv_rows(report["command"], report["results"])
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# parser


def _add_common(sp, points=False):
    sp.add_argument("--algebra", required=True, help="built-in name or JSON file path")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=None, help="tolerance override")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", default=None, help="write the report to this path")
    if points:
        sp.add_argument("--points", required=True, help="JSON file with the input points")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="htgroups",
        description="H-type Iwasawa groups: validation, metric checks, cross-ratios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check the H-type and Iwasawa axioms")
    _add_common(sp)
    sp.add_argument("--samples", type=int, default=None, help="span-test sample count")

    sp = sub.add_parser("check", help="run verification suites")
    _add_common(sp)
    sp.add_argument("--suite", default="all", help="all, expansion, inequalities, calibration, iwasawa, ptolemaean")
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--sampler", choices=("normal", "uniform"), default="normal")
    sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    sp = sub.add_parser("distance", help="distance between two points")
    _add_common(sp, points=True)

    sp = sub.add_parser("cross-ratio", help="square-root cross-ratio of four points")
    _add_common(sp, points=True)

    sp = sub.add_parser("defect", help="Ptolemaean defects of four points")
    _add_common(sp, points=True)

    sp = sub.add_parser("rcircle", help="equality check on an R-circle quadruple")
    _add_common(sp)
    sp.add_argument("--direction", required=True, help="comma-separated horizontal vector")
    sp.add_argument(
        "--lambdas",
        required=True,
        help="four comma-separated parameters (inf allowed); first two form the diagonal pair",
    )
    sp.add_argument("--word", default=None, help="JSON file with a similarity word")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        alg, label = _resolve_algebra(args.algebra)
        results, tolerances, code = _COMMANDS[args.command](args, alg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "algebra": {"source": label, "m": alg.m, "n": alg.n},
        "seed": args.seed,
        "tolerances": tolerances,
        "results": results,
        "duration": time.perf_counter() - started,
    }
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
