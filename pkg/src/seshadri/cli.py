"""Command-line entry point.

All numeric flags are exact-rational strings ("p/q" or "p"); decimal
input is rejected before any computation runs.  Reports embed the tool
and schema versions, and output files are written atomically.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Optional

from . import __version__
from .bounds import candidate_ratios, minimal_M, multiplicity_target, RRData
from .checks import run_all_checks
from .engine import Certification, epsilon, global_epsilon, sublevel_set
from .family import load_family, scan
from .models import SCHEMA_VERSION, load_model_file
from .values import format_rational, parse_rational


def _report_header() -> dict:
    return {"tool_version": __version__, "schema_version": SCHEMA_VERSION}


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    directory = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".seshadri-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
        os.replace(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_report(doc: dict, fmt: str, output: Optional[str], text_lines) -> None:
    if fmt == "json":
        _emit(json.dumps({**_report_header(), **doc}, indent=2), output)
    else:
        _emit("\n".join(text_lines), output)


def cmd_bound(args) -> int:
    rr = RRData(
        d=args.d, c=args.c, c_prime=args.c_prime, vanishing_multiplier=args.vanishing_multiplier
    )
    a = parse_rational(args.a)
    bound = minimal_M(rr, a)
    target = multiplicity_target(bound.M, a)
    doc = {
        "d": rr.d,
        "c": rr.c,
        "c_prime": rr.c_prime,
        "a": format_rational(a),
        "M": bound.M,
        "B": bound.B,
        "multiplicity_target": target,
        "vanishing_multiplier": bound.vanishing_multiplier,
    }
    lines = [
        f"M = {bound.M}",
        f"B = {bound.B}",
        f"multiplicity target = {target}",
    ]
    if bound.vanishing_multiplier != 1:
        lines.append(
            f"bound applies to the polarization raised to the power "
            f"{bound.vanishing_multiplier}"
        )
    _emit_report(doc, args.format, args.output, lines)
    return 0


def cmd_candidates(args) -> int:
    alpha = parse_rational(args.alpha)
    ratios = candidate_ratios(args.B, alpha, require_m_le_t=not args.permissive)
    doc = {
        "B": args.B,
        "alpha": format_rational(alpha),
        "certified": not args.permissive,
        "ratios": [format_rational(q) for q in ratios],
    }
    lines = [", ".join(format_rational(q) for q in ratios)]
    if args.permissive:
        lines.append("(permissive mode: not a certified superset)")
    _emit_report(doc, args.format, args.output, lines)
    return 0


def cmd_epsilon(args) -> int:
    model = load_model_file(args.model)
    alpha = parse_rational(args.alpha) if args.alpha else None
    if args.stratum:
        result = epsilon(model, model.stratum(args.stratum), alpha)
    else:
        result = global_epsilon(model, alpha)
    doc = {"model": model.name, "stratum": args.stratum or None, **result.to_document()}
    lines = [
        f"epsilon = {result.value.serialize()}  (approx {result.value.approx():.6g})",
        f"certification = {result.certification.value}",
    ]
    if result.witness:
        lines.append(
            f"witness = {result.witness.label} (t={result.witness.degree_t}, "
            f"m={result.witness.mult_m})"
        )
    if result.attained_at:
        lines.append(f"attained at stratum {result.attained_at}")
    if result.warning:
        lines.append(f"warning: {result.warning}")
    _emit_report(doc, args.format, args.output, lines)
    if args.strict and result.certification is not Certification.EXACT_CERTIFIED:
        return 2
    return 0


def cmd_sublevel(args) -> int:
    model = load_model_file(args.model)
    a = parse_rational(args.a)
    labels = sublevel_set(model, a)
    doc = {
        "model": model.name,
        "a": format_rational(a),
        "strata": labels,
        "closed_under_specialization": True,
    }
    lines = [
        "strata: " + (", ".join(labels) if labels else "(none)"),
        "closed under specialization: yes",
    ]
    _emit_report(doc, args.format, args.output, lines)
    return 0


def cmd_scan(args) -> int:
    with open(args.family, "r", encoding="utf-8") as fh:
        family = load_family(fh.read(), base_dir=os.path.dirname(os.path.abspath(args.family)))
    alpha = parse_rational(args.alpha)
    report = scan(family, alpha)
    if args.csv:
        _emit(report.to_csv(), args.csv)
    doc = report.to_document()
    lines = [
        f"sigma(family) = {report.sigma_family.serialize()} attained at "
        f"{report.sigma_attained_at[0]}/{report.sigma_attained_at[1]}",
        f"observed values <= {format_rational(alpha)}: "
        + (", ".join(format_rational(q) for q in report.sigma_cap) or "(none)")
        + f"  [{len(report.sigma_cap)} values]",
        "candidate superset: "
        + ", ".join(format_rational(q) for q in report.candidate_superset),
        "semicontinuity: "
        + (
            "all pass"
            if all(v.passed for v in report.semicontinuity_verdicts)
            else "FAILURES: "
            + "; ".join(
                f"{v.kind} {v.general}->{v.special} in {v.context}"
                for v in report.semicontinuity_verdicts
                if not v.passed
            )
        ),
        "jump members: " + (", ".join(report.jump_members) or "(none)"),
    ]
    if report.uncertified:
        lines.append(
            "uncertified strata: "
            + ", ".join(f"{m}/{s}" for m, s in report.uncertified)
        )
    _emit_report(doc, args.format, args.output, lines)
    degraded = bool(report.uncertified) or not all(
        v.passed for v in report.semicontinuity_verdicts
    )
    if args.strict and degraded:
        return 2
    return 0


def cmd_check(args) -> int:
    results = run_all_checks()
    lines = []
    for res in results:
        lines.append(f"{'PASS' if res.passed else 'FAIL'} {res.name}: {res.detail}")
    if args.format == "json":
        doc = {
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
            ],
            "all_passed": all(r.passed for r in results),
        }
        _emit_report(doc, "json", args.output, lines)
    else:
        _emit("\n".join(lines), args.output)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seshadri",
        description="Certified Seshadri-constant calculator for lattice-presented "
        "polarized surfaces",
    )
    parser.add_argument("--version", action="version", version=f"seshadri {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "text"], default="text")
        p.add_argument("--output", help="write the report to this path (atomically)")
        p.add_argument(
            "--strict",
            action="store_true",
            help="exit 2 when any certification-degrading condition is hit",
        )

    p = sub.add_parser("bound", help="degree bound M, B = M*d for a ratio threshold")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--c-prime", type=int, required=True, dest="c_prime")
    p.add_argument("--a", required=True, help="threshold as p/q with a^2 < d")
    p.add_argument("--vanishing-multiplier", type=int, default=1, dest="vanishing_multiplier")
    common(p)
    p.set_defaults(fn=cmd_bound)

    p = sub.add_parser("candidates", help="all ratios t/m <= alpha with m <= t <= B")
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument(
        "--permissive",
        action="store_true",
        help="let m range independently of t (exploratory, not certified)",
    )
    common(p)
    p.set_defaults(fn=cmd_candidates)

    p = sub.add_parser("epsilon", help="local or global Seshadri constant of a model")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--stratum", help="stratum label (default: global value)")
    p.add_argument("--alpha", help="certification threshold p/q")
    common(p)
    p.set_defaults(fn=cmd_epsilon)

    p = sub.add_parser("sublevel", help="strata with value <= a, with closure verdict")
    p.add_argument("model")
    p.add_argument("--a", required=True)
    common(p)
    p.set_defaults(fn=cmd_sublevel)

    p = sub.add_parser("scan", help="family scan: value set, supremum, semicontinuity")
    p.add_argument("family", help="family JSON file")
    p.add_argument("--alpha", required=True)
    p.add_argument("--csv", help="also write the per-stratum table as CSV here")
    common(p)
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("check", help="run the full invariant suite over the built-ins")
    common(p)
    p.set_defaults(fn=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
