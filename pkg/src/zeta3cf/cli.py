"""Command-line surface: evaluate, verify, measure, inspect.

Subcommands: eval, convergents, verify-chain, rate, gutnik, catalog, ref.
Every command emits one envelope {command, format, status, payload} in the
chosen format (text, json, csv).  Output is deterministic: fixed key order,
truncated decimals, no timestamps.

Exit codes: 0 = success / all checks pass; 1 = checks ran and found a
violation; 2 = usage or operational error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import engine, stages, verify
from .rational import sci_string, to_decimal, truncate_float

MAX_REF_DIGITS = 1000


class CommandError(Exception):
    """Operational failure; rendered as a status=error envelope, exit 2."""


def _resolve_numeric_stage(name: str) -> stages.Stage:
    """Stage used for numeric work: derived form for chain positions,
    the literal transcription for presentational variants."""
    cat = stages.catalog()
    if name not in cat:
        known = ", ".join(cat)
        raise CommandError(f"unknown stage {name!r}; known stages: {known}")
    if name in ("APERY", "N"):
        return cat[name]
    if name in stages.CHAIN_ORDER:
        return verify.derived_chain()[name]
    return cat[name]


def _flatten_or_error(stage: stages.Stage) -> stages.FlatCF:
    try:
        return stages.flatten(stage)
    except stages.HeadNotFlattenable as exc:
        raise CommandError(str(exc)) from exc


def _fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


# ---------------------------------------------------------------------------
# Command payload builders.  Each returns (status, payload, tables, exit_code)
# where payload is an ordered mapping and tables maps name -> (header, rows).
# ---------------------------------------------------------------------------


def _cmd_eval(args) -> tuple[str, dict, dict, int]:
    stage = _resolve_numeric_stage(args.stage)
    ref = engine.zeta3_reference(max(args.digits + 10, 30))
    target_value = ref.value(stage.target)
    if stage.levels is not None:
        try:
            flat = stages.flatten(stage)
            value = engine.convergents(flat, args.depth)[-1].value
            method = "forward-convergent"
        except stages.HeadNotFlattenable:
            value = engine.truncation_value(stage, args.depth)
            method = "backward-truncation"
    else:
        value = engine.truncation_value(stage, args.depth)
        method = "backward-truncation"
    decimal, exact = to_decimal(value, args.digits)
    payload = {
        "stage": stage.name,
        "kind": stage.kind,
        "method": method,
        "depth": args.depth,
        "fraction": _fraction_str(value),
        "decimal": decimal,
        "exact": exact,
        "target": stage.target.name,
        "abs_error": sci_string(abs(value - target_value)),
    }
    return "ok", payload, {}, 0


def _cmd_convergents(args) -> tuple[str, dict, dict, int]:
    stage = _resolve_numeric_stage(args.stage)
    flat = _flatten_or_error(stage)
    convs = engine.convergents(flat, args.n_max)
    rows = []
    for c in convs:
        decimal, _ = to_decimal(c.value, args.digits)
        rows.append([c.n, c.p, c.q, _fraction_str(c.value), decimal])
    payload = {"stage": stage.name, "target": stage.target.name, "n_max": args.n_max}
    tables = {"convergents": (["n", "p", "q", "value", "decimal"], rows)}
    return "ok", payload, tables, 0


def _cmd_verify_chain(args) -> tuple[str, dict, dict, int]:
    override = None
    if args.hook_break_sigma:
        override = {args.hook_break_sigma: verify.PolyMobius(1, 1, 0, 1)}
    report = verify.verify_chain(sigma_override=override)
    rows = []
    for s in report.steps:
        rows.append(
            [
                s.step_name,
                "pass" if s.symbolic_pass else "FAIL",
                "match" if s.claimed_matches else "MISMATCH",
                ";".join(entry for entry, _, _ in s.mismatches) or "-",
                s.numeric_residual,
                s.error or "-",
            ]
        )
    variant_rows = [
        [v.name, v.base, "match" if v.matches_derived else "MISMATCH",
         ";".join(entry for entry, _, _ in v.mismatches) or "-"]
        for v in report.variants
    ]
    payload = {
        "final_matches_n": report.final_matches_n,
        "final_head_ok": report.final_head_ok,
        "passed": report.passed,
    }
    tables = {
        "steps": (
            ["step", "symbolic", "claimed", "mismatch_entries", "residual", "error"],
            rows,
        ),
        "variants": (["variant", "base", "claimed", "mismatch_entries"], variant_rows),
    }
    status = "ok" if report.passed else "fail"
    return status, payload, tables, 0 if report.passed else 1


def _cmd_rate(args) -> tuple[str, dict, dict, int]:
    stage = _resolve_numeric_stage(args.stage)
    flat = _flatten_or_error(stage)
    if args.window:
        try:
            lo_s, hi_s = args.window.split(":")
            lo, hi = int(lo_s), int(hi_s)
        except ValueError as exc:
            raise CommandError(f"bad window {args.window!r}; expected LO:HI") from exc
    else:
        lo, hi = args.n_max // 5 + 1, args.n_max
    try:
        ref = engine.zeta3_reference(max(args.ref_digits, 30))
        curve = engine.error_curve(flat, stage.target, args.n_max, ref)
        slope = engine.digits_per_term(curve, lo, hi)
    except (engine.InsufficientData, engine.InsufficientReferencePrecision) as exc:
        raise CommandError(str(exc)) from exc
    payload = {
        "stage": stage.name,
        "target": stage.target.name,
        "n_max": args.n_max,
        "window": f"{lo}:{hi}",
        "slope": truncate_float(slope, 3),
    }
    rows = [[n, truncate_float(d, 3)] for n, d in curve.points]
    tables = {"points": (["n", "accurate_digits"], rows)}
    return "ok", payload, tables, 0


def _cmd_gutnik(args) -> tuple[str, dict, dict, int]:
    nes = stages.flatten(stages.lookup("N"))
    apery = stages.flatten(stages.lookup("APERY"))
    if args.hook_perturb:
        apery = stages.perturbed(apery, 1, 1)
    try:
        report = verify.gutnik_alignment(nes, apery, args.v_max)
    except verify.NoAlignmentFound as exc:
        payload = {"error": str(exc)}
        return "fail", payload, {}, 1
    rows = [
        [
            r.v,
            r.nes_index,
            r.apery_index,
            "true" if r.equal else "false",
            _fraction_str(r.nes_value),
            _fraction_str(r.apery_value),
            r.nes_gcd,
        ]
        for r in report.entries
    ]
    payload = {
        "offset_nes": report.offset_nes,
        "offset_apery": report.offset_apery,
        "rows_equal": report.all_equal,
    }
    tables = {
        "alignment": (
            ["v", "nes_index", "apery_index", "equal", "nes_value", "apery_value", "nes_gcd"],
            rows,
        )
    }
    status = "ok" if report.all_equal else "fail"
    return status, payload, tables, 0 if report.all_equal else 1


def _cmd_catalog(args) -> tuple[str, dict, dict, int]:
    chain_report = verify.verify_chain()
    derived = {r.step_name: r.derived for r in chain_report.steps}
    match_by_name = {r.step_name: r.claimed_matches for r in chain_report.steps}
    match_by_name.update({v.name: v.matches_derived for v in chain_report.variants})
    rows = []
    for stage in stages.catalog().values():
        if stage.levels is not None:
            levels = ";".join(f"(b={lv.b}|a={lv.a})" for lv in stage.levels)
        else:
            levels = "-"
        if stage.kind == "normative":
            status = "normative"
        else:
            status = "match" if match_by_name.get(stage.name) else "MISMATCH"
        rows.append(
            [
                stage.name,
                stage.kind,
                stage.target.name,
                str(stage.head),
                str(stage.step),
                levels,
                status,
                stage.note or "-",
            ]
        )
    for name in stages.CHAIN_ORDER[1:]:
        stage = derived.get(name)
        if stage is None:
            continue
        rows.append(
            [
                f"{name}.derived",
                "derived",
                stage.target.name,
                str(stage.head),
                str(stage.step),
                "-",
                "normative",
                stage.note or "-",
            ]
        )
    payload = {"stages": len(rows)}
    tables = {
        "catalog": (
            ["name", "kind", "target", "head", "step", "levels", "status", "note"],
            rows,
        )
    }
    return "ok", payload, tables, 0


def _cmd_ref(args) -> tuple[str, dict, dict, int]:
    if args.digits < 1 or args.digits > MAX_REF_DIGITS:
        raise CommandError(f"digits must be in 1..{MAX_REF_DIGITS}")
    agree, series, deep = engine.oracles_agree(args.digits)
    payload = {
        "digits": args.digits,
        "zeta3": series.decimal,
        "two_zeta3": series.decimal_for(stages.Target.TWO_ZETA3),
        "oracles": "SERIES,DEEP_CF",
        "oracles_agree": agree,
        "deep_cf": deep.decimal,
    }
    status = "ok" if agree else "fail"
    return status, payload, {}, 0 if agree else 1


# ---------------------------------------------------------------------------
# Rendering.
# ---------------------------------------------------------------------------


def _emit_text(command, status, payload, tables, out) -> None:
    print(f"command: {command}", file=out)
    for key, value in payload.items():
        print(f"{key}: {_plain(value)}", file=out)
    for name, (header, rows) in tables.items():
        if not rows:
            continue
        print(f"[{name}]", file=out)
        widths = [
            max(len(str(h)), max(len(_plain(r[i])) for r in rows))
            for i, h in enumerate(header)
        ]
        print("  ".join(h.ljust(w) for h, w in zip(header, widths)), file=out)
        for row in rows:
            print(
                "  ".join(_plain(cell).ljust(w) for cell, w in zip(row, widths)),
                file=out,
            )
    print(f"status: {status}", file=out)


def _emit_json(command, status, payload, tables, out) -> None:
    body = dict(payload)
    for name, (header, rows) in tables.items():
        body[name] = [dict(zip(header, row)) for row in rows]
    doc = {"command": command, "format": "json", "status": status, "payload": body}
    print(json.dumps(doc, indent=2), file=out)


def _emit_csv(command, status, payload, tables, out) -> None:
    # One table per invocation; scalar payload entries fold into it so the
    # csv carries the same numeric content as the other formats.
    if command == "gutnik" and "alignment" in tables:
        header, rows = tables["alignment"]
        header = header + ["offset_nes", "offset_apery"]
        extra = [payload["offset_nes"], payload["offset_apery"]]
        rows = [row + extra for row in rows]
        _print_table(header, rows, out)
    elif command == "rate" and "points" in tables:
        _, rows = tables["points"]
        out_rows = [["point", n, d] for n, d in rows]
        out_rows.append(["slope", payload["window"], payload["slope"]])
        _print_table(["record", "n", "value"], out_rows, out)
    elif command == "verify-chain" and "steps" in tables:
        header, rows = tables["steps"]
        rows = list(rows)
        for name, base, claimed, mism in tables["variants"][1]:
            rows.append([f"variant:{name}", "-", claimed, mism, "-", f"base={base}"])
        rows.append(
            [
                "(chain)",
                "pass" if payload["passed"] else "FAIL",
                "match" if payload["final_matches_n"] else "MISMATCH",
                "-",
                "-",
                "-",
            ]
        )
        _print_table(header, rows, out)
    elif tables:
        for _, (header, rows) in tables.items():
            _print_table(header, rows, out)
    else:
        print(",".join(payload.keys()), file=out)
        print(",".join(_plain(v) for v in payload.values()), file=out)


def _print_table(header, rows, out) -> None:
    print(",".join(header), file=out)
    for row in rows:
        print(",".join(_plain(c) for c in row), file=out)


def _plain(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _render(args, command, status, payload, tables, out) -> None:
    if args.format == "json":
        _emit_json(command, status, payload, tables, out)
    elif args.format == "csv":
        _emit_csv(command, status, payload, tables, out)
    else:
        _emit_text(command, status, payload, tables, out)


# ---------------------------------------------------------------------------
# Argument parsing and entry point.
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # Shared flags are accepted both before and after the subcommand; the
    # SUPPRESS defaults keep a pre-subcommand value from being overwritten.
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--format", choices=("text", "json", "csv"), default=argparse.SUPPRESS,
        help="output format (default: text)",
    )
    shared.add_argument(
        "--digits", type=int, default=argparse.SUPPRESS,
        help="decimal digits for rendered values (default: 12)",
    )

    parser = argparse.ArgumentParser(
        prog="zeta3cf",
        parents=[shared],
        description=(
            "Exact continued-fraction engine and derivation verifier for the "
            "chain from Apery's fraction for 2*zeta(3) to Nesterenko's expansion."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser(
        "eval", parents=[shared], help="evaluate one stage at a truncation depth"
    )
    p_eval.add_argument("stage")
    p_eval.add_argument("--depth", type=int, default=10)

    p_conv = sub.add_parser("convergents", parents=[shared], help="exact convergent table")
    p_conv.add_argument("stage")
    p_conv.add_argument("--n-max", type=int, default=10)

    p_chain = sub.add_parser(
        "verify-chain", parents=[shared], help="prove every derivation step"
    )
    p_chain.add_argument("--hook-break-sigma", metavar="STEP", help=argparse.SUPPRESS)

    p_rate = sub.add_parser(
        "rate", parents=[shared], help="error curve and digits-per-term slope"
    )
    p_rate.add_argument("stage")
    p_rate.add_argument("--n-max", type=int, default=50)
    p_rate.add_argument("--window", help="fit window LO:HI (default: n_max/5..n_max)")
    p_rate.add_argument("--ref-digits", type=int, default=120)

    p_gut = sub.add_parser(
        "gutnik", parents=[shared], help="convergent-coincidence alignment table"
    )
    p_gut.add_argument("--v-max", type=int, default=10)
    p_gut.add_argument("--hook-perturb", action="store_true", help=argparse.SUPPRESS)

    sub.add_parser("catalog", parents=[shared], help="list claimed and derived stages")

    sub.add_parser("ref", parents=[shared], help="reference zeta(3) and 2*zeta(3)")

    return parser


_COMMANDS = {
    "eval": _cmd_eval,
    "convergents": _cmd_convergents,
    "verify-chain": _cmd_verify_chain,
    "rate": _cmd_rate,
    "gutnik": _cmd_gutnik,
    "catalog": _cmd_catalog,
    "ref": _cmd_ref,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    # Shared flags use SUPPRESS defaults so either position wins; fill here.
    args.format = getattr(args, "format", "text")
    args.digits = getattr(args, "digits", 12)
    command = args.command
    try:
        status, payload, tables, code = _COMMANDS[command](args)
    except CommandError as exc:
        _render(args, command, "error", {"error": str(exc)}, {}, out)
        return 2
    except (ValueError, KeyError, ArithmeticError) as exc:
        _render(args, command, "error", {"error": str(exc)}, {}, out)
        return 2
    _render(args, command, status, payload, tables, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
