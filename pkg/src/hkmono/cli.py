"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Optional

from .linalg import Matrix, format_rational, to_fraction
from .nilpotent import (
    NilpotentOperator,
    graded_dims,
    jm_cocharacter,
    normal_form,
    nu,
    primitive_normal_form,
    weight_filtration,
)
from .quadratic import QuadraticSpace, standard_bbf_gram

__all__ = ["main", "build_parser", "ParseError", "ValidationError"]


class ParseError(Exception):
    pass


class ValidationError(Exception):
    pass


# -- serialization --------------------------------------------------------------


def jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Matrix):
        return x.to_strings()
    if isinstance(x, dict):
        return {str(jsonable(k)) if not isinstance(k, str) else k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _cell(v: Any) -> str:
    v = jsonable(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else str(v)


def render(report: dict, fmt: str) -> str:
    """``report`` has ``title``, optional ``meta`` (dict) and ``rows`` (list of dicts)."""
    if fmt == "json":
        return json.dumps(jsonable(report), indent=2, sort_keys=True) + "\n"
    rows = report.get("rows", [])
    columns: list[str] = []
    for r in rows:
        for k in r:
            if k not in columns:
                columns.append(k)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if columns:
            w.writerow(columns)
            for r in rows:
                w.writerow([_cell(r.get(c)) for c in columns])
        else:
            for k, v in report.get("meta", {}).items():
                w.writerow([k, _cell(v)])
        return buf.getvalue()
    lines = [f"## {report.get('title', '')}", ""]
    for k, v in report.get("meta", {}).items():
        lines.append(f"- {k}: {_cell(v)}")
    if report.get("meta"):
        lines.append("")
    if columns:
        lines.append("| " + " | ".join(columns) + " |")
        lines.append("|" + "---|" * len(columns))
        for r in rows:
            lines.append("| " + " | ".join(_cell(r.get(c)) for c in columns) + " |")
    return "\n".join(lines).rstrip() + "\n"


# -- input parsing ----------------------------------------------------------------------


def _load_json(args) -> dict:
    try:
        if args.input and args.input != "-":
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read JSON input: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("JSON input must be an object")
    return data


def _parse_rationals(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(to_fraction(t.strip()) for t in text.split(",") if t.strip())
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParseError(f"bad rational list {text!r}: {exc}") from exc


def _parse_matrix(rows) -> Matrix:
    try:
        return Matrix([[to_fraction(v) for v in row] for row in rows])
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"bad matrix: {exc}") from exc


def _operator_from_json(data: dict) -> NilpotentOperator:
    """``{"normal_form": {"type", "b2", "primitive"?}}`` or ``{"matrix", "gram" | "bbf"?}``."""
    if "normal_form" in data:
        spec = data["normal_form"]
        try:
            tag = (spec["type"], int(spec["b2"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad normal_form entry: {exc}") from exc
        try:
            return primitive_normal_form(tag) if spec.get("primitive") else normal_form(tag)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
    if "matrix" not in data:
        raise ParseError("input needs 'matrix' or 'normal_form'")
    m = _parse_matrix(data["matrix"])
    space = None
    if "gram" in data:
        try:
            space = QuadraticSpace(_parse_matrix(data["gram"]))
        except ValueError as exc:
            raise ValidationError(f"bad form: {exc}") from exc
    elif "bbf" in data:
        try:
            space = standard_bbf_gram(int(data["bbf"]["r"]), bool(data["bbf"].get("odd", False)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad bbf entry: {exc}") from exc
    try:
        return NilpotentOperator(m, space)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def _decomposition_from_json(data: dict):
    from .predict import LLVDecomposition

    try:
        return LLVDecomposition.from_json(data)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad decomposition: {exc}") from exc


def _family(args, rank: int):
    from .weights import RootSystemBD

    try:
        return RootSystemBD(args.family, rank)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# -- commands -------------------------------------------------------------------------


def cmd_nu(args) -> dict:
    data = _load_json(args)
    op = _operator_from_json(data)
    gd = graded_dims(op)
    k = nu(op)
    sym = {i: gd.get(i, 0) for i in range(-k, k + 1)}
    filt = weight_filtration(op).dims()
    return {
        "title": "nilpotency index",
        "input": data,
        "meta": {"nu": k, "dim": op.dim},
        "rows": [{"i": i, "gr_dim": sym[i], "M_dim": filt.get(i, op.dim)} for i in sorted(sym)],
    }


def cmd_filtration(args) -> dict:
    data = _load_json(args)
    op = _operator_from_json(data)
    wf = weight_filtration(op)
    rows = [{"i": i, "dim": len(b), "basis": [list(v) for v in b]} for i, b in sorted(wf.subspaces.items())]
    meta: dict = {"nu": wf.k, "graded": wf.graded}
    if op.space is not None:
        meta["cocharacter"] = jm_cocharacter(op).coordinates()
    return {"title": "monodromy weight filtration", "input": data, "meta": meta, "rows": rows}


def cmd_normal_form(args) -> dict:
    try:
        op = (primitive_normal_form if args.primitive else normal_form)((args.type, args.b2))
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    return {
        "title": f"Type {args.type} normal form, b2 = {args.b2}" + (" (primitive part)" if args.primitive else ""),
        "meta": {"matrix": op.matrix, "gram": op.space.gram, "nu": nu(op),
                 "cocharacter": jm_cocharacter(op).coordinates()},
        "rows": [],
    }


def cmd_clifford_check(args) -> dict:
    from .clifford import CliffordAlgebra, spin_rep

    m = args.m
    if m < 1:
        raise ValidationError("m must be positive")
    q = standard_bbf_gram(m // 2, bool(m % 2)) if m >= 2 else QuadraticSpace(Matrix([[1]]))
    try:
        alg = CliffordAlgebra(q)
        spin = spin_rep(q)
        report = alg.commutant_check() if m <= 8 else None
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    meta = {
        "m": m,
        "dim_cl": alg.dim,
        "dim_cl_even": len(alg.even_masks()),
        "spin_dim": spin.dim,
        "spin_relations": spin.check_relations(),
    }
    if report is not None:
        meta["commutant_dim"] = report.commutant_dim
        meta["commutant_is_left_multiplications"] = report.ok
    ok = meta["spin_relations"] and (report is None or report.ok)
    if not ok:
        raise ValidationError("Clifford checks failed: " + json.dumps(jsonable(meta), sort_keys=True))
    return {"title": f"Clifford algebra, m = {m}", "meta": meta, "rows": []}


def _thm52_rows(b2: int) -> tuple[int, list[dict], bool]:
    from .reduction import enumerate_reduction_cases, expected_labels

    cases = enumerate_reduction_cases(b2)
    rows = []
    for c in cases:
        ratios = c.a_ratios
        rows.append({
            "b2": b2, "case": c.label, "r2": c.r[2], "r1": c.r[1], "r0": c.r[0],
            "m": c.m, "rA1/b1": ratios[1], "rA0/b1": ratios[0],
        })
    ok = [c.label for c in cases] == expected_labels(b2)
    return b2, rows, ok


def _parse_range(text: str) -> list[int]:
    try:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    except ValueError as exc:
        raise ParseError(f"range must look like A..B, got {text!r}") from exc


def cmd_verify_thm52(args) -> dict:
    if args.range:
        b2s = _parse_range(args.range)
    elif args.b2 is not None:
        b2s = [args.b2]
    else:
        raise ParseError("give --b2 or --range")
    if any(b < 4 for b in b2s):
        raise ValidationError("b2 must be at least 4")
    if args.jobs > 1 and len(b2s) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_thm52_rows, b2s))
    else:
        results = [_thm52_rows(b) for b in b2s]
    rows = [r for _, rs, _ in results for r in rs]
    failed = [b for b, _, ok in results if not ok]
    report = {"title": "degeneration cases", "meta": {"b2": b2s, "all_pass": not failed}, "rows": rows}
    if failed:
        report["meta"]["failed"] = failed
        raise ValidationError(render(report, "markdown"))
    return report


def cmd_weyl_max(args) -> dict:
    from .weights import weyl_orbit_max

    lam = _parse_rationals(args.weight)
    h = _parse_rationals(args.h)
    if len(lam) != len(h):
        raise ParseError("weight and h need the same length")
    rs = _family(args, len(lam))
    try:
        value = weyl_orbit_max(lam, h, rs)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    return {"title": "Weyl orbit maximum", "meta": {"system": str(rs), "weight": lam, "h": h, "max": value}, "rows": []}


def cmd_branch(args) -> dict:
    from .weights import grade_and_branch

    mu = _parse_rationals(args.mu)
    if len(mu) < 2:
        raise ParseError("ambient weight needs at least 2 coordinates")
    amb = _family(args, len(mu))
    tgt = _family(args, len(mu) - 1)
    try:
        br = grade_and_branch(mu, amb, tgt)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    mirrors = br.mirror_pairs()
    rows = []
    for g, comps in br.normalized().items():
        for lam, mult in sorted(comps.items(), reverse=True):
            rows.append({"grade": g, "weight": lam, "mult": mult, "mirror": lam in mirrors.get(g, set())})
    return {"title": f"branching {amb} -> {tgt}", "meta": {"mu": mu, "dim": br.dimension()}, "rows": rows}


def cmd_criterion(args) -> dict:
    from .predict import theorem71_check, validate_decomposition

    data = _load_json(args)
    d = _decomposition_from_json(data)
    problems = validate_decomposition(d)
    if problems:
        raise ValidationError("; ".join(problems))
    try:
        rep = theorem71_check(d)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    report = {
        "title": "Type II criterion",
        "input": d.to_json(),
        "meta": {"condition1": rep.condition1, "condition2": rep.condition2, "agree": rep.agree},
        "rows": [{"i": i, "nu": v} for i, v in rep.nu_even.items()],
    }
    if not rep.agree:
        raise ValidationError(render(report, "markdown"))
    return report


def cmd_predict(args) -> dict:
    from .predict import deformation_type, nu_table, predict_nu_odd, validate_decomposition, verbitsky_only

    if args.deformation:
        try:
            data = deformation_type(args.deformation, args.n)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        d = verbitsky_only(data.n, data.b2)
        source: Any = data
    else:
        d = _decomposition_from_json(_load_json(args))
        source = d
    problems = validate_decomposition(d)
    if problems:
        raise ValidationError("; ".join(problems))
    odd = None
    if args.odd:
        try:
            odd = predict_nu_odd(source, args.type)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
    table = nu_table(d, args.type, odd)
    rows = []
    top = 4 * d.n
    for k, v in table.values.items():
        low = min(k, top - k)
        bound = low if low % 2 == 0 else max(low - 2, 0)
        rows.append({"degree": k, "nu": v, "bound": bound})
    viol = table.violations()
    report = {
        "title": f"Type {args.type} nilpotency table",
        "input": d.to_json(),
        "meta": {"n": d.n, "b2": d.b2, "type": args.type, "violations": viol},
        "rows": rows,
    }
    return report


def cmd_llv_toy(args) -> dict:
    from .llv import mukai_toy_algebra, to_completion, total_lie_algebra
    from .quadratic import is_in_so, mukai_completion

    b2 = args.b2
    if b2 < 2:
        raise ValidationError("b2 must be at least 2")
    q = standard_bbf_gram(b2 // 2, bool(b2 % 2))
    alg = mukai_toy_algebra(q)
    lie = total_lie_algebra(alg)
    comp = mukai_completion(q)
    inside = all(is_in_so(to_completion(x, comp), comp.total) for x in lie.basis)
    target = (b2 + 2) * (b2 + 1) // 2
    meta = {"b2": b2, "generated_dim": lie.dim, "so_dim": target, "inside_so": inside}
    if lie.dim != target or not inside:
        raise ValidationError(json.dumps(jsonable(meta), sort_keys=True))
    return {"title": "total Lie algebra of the toy algebra", "meta": meta, "rows": []}


COMMANDS: dict[str, Callable[[argparse.Namespace], dict]] = {
    "nu": cmd_nu,
    "filtration": cmd_filtration,
    "normal-form": cmd_normal_form,
    "clifford-check": cmd_clifford_check,
    "verify-thm52": cmd_verify_thm52,
    "weyl-max": cmd_weyl_max,
    "branch": cmd_branch,
    "criterion": cmd_criterion,
    "predict": cmd_predict,
    "llv-toy": cmd_llv_toy,
}


def build_parser() -> argparse.ArgumentParser:
    def flags(top: bool) -> argparse.ArgumentParser:
        # subcommand copies must not overwrite values given before the subcommand
        d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
        f = argparse.ArgumentParser(add_help=False)
        f.add_argument("--format", choices=("json", "markdown", "csv"), default=d("markdown"))
        f.add_argument("--output", default=d(None), help="write the report here instead of stdout")
        f.add_argument("--input", default=d(None), help="JSON input file ('-' or absent: stdin)")
        f.add_argument("--jobs", type=int, default=d(1))
        return f

    common = flags(False)
    p = argparse.ArgumentParser(prog="hkmono", description="Monodromy and LLV computations", parents=[flags(True)])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("nu", parents=[common], help="nilpotency index and graded dims")
    sub.add_parser("filtration", parents=[common], help="weight filtration bases")
    nf = sub.add_parser("normal-form", parents=[common], help="normalized monodromy matrix")
    nf.add_argument("--type", choices=("I", "II", "III"), required=True)
    nf.add_argument("--b2", type=int, required=True)
    nf.add_argument("--primitive", action="store_true")
    cc = sub.add_parser("clifford-check", parents=[common], help="Clifford algebra and spin module checks")
    cc.add_argument("--m", type=int, required=True)
    vt = sub.add_parser("verify-thm52", parents=[common], help="enumerate degeneration cases")
    vt.add_argument("--b2", type=int)
    vt.add_argument("--range")
    wm = sub.add_parser("weyl-max", parents=[common], help="max of <w(weight), h> over the Weyl group")
    wm.add_argument("--family", choices=("B", "D"), required=True)
    wm.add_argument("--weight", required=True, help="comma-separated rationals")
    wm.add_argument("--h", required=True, help="comma-separated rationals")
    br = sub.add_parser("branch", parents=[common], help="graded branching to the next smaller rank")
    br.add_argument("--family", choices=("B", "D"), required=True)
    br.add_argument("--mu", required=True, help="comma-separated rationals")
    sub.add_parser("criterion", parents=[common], help="check the Type II criterion on a decomposition")
    pr = sub.add_parser("predict", parents=[common], help="nilpotency table for a decomposition")
    pr.add_argument("--type", choices=("I", "II", "III"), required=True)
    pr.add_argument("--odd", action="store_true", help="include odd degrees")
    pr.add_argument("--deformation", help="K3n, Kumn, OG6 or OG10 instead of JSON input")
    pr.add_argument("--n", type=int)
    lt = sub.add_parser("llv-toy", parents=[common], help="total Lie algebra of the toy algebra")
    lt.add_argument("--b2", type=int, required=True)
    return p


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return 1
    _emit(render(report, args.format), args.output)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
