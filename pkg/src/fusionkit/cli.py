"""``fusionkit`` command-line front end.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input. Errors are
written to stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import CheckFailure, FusionKitError, InputError
from .fixtures import run_fixtures
from .galois import builtin_group, galois_report, read_group_file
from .modular_data import (
    DEFAULT_TOL,
    ModularDatum,
    _fmt,
    build_affine_sl2,
    build_ising,
    build_lattice,
    build_minimal_model,
    builtin_lattice,
    BUILTIN_LATTICES,
    datum_from_json,
    min_weight_label,
    validate,
)
from .qdim import CLASSIFY_TOL, all_qdims, check_multiplicativity, global_dimension
from .qseries import all_limits, series_from_spec
from .spectral import bipartite_double, to_dot, verify_possible_values
from .verlinde import check_fusion_axioms, fusion_csv, fusion_from_smatrix, tensor_decompose

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2
AGREEMENT_TOL = 0.1


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = DEFAULT_TOL
    classification_tolerance: float = CLASSIFY_TOL
    truncation: int = 800
    output_format: str = "table"
    output_path: str | None = None

    def __post_init__(self):
        if not (self.tolerance > 0 and self.classification_tolerance > 0):
            raise InputError("tolerances must be positive")
        if self.truncation < 1:
            raise InputError("truncation must be at least 1")
        if self.output_format not in ("json", "csv", "table"):
            raise InputError(f"unknown output format {self.output_format!r}")


@dataclass
class Output:
    payload: dict
    rows: list = field(default_factory=list)
    csv_text: str | None = None
    text: str | None = None  # raw text that replaces every format (DOT)
    code: int = EXIT_OK


# --- input parsing ---------------------------------------------------------------

def _int(s: str, what: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise InputError(f"{what} must be an integer, got {s!r}") from None


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _lattice_from_file(path: str) -> ModularDatum:
    data = _read_json(path)
    if "gram" not in data:
        raise InputError(f"{path} has no 'gram' entry")
    cosets = None
    if "cosets" in data:
        try:
            cosets = [[Fraction(int(n), int(d)) for n, d in vec] for vec in data["cosets"]]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cosets must be lists of [num, den] pairs: {exc}") from None
    return build_lattice(data["gram"], cosets, name=f"lattice:{Path(path).name}")


def parse_family(spec: str) -> ModularDatum:
    """``minimal:p:q``, ``ising``, ``sl2:k``, ``lattice:<name or file>`` or ``json:<file>``."""
    kind, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    if kind == "ising" and not args:
        return build_ising()
    if kind == "minimal" and len(args) == 2:
        return build_minimal_model(_int(args[0], "p"), _int(args[1], "q"))
    if kind == "sl2" and len(args) == 1:
        return build_affine_sl2(_int(args[0], "k"))
    if kind == "lattice" and rest:
        return builtin_lattice(rest) if rest in BUILTIN_LATTICES else _lattice_from_file(rest)
    if kind == "json" and rest:
        try:
            return datum_from_json(Path(rest).read_text())
        except OSError as exc:
            raise InputError(f"cannot read {rest}: {exc.strerror}") from None
    raise InputError(f"cannot parse family {spec!r}")


def parse_group(spec: str):
    if spec.startswith("builtin:"):
        return builtin_group(spec.split(":", 1)[1])
    if not Path(spec).exists():
        raise InputError(f"no such group file {spec!r}")
    return read_group_file(spec)


# --- subcommands -------------------------------------------------------------------

def cmd_family(args, cfg: RunConfig) -> Output:
    md = parse_family(args.family)
    report = validate(md, cfg.tolerance)
    rows = [{"label": lab, "weight": str(w), "conjugate": md.labels[c]}
            for lab, w, c in zip(md.labels, md.weights, md.conjugation)]
    payload = {"datum": md.to_dict(), "validation": report.to_dict()}
    return Output(payload, rows, code=EXIT_OK if report.passed else EXIT_CHECK)


def cmd_fusion(args, cfg: RunConfig) -> Output:
    md = parse_family(args.family)
    ft = fusion_from_smatrix(md)
    axioms = check_fusion_axioms(ft, md.conjugation)
    rows = [{"i": md.labels[i], "j": md.labels[j],
             "product": " + ".join(md.labels[k] for k in tensor_decompose(ft, i, j))}
            for i in range(ft.dim) for j in range(i, ft.dim)]
    payload = {**ft.to_dict(), "axioms": axioms, "max_residual": _fmt(ft.max_residual)}
    return Output(payload, rows, fusion_csv(ft), code=EXIT_OK if all(axioms.values()) else EXIT_CHECK)


def cmd_qdim(args, cfg: RunConfig) -> Output:
    md = parse_family(args.family)
    dims = all_qdims(md, cfg.classification_tolerance)
    rows = [{"label": md.labels[i], "weight": str(md.weights[i]), "qdim": _fmt(d.value),
             "tag": d.tag, "simple_current": bool(abs(d.value - 1) < cfg.tolerance)}
            for i, d in enumerate(dims)]
    payload = {"family": md.name, "min_weight_label": md.labels[min_weight_label(md)], "rows": rows}
    code = EXIT_OK if all(d.value >= 1 - cfg.tolerance for d in dims) else EXIT_CHECK
    return Output(payload, rows, code=code)


def cmd_global(args, cfg: RunConfig) -> Output:
    md = parse_family(args.family)
    g = global_dimension(md, cfg.classification_tolerance)
    ft = fusion_from_smatrix(md)
    mult = check_multiplicativity(md, ft)
    payload = {**g.to_dict(), "multiplicativity_residual": _fmt(mult)}
    row = {"value": payload["value"], "inverse_s00_squared": payload["inverse_s00_squared"],
           "residual": payload["residual"], "multiplicativity_residual": payload["multiplicativity_residual"]}
    bad = (g.residual is not None and g.residual >= 1e-8) or mult >= 1e-8
    return Output(payload, [row], code=EXIT_CHECK if bad else EXIT_OK)


def cmd_classify(args, cfg: RunConfig) -> Output:
    md = parse_family(args.family)
    rep = verify_possible_values(md, fusion_from_smatrix(md), classify_tol=cfg.classification_tolerance)
    rows = [{**r, "components": " ".join(r["components"] or [])} for r in rep.rows]
    return Output(rep.to_dict(), rows, code=EXIT_OK if rep.passed else EXIT_CHECK)


def cmd_charlimit(args, cfg: RunConfig) -> Output:
    a = series_from_spec(args.numerator, cfg.truncation)
    b = series_from_spec(args.denominator, cfg.truncation)
    ests = all_limits(a, b)
    rows = [{"route": e.route, "value": _fmt(e.value), "converged": e.converged} for e in ests]
    conv = [e.value for e in ests if e.converged]
    spread = max(conv) - min(conv) if conv else 0.0
    payload = {"numerator": args.numerator, "denominator": args.denominator,
               "truncation": cfg.truncation, "estimates": [e.to_dict() for e in ests],
               "diverges": not conv}
    csv_text = "".join(e.trace_csv() if k == 0 else e.trace_csv().split("\n", 1)[1]
                       for k, e in enumerate(ests))
    return Output(payload, rows, csv_text, code=EXIT_CHECK if spread >= AGREEMENT_TOL else EXIT_OK)


def cmd_series(args, cfg: RunConfig) -> Output:
    s = series_from_spec(args.series, cfg.truncation)
    payload = {"name": s.name, "leading_exponent": str(s.leading_exponent),
               "grading_step": str(s.grading_step), "coefficients": list(s.coefficients)}
    rows = [{"slot": j, "exponent": str(s.exponent(j)), "coefficient": c}
            for j, c in enumerate(s.coefficients)]
    return Output(payload, rows, s.to_csv())


def cmd_graph(args, cfg: RunConfig) -> Output:
    md = parse_family(args.family)
    ft = fusion_from_smatrix(md)
    i = md.index(args.label)
    return Output({}, text=to_dot(bipartite_double(ft.entries[i]), f"N({md.labels[i]})"))


def cmd_galois(args, cfg: RunConfig) -> Output:
    g = parse_group(args.group)
    report = galois_report(g)
    ok = all(r["galois_extension"] == r["is_normal"] and r["deg_V_over_VH"] * r["deg_VH_over_VG"] == g.order
             for r in report)
    payload = {"order": g.order, "subgroups": len(report),
               "galois": sum(r["galois_extension"] for r in report), "report": report}
    rows = [{"elements": " ".join(map(str, r["elements"])), "order": r["order"], "index": r["index"],
             "normal": r["is_normal"], "galois": r["galois_extension"]} for r in report]
    return Output(payload, rows, code=EXIT_OK if ok else EXIT_CHECK)


def cmd_fixtures(args, cfg: RunConfig) -> Output:
    results = run_fixtures(truncation=cfg.truncation)
    rows = [{"fixture": r.key, "status": "PASS" if r.passed else "FAIL", "topic": r.topic, "detail": r.detail}
            for r in results]
    passed = all(r.passed for r in results)
    payload = {"passed": passed, "fixtures": rows}
    return Output(payload, rows, code=EXIT_OK if passed else EXIT_CHECK)


# --- formatting -------------------------------------------------------------------------

def _table(rows: list) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    cells = [[str(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[k]) for row in cells)) for k, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def _csv(rows: list) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def render(out: Output, fmt: str) -> str:
    if out.text is not None:
        return out.text
    if fmt == "json":
        return json.dumps(out.payload, indent=2) + "\n"
    if fmt == "csv":
        return out.csv_text if out.csv_text is not None else _csv(out.rows)
    return _table(out.rows)


# --- entry point ------------------------------------------------------------------------

COMMANDS = {
    "family": (cmd_family, "modular datum and validation report", ["family"]),
    "fusion": (cmd_fusion, "Verlinde fusion table", ["family"]),
    "qdim": (cmd_qdim, "quantum dimension per label", ["family"]),
    "global": (cmd_global, "global dimension", ["family"]),
    "classify": (cmd_classify, "spectral radii and ADE classification", ["family"]),
    "charlimit": (cmd_charlimit, "three limit estimates for a character quotient", ["numerator", "denominator"]),
    "series": (cmd_series, "dump a graded series", ["series"]),
    "graph": (cmd_graph, "bipartite fusion graph of one label as DOT", ["family", "label"]),
    "galois": (cmd_galois, "subgroup and Galois report for a finite group", ["group"]),
    "fixtures": (cmd_fixtures, "replay every worked example", []),
}


def _default_tol() -> float:
    env = os.environ.get("FUSIONKIT_TOL")
    if env is None:
        return DEFAULT_TOL
    try:
        return float(env)
    except ValueError:
        raise InputError(f"FUSIONKIT_TOL must be a number, got {env!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--trunc", type=int, default=800, help="series truncation (default 800)")
    common.add_argument("--tol", type=float, default=None, help="check tolerance (default 1e-9 or $FUSIONKIT_TOL)")
    common.add_argument("--classify-tol", type=float, default=CLASSIFY_TOL)

    parser = argparse.ArgumentParser(prog="fusionkit", description="Quantum dimensions and fusion rules of rational VOAs.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, helptext, positionals) in COMMANDS.items():
        p = sub.add_parser(name, help=helptext, parents=[common])
        for pos in positionals:
            p.add_argument(pos)
    return parser


def _fail(exc: Exception, code: int) -> int:
    if isinstance(exc, FusionKitError):
        body = exc.to_dict()
    else:
        body = {"error": type(exc).__name__, "message": str(exc)}
    body["exit_code"] = code
    print(json.dumps(body), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = args.tol if args.tol is not None else _default_tol()
        cfg = RunConfig(tol, args.classify_tol, args.trunc, args.format, args.out)
        out = COMMANDS[args.command][0](args, cfg)
    except InputError as exc:
        return _fail(exc, EXIT_INPUT)
    except CheckFailure as exc:
        return _fail(exc, EXIT_CHECK)
    text = render(out, cfg.output_format)
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        sys.stdout.write(text)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
