"""Command-line front end.

Exit status: 0 when every check passes, 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from .curvature import (
    curvature_space,
    first_prolongation,
    generated_algebra,
    weak_berger_check,
)
from .errors import DomainError, StructureError, TruncationError, ValidationError
from .families import (
    co_rp,
    conformal_algebra,
    expected_dim,
    make_family,
    orthogonal_algebra,
    spec_from_json,
    subalgebra_menu,
)
from .lie import LieSubalgebra, lie_closure, matrix_span, pseudo_euclidean_gram
from .linalg import Q, RationalMatrix, solve_coordinates, subspace_equal
from .presets import preset_from_json
from .suites import SUITES, VerificationReport, preset_name, realization_checks_for, run_suite
from .weyl import required_order

INPUT_ERRORS = (ValidationError, StructureError, TruncationError, DomainError, json.JSONDecodeError,
                KeyError, TypeError, ValueError, ZeroDivisionError, OSError)


def _matrix_json(M: RationalMatrix) -> list:
    return [[str(x) for x in r] for r in M.to_rows()]


def _matrix(rows) -> RationalMatrix:
    return RationalMatrix.from_rows([[Q(x) for x in r] for r in rows])


def algebra_from_json(doc: dict) -> LieSubalgebra:
    """Accepts a FamilySpec, {"algebra": "so"|"co", "r", "s"}, {"algebra": "co-rp", "n"},
    {"algebra": "h", "n", "h_basis"} or {"basis": [...]} (closed under brackets on request)."""
    if "family" in doc:
        return make_family(spec_from_json(doc))
    kind = doc.get("algebra")
    if kind in ("so", "co"):
        G = pseudo_euclidean_gram(int(doc.get("r", 0)), int(doc["s"]))
        return orthogonal_algebra(G) if kind == "so" else conformal_algebra(G)
    if kind == "co-rp":
        return co_rp(int(doc["n"]))
    if kind == "h":
        n = int(doc["n"])
        hb = doc.get("h_basis", [])
        mats = subalgebra_menu(hb, n, int(doc.get("h_offset", 0))) if isinstance(hb, str) else [
            _matrix(M) for M in hb]
        return matrix_span(mats, n, str(hb) if isinstance(hb, str) else "h")
    if "basis" in doc:
        mats = [_matrix(M) for M in doc["basis"]]
        if not mats:
            raise ValidationError("basis must not be empty")
        return lie_closure(mats, mats[0].rows, "custom")
    raise ValidationError("unrecognised algebra description")


def _read_input(path: str | None) -> dict:
    text = sys.stdin.read() if path in (None, "-") else open(path, encoding="utf-8").read()
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValidationError("input must be a JSON object")
    return doc


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _text_dict(doc: dict) -> str:
    w = max(len(k) for k in doc) if doc else 0
    out = []
    for k in sorted(doc):
        v = doc[k]
        out.append(f"{k:<{w}}  {v if isinstance(v, (str, int, bool)) else json.dumps(v)}")
    return "\n".join(out) + "\n"


# --- commands -----------------------------------------------------------------------

def cmd_prolongation(args) -> tuple[dict, int]:
    g = algebra_from_json(_read_input(args.input))
    pr = first_prolongation(g)
    doc = {"op": "prolongation", "dim": pr.dim, "algebra_dim": g.dim,
           "basis": [[_matrix_json(M) for M in phi] for phi in pr.basis]}
    return doc, 0


def _curvature_doc(op: str, g: LieSubalgebra) -> dict:
    basis = curvature_space(g)
    L = generated_algebra(basis, g.size)
    violations = []
    for k, R in enumerate(basis):
        if R.bianchi_violations():
            violations.append(f"basis element {k} violates the Bianchi identity")
        if not R.values_in(g):
            violations.append(f"basis element {k} leaves g")
    is_berger = subspace_equal(L, g.carrier)
    if op == "berger" and not is_berger:
        violations.append(f"L(R(g)) has dimension {L.dim} < dim g = {g.dim}")
    return {"op": op, "dim": len(basis), "is_berger": is_berger, "witness_dim": L.dim,
            "violations": violations}


def cmd_curvature_space(args) -> tuple[dict, int]:
    doc = _curvature_doc("curvature-space", algebra_from_json(_read_input(args.input)))
    return doc, 1 if doc["violations"] else 0


def cmd_berger(args) -> tuple[dict, int]:
    g = algebra_from_json(_read_input(args.input))
    doc = _curvature_doc("berger", g)
    # a non-Berger verdict is an answer, not a failure; only internal violations fail
    bad = [v for v in doc["violations"] if not v.startswith("L(R(g))")]
    return doc, 1 if bad else 0


def cmd_weak_berger(args) -> tuple[dict, int]:
    h = algebra_from_json(_read_input(args.input))
    v = weak_berger_check(h)
    return {"op": "weak-berger", "dim": v.space_dim, "is_berger": v.holds, "witness_dim": v.witness.dim,
            "violations": []}, 0


def cmd_describe(args) -> tuple[dict, int]:
    doc_in = _read_input(args.input)
    spec = spec_from_json(doc_in)
    g = make_family(spec)
    B = g.basis()
    flat = [b.flat() for b in B]
    brackets = []
    for i in range(len(B)):
        for j in range(i + 1, len(B)):
            c = solve_coordinates(flat, B[i].commutator(B[j]).flat())
            brackets.append({"i": i, "j": j, "coefficients": [str(x) for x in c]})
    doc = {"family": g.tag, "n": spec.n, "dim": g.dim, "expected_dim": expected_dim(spec),
           "basis": [_matrix_json(b) for b in B], "brackets": brackets}
    return doc, 0


def cmd_realize(args) -> tuple[dict | VerificationReport, int]:
    doc = _read_input(args.input)
    if args.max_deriv is not None:
        doc["max_order"] = args.max_deriv
    preset = preset_from_json(doc)
    m = preset.max_order
    K = args.order if args.order is not None else doc.get("K")
    if K is not None and int(K) < required_order(m + 1):
        # the stability certificate runs one derivative order beyond m
        raise TruncationError(required_order(m + 1), int(K))
    if doc.get("zero_gauge"):
        build = preset.build

        def zero_gauge(K, build=build):
            W = build(K)
            return W.with_gauge(W.f.scale(0))
        preset.build = zero_gauge
    rep = VerificationReport(realization_checks_for(preset))
    rep.meta = {"preset": preset_name(preset), "H": preset.structure(m + 3).H.format(),
                "f": preset.structure(m + 3).f.format(), "target_dim": preset.target.dim}
    return rep, 0 if rep.passed else 1


def cmd_suite(args) -> tuple[VerificationReport, int]:
    rep = run_suite(args.tags, seed=args.seed,
                    max_order=args.max_deriv if args.max_deriv is not None else 3)
    return rep, 0 if rep.passed else 1


COMMANDS = {
    "prolongation": (cmd_prolongation, "first prolongation of a matrix Lie algebra"),
    "curvature-space": (cmd_curvature_space, "dimension of the space of curvature tensors"),
    "berger": (cmd_berger, "Berger verdict L(R(g)) = g"),
    "weak-berger": (cmd_weak_berger, "weak Berger verdict for h inside so(n)"),
    "describe": (cmd_describe, "basis and bracket table of a family"),
    "realize": (cmd_realize, "holonomy of an explicit Weyl connection"),
    "suite": (cmd_suite, "run verification suites"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--order", type=int, default=None, help="jet truncation order K")
    common.add_argument("--max-deriv", type=int, default=None, help="derivative order of the holonomy chains")
    parser = argparse.ArgumentParser(prog="weylhol", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_, parents=[common])
        if name == "suite":
            p.add_argument("tags", nargs="*", help=f"any of {', '.join(SUITES)}, all")
        else:
            p.add_argument("input", nargs="?", default=None, help="JSON file (default: stdin)")
    return parser


def _render(result, fmt: str, elapsed: float) -> str:
    if isinstance(result, VerificationReport):
        if fmt == "json":
            return result.to_json()
        result.wall_time = elapsed
        head = ""
        meta = getattr(result, "meta", None)
        if meta:
            cols = ("H", "f", "hol")
            hol = f"dim {meta['target_dim']} {'matches' if result.passed else 'differs'}"
            vals = (meta["H"], meta["f"], hol)
            w = [max(len(c), len(v)) for c, v in zip(cols, vals)]
            bar = "+" + "+".join("-" * (x + 2) for x in w) + "+"
            head = "\n".join([meta["preset"], bar,
                              "| " + " | ".join(f"{c:<{x}}" for c, x in zip(cols, w)) + " |", bar,
                              "| " + " | ".join(f"{v:<{x}}" for v, x in zip(vals, w)) + " |", bar, ""])
        return head + result.to_text()
    return _dump(result) if fmt == "json" else _text_dict(result)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fn = COMMANDS[args.command][0]
    start = time.perf_counter()
    try:
        result, code = fn(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(_render(result, args.format, time.perf_counter() - start))
    return code


if __name__ == "__main__":
    sys.exit(main())
