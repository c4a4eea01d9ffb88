"""Batch front-end: analyze algebras, decompose elements and maps, verify
order-isomorphism forms, and run the acceptance suite.

Exit codes: 0 success, 1 malformed input, 2 mathematical precondition
failure (with the library's diagnostic), 3 verification failures found.
Structured output is a single JSON document with a ``schema_version``
field; identical commands with identical seeds produce byte-identical
structured reports.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .core import (
    AlgebraDescriptor,
    Element,
    LinearOperator,
    algebra_from_dict,
    algebra_to_dict,
    element_from_list,
    element_to_list,
    operator_from_dict,
    operator_to_dict,
)
from .spectral import spectral_decomposition
from .structure import center_basis, decompose_engaged_disengaged
from .ordermaps import (
    apply_order_iso,
    check_linearity,
    factorize_linear_order_iso,
    form_from_dict,
    grid_power_demo,
)
from .verify import check_linearity_blackbox, check_order_preserving
from .selftest import run_acceptance

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_PRECONDITION = 2
EXIT_VIOLATIONS = 3


class _BadInput(Exception):
    """Raised while reading or interpreting an input file (exit code 1)."""


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise _BadInput(f"{path}: {err}") from err


def _parse_algebra(path: str) -> AlgebraDescriptor:
    doc = _load_json(path)
    try:
        return algebra_from_dict(doc)
    except (ValueError, KeyError, TypeError) as err:
        raise _BadInput(f"{path}: {err}") from err


def _parse_element(algebra: AlgebraDescriptor, path: str) -> Element:
    doc = _load_json(path)
    try:
        return element_from_list(algebra, doc)
    except (ValueError, KeyError, TypeError) as err:
        raise _BadInput(f"{path}: {err}") from err


def _parse_operator(algebra: AlgebraDescriptor, path: str) -> LinearOperator:
    doc = _load_json(path)
    try:
        return operator_from_dict(algebra, algebra, doc)
    except (ValueError, KeyError, TypeError) as err:
        raise _BadInput(f"{path}: {err}") from err


def _parse_form(path: str, validate: bool):
    doc = _load_json(path)
    try:
        return form_from_dict(doc, validate=validate)
    except (ValueError, KeyError, TypeError) as err:
        raise _BadInput(f"{path}: {err}") from err


def _emit(doc: dict, text_lines: list[str], fmt: str) -> None:
    if fmt == "structured":
        doc = {"schema_version": SCHEMA_VERSION, **doc}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _coords(x: Element) -> list[float]:
    return element_to_list(x)


def _cmd_analyze(args: argparse.Namespace) -> int:
    algebra = _parse_algebra(args.algebra)
    dec = decompose_engaged_disengaged(algebra, seed=args.seed)
    center_dim = len(center_basis(algebra))
    doc = {
        "verb": "analyze",
        "seed": args.seed,
        "algebra": algebra_to_dict(algebra),
        "total_dim": algebra.total_dim,
        "center_dimension": center_dim,
        "disengaged": {
            "count": len(dec.disengaged_atoms),
            "coordinates": list(dec.disengaged_coordinates),
            "atoms": [_coords(a) for a in dec.disengaged_atoms],
        },
        "p_D": _coords(dec.p_D),
        "engaged_factors": (
            algebra_to_dict(dec.engaged_subalgebra)["factors"]
            if dec.engaged_subalgebra is not None
            else []
        ),
    }
    text = [
        f"algebra: {algebra} (dim {algebra.total_dim})",
        f"center dimension: {center_dim}",
        f"disengaged atoms: {len(dec.disengaged_atoms)} at coordinates "
        f"{list(dec.disengaged_coordinates)}",
        f"p_D = {dec.p_D.coords.tolist()}",
        "engaged part: "
        + (str(dec.engaged_subalgebra) if dec.engaged_subalgebra else "(zero)"),
    ]
    _emit(doc, text, args.format)
    return EXIT_OK


def _cmd_spectrum(args: argparse.Namespace) -> int:
    algebra = _parse_algebra(args.algebra)
    x = _parse_element(algebra, args.element)
    d = spectral_decomposition(x)
    doc = {
        "verb": "spectrum",
        "algebra": algebra_to_dict(algebra),
        "eigenvalues": [float(v) for v in d.eigenvalues],
        "idempotents": [_coords(p) for p in d.idempotents],
    }
    text = [f"eigenvalues: {[float(v) for v in d.eigenvalues]}"]
    text += [f"idempotent {i}: {p.coords.tolist()}" for i, p in enumerate(d.idempotents)]
    _emit(doc, text, args.format)
    return EXIT_OK


def _cmd_factorize(args: argparse.Namespace) -> int:
    algebra = _parse_algebra(args.algebra)
    op = _parse_operator(algebra, args.map)
    y, j = factorize_linear_order_iso(op)
    doc = {
        "verb": "factorize",
        "algebra": algebra_to_dict(algebra),
        "y": _coords(y),
        "J": operator_to_dict(j),
    }
    text = [
        f"y = {y.coords.tolist()}",
        f"J = {np.array2string(j.matrix, precision=10)}",
    ]
    _emit(doc, text, args.format)
    return EXIT_OK


def _cmd_decompose(args: argparse.Namespace) -> int:
    algebra = _parse_algebra(args.algebra)
    dec = decompose_engaged_disengaged(algebra, seed=args.seed)
    doc = {
        "verb": "decompose",
        "seed": args.seed,
        "algebra": algebra_to_dict(algebra),
        "p_D": _coords(dec.p_D),
        "p_E": _coords(dec.p_E),
        "disengaged_atoms": [_coords(a) for a in dec.disengaged_atoms],
        "disengaged_coordinates": list(dec.disengaged_coordinates),
        "engaged_factors": (
            algebra_to_dict(dec.engaged_subalgebra)["factors"]
            if dec.engaged_subalgebra is not None
            else []
        ),
    }
    text = [
        f"p_D = {dec.p_D.coords.tolist()}",
        f"p_E = {dec.p_E.coords.tolist()}",
        f"disengaged coordinates: {list(dec.disengaged_coordinates)}",
        "engaged part: "
        + (str(dec.engaged_subalgebra) if dec.engaged_subalgebra else "(zero)"),
    ]
    _emit(doc, text, args.format)
    return EXIT_OK


def _cmd_verify_oiso(args: argparse.Namespace) -> int:
    # untrusted input: skip construction-time invariants, let sampling judge
    form = _parse_form(args.form, validate=False)
    rep_order = check_order_preserving(
        lambda z: apply_order_iso(form, z), form.domain,
        trials=args.trials, seed=args.seed,
    )
    claimed_linear = check_linearity(form)
    rep_lin = check_linearity_blackbox(
        lambda z: apply_order_iso(form, z), form.domain,
        trials=max(50, args.trials // 10), seed=args.seed,
    )
    linearity_consistent = (not claimed_linear) or rep_lin.passed
    violations = (not rep_order.passed) or (not linearity_consistent)
    doc = {
        "verb": "verify-oiso",
        "seed": args.seed,
        "order_preservation": rep_order.to_dict(),
        "linearity": {
            "claimed_linear": claimed_linear,
            "blackbox": rep_lin.to_dict(),
            "consistent": linearity_consistent,
        },
        "violations_found": violations,
    }
    text = [
        f"order preservation: {'ok' if rep_order.passed else 'VIOLATED'} "
        f"({rep_order.trials} trials, max violation {rep_order.max_violation:.3e})",
        f"linear: {claimed_linear} "
        f"(blackbox max defect {rep_lin.max_violation:.3e})",
        f"violations found: {violations}",
    ]
    _emit(doc, text, args.format)
    return EXIT_VIOLATIONS if violations else EXIT_OK


def _cmd_demo_nonlinear(args: argparse.Namespace) -> int:
    alpha = args.power
    form = grid_power_demo(args.n_grid, lambda t: alpha if t <= 0.5 else 1.0)
    rep_order = check_order_preserving(
        lambda z: apply_order_iso(form, z), form.domain,
        trials=args.trials, seed=args.seed,
    )
    rep_lin = check_linearity_blackbox(
        lambda z: apply_order_iso(form, z), form.domain,
        trials=max(50, args.trials // 10), seed=args.seed,
    )
    hom = [f for f in rep_lin.failures if f.predicate.startswith("homogeneous")]
    witness = hom[0] if hom else (rep_lin.failures[0] if rep_lin.failures else None)
    doc = {
        "verb": "demo-nonlinear",
        "seed": args.seed,
        "n_grid": args.n_grid,
        "power": alpha,
        "algebra": algebra_to_dict(form.domain),
        "linear": check_linearity(form),
        "order_preservation": rep_order.to_dict(),
        "linearity_blackbox": rep_lin.to_dict(),
        "witness": (
            {
                "predicate": witness.predicate,
                "magnitude": float(witness.magnitude),
                "inputs": [
                    element_to_list(x) if isinstance(x, Element) else x
                    for x in witness.inputs
                ],
            }
            if witness is not None
            else None
        ),
    }
    text = [
        f"grid algebra: {form.domain}",
        f"linear form: {check_linearity(form)}",
        f"order preservation: {'ok' if rep_order.passed else 'VIOLATED'} "
        f"({rep_order.trials} trials)",
        f"linearity defects found: max {rep_lin.max_violation:.6g}",
    ]
    if witness is not None:
        text.append(
            f"witness: {witness.predicate} violated by {witness.magnitude:.6g} "
            f"at x = {[round(float(c), 6) for c in witness.inputs[0].coords]}"
        )
    _emit(doc, text, args.format)
    return EXIT_OK


def _cmd_selftest(args: argparse.Namespace) -> int:
    results, elapsed = run_acceptance()
    all_passed = all(r.passed for r in results)
    doc = {
        "verb": "selftest",
        "all_passed": all_passed,
        "results": [
            {
                "number": r.number,
                "name": r.name,
                "passed": r.passed,
                "detail": r.detail,
            }
            for r in results
        ],
    }
    text = [r.line() for r in results]
    text.append(f"elapsed: {elapsed:.1f}s")
    text.append("all criteria passed" if all_passed else "CRITERIA FAILED")
    _emit(doc, text, args.format)
    return EXIT_OK if all_passed else EXIT_VIOLATIONS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jordancone",
        description="Euclidean Jordan algebras, symmetric cones, and order isomorphisms",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p: argparse.ArgumentParser, seed: bool = True) -> None:
        p.add_argument("--format", choices=("text", "structured"), default="text")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("analyze", help="factor list, center, disengaged atoms")
    p.add_argument("--algebra", required=True)
    common(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("spectrum", help="eigenvalues and idempotent frame of an element")
    p.add_argument("--algebra", required=True)
    p.add_argument("--element", required=True)
    common(p, seed=False)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("factorize", help="factor a linear order isomorphism as U_y J")
    p.add_argument("--algebra", required=True)
    p.add_argument("--map", required=True)
    common(p, seed=False)
    p.set_defaults(func=_cmd_factorize)

    p = sub.add_parser("decompose", help="engaged/disengaged decomposition")
    p.add_argument("--algebra", required=True)
    common(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("verify-oiso", help="sample-test an order-isomorphism form")
    p.add_argument("--form", required=True)
    p.add_argument("--trials", type=int, default=1000)
    common(p)
    p.set_defaults(func=_cmd_verify_oiso)

    p = sub.add_parser("demo-nonlinear", help="grid power demo: non-linear order iso")
    p.add_argument("--n-grid", type=int, default=8)
    p.add_argument("--power", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=2000)
    common(p)
    p.set_defaults(func=_cmd_demo_nonlinear)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    common(p, seed=False)
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _BadInput as err:
        print(f"error: malformed input: {err}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PRECONDITION


def run_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run_main()
