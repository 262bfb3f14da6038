"""Command line entry point: triangulate, approximate, homology, verify-pipeline."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Sequence

from .geometry import InputError
from .gv_construction import (
    ORDERINGS,
    UndecidedSignSetError,
    ball_redundancy_certificate,
    build_approximation,
    formula_json,
    p_prime_report,
    parse_formula,
)
from .homology_rep import MultiplicityTable, verify_vanishing_bounds
from .pipeline import (
    SAMPLE_COUNT,
    Check,
    SemilinearFixture,
    check_homology_agreement,
    complex_checks,
    complex_json,
    dumps,
    homology_summary,
    parse_complex,
    parse_group,
    parse_params_spec,
    parse_semilinear_fixture,
    read_json,
    run_all,
    run_semilinear,
    semilinear_model,
)
from .triangulation import base_coordinates, equivariant_triangulation, parse_description, triangulate_respecting

MODES = ("triangulate", "approximate", "homology", "verify-pipeline")

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

SURROGATE_NOTE = "homotopy-group surjectivity is not machine-checked; Betti numbers and characters of S and T are compared instead"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equivapprox", description="Exact equivariant approximation of symmetric semilinear sets.")
    parser.add_argument("--mode", required=True, choices=MODES)
    parser.add_argument("--group", help="group JSON: reflection normals and chamber normals, or a permutation degree")
    parser.add_argument("--formula", help="formula JSON, or a fixture holding formula, group and params")
    parser.add_argument("--complex", help="cylindrical description, complex JSON, or semilinear fixture")
    parser.add_argument("--params", help="parameter JSON: m, r and optionally eps and delta lists")
    parser.add_argument("--ordering", choices=sorted(ORDERINGS), help="parameter chain ordering")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for verify-pipeline")
    parser.add_argument("--samples", type=int, default=None, help="sample points per fixture in verify-pipeline")
    parser.add_argument("--out", help="report path; stdout when omitted")
    parser.add_argument("--keep-all-signsets", action="store_true", help="keep undecided sign sets and flag them")
    return parser


def _require(path: str | None, flag: str, mode: str) -> str:
    if not path:
        raise InputError(f"--mode {mode} needs {flag}")
    return path


def _group(args: argparse.Namespace, embedded: object = None):
    if args.group:
        return parse_group(read_json(args.group))
    if embedded is not None:
        return parse_group(embedded)
    return None


def _formula_inputs(args: argparse.Namespace):
    data = read_json(_require(args.formula, "--formula", args.mode))
    if isinstance(data, dict) and "formula" in data:
        fixture = parse_semilinear_fixture(data, args.ordering)
        formula, params, group = fixture.formula, fixture.params, fixture.group
        if args.params:
            params = parse_params_spec(read_json(args.params), args.ordering)
        if args.group:
            group = _group(args)
        return formula, params, group, data
    formula = parse_formula(data)
    params = parse_params_spec(read_json(_require(args.params, "--params", args.mode)), args.ordering)
    return formula, params, _group(args), None


def run_triangulate(args: argparse.Namespace) -> tuple[dict, list[Check]]:
    data = read_json(_require(args.complex, "--complex", "triangulate"))
    if isinstance(data, dict) and "formula" in data:
        fixture = parse_semilinear_fixture(data, args.ordering)
        model = semilinear_model(fixture)
        result = model.triangulation.result
        report = {"source": "semilinear", "adaptedness": {k: len(v) for k, v in result.adaptedness.items()}}
        group = fixture.group
    else:
        description = parse_description(data)
        result = triangulate_respecting(description)
        report = {
            "source": "description",
            "tau": base_coordinates(description),
            "polyhedra_by_dimension": {str(k): len(result.polyhedra_of_dimension(k)) for k in range(description.dimension + 1)},
        }
        group = _group(args)
        if group is not None:
            glued = equivariant_triangulation(result, group)
            report["glued"] = {"triangles": len(glued.result.complex.of_dimension(2)), **complex_json(glued.result.complex)}
    report.update(complex_json(result.complex))
    report["simplices_by_dimension"] = {str(k): len(result.complex.of_dimension(k)) for k in range(result.complex.dimension + 1)}
    report["respect"] = {"simplices": len(result.respect)}
    return report, []


def run_approximate(args: argparse.Namespace) -> tuple[dict, list[Check]]:
    formula, params, group, _ = _formula_inputs(args)
    approx = build_approximation(formula, params, group, keep_all=args.keep_all_signsets)
    checks = []
    report = {
        "params": {"m": params.m, "eps": list(params.eps), "delta": list(params.delta), "r": params.r, "ordering": params.ordering},
        "p_prime": p_prime_report(approx),
        "p_prime_labels": list(approx.p_prime_labels),
        "sign_tuples": [list(t.signs()) for t in approx.tuples],
        "flagged_sign_tuples": [list(t.signs()) for t in approx.flagged_tuples],
        "pieces": len(approx.pieces),
        "T": formula_json(approx.t_formula),
    }
    if approx.flagged_tuples:
        checks.append(Check("every sign set decided", False, [list(t.signs()) for t in approx.flagged_tuples]))
    if all(h.affine_part() is not None for h in formula.polynomials):
        try:
            cert = ball_redundancy_certificate(approx)
            checks.append(Check("ball function redundant", True, None, {"vertices": cert.vertices_checked}))
        except InputError as exc:
            checks.append(Check("ball function redundant", False, str(exc)))
    return report, checks


def run_homology(args: argparse.Namespace) -> tuple[dict, list[Check]]:
    if args.formula:
        formula, params, group, data = _formula_inputs(args)
        name = str((data or {}).get("name", "formula"))
        model = semilinear_model(SemilinearFixture(name, formula, group, params))
        checks, detail = check_homology_agreement(model)
        return {**detail, "surrogate": SURROGATE_NOTE}, checks
    data = read_json(_require(args.complex, "--complex or --formula", "homology"))
    if isinstance(data, dict) and "table" in data:
        return _table_report(data)
    fixture = parse_complex(data)
    group = _group(args) or fixture.group
    if group is None:
        raise InputError("homology of a complex needs a group")
    if fixture.group is None or args.group:
        fixture = type(fixture)(fixture.name, fixture.complex, group, fixture.degree)
    if fixture.degree is not None and group.dimension == len(fixture.complex.vertices[0]):
        checks, detail = complex_checks(fixture)
        return detail, checks
    summary = homology_summary(fixture.complex.vertices, fixture.complex.simplices, group, list(range(fixture.complex.dimension + 1)))
    return summary.as_json(), []


def _table_report(data: dict) -> tuple[dict, list[Check]]:
    """A multiplicity table given directly: {"n", "d", "table": {"k:[parts]": m}}."""
    try:
        n, d = int(data["n"]), int(data["d"])
        entries = {}
        for key, m in data["table"].items():
            k, shape = key.split(":", 1)
            parts = tuple(int(x) for x in shape.strip("[] ").split(",") if x.strip())
            entries[(int(k), parts)] = int(m)
    except (KeyError, ValueError, AttributeError) as exc:
        raise InputError(f"table: {exc}") from exc
    table = MultiplicityTable(n, entries, (), d)
    violations = verify_vanishing_bounds(table, d, n)
    check = Check("vanishing bounds hold", not violations, violations[0] if violations else None, {"violations": len(violations)})
    return {"table": data["table"]}, [check]


def run_verify(args: argparse.Namespace) -> tuple[dict, list[Check]]:
    samples = args.samples if args.samples is not None else SAMPLE_COUNT
    if args.formula:
        formula, params, group, data = _formula_inputs(args)
        name = str((data or {}).get("name", "formula"))
        stage = run_semilinear(SemilinearFixture(name, formula, group, params), samples)
        return {**stage.details, "surrogate": SURROGATE_NOTE}, stage.checks
    result = run_all(args.ordering, max(1, args.jobs), samples)
    return {**result["details"], "surrogate": SURROGATE_NOTE}, result["checks"]


RUNNERS = {
    "triangulate": run_triangulate,
    "approximate": run_approximate,
    "homology": run_homology,
    "verify-pipeline": run_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        if args.jobs < 1:
            raise InputError("--jobs must be at least 1")
        body, checks = RUNNERS[args.mode](args)
    except (UndecidedSignSetError, InputError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    failed = [c for c in checks if not c.passed]
    report = {
        "mode": args.mode,
        "result": body,
        "checks": checks,
        "passed": not failed,
        "timing": {"seconds": f"{time.perf_counter() - start:.3f}"},
    }
    text = dumps(report)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"cannot write report: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    for c in failed:
        print(f"FAILED: {c.name}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
