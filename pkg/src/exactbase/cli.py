"""Command-line surface.

Exit codes: 0 found or pass, 2 infeasible, 1 usage or specification error,
3 internal alarm (a proven statement failed, or self-reduction gave up).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import lab
from .algebraic import DEFAULT_PRIME, SelfReductionFailure, exact_basis_1d, generating_poly, representation
from .errors import CapabilityError, SpecificationError, TheoremAlarm
from .intersection import max_common_independent
from .io import (FormatError, InstanceDocument, ResultDocument, bound_report_json, constraint_to_json, dumps,
                 jsonable, parse_instance, spec_from_json)
from .matroid import compile_spec
from .polytope import lp_vertex
from .reductions import (app_closest_base, app_fair_matching, app_feedback_edge_set, app_group_base,
                         reduce_constraints, solve_constraints, solve_linear)
from .solver import brute_force_solve, solve, verify_basis

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_ALARM = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_json(path: str) -> dict:
    try:
        raw = json.loads(_read(path).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError("$", f"cannot parse {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise FormatError("$", "expected a JSON object")
    return raw


def _status_code(status: str) -> int:
    if status in ("found", "pass", "vertex", "reduced"):
        return EXIT_OK
    if status in ("infeasible", "window_exhausted"):
        return EXIT_INFEASIBLE
    return EXIT_ALARM


def _reverify(doc: InstanceDocument, basis) -> None:
    """Check a witness against a freshly compiled oracle before it is printed."""
    M = compile_spec(doc.matroid)
    basis = frozenset(basis)
    if doc.constraints is not None:
        if not M.is_basis(basis) or not all(c.holds(basis) for c in doc.constraints):
            raise TheoremAlarm("witness fails re-verification against the original constraints")
    else:
        verify_basis(M, doc.weight_matrix(), doc.target, basis)


def _report_stats(report) -> dict:
    stats = report.stats()
    stats["window_radius_used"] = report.window_radius_used
    return stats


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_solve(args) -> ResultDocument:
    doc = parse_instance(_read(args.instance))
    if doc.constraints is not None:
        res = solve_constraints(doc.matroid, doc.constraints, seed=args.seed, jobs=args.jobs,
                                brute_force=args.brute_force, radius_override=args.radius)
        report, basis = res.report, res.basis
        details = {"reduced_n": res.reduced.weight_matrix.n}
    else:
        M = compile_spec(doc.matroid)
        W = doc.weight_matrix()
        if args.brute_force:
            report = brute_force_solve(M, W, doc.target)
        else:
            report = solve(M, W, doc.target, radius_override=args.radius, seed=args.seed, jobs=args.jobs,
                           lp_method=args.lp_method)
        basis = report.basis
        details = {}
    if report.status == "found":
        _reverify(doc, basis)
    return ResultDocument(report.status, None if basis is None else sorted(basis), _report_stats(report),
                          args.seed, report.solver, details=details)


def cmd_lp_vertex(args) -> ResultDocument:
    doc = parse_instance(_read(args.instance))
    M = compile_spec(doc.matroid)
    out = lp_vertex(M, doc.weight_matrix(), doc.target, seed=args.seed, method=args.method)
    details = {"method": out.method}
    if out.status == "vertex":
        details.update(point=list(out.point), face_dim=out.face_dim, perturbed=out.perturbed,
                       support=[sorted(B) for B in (out.support or [])],
                       tight_cuts=[{"subset": sorted(c.subset), "rhs": c.rhs} for c in (out.tight_cuts or [])])
    return ResultDocument(out.status, None, {"lp_pivots": out.pivots}, args.seed, "lp", details=details)


def cmd_intersect(args) -> ResultDocument:
    doc = parse_instance(_read(args.instance))
    if doc.matroid2 is None:
        raise FormatError("$.matroid2", "intersect needs a second matroid")
    M1, M2 = compile_spec(doc.matroid), compile_spec(doc.matroid2)
    cert = max_common_independent(M1, M2, certify=args.certify)
    details = {"size": cert.size, "augmentations": cert.augmentations}
    if cert.partition_witness is not None:
        U = cert.partition_witness
        details["partition_witness"] = sorted(U)
        details["bound"] = M1.rank(U) + M2.rank(frozenset(range(M1.n)) - U)
    return ResultDocument("found", sorted(cert.common_set), {"oracle_calls": M1.calls + M2.calls},
                          args.seed, "intersection", details=details)


def cmd_algebraic(args) -> ResultDocument:
    doc = parse_instance(_read(args.instance))
    target = list(doc.target) if args.beta is None else [int(b) for b in args.beta]
    W = doc.weight_matrix()
    if len(target) != W.m:
        raise SpecificationError(f"target has {len(target)} entries, weight matrix has {W.m} rows")
    details = {}
    if W.m == 1:
        rep = representation(doc.matroid)
        w = list(W.rows[0])
        if args.show_polynomial:
            poly = generating_poly(rep, w, seed=args.seed, prime=args.prime)
            details["polynomial"] = {str(k): str(poly.coefficient(k)) for k in poly.support()}
        B = exact_basis_1d(rep, w, target[0], seed=args.seed, retries=args.retries, prime=args.prime)
        status, stats = ("found" if B is not None else "infeasible"), {}
    else:
        report = solve_linear(doc.matroid, W, target, seed=args.seed, retries=args.retries, prime=args.prime)
        status, B, stats = report.status, report.basis, _report_stats(report)
    if B is not None:
        verify_basis(compile_spec(doc.matroid), W, target, B)
    return ResultDocument(status, None if B is None else sorted(B), stats, args.seed, "linear_algebraic",
                          details=details)


def cmd_reduce(args) -> dict:
    doc = parse_instance(_read(args.instance))
    if doc.constraints is None:
        raise SpecificationError("instance has no constraints to reduce")
    inst = reduce_constraints(doc.matroid, doc.constraints)
    reduced = InstanceDocument(inst.matroid_spec, [list(r) for r in inst.weight_matrix.rows], list(inst.target),
                               metadata={"reduced_from_n": str(inst.original_n)})
    return {"format_version": 1, "status": "reduced", "instance": reduced.to_json(),
            "element_map": sorted([k, v] for k, v in inst.element_map.items()),
            "paddings": [{"start": p.start, "stop": p.stop, "rank": p.rank} for p in inst.paddings],
            "constraints": [constraint_to_json(c) for c in doc.constraints]}


def cmd_lab(args) -> ResultDocument:
    from .catalog import small_catalog
    if args.lab_command == "sensitivity":
        reports = lab.sensitivity_catalog(small_catalog(args.max_n), seed=args.seed)
    elif args.lab_command == "proximity":
        reports = lab.proximity_catalog(small_catalog(args.max_n), weight_seeds=args.weight_seeds, seed=args.seed)
    else:
        reports = [lab.verify_lower_bound(lab.lower_bound_instance(args.kind, args.n))]
    ok = all(r.passed for r in reports)
    summary = {"count": len(reports), "passed": sum(r.passed for r in reports),
               "max_ratio": max((r.ratio for r in reports), default=0),
               "max_observed": max((r.observed for r in reports), default=0)}
    return ResultDocument("pass" if ok else "fail", None, summary, args.seed, "lab",
                          bound_reports=[bound_report_json(r) for r in reports])


def cmd_app(args) -> ResultDocument:
    data = _load_json(args.input)

    def need(key):
        if key not in data:
            raise FormatError(f"$.{key}", "missing field")
        return data[key]

    kw = {"seed": args.seed, "brute_force": args.brute_force}
    if args.app_command == "feedback-edge-set":
        res = app_feedback_edge_set(need("vertices"), [tuple(e) for e in need("edges")], need("weights"),
                                    need("budgets"), **kw)
        basis = res.info.get("forest")
        details = {"removed_edges": sorted(res.solution) if res.solution is not None else None}
    elif args.app_command == "closest-base":
        res = app_closest_base(spec_from_json(need("matroid")), need("bases"), **kw)
        basis = sorted(res.solution) if res.solution is not None else None
        details = dict(res.info)
    elif args.app_command == "fair-matching":
        res = app_fair_matching(need("left"), need("adjacency"), need("groups"), need("quotas"), **kw)
        basis = res.info.get("right_vertices")
        details = {"matching": None if res.solution is None else
                   [[b, a] for b, a in sorted(res.solution.items())]}
    else:
        res = app_group_base(spec_from_json(need("matroid")), need("moduli"), need("labels"), need("target"), **kw)
        basis = sorted(res.solution) if res.solution is not None else None
        details = {}
    report = res.report
    stats = _report_stats(report) if report is not None else {}
    solver = report.solver if report is not None else "fpt"
    return ResultDocument(res.status, basis if res.status == "found" else None, stats, args.seed, solver,
                          details=details)


def cmd_selftest(args, out) -> int:
    from .acceptance import run_all
    results = run_all(full=args.full, seed=args.seed, stream=out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_ALARM


# ---------------------------------------------------------------------------
# Parser and entry points
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="root seed for every random choice (default 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for candidate testing")

    p = _Parser(prog="exactbase", description="Exact-weight matroid bases and supporting tools.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("solve", parents=[common], help="find a basis of exact weight")
    s.add_argument("--instance", required=True)
    s.add_argument("--brute-force", action="store_true")
    s.add_argument("--radius", type=int, default=None, help="override the proximity window radius")
    s.add_argument("--lp-method", choices=("columns", "cuts"), default="columns")

    s = sub.add_parser("lp-vertex", parents=[common], help="vertex of the base polytope cut by W x = beta")
    s.add_argument("--instance", required=True)
    s.add_argument("--method", choices=("columns", "cuts"), default="columns")

    s = sub.add_parser("intersect", parents=[common], help="maximum common independent set")
    s.add_argument("--instance", required=True)
    s.add_argument("--certify", action="store_true")

    s = sub.add_parser("algebraic-solve", parents=[common], help="randomized solver for linear matroids")
    s.add_argument("--instance", required=True)
    s.add_argument("--beta", type=int, nargs="+", default=None)
    s.add_argument("--retries", type=int, default=3)
    s.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    s.add_argument("--show-polynomial", action="store_true")

    s = sub.add_parser("reduce", parents=[common], help="compile constraints into an equality instance")
    s.add_argument("--instance", required=True)

    s = sub.add_parser("lab", help="empirical bound checks and lower-bound instances")
    labsub = s.add_subparsers(dest="lab_command", parser_class=_Parser)
    t = labsub.add_parser("sensitivity", parents=[common])
    t.add_argument("--max-n", type=int, default=12)
    t = labsub.add_parser("proximity", parents=[common])
    t.add_argument("--max-n", type=int, default=14)
    t.add_argument("--weight-seeds", type=int, default=3)
    t = labsub.add_parser("lowerbound", parents=[common])
    t.add_argument("--kind", choices=("sensitivity", "proximity"), required=True)
    t.add_argument("--n", type=int, required=True)

    s = sub.add_parser("app", help="applications compiled to exact-weight bases")
    appsub = s.add_subparsers(dest="app_command", parser_class=_Parser)
    for name in ("feedback-edge-set", "closest-base", "fair-matching", "group-base"):
        t = appsub.add_parser(name, parents=[common])
        t.add_argument("--input", required=True)
        t.add_argument("--brute-force", action="store_true")

    s = sub.add_parser("selftest", parents=[common], help="run the embedded acceptance checks")
    s.add_argument("--full", action="store_true", help="use the full acceptance sizes")
    return p


_COMMANDS = {"solve": cmd_solve, "lp-vertex": cmd_lp_vertex, "intersect": cmd_intersect,
             "algebraic-solve": cmd_algebraic, "reduce": cmd_reduce, "lab": cmd_lab, "app": cmd_app}


def _error_doc(kind: str, message: str, seed: int) -> str:
    return ResultDocument("error", None, {}, seed, None, details={"error": kind, "message": message}).dumps()


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    seed = 0
    try:
        args = parser.parse_args(argv)
        if args.command is None or (args.command == "lab" and args.lab_command is None) \
                or (args.command == "app" and args.app_command is None):
            raise UsageError("a subcommand is required")
        seed = getattr(args, "seed", 0)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        if args.command == "selftest":
            return cmd_selftest(args, out)
        result = _COMMANDS[args.command](args)
        if isinstance(result, ResultDocument):
            out.write(result.dumps())
            return _status_code(result.status)
        out.write(dumps(jsonable(result)))
        return EXIT_OK
    except UsageError as exc:
        err.write(f"usage error: {exc}\n{parser.format_usage()}")
        return EXIT_ERROR
    except (SpecificationError, CapabilityError) as exc:
        kind = "format" if isinstance(exc, FormatError) else type(exc).__name__
        err.write(f"error: {exc}\n")
        out.write(_error_doc(kind, str(exc), seed))
        return EXIT_ERROR
    except (TheoremAlarm, SelfReductionFailure) as exc:
        err.write(f"alarm: {exc}\n")
        out.write(_error_doc(type(exc).__name__, str(exc), seed))
        return EXIT_ALARM


def main() -> None:
    sys.exit(run())
