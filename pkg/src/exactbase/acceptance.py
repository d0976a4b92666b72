"""Acceptance checks shared by ``exactbase selftest`` and the test suite.

Each check returns a :class:`CriterionResult`; ``full=True`` sizes follow the
project's acceptance criteria, the default sizes keep ``selftest`` quick.
"""
from __future__ import annotations

import io
import itertools
import json
import os
import random
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import lab
from .algebraic import SelfReductionFailure, exact_basis_1d, generating_poly, representation
from .catalog import KINDS, random_linear, random_spec, random_weights, small_catalog
from .matroid import Graphic, compile_spec, enumerate_bases, rank_table
from .polytope import in_base_polytope, lp_vertex, tight_system_rank
from .reductions import (ConstraintSpec, aggregate_to_1d, brute_force_original, brute_force_reduced,
                         in_gamma_window, reduce_constraints, reduce_group, round_half_up, solve_constraints)
from .solver import brute_force_solve, solve
from .weights import WeightMatrix


@dataclass
class CriterionResult:
    name: str
    passed: bool
    summary: str
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.summary}"


def _random_target(rng, M, W, delta):
    bases = list(enumerate_bases(M))
    if bases and rng.random() < 0.6:
        return list(W.weight(rng.choice(bases)))
    half = max(1, delta * M.n // 2)
    return [rng.randint(-half, half) for _ in range(W.m)]


def random_instance(rng: random.Random, i: int, max_n: int = 12):
    """Instance ``i`` of the randomized suites; kinds cycle so all are covered."""
    kind = KINDS[i % len(KINDS)]
    n = rng.randint(0, max_n)
    m = rng.choice((1, 2))
    delta = rng.choice((1, 2))
    spec = random_spec(rng, n, kind)
    M = compile_spec(spec)
    W = random_weights(rng, m, n, delta)
    return spec, M, W, _random_target(rng, M, W, delta)


def check_oracle_agreement(count: int = 400, seed: int = 0, max_n: int = 12,
                           time_limit: float = 600.0) -> CriterionResult:
    rng = random.Random(seed)
    start = time.perf_counter()
    bad, found, kinds = [], 0, set()
    for i in range(count):
        spec, M, W, beta = random_instance(rng, i, max_n)
        kinds.add(KINDS[i % len(KINDS)])
        a = solve(M, W, beta, seed=i)
        b = brute_force_solve(compile_spec(spec), W, beta)
        witnesses_ok = all(r.basis is None or (M.is_basis(r.basis) and W.weight(r.basis) == tuple(beta))
                           for r in (a, b))
        if a.status != b.status or not witnesses_ok:
            bad.append(i)
        found += a.status == "found"
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < time_limit
    return CriterionResult("oracle agreement", ok,
                           f"{count} instances ({found} feasible, {len(kinds)} kinds), "
                           f"{len(bad)} disagreements, {elapsed:.1f}s (limit {time_limit:.0f}s)",
                           {"disagreements": bad, "elapsed": elapsed})


def check_lp_correctness(count: int = 200, seed: int = 1, max_n: int = 12) -> CriterionResult:
    rng = random.Random(seed)
    problems, vertices, infeasible = [], 0, 0
    for i in range(count):
        spec, M, W, beta = random_instance(rng, i, max_n)
        method = "cuts" if i % 5 == 4 else "columns"
        out = lp_vertex(M, W, beta, seed=i, method=method)
        if out.status == "infeasible":
            infeasible += 1
            if brute_force_solve(M, W, beta).status != "infeasible":
                problems.append((i, "infeasible LP but exact basis exists"))
            continue
        vertices += 1
        x = out.point
        ranks = rank_table(M)
        if any(sum((row[e] * x[e] for e in range(M.n)), Fraction(0)) != b for row, b in zip(W.rows, beta)):
            problems.append((i, "W x != beta"))
        elif not in_base_polytope(M, x, ranks):
            problems.append((i, "separating rank cut exists"))
        elif tight_system_rank(M, W, x, ranks) != M.n:
            problems.append((i, "tight system not of full rank"))
    return CriterionResult("LP correctness", not problems,
                           f"{count} instances, {vertices} vertices, {infeasible} infeasible, "
                           f"{len(problems)} exceptions", {"problems": problems})


def check_proximity_bound(max_n: int = 14, weight_seeds: int = 3, seed: int = 0) -> CriterionResult:
    reports = lab.proximity_catalog(small_catalog(max_n), weight_seeds=weight_seeds, seed=seed)
    failed = [r.instance for r in reports if not r.passed]
    checked = [r for r in reports if not r.vacuous]
    worst = max((r.ratio for r in checked), default=Fraction(0))
    worst_obs = max((r.observed for r in checked), default=Fraction(0))
    return CriterionResult("proximity bound", not failed and bool(checked),
                           f"{len(checked)} catalog instances (n <= {max_n}), {len(failed)} above 2^13, "
                           f"max observed {worst_obs}, max ratio {worst} (~{float(worst):.2e})",
                           {"failed": failed, "max_ratio": worst})


def check_sensitivity_bound(max_n: int = 12, seed: int = 0) -> CriterionResult:
    reports = lab.sensitivity_catalog(small_catalog(max_n), seed=seed)
    pairs = sum(r.detail["pairs"] for r in reports)
    violations = sum(r.detail["violations"] for r in reports)
    worst = max(r.ratio for r in reports)
    return CriterionResult("sensitivity bound", violations == 0 and pairs > 0,
                           f"{pairs} basis pairs over {len(reports)} (entry, m, delta) cases, "
                           f"{violations} violations, max ratio {worst} (~{float(worst):.2e})",
                           {"violations": violations})


def check_lower_bounds() -> CriterionResult:
    rows, ok = [], True
    for kind, sizes in (("sensitivity", (4, 6, 8, 10, 12)), ("proximity", (8, 12))):
        for n in sizes:
            rep = lab.verify_lower_bound(lab.lower_bound_instance(kind, n))
            ok &= rep.passed
            rows.append(f"{kind}:{n}={rep.observed}")
    return CriterionResult("lower-bound instances", ok, ", ".join(rows))


def check_algebraic(count: int = 100, seed: int = 2) -> CriterionResult:
    K4 = Graphic(4, list(itertools.combinations(range(4), 2)))
    trees = sum(1 for _ in enumerate_bases(compile_spec(K4)))
    k4_ok = trees == 16
    for s in range(5):
        poly = generating_poly(representation(K4), [1] * 6, seed=s)
        k4_ok &= poly.support() == [3] and poly.coefficient(3) != 0
    rng = random.Random(seed)
    verdicts = misses = invalid = 0
    for i in range(count):
        n = rng.randint(1, 10)
        spec = random_linear(rng, n, rows=rng.randint(1, min(5, n)))
        delta = rng.choice((1, 2))
        w = [rng.randint(-delta, delta) for _ in range(n)]
        M = compile_spec(spec)
        feasible = {sum(w[e] for e in B) for B in enumerate_bases(M)}
        r = M.rank()
        for beta in range(-delta * r - 1, delta * r + 2):
            verdicts += 1
            try:
                B = exact_basis_1d(representation(spec), w, beta, seed=i * 1000 + beta, retries=3)
            except SelfReductionFailure:
                misses += 1
                continue
            if B is None:
                misses += beta in feasible
            elif not (M.is_basis(B) and sum(w[e] for e in B) == beta):
                invalid += 1
    rate = misses / max(1, verdicts)
    ok = k4_ok and invalid == 0 and rate <= 1e-3
    return CriterionResult("algebraic solver", ok,
                           f"K4 support [3] with {trees} trees over 5 seeds: {k4_ok}; {count} instances, "
                           f"{verdicts} verdicts, one-sided failures {misses} (rate {rate:.1e} <= 1e-3), "
                           f"{invalid} invalid bases", {"rate": rate})


def _random_constraint(rng, n, kind):
    if kind == "congruence":
        p = rng.randint(2, 4)
        return ConstraintSpec(kind, [rng.randrange(p) for _ in range(n)], rng.randrange(p), p)
    d = rng.choice((1, 2))
    w = [rng.randint(-d, d) for _ in range(n)]
    return ConstraintSpec(kind, w, rng.randint(-d * n // 2, d * n // 2))


def check_reductions(count: int = 60, seed: int = 3, max_n: int = 8) -> CriterionResult:
    rng = random.Random(seed)
    disagreements, invalid = [], 0
    for i in range(count):
        n = rng.randint(1, max_n)
        spec = random_spec(rng, n, KINDS[i % len(KINDS)])
        mode = ("less_equal", "greater_equal", "congruence", "group", "mixed")[i % 5]
        if mode == "group":
            moduli = [rng.randint(2, 3) for _ in range(rng.randint(1, 2))]
            labels = [[rng.randrange(q) for q in moduli] for _ in range(n)]
            cons = reduce_group(spec, moduli, labels, [rng.randrange(q) for q in moduli])
        elif mode == "mixed":
            cons = [_random_constraint(rng, n, k) for k in ("less_equal", "congruence")]
        else:
            cons = [_random_constraint(rng, n, mode)]
        truth = brute_force_original(spec, cons) is not None
        inst = reduce_constraints(spec, cons)
        reduced = brute_force_reduced(inst) is not None
        res = solve_constraints(spec, cons, seed=i)  # raises if the mapped witness is invalid
        if res.basis is not None:
            M = compile_spec(spec)
            invalid += not (M.is_basis(res.basis) and all(c.holds(res.basis) for c in cons))
        if not truth == reduced == (res.basis is not None):
            disagreements.append((i, mode))
    ok = not disagreements and invalid == 0
    return CriterionResult("reduction round-trips", ok,
                           f"{count} originals (n <= {max_n}; <=, >=, congruence, group, mixed), "
                           f"{len(disagreements)} disagreements, {invalid} invalid witnesses",
                           {"disagreements": disagreements})


def check_aggregation(count: int = 20, seed: int = 4, max_n: int = 10) -> CriterionResult:
    rng = random.Random(seed)
    mismatches, checks, windows = 0, 0, 0
    for i in range(count):
        n = rng.randint(2, max_n)
        spec = random_linear(rng, n)
        M = compile_spec(spec)
        delta = rng.choice((1, 2))
        W = random_weights(rng, 2, n, delta)
        bases = list(enumerate_bases(M))
        beta = W.weight(rng.choice(bases))
        x = lp_vertex(M, W, beta, seed=i).point
        xr = [round_half_up(v) for v in x]
        for Gamma in range(0, n + 1):
            if not in_gamma_window(W, beta, xr, Gamma):
                continue
            windows += 1
            agg = aggregate_to_1d(W, beta, xr, Gamma)
            for B in bases:
                lhs = sum(agg.w[e] for e in B) == agg.alpha
                dist = sum(abs(int(e in B) - xr[e]) for e in range(n))
                rhs = dist == Gamma and W.weight(B) == tuple(beta)
                checks += 1
                mismatches += lhs != rhs
    return CriterionResult("aggregation identity", mismatches == 0,
                           f"{count} linear instances (m=2, n <= {max_n}), {windows} values of Gamma, "
                           f"{checks} basis checks, {mismatches} mismatches")


def _determinism_docs(rng, count):
    from .io import InstanceDocument, serialize_instance
    docs = []
    for i in range(count):
        n = rng.randint(8, 16)
        spec = random_spec(rng, n, ("graphic", "uniform", "partition", "transversal", "linear")[i % 5])
        M = compile_spec(spec)
        W = random_weights(rng, rng.choice((1, 2)), n, rng.choice((1, 2)))
        beta = _random_target(rng, M, W, W.delta or 1)
        docs.append(serialize_instance(InstanceDocument(spec, [list(r) for r in W.rows], beta)))
    return docs


def check_determinism(count: int = 6, seed: int = 5) -> CriterionResult:
    from .cli import run
    rng = random.Random(seed)
    mismatches = 0
    with tempfile.TemporaryDirectory() as tmp:
        for i, text in enumerate(_determinism_docs(rng, count)):
            path = os.path.join(tmp, f"inst{i}.json")
            with open(path, "w") as fh:
                fh.write(text)
            outputs = []
            for jobs in (1, 1, 4, 4):
                buf = io.StringIO()
                code = run(["solve", "--instance", path, "--seed", str(i), "--jobs", str(jobs)], out=buf,
                           err=io.StringIO())
                outputs.append((code, buf.getvalue()))
            mismatches += len(set(outputs)) != 1
    return CriterionResult("determinism", mismatches == 0,
                           f"{count} instances x runs with jobs 1,1,4,4: {mismatches} differing outputs")


def smoke_graph(rng, n=200, vertices=60):
    edges = [(rng.randrange(v), v) for v in range(1, vertices)]
    while len(edges) < n:
        edges.append(tuple(rng.sample(range(vertices), 2)))
    return Graphic(vertices, edges)


def check_smoke(trials: int = 2, seed: int = 6, limit: float = 60.0) -> CriterionResult:
    rng = random.Random(seed)
    worst, ok = 0.0, True
    for t in range(trials):
        spec = smoke_graph(rng)
        M = compile_spec(spec)
        W = WeightMatrix.from_rows([[rng.randint(-1, 1) for _ in range(M.n)]])
        order = list(range(M.n))
        rng.shuffle(order)
        beta = W.weight(M.greedy_basis(order))
        start = time.perf_counter()
        rep = solve(M, W, beta, seed=t)
        elapsed = time.perf_counter() - start
        worst = max(worst, elapsed)
        ok &= rep.status == "found" and elapsed < limit
    return CriterionResult("smoke n=200", ok, f"{trials} graphic instances (m=1, delta=1), "
                                               f"slowest {worst:.2f}s (limit {limit:.0f}s)")


QUICK = {"oracle": 400, "lp": 200, "algebraic": 100, "reductions": 60, "aggregation": 20, "determinism": 4,
         "prox_seeds": 1, "sens_max_n": 8}
FULL = {"oracle": 10_000, "lp": 2_000, "algebraic": 1_000, "reductions": 600, "aggregation": 100,
        "determinism": 20, "prox_seeds": 3, "sens_max_n": 12}


def run_all(full: bool = False, seed: int = 0, stream=None) -> list[CriterionResult]:
    size = FULL if full else QUICK
    checks = [
        lambda: check_oracle_agreement(size["oracle"], seed=seed),
        lambda: check_lp_correctness(size["lp"], seed=seed + 1),
        lambda: check_proximity_bound(weight_seeds=size["prox_seeds"], seed=seed),
        lambda: check_sensitivity_bound(size["sens_max_n"], seed=seed),
        check_lower_bounds,
        lambda: check_algebraic(size["algebraic"], seed=seed + 2),
        lambda: check_reductions(size["reductions"], seed=seed + 3),
        lambda: check_aggregation(size["aggregation"], seed=seed + 4),
        lambda: check_determinism(size["determinism"], seed=seed + 5),
        lambda: check_smoke(1 if not full else 3, seed=seed + 6),
    ]
    results = []
    for check in checks:
        res = check()
        results.append(res)
        if stream is not None:
            stream.write(res.line() + "\n")
            stream.flush()
    return results


def results_json(results) -> str:
    return json.dumps([{"name": r.name, "pass": r.passed, "summary": r.summary} for r in results], indent=2)
