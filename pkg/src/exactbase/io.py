"""JSON encodings for matroid specs, instance documents and result documents.

The field names are frozen; FORMAT.md in the repository root is the reference.
Rationals and field elements are written as decimal strings (``"3"``, ``"-2/5"``);
readers accept either JSON integers or such strings wherever a number is expected.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import SpecificationError
from .linalg import fmt_fraction
from .matroid import (Contraction, DirectSum, Graphic, Linear, Partition, Restriction, Transversal,
                      Uniform, compile_spec, ground_size)
from .reductions import ConstraintSpec
from .weights import WeightMatrix

FORMAT_VERSION = 1
MATROID_KINDS = ("uniform", "partition", "graphic", "linear", "transversal", "direct_sum",
                 "restriction", "contraction")


class FormatError(SpecificationError):
    """Malformed document; ``path`` locates the offending value (``$.weights[1]``)."""

    def __init__(self, path: str, message: str, line: int | None = None):
        super().__init__(message)
        self.path = path
        self.reason = message
        self.line = line

    def __str__(self):
        where = f"line {self.line}: " if self.line is not None else ""
        return f"{where}{self.path}: {self.reason}"


def dumps(obj) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

def _int(v, path) -> int:
    if isinstance(v, bool):
        raise FormatError(path, "expected an integer, got a boolean")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise FormatError(path, f"expected an integer, got {v!r}")


def _rational(v, path) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise FormatError(path, f"expected an integer or a 'p/q' string, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise FormatError(path, f"expected an integer or a 'p/q' string, got {v!r}")


def _list(v, path) -> list:
    if not isinstance(v, list):
        raise FormatError(path, f"expected a list, got {type(v).__name__}")
    return v


def _obj(v, path) -> dict:
    if not isinstance(v, dict):
        raise FormatError(path, f"expected an object, got {type(v).__name__}")
    return v


def _field(d: dict, key: str, path: str):
    if key not in d:
        raise FormatError(f"{path}.{key}", "missing field")
    return d[key]


def _int_list(v, path) -> list[int]:
    return [_int(x, f"{path}[{i}]") for i, x in enumerate(_list(v, path))]


# ---------------------------------------------------------------------------
# Matroid specs
# ---------------------------------------------------------------------------

def spec_to_json(spec) -> dict:
    if isinstance(spec, Uniform):
        return {"kind": "uniform", "n": spec.n, "rank": spec.rank}
    if isinstance(spec, Partition):
        return {"kind": "partition", "blocks": [list(b) for b in spec.blocks],
                "capacities": list(spec.capacities)}
    if isinstance(spec, Graphic):
        return {"kind": "graphic", "vertices": spec.vertices, "edges": [list(e) for e in spec.edges]}
    if isinstance(spec, Linear):
        fld = "rational" if spec.field is None else {"prime": spec.field}
        out = {"kind": "linear", "field": fld, "matrix": [[fmt_fraction(x) for x in row] for row in spec.matrix]}
        if not spec.matrix:
            out["columns"] = spec.n
        return out
    if isinstance(spec, Transversal):
        return {"kind": "transversal", "left": spec.left, "adjacency": [list(a) for a in spec.adjacency]}
    if isinstance(spec, DirectSum):
        return {"kind": "direct_sum", "parts": [spec_to_json(p) for p in spec.parts]}
    if isinstance(spec, Restriction):
        return {"kind": "restriction", "base": spec_to_json(spec.base), "keep": list(spec.keep)}
    if isinstance(spec, Contraction):
        return {"kind": "contraction", "base": spec_to_json(spec.base), "contract": list(spec.contract)}
    raise SpecificationError(f"cannot encode {type(spec).__name__}")


def spec_from_json(obj, path: str = "$.matroid"):
    d = _obj(obj, path)
    kind = _field(d, "kind", path)
    if kind == "uniform":
        return Uniform(_int(_field(d, "n", path), f"{path}.n"), _int(_field(d, "rank", path), f"{path}.rank"))
    if kind == "partition":
        blocks = [_int_list(b, f"{path}.blocks[{i}]") for i, b in enumerate(_list(_field(d, "blocks", path), f"{path}.blocks"))]
        return Partition(blocks, _int_list(_field(d, "capacities", path), f"{path}.capacities"))
    if kind == "graphic":
        edges = []
        for i, e in enumerate(_list(_field(d, "edges", path), f"{path}.edges")):
            pair = _int_list(e, f"{path}.edges[{i}]")
            if len(pair) != 2:
                raise FormatError(f"{path}.edges[{i}]", "an edge has exactly two endpoints")
            edges.append(tuple(pair))
        return Graphic(_int(_field(d, "vertices", path), f"{path}.vertices"), edges)
    if kind == "linear":
        fld = d.get("field", "rational")
        if fld == "rational":
            prime = None
        elif isinstance(fld, dict) and "prime" in fld:
            prime = _int(fld["prime"], f"{path}.field.prime")
        else:
            raise FormatError(f"{path}.field", "expected \"rational\" or {\"prime\": p}")
        rows = _list(_field(d, "matrix", path), f"{path}.matrix")
        matrix = []
        for i, row in enumerate(rows):
            conv = _rational if prime is None else _int
            matrix.append([conv(x, f"{path}.matrix[{i}][{j}]") for j, x in enumerate(_list(row, f"{path}.matrix[{i}]"))])
        if matrix and any(len(r) != len(matrix[0]) for r in matrix):
            bad = next(i for i, r in enumerate(matrix) if len(r) != len(matrix[0]))
            raise FormatError(f"{path}.matrix[{bad}]", f"row has {len(matrix[bad])} entries, expected {len(matrix[0])}")
        cols = _int(d["columns"], f"{path}.columns") if "columns" in d else None
        return Linear(matrix, prime, cols)
    if kind == "transversal":
        adj = [_int_list(a, f"{path}.adjacency[{i}]") for i, a in enumerate(_list(_field(d, "adjacency", path), f"{path}.adjacency"))]
        return Transversal(_int(_field(d, "left", path), f"{path}.left"), adj)
    if kind == "direct_sum":
        parts = _list(_field(d, "parts", path), f"{path}.parts")
        return DirectSum([spec_from_json(p, f"{path}.parts[{i}]") for i, p in enumerate(parts)])
    if kind == "restriction":
        return Restriction(spec_from_json(_field(d, "base", path), f"{path}.base"),
                           _int_list(_field(d, "keep", path), f"{path}.keep"))
    if kind == "contraction":
        return Contraction(spec_from_json(_field(d, "base", path), f"{path}.base"),
                           _int_list(_field(d, "contract", path), f"{path}.contract"))
    raise FormatError(f"{path}.kind", f"unknown matroid kind {kind!r}; expected one of {', '.join(MATROID_KINDS)}")


# ---------------------------------------------------------------------------
# Constraints
# ---------------------------------------------------------------------------

def constraint_to_json(c: ConstraintSpec) -> dict:
    out = {"kind": c.kind, "weights": list(c.weights), "target": c.target}
    if c.modulus is not None:
        out["modulus"] = c.modulus
    return out


def constraint_from_json(obj, path: str) -> ConstraintSpec:
    d = _obj(obj, path)
    modulus = _int(d["modulus"], f"{path}.modulus") if "modulus" in d else None
    try:
        return ConstraintSpec(_field(d, "kind", path), _int_list(_field(d, "weights", path), f"{path}.weights"),
                              _int(_field(d, "target", path), f"{path}.target"), modulus)
    except FormatError:
        raise
    except SpecificationError as exc:
        raise FormatError(path, str(exc)) from None


# ---------------------------------------------------------------------------
# Instance documents
# ---------------------------------------------------------------------------

@dataclass
class InstanceDocument:
    matroid: Any
    weights: list = field(default_factory=list)
    target: list = field(default_factory=list)
    constraints: list | None = None
    metadata: dict = field(default_factory=dict)
    delta: int | None = None
    matroid2: Any = None
    format_version: int = FORMAT_VERSION

    @property
    def n(self) -> int:
        return ground_size(self.matroid)

    def weight_matrix(self) -> WeightMatrix:
        return WeightMatrix(tuple(tuple(r) for r in self.weights), self.n)

    def to_json(self) -> dict:
        out = {"format_version": self.format_version, "matroid": spec_to_json(self.matroid),
               "weights": [list(r) for r in self.weights], "target": list(self.target),
               "metadata": dict(self.metadata)}
        if self.constraints is not None:
            out["constraints"] = [constraint_to_json(c) for c in self.constraints]
        if self.delta is not None:
            out["delta"] = self.delta
        if self.matroid2 is not None:
            out["matroid2"] = spec_to_json(self.matroid2)
        return out


def serialize_instance(doc: InstanceDocument) -> str:
    return dumps(doc.to_json())


def _line_of(text: str, key: str) -> int | None:
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return None


def parse_instance(data) -> InstanceDocument:
    """Validated :class:`InstanceDocument`; the first problem raises :class:`FormatError`."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError("$", f"not UTF-8 text ({exc.reason})") from None
    else:
        text = data
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError("$", f"JSON syntax error: {exc.msg} (column {exc.colno})", exc.lineno) from None
    try:
        return _document(raw)
    except FormatError as exc:
        if exc.line is None and exc.path.startswith("$."):
            exc.line = _line_of(text, exc.path[2:].split(".")[0].split("[")[0])
        raise


def _document(raw) -> InstanceDocument:
    d = _obj(raw, "$")
    version = _int(_field(d, "format_version", "$"), "$.format_version")
    if version != FORMAT_VERSION:
        raise FormatError("$.format_version", f"unsupported version {version} (this build reads {FORMAT_VERSION})")
    known = {"format_version", "matroid", "weights", "target", "constraints", "metadata", "delta", "matroid2"}
    extra = sorted(set(d) - known)
    if extra:
        raise FormatError(f"$.{extra[0]}", "unknown field")
    spec = spec_from_json(_field(d, "matroid", "$"))
    try:
        M = compile_spec(spec)
    except FormatError:
        raise
    except SpecificationError as exc:
        raise FormatError("$.matroid", str(exc)) from None
    n = M.n
    delta = _int(d["delta"], "$.delta") if "delta" in d else None
    if delta is not None and delta < 0:
        raise FormatError("$.delta", "must be nonnegative")
    constraints = None
    if "constraints" in d:
        constraints = []
        for i, c in enumerate(_list(d["constraints"], "$.constraints")):
            cs = constraint_from_json(c, f"$.constraints[{i}]")
            if len(cs.weights) != n:
                raise FormatError(f"$.constraints[{i}].weights", f"length {len(cs.weights)}, expected n = {n}")
            constraints.append(cs)
    weights = []
    for i, row in enumerate(_list(d.get("weights", []), "$.weights")):
        r = _int_list(row, f"$.weights[{i}]")
        if len(r) != n:
            raise FormatError(f"$.weights[{i}]", f"weight row {i} has length {len(r)}, expected n = {n}")
        if delta is not None:
            for j, v in enumerate(r):
                if abs(v) > delta:
                    raise FormatError(f"$.weights[{i}][{j}]", f"weight {v} outside [-{delta}, {delta}]")
        weights.append(r)
    target = _int_list(d.get("target", []), "$.target")
    if constraints is None:
        if "weights" not in d:
            raise FormatError("$.weights", "missing field")
        if len(target) != len(weights):
            raise FormatError("$.target", f"{len(target)} entries for {len(weights)} weight rows")
    meta = _obj(d.get("metadata", {}), "$.metadata")
    for k, v in meta.items():
        if not isinstance(v, str):
            raise FormatError(f"$.metadata.{k}", "metadata values must be strings")
    second = None
    if "matroid2" in d:
        second = spec_from_json(d["matroid2"], "$.matroid2")
        if ground_size(second) != n:
            raise FormatError("$.matroid2", f"ground set of size {ground_size(second)}, expected n = {n}")
    return InstanceDocument(spec, weights, target, constraints, dict(meta), delta, second, version)


# ---------------------------------------------------------------------------
# Result documents
# ---------------------------------------------------------------------------

@dataclass
class ResultDocument:
    status: str
    basis: list | None = None
    stats: dict = field(default_factory=dict)
    seed: int = 0
    solver: str | None = None
    bound_reports: list | None = None
    details: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if (self.basis is not None) != (self.status == "found"):
            raise SpecificationError("a result carries a basis exactly when its status is 'found'")

    def to_json(self) -> dict:
        out = {"format_version": self.format_version, "status": self.status,
               "basis": None if self.basis is None else sorted(self.basis),
               "stats": self.stats, "seed": self.seed, "solver": self.solver}
        if self.bound_reports is not None:
            out["bound_reports"] = self.bound_reports
        if self.details:
            out["details"] = self.details
        return out

    def dumps(self) -> str:
        return dumps(jsonable(self.to_json()))


def jsonable(obj):
    """Recursively convert Fractions to strings, sets to sorted lists, tuples to lists."""
    if isinstance(obj, Fraction):
        return fmt_fraction(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        raise SpecificationError("floats are not part of the result format")
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise SpecificationError(f"cannot encode {type(obj).__name__}")


def bound_report_json(r) -> dict:
    return {"instance": r.instance, "observed": r.observed, "proven_bound": r.proven_bound,
            "ratio": r.ratio, "pass": r.passed, "vacuous": r.vacuous,
            "detail": {k: v for k, v in r.detail.items() if k != "point"}}
