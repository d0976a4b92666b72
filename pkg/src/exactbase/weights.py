from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import SpecificationError


@dataclass(frozen=True)
class WeightMatrix:
    """Integer ``m x n`` weight matrix; column ``e`` is the weight vector of element ``e``.

    ``classes`` maps every occurring column vector to the sorted elements that
    carry it (the weight classes).
    """
    rows: tuple
    n: int
    delta: int = field(init=False)
    classes: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        for i, row in enumerate(rows):
            if len(row) != self.n:
                raise SpecificationError(f"weight row {i} has length {len(row)}, expected {self.n}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "delta", max((abs(x) for row in rows for x in row), default=0))
        classes: dict[tuple, list[int]] = {}
        for e in range(self.n):
            classes.setdefault(self.column(e), []).append(e)
        object.__setattr__(self, "classes", {a: tuple(es) for a, es in sorted(classes.items())})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], n: int | None = None) -> "WeightMatrix":
        rows = [list(r) for r in rows]
        if n is None:
            if not rows:
                raise SpecificationError("cannot infer ground size from an empty weight matrix")
            n = len(rows[0])
        return cls(tuple(tuple(r) for r in rows), n)

    @property
    def m(self) -> int:
        return len(self.rows)

    def column(self, e: int) -> tuple:
        return tuple(row[e] for row in self.rows)

    def weight(self, S: Iterable[int]) -> tuple:
        S = list(S)
        return tuple(sum(row[e] for e in S) for row in self.rows)

    def class_of(self) -> list[tuple]:
        return [self.column(e) for e in range(self.n)]

    def check_bound(self, delta: int) -> None:
        if self.delta > delta:
            raise SpecificationError(f"weight entry of magnitude {self.delta} exceeds bound {delta}")


def as_class_key(alpha, m: int) -> tuple:
    """Accept bare ints for one-row matrices."""
    if isinstance(alpha, tuple):
        return alpha
    if m == 1:
        return (int(alpha),)
    return tuple(alpha)
