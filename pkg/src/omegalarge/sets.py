"""Finite sets of naturals, sparsity policies and coloring tables.

Naturals are plain Python ints (arbitrary precision, exact arithmetic).
Every value here is immutable after construction and safe to share.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

DEFAULT_FLOOR = 3


class SparsityPolicy(enum.Enum):
    """Gap requirement between consecutive elements: threshold(x) < next."""

    EXP4 = "exp4"      # 4^x < y, the faithful notion
    POLY2 = "poly2"    # x*x < y
    LINEAR = "linear"  # 2*x < y
    NONE = "none"      # no constraint

    def threshold(self, x: int) -> int:
        if self is SparsityPolicy.EXP4:
            return 4 ** x
        if self is SparsityPolicy.POLY2:
            return x * x
        if self is SparsityPolicy.LINEAR:
            return 2 * x
        return -1


@dataclass(frozen=True)
class FinSet:
    """Strictly increasing finite sequence of naturals with a minimum floor."""

    elements: tuple[int, ...]
    floor: int = DEFAULT_FLOOR

    def __post_init__(self) -> None:
        elems = tuple(int(v) for v in self.elements)
        object.__setattr__(self, "elements", elems)
        for a, b in zip(elems, elems[1:]):
            if a >= b:
                raise ValueError(f"elements not strictly increasing at {a}, {b}")
        if elems:
            if elems[0] < 0:
                raise ValueError("negative element")
            if elems[0] < self.floor:
                raise ValueError(f"min {elems[0]} below floor {self.floor}")

    @classmethod
    def of(cls, values: Iterable[int], floor: int = DEFAULT_FLOOR) -> "FinSet":
        return cls(tuple(sorted(set(int(v) for v in values))), floor)

    @classmethod
    def interval(cls, lo: int, hi: int, floor: int = DEFAULT_FLOOR) -> "FinSet":
        """Closed interval [lo, hi]."""
        return cls(tuple(range(lo, hi + 1)), floor)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, v: int) -> bool:
        return v in set(self.elements)

    @property
    def minimum(self) -> int:
        if not self.elements:
            raise ValueError("empty set has no minimum")
        return self.elements[0]

    @property
    def maximum(self) -> int:
        if not self.elements:
            raise ValueError("empty set has no maximum")
        return self.elements[-1]

    def subset_of(self, other: "FinSet") -> bool:
        return set(self.elements) <= set(other.elements)

    def restrict(self, values: Iterable[int]) -> "FinSet":
        keep = set(values)
        return FinSet(tuple(v for v in self.elements if v in keep), self.floor)

    def without(self, v: int) -> "FinSet":
        return FinSet(tuple(x for x in self.elements if x != v), self.floor)

    # -- text formats: one decimal per line, or a JSON array of strings --

    def to_lines(self) -> str:
        return "\n".join(str(v) for v in self.elements) + "\n"

    def to_json(self) -> str:
        return json.dumps([str(v) for v in self.elements])

    @classmethod
    def parse(cls, text: str, floor: int = DEFAULT_FLOOR) -> "FinSet":
        stripped = text.strip()
        if stripped.startswith("["):
            values = [int(s) for s in json.loads(stripped)]
        else:
            values = [int(line) for line in stripped.splitlines() if line.strip()]
        return cls(tuple(values), floor)


def is_sparse(x: FinSet, policy: SparsityPolicy) -> bool:
    """True iff threshold(a) < b for every adjacent pair a < b.

    Adjacent pairs suffice: thresholds are strictly increasing, so the
    condition propagates to all pairs.
    """
    if policy is SparsityPolicy.NONE:
        return True
    return all(policy.threshold(a) < b for a, b in zip(x.elements, x.elements[1:]))


@dataclass(frozen=True)
class ColoringTable:
    """Total coloring of increasing arity-tuples over a finite domain.

    The flat table lists colors in lexicographic tuple order, matching the
    serialized form, so enumeration and round-tripping are trivial.
    """

    domain: FinSet
    arity: int
    colors: int
    table: tuple[int, ...]
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        tuples = list(combinations(self.domain.elements, self.arity))
        if len(self.table) != len(tuples):
            raise ValueError(
                f"table has {len(self.table)} entries, expected {len(tuples)}"
            )
        for c in self.table:
            if not 0 <= c < self.colors:
                raise ValueError(f"color {c} out of range 0..{self.colors - 1}")
        self._index.update(zip(tuples, self.table))

    @classmethod
    def from_function(
        cls,
        domain: FinSet,
        arity: int,
        colors: int,
        fn: Callable[..., int],
    ) -> "ColoringTable":
        table = tuple(fn(*t) for t in combinations(domain.elements, arity))
        return cls(domain, arity, colors, table)

    @classmethod
    def random(cls, domain: FinSet, arity: int, colors: int, rng) -> "ColoringTable":
        n = sum(1 for _ in combinations(domain.elements, arity))
        return cls(domain, arity, colors, tuple(rng.randrange(colors) for _ in range(n)))

    def __call__(self, *values: int) -> int:
        key = tuple(values)
        if key not in self._index:
            raise KeyError(f"tuple {key} not in coloring domain")
        return self._index[key]

    def tuples(self) -> Iterator[tuple[int, ...]]:
        return combinations(self.domain.elements, self.arity)

    def image(self, values: Sequence[int] | None = None) -> set[int]:
        """Set of colors used on tuples drawn from `values` (default: all)."""
        if values is None:
            return set(self.table)
        pool = sorted(set(values))
        return {self(*t) for t in combinations(pool, self.arity)}

    def to_json(self) -> str:
        return json.dumps(
            {
                "domain": [str(v) for v in self.domain.elements],
                "arity": self.arity,
                "colors": self.colors,
                "table": list(self.table),
            }
        )

    @classmethod
    def from_json(cls, text: str, floor: int = 0) -> "ColoringTable":
        obj = json.loads(text)
        domain = FinSet(tuple(int(s) for s in obj["domain"]), floor)
        return cls(domain, int(obj["arity"]), int(obj["colors"]), tuple(obj["table"]))


def restrict_coloring(f: ColoringTable, g: FinSet) -> ColoringTable:
    """Reindex f to g: the result colors index tuples over {0, ..., |g|-1}.

    Entry (i0, ..., i_{n-1}) of the result is f at the corresponding
    elements of g, so only the order type of g survives.
    """
    if not g.subset_of(f.domain):
        raise ValueError("restriction target is not a subset of the coloring domain")
    index_domain = FinSet(tuple(range(len(g))), floor=0)
    elems = g.elements
    table = tuple(
        f(*(elems[i] for i in idx))
        for idx in combinations(range(len(g)), f.arity)
    )
    return ColoringTable(index_domain, f.arity, f.colors, table)
