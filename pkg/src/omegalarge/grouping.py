"""Finite groupings with apartness, plus homogeneous-subset searches.

A grouping for a coloring is an increasing family of blocks, each large in
the L0 sense, pairwise apart, cross-monochromatic between blocks, and such
that every set meeting all blocks is large in the L1 sense.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional

from .budget import Budget, BudgetExceeded, budget_or_unlimited
from .formula import Pi03Sentence
from .largeness import (
    Certificate,
    LargenessSpec,
    PreconditionError,
    SizeOverflow,
    check_large,
    minimal_interval_card,
    t_apart,
)
from .sets import ColoringTable, FinSet

FOUND = "found"
ABSENT = "absent"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class LSpec:
    """A largeness requirement: either a LargenessSpec or a cardinality bound."""

    kind: str  # 'largeness' | 'card_at_least'
    spec: Optional[LargenessSpec] = None
    at_least: Optional[int] = None

    @classmethod
    def largeness(cls, spec: LargenessSpec) -> "LSpec":
        return cls("largeness", spec=spec)

    @classmethod
    def card(cls, m: int) -> "LSpec":
        return cls("card_at_least", at_least=m)

    def holds(self, s: FinSet) -> bool:
        if self.kind == "card_at_least":
            return len(s) >= self.at_least
        return check_large(s, self.spec) is not None

    def describe(self) -> str:
        if self.kind == "card_at_least":
            return f"card>={self.at_least}"
        sp = self.spec
        return f"omega^{sp.exponent}*{sp.multiplier}" + ("" if sp.sentence.is_top else "(T)")


@dataclass(frozen=True)
class GroupingWitness:
    blocks: tuple[FinSet, ...]
    coloring: ColoringTable

    def to_json(self) -> str:
        return json.dumps({"blocks": [[str(v) for v in b] for b in self.blocks]})

    @classmethod
    def from_json(cls, text: str, coloring: ColoringTable) -> "GroupingWitness":
        obj = json.loads(text)
        blocks = tuple(FinSet(tuple(int(v) for v in b)) for b in obj["blocks"])
        return cls(blocks, coloring)


class MalformedWitness(ValueError):
    pass


TRANSVERSAL_CEILING = 200_000


def _validate_witness(w: GroupingWitness) -> None:
    if not w.blocks:
        raise MalformedWitness("a grouping needs at least one block")
    for b in w.blocks:
        if not b.elements:
            raise MalformedWitness("empty block")
    for left, right in zip(w.blocks, w.blocks[1:]):
        if left.maximum >= right.minimum:
            raise MalformedWitness("blocks must be increasing and disjoint")
    union = [v for b in w.blocks for v in b]
    for t in combinations(union, w.coloring.arity):
        w.coloring(*t)  # raises KeyError if the coloring is not total here


def _transversals_in_l1(blocks: tuple[FinSet, ...], l1: LSpec) -> bool:
    """Condition on sets meeting every block, via minimal transversals.

    Both LSpec kinds are closed under supersets, so it is enough that every
    one-point-per-block selection satisfies l1; for a cardinality bound that
    collapses to comparing the block count.
    """
    if l1.kind == "card_at_least":
        return len(blocks) >= l1.at_least
    count = 1
    for b in blocks:
        count *= len(b)
        if count > TRANSVERSAL_CEILING:
            raise MalformedWitness(
                f"transversal space {count}+ exceeds ceiling {TRANSVERSAL_CEILING}"
            )
    return all(
        l1.holds(FinSet(sel)) for sel in product(*(b.elements for b in blocks))
    )


def _cross_monochromatic(blocks: tuple[FinSet, ...], f: ColoringTable) -> bool:
    n = f.arity
    for picks in combinations(range(len(blocks)), n):
        seen = None
        for combo in product(*(blocks[i].elements for i in picks)):
            c = f(*combo)
            if seen is None:
                seen = c
            elif c != seen:
                return False
    return True


def is_grouping(
    w: GroupingWitness,
    l0: LSpec,
    l1: LSpec,
    sentence: Pi03Sentence,
) -> bool:
    """Check the four grouping conditions; malformed witnesses raise."""
    _validate_witness(w)
    if not all(l0.holds(b) for b in w.blocks):
        return False
    if not _transversals_in_l1(w.blocks, l1):
        return False
    if not _cross_monochromatic(w.blocks, w.coloring):
        return False
    for i in range(len(w.blocks)):
        for j in range(i + 1, len(w.blocks)):
            if not t_apart(w.blocks[i], w.blocks[j], sentence):
                return False
    return True


@dataclass
class SearchOutcome:
    status: str  # found | absent | exhausted
    witness: Optional[GroupingWitness] = None
    subset: Optional[FinSet] = None
    certificate: Optional[Certificate] = None
    steps: int = 0
    detail: str = ""


class GroupingWalk:
    """Generator-backed walk over all groupings of f on z.

    Blocks are arbitrary subsets, built by a start/extend/skip walk over
    the elements with cross-monochromaticity and apartness pruning; a walk
    that finishes without budget trouble has enumerated every grouping.
    """

    def __init__(
        self,
        z: FinSet,
        f: ColoringTable,
        l0: LSpec,
        l1: LSpec,
        sentence: Pi03Sentence,
        budget: Budget,
    ):
        if f.arity != 2:
            raise ValueError("grouping search expects a pair coloring")
        if z.elements and z.minimum < sentence.floor():
            raise PreconditionError("set minimum below the sentence's admissible floor")
        self.z, self.f, self.l0, self.l1, self.sentence = z, f, l0, l1, sentence
        self.budget = budget
        self.ceiling_hit = False
        self.min_blocks = _min_block_count(l1, z)

    def witnesses(self):
        if self.min_blocks is not None and self.min_blocks > len(self.z):
            return
        yield from self._walk(0, [], [], None, fresh=False)

    def _closeable(self, blocks, current) -> bool:
        cur = FinSet(tuple(current))
        if not self.l0.holds(cur):
            return False
        if blocks:
            if not t_apart(FinSet(blocks[-1]), cur, self.sentence):
                return False
        return True

    def _hit(self, blocks) -> Optional[GroupingWitness]:
        if not blocks or (self.min_blocks is not None and len(blocks) < self.min_blocks):
            return None
        try:
            ok = _transversals_in_l1(tuple(FinSet(b) for b in blocks), self.l1)
        except MalformedWitness:
            self.ceiling_hit = True  # could not decide: absence claims are off
            return None
        if not ok:
            return None
        return GroupingWitness(tuple(FinSet(b) for b in blocks), self.f)

    def _cross_ok(self, blocks, v, established) -> Optional[list[int]]:
        """Colors of v against every completed block, or None on clash."""
        f = self.f
        out = []
        for i, b in enumerate(blocks):
            colors = {f(u, v) for u in b}
            if len(colors) != 1:
                return None
            c = colors.pop()
            if established is not None and established[i] != c:
                return None
            out.append(c)
        return out

    def _walk(self, i, blocks, current, cur_cross, fresh):
        self.budget.tick()
        elems = self.z.elements
        if self.min_blocks is not None:
            open_now = 1 if current else 0
            if len(blocks) + open_now + (len(elems) - i) < self.min_blocks:
                return
        closeable = None
        if fresh:
            # a candidate family is tested once, right after it changed
            candidate = list(blocks)
            if current:
                closeable = self._closeable(blocks, current)
                candidate = blocks + [tuple(current)] if closeable else None
            if candidate is not None:
                w = self._hit(candidate)
                if w is not None:
                    yield w
        if i == len(elems):
            return
        v = elems[i]
        # start a new block with v (closing the open one first); starting
        # before extending finds small witnesses without walking long spines
        base, ok = blocks, True
        if current:
            if closeable is None:
                closeable = self._closeable(blocks, current)
            if closeable:
                base = blocks + [tuple(current)]
            else:
                ok = False
        if ok:
            cross = self._cross_ok(base, v, None)
            if cross is not None and _apart_start_ok(base, v, self.sentence):
                yield from self._walk(i + 1, base, [v], cross, True)
        # extend the open block
        if current:
            cross = self._cross_ok(blocks, v, cur_cross)
            if cross is not None and _apart_extension_ok(blocks, current, v, self.sentence):
                current.append(v)
                yield from self._walk(i + 1, blocks, current, cross, True)
                current.pop()
        # skip v
        yield from self._walk(i + 1, blocks, current, cur_cross, False)


def find_grouping(
    z: FinSet,
    f: ColoringTable,
    l0: LSpec,
    l1: LSpec,
    sentence: Pi03Sentence,
    budget: Budget | None = None,
) -> SearchOutcome:
    """First grouping of f over z, or a definitive absence/exhaustion.

    A completed walk with no hit proves absence; running out of budget (or
    an undecidable transversal check) is reported as exhausted, never as
    absence.
    """
    budget = budget_or_unlimited(budget)
    budget.enter("grouping search")
    walk = GroupingWalk(z, f, l0, l1, sentence, budget)
    try:
        w = next(walk.witnesses(), None)
    except BudgetExceeded:
        return SearchOutcome(EXHAUSTED, steps=budget.spent, detail="grouping search")
    if w is None:
        if walk.ceiling_hit:
            return SearchOutcome(
                EXHAUSTED, steps=budget.spent, detail="transversal ceiling blocked some candidates"
            )
        return SearchOutcome(ABSENT, steps=budget.spent)
    assert is_grouping(w, l0, l1, sentence)
    return SearchOutcome(FOUND, witness=w, steps=budget.spent)


def _min_block_count(l1: LSpec, z: FinSet) -> Optional[int]:
    """Lower bound on the block count any grouping must have, or None."""
    if l1.kind == "card_at_least":
        return l1.at_least
    if not z.elements:
        return 1
    # a transversal has one point per block with minimum >= min z
    spec = l1.spec
    try:
        return _needed_count(z.minimum, spec.exponent, spec.multiplier, len(z))
    except SizeOverflow:
        return len(z) + 1


def _apart_extension_ok(blocks, current, v, sentence) -> bool:
    # apartness from the previous block only worsens as the open block
    # grows, so a failure here prunes the whole extension subtree
    if not blocks:
        return True
    prev = blocks[-1]
    return sentence.holds_bounded(prev[-1], current[0], v)


def _apart_start_ok(blocks, v, sentence) -> bool:
    if not blocks:
        return True
    prev = blocks[-1]
    return sentence.holds_bounded(prev[-1], v, v)


# ---------------------------------------------------------------------------
# Structured-subset searches (homogeneous / transitive)
# ---------------------------------------------------------------------------


def _needed_count(first: int, exponent: int, multiplier: int, available: int) -> int:
    """Least cardinality any witness with minimum >= first can have."""
    total, v = 0, first
    for _ in range(multiplier):
        c = minimal_interval_card(v, exponent, cap=available + 1)
        total += c
        v += c
        if total > available:
            break
    return total


def _subset_search(
    x: FinSet,
    target: LargenessSpec,
    budget: Budget,
    compatible,
    anchor: Optional[int] = None,
    max_value: Optional[int] = None,
    accept=None,
) -> SearchOutcome:
    """DFS over subsets of x in element order, include-first.

    `compatible(chosen, v)` guards growth; `accept(chosen)` (default: the
    largeness target) decides hits.  Pruning uses the exact minimal
    cardinality a witness with the current minimum could have.
    """
    elems = [v for v in x.elements if max_value is None or v <= max_value]
    accept_fn = accept
    if accept_fn is None:
        def accept_fn(chosen: tuple[int, ...]) -> Optional[Certificate]:
            return check_large(FinSet(chosen), target, budget=budget)

    def bound_ok(chosen: tuple[int, ...], i: int) -> bool:
        pool = len(elems) - i
        first = chosen[0] if chosen else (elems[i] if i < len(elems) else None)
        if first is None:
            return False
        try:
            need = _needed_count(first, target.exponent, target.multiplier, len(chosen) + pool)
        except SizeOverflow:
            return False
        return len(chosen) + pool >= need

    def dfs(i: int, chosen: tuple[int, ...]) -> Optional[tuple[tuple[int, ...], Certificate]]:
        budget.tick()
        if chosen and (anchor is None or chosen[0] == anchor):
            cert = accept_fn(chosen)
            if cert is not None:
                return chosen, cert
        if i == len(elems) or not bound_ok(chosen, i):
            return None
        v = elems[i]
        if (anchor is None or chosen or v == anchor) and compatible(chosen, v):
            out = dfs(i + 1, chosen + (v,))
            if out is not None:
                return out
        if anchor is not None and not chosen and v == anchor:
            return None  # anchored searches must include the anchor first
        return dfs(i + 1, chosen)

    try:
        out = dfs(0, ())
    except BudgetExceeded:
        return SearchOutcome(EXHAUSTED, steps=budget.spent)
    if out is None:
        return SearchOutcome(ABSENT, steps=budget.spent)
    chosen, cert = out
    return SearchOutcome(FOUND, subset=FinSet(chosen), certificate=cert, steps=budget.spent)


def find_homogeneous(
    x: FinSet,
    f: ColoringTable,
    target: LargenessSpec,
    budget: Budget | None = None,
    color: Optional[int] = None,
    anchor: Optional[int] = None,
    max_value: Optional[int] = None,
    accept=None,
) -> SearchOutcome:
    """Search for an f-homogeneous subset meeting the largeness target.

    Sound always; complete (absent is definitive) when the budget allows
    the walk to finish.  `color` pins the homogeneous color, `anchor`
    forces the subset minimum, `max_value` caps elements.
    """
    if f.arity != 2:
        raise ValueError("homogeneous search expects a pair coloring")
    budget = budget_or_unlimited(budget)
    budget.enter("homogeneous search")

    def compatible(chosen: tuple[int, ...], v: int) -> bool:
        c = color if len(chosen) < 2 else f(chosen[0], chosen[1])
        for u in chosen:
            cu = f(u, v)
            if c is None:
                c = cu
            elif cu != c:
                return False
        return True

    return _subset_search(x, target, budget, compatible, anchor, max_value, accept)


def find_transitive(
    x: FinSet,
    f: ColoringTable,
    target: LargenessSpec,
    budget: Budget | None = None,
) -> SearchOutcome:
    """Search for an f-transitive subset meeting the largeness target."""
    if f.arity != 2:
        raise ValueError("transitive search expects a pair coloring")
    budget = budget_or_unlimited(budget)
    budget.enter("transitive search")

    def compatible(chosen: tuple[int, ...], v: int) -> bool:
        for a in range(len(chosen)):
            for b in range(a + 1, len(chosen)):
                u, w = chosen[a], chosen[b]
                if f(u, w) == f(w, v) != f(u, v):
                    return False
        return True

    return _subset_search(x, target, budget, compatible)
