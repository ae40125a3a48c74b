"""Largeness decision procedures with independently checkable certificates.

The size notion is the recursive one: a set is large at exponent 0 when
nonempty, and large at exponent n+1 when the set minus its minimum splits
into min-many blocks large at exponent n; multiplier k asks for k blocks.
Under an apartness sentence T, blocks must additionally be pairwise T-apart.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .budget import Budget, budget_or_unlimited
from .formula import TOP, Pi03Sentence
from .sets import FinSet


class PreconditionError(ValueError):
    pass


class SizeOverflow(ValueError):
    def __init__(self, what: str, budget: int):
        super().__init__(f"{what} exceeds budget {budget}")
        self.budget = budget


@dataclass(frozen=True)
class LargenessSpec:
    """Denotes largeness at omega^exponent * multiplier under `sentence`."""

    exponent: int
    multiplier: int = 1
    sentence: Pi03Sentence = TOP

    def __post_init__(self) -> None:
        if self.exponent < 0 or self.multiplier < 1:
            raise ValueError("exponent must be >= 0 and multiplier >= 1")


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    """Witnesses exponent 0: the block is nonempty."""

    witness: int


@dataclass(frozen=True)
class Node:
    """Witnesses exponent n >= 1: head is the block minimum, children are
    exactly `head` blocks at exponent n-1 drawn from the block minus head."""

    head: int
    children: tuple["Block", ...]


@dataclass(frozen=True)
class Block:
    """Half-open index range [lo, hi) into the root set's element list."""

    lo: int
    hi: int
    cert: "Leaf | Node"


@dataclass(frozen=True)
class Certificate:
    exponent: int
    multiplier: int
    blocks: tuple[Block, ...]

    def to_obj(self) -> dict:
        return {
            "exponent": self.exponent,
            "multiplier": self.multiplier,
            "blocks": [_block_obj(b) for b in self.blocks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj())

    @classmethod
    def from_obj(cls, obj: dict) -> "Certificate":
        return cls(
            int(obj["exponent"]),
            int(obj["multiplier"]),
            tuple(_block_from(o) for o in obj["blocks"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_obj(json.loads(text))


def _block_obj(b: Block) -> dict:
    if isinstance(b.cert, Leaf):
        cert = {"kind": "leaf", "witness": str(b.cert.witness)}
    else:
        cert = {
            "kind": "node",
            "head": str(b.cert.head),
            "children": [_block_obj(c) for c in b.cert.children],
        }
    return {"lo": b.lo, "hi": b.hi, "cert": cert}


def _block_from(obj: dict) -> Block:
    c = obj["cert"]
    if c["kind"] == "leaf":
        cert: Leaf | Node = Leaf(int(c["witness"]))
    else:
        cert = Node(int(c["head"]), tuple(_block_from(o) for o in c["children"]))
    return Block(int(obj["lo"]), int(obj["hi"]), cert)


def cert_exponent(cert: Leaf | Node) -> int:
    if isinstance(cert, Leaf):
        return 0
    return 1 + cert_exponent(cert.children[0].cert) if cert.children else 1


def shift_cert(cert: Leaf | Node, delta: int) -> Leaf | Node:
    """Translate all index ranges by delta (for embedding into a superset)."""
    if isinstance(cert, Leaf):
        return cert
    return Node(
        cert.head,
        tuple(Block(b.lo + delta, b.hi + delta, shift_cert(b.cert, delta)) for b in cert.children),
    )


def block_values(x: FinSet, b: Block) -> tuple[int, ...]:
    return x.elements[b.lo: b.hi]


# ---------------------------------------------------------------------------
# Apartness
# ---------------------------------------------------------------------------


def _check_admissible(x: FinSet, sentence: Pi03Sentence) -> None:
    if x.elements and x.minimum < sentence.floor():
        raise PreconditionError(
            f"min {x.minimum} below admissible floor {sentence.floor()} for this sentence"
        )


def t_apart(x: FinSet, y: FinSet, sentence: Pi03Sentence) -> bool:
    """Apartness of two blocks x < y under the sentence.

    Holds iff for all v < max x there is w < min y such that theta(v, w, u)
    for all u < max y.
    """
    if not x.elements or not y.elements:
        raise PreconditionError("apartness needs two nonempty blocks")
    if x.maximum >= y.minimum:
        raise PreconditionError("blocks must satisfy max x < min y")
    _check_admissible(x, sentence)
    _check_admissible(y, sentence)
    return sentence.holds_bounded(x.maximum, y.minimum, y.maximum)


# ---------------------------------------------------------------------------
# Exact size recurrences for minimal intervals (plain largeness)
# ---------------------------------------------------------------------------


def minimal_interval_card(base: int, exponent: int, cap: int) -> int:
    """Cardinality of the minimal interval large at `exponent` above base.

    Exact integer arithmetic throughout; raises SizeOverflow as soon as the
    count (or the work to compute it) would exceed cap.  The minimal witness
    is an interval, so its maximum is base + cardinality - 1.
    """
    if base < 1:
        raise PreconditionError("base must be positive")
    steps = [0]

    def card(b: int, n: int) -> int:
        steps[0] += 1
        if steps[0] > max(cap, 10 ** 6):
            raise SizeOverflow("recurrence work", cap)
        if n == 0:
            return 1
        if n == 1:
            out = b + 1
        elif n == 2:
            # head, then b chained exponent-1 intervals: minima follow
            # m_{j+1} = 2*m_j + 1 from b+1, totalling (b+2)(2^b - 1)
            if b > 10 ** 7:
                raise SizeOverflow("interval cardinality", cap)
            out = 1 + (b + 2) * ((1 << b) - 1)
        else:
            total = 1
            nxt = b + 1
            for _ in range(b):
                c = card(nxt, n - 1)
                total += c
                nxt += c
                if total > cap:
                    raise SizeOverflow("interval cardinality", cap)
            out = total
        if out > cap:
            raise SizeOverflow("interval cardinality", cap)
        return out

    return card(base, exponent)


def minimal_interval_end(base: int, exponent: int, cap: int) -> int:
    """Maximum of the minimal large interval above base."""
    return base + minimal_interval_card(base, exponent, cap) - 1


# ---------------------------------------------------------------------------
# Plain (TOP) largeness: greedy leftmost-minimal checker
# ---------------------------------------------------------------------------


def _plain_min_end(values: tuple[int, ...], pos: int, n: int) -> int | None:
    """End index (exclusive) of the shortest large prefix of values[pos:]
    at exponent n, or None.  Greedy leftmost-minimal blocks are complete
    for plain largeness: shrinking or left-shifting a block never hurts."""
    if pos >= len(values):
        return None
    if n == 0:
        return pos + 1
    q = pos + 1
    for _ in range(values[pos]):
        q2 = _plain_min_end(values, q, n - 1)
        if q2 is None:
            return None
        q = q2
    return q


def is_plain_large(values: tuple[int, ...], exponent: int, multiplier: int = 1) -> bool:
    """Plain largeness decision (no apartness) via the greedy checker."""
    pos = 0
    for _ in range(multiplier):
        end = _plain_min_end(values, pos, exponent)
        if end is None:
            return False
        pos = end
    return True


def is_minimal(x: FinSet, n: int) -> bool:
    """Large at exponent n, and no single deletion stays large."""
    if not is_plain_large(x.elements, n):
        return False
    return all(
        not is_plain_large(tuple(v for v in x.elements if v != drop), n)
        for drop in x.elements
    )


def minimal_large_interval(
    x: int, n: int, budget: int = 10 ** 6, validate_limit: int = 3000
) -> FinSet:
    """The interval [x, y] minimal for largeness at exponent n.

    Cardinality is computed by recurrence first, so oversize requests fail
    fast with SizeOverflow instead of materializing.  Minimality is
    re-validated by is_minimal when the result is small enough.
    """
    if x < 3:
        raise PreconditionError("base must be at least 3")
    card = minimal_interval_card(x, n, cap=budget)
    out = FinSet.interval(x, x + card - 1)
    if card <= validate_limit and not is_minimal(out, n):
        raise AssertionError("recurrence produced a non-minimal interval")
    return out


# ---------------------------------------------------------------------------
# Certified search (exhaustive and greedy) under an apartness sentence
# ---------------------------------------------------------------------------


class _Searcher:
    """Backtracking over contiguous block runs with memoization.

    Any witnessing family can be normalized to contiguous runs with minimal
    ends: filling interior gaps changes neither block minima nor maxima (so
    apartness is unaffected) and largeness is closed under supersets, while
    shrinking a block to its minimal end weakens every remaining constraint.
    The scan therefore only considers, for each start, the shortest large
    run from that start, which keeps the search complete and makes the
    returned certificate lexicographically least.
    """

    def __init__(self, xs: tuple[int, ...], sentence: Pi03Sentence, budget: Budget):
        self.xs = xs
        self.sentence = sentence
        self.budget = budget
        self._estar: dict[tuple[int, int], int | None] = {}
        self._place: dict[tuple[int, int, int, int, int], tuple | None] = {}

    def apart_ok(self, prev_max_idx: int, s: int, e: int) -> bool:
        if prev_max_idx < 0:
            return True
        return self.sentence.holds_bounded(
            self.xs[prev_max_idx], self.xs[s], self.xs[e - 1]
        )

    def e_star(self, s: int, n: int) -> int | None:
        """Minimal exclusive end e with xs[s:e] large at exponent n."""
        key = (s, n)
        if key in self._estar:
            return self._estar[key]
        if n == 0:
            out: int | None = s + 1
        else:
            m = self.xs[s]
            # lower bound from the plain cardinality recurrence (apartness
            # only shrinks the witness family, never the needed count)
            try:
                least = s + minimal_interval_card(self.xs[s], n, cap=len(self.xs))
            except SizeOverflow:
                least = len(self.xs) + 1
            out = None
            e = least
            while e <= len(self.xs):
                if self.place(s + 1, e, n - 1, m, -1) is not None:
                    out = e
                    break
                e += 1
        self._estar[key] = out
        return out

    def place(
        self, i: int, j: int, n: int, k: int, prev: int
    ) -> tuple[Block, ...] | None:
        """Lexicographically least chain of k apart blocks in xs[i:j].

        Iterative backtracking (chains can run to thousands of blocks, far
        past the interpreter's recursion limit), memoized per suffix state.
        """
        miss = object()
        memo = self._place

        def lookup(ii: int, kk: int, pp: int):
            if kk == 0:
                return ()
            return memo.get((ii, j, n, kk, pp), miss)

        top = lookup(i, k, prev)
        if top is not miss:
            return top

        # frame: [ii, pp, kk, scan cursor]; chosen[d] pairs with frames[d]
        frames: list[list[int]] = [[i, prev, k, i]]
        chosen: list[Block] = []
        while frames:
            self.budget.tick()
            frame = frames[-1]
            ii, pp, kk, s = frame
            outcome: tuple[Block, ...] | None = miss  # type: ignore[assignment]
            while s < j:
                e = self.e_star(s, n)
                if e is None or e > j:
                    s = j  # e_star is nondecreasing in s: no later start fits
                    break
                if self.apart_ok(pp, s, e):
                    child = lookup(e, kk - 1, e - 1)
                    if child is miss:
                        block = Block(s, e, self.cert_for(s, e, n))
                        frame[3] = s + 1
                        chosen.append(block)
                        frames.append([e, e - 1, kk - 1, e])
                        break
                    if child is not None:
                        block = Block(s, e, self.cert_for(s, e, n))
                        outcome = (block,) + child
                        break
                s += 1
            if frames[-1] is not frame:
                continue  # descended into a fresh child frame
            if outcome is miss:
                outcome = None  # scan exhausted with no viable block
            # resolve this frame and cascade successes upward
            while True:
                memo[(ii, j, n, kk, pp)] = outcome
                frames.pop()
                if outcome is None:
                    if chosen and frames:
                        chosen.pop()  # parent's block did not pan out
                    break
                if not frames:
                    return outcome
                block = chosen.pop()
                outcome = (block,) + outcome
                ii, pp, kk = frames[-1][0], frames[-1][1], frames[-1][2]
        return memo.get((i, j, n, k, prev))

    def place_greedy(
        self, i: int, j: int, n: int, k: int, prev: int
    ) -> tuple[Block, ...] | None:
        """Leftmost-minimal blocks, committing to the first feasible start."""
        out: list[Block] = []
        while k > 0:
            placed = False
            for s in range(i, j):
                e = self.e_star(s, n)
                if e is None or e > j:
                    return None
                if self.apart_ok(prev, s, e):
                    out.append(Block(s, e, self.cert_for(s, e, n)))
                    i, prev, k = e, e - 1, k - 1
                    placed = True
                    break
            if not placed:
                return None
        return tuple(out)

    def cert_for(self, s: int, e: int, n: int) -> Leaf | Node:
        if n == 0:
            return Leaf(self.xs[s])
        children = self.place(s + 1, e, n - 1, self.xs[s], -1)
        assert children is not None, "e_star promised a fitting decomposition"
        return Node(self.xs[s], children)


def check_large(
    x: FinSet,
    spec: LargenessSpec,
    mode: str = "exhaustive",
    budget: Budget | None = None,
) -> Certificate | None:
    """Search for a largeness certificate; None means no witness exists
    (exhaustive mode) or none was found (greedy mode).

    Exhaustive mode is complete and returns the lexicographically least
    certificate; consecutive blocks are checked for apartness, which
    suffices by transitivity.  Greedy mode is sound but may miss witnesses.
    """
    if mode not in ("exhaustive", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    _check_admissible(x, spec.sentence)
    if not x.elements:
        return None
    searcher = _Searcher(x.elements, spec.sentence, budget_or_unlimited(budget))
    placer = searcher.place if mode == "exhaustive" else searcher.place_greedy
    blocks = placer(0, len(x.elements), spec.exponent, spec.multiplier, -1)
    if blocks is None:
        return None
    return Certificate(spec.exponent, spec.multiplier, blocks)


def is_large(x: FinSet, spec: LargenessSpec, budget: Budget | None = None) -> bool:
    if spec.sentence.is_top:
        # plain largeness has the classical complete greedy
        values = x.elements
        if x.elements and x.minimum < spec.sentence.floor():
            raise PreconditionError("min below admissible floor")
        return is_plain_large(values, spec.exponent, spec.multiplier)
    return check_large(x, spec, budget=budget) is not None


# ---------------------------------------------------------------------------
# Independent certificate verification
# ---------------------------------------------------------------------------


def verify_certificate(
    x: FinSet,
    cert: Certificate,
    spec: LargenessSpec,
    paranoid: bool = False,
) -> bool:
    """Structural re-check of a certificate against the set and spec.

    Every block range, child count, head value and apartness condition is
    re-evaluated from scratch; `paranoid` checks apartness on all block
    pairs instead of consecutive ones.
    """
    xs = x.elements
    sentence = spec.sentence

    def block_ok(b: Block, exponent: int, lo_limit: int, hi_limit: int) -> bool:
        if not (lo_limit <= b.lo < b.hi <= hi_limit):
            return False
        if isinstance(b.cert, Leaf):
            return exponent == 0 and b.cert.witness in xs[b.lo: b.hi]
        if exponent == 0:
            return False
        node = b.cert
        if node.head != xs[b.lo]:
            return False
        if len(node.children) != node.head:
            return False
        return chain_ok(node.children, exponent - 1, b.lo + 1, b.hi)

    def chain_ok(blocks: tuple[Block, ...], exponent: int, lo: int, hi: int) -> bool:
        prev_hi = lo
        for b in blocks:
            if b.lo < prev_hi:
                return False
            if not block_ok(b, exponent, lo, hi):
                return False
            prev_hi = b.hi
        pairs = (
            [(i, j) for i in range(len(blocks)) for j in range(i + 1, len(blocks))]
            if paranoid
            else [(i, i + 1) for i in range(len(blocks) - 1)]
        )
        for i, j in pairs:
            bi, bj = blocks[i], blocks[j]
            if not sentence.holds_bounded(xs[bi.hi - 1], xs[bj.lo], xs[bj.hi - 1]):
                return False
        return True

    try:
        _check_admissible(x, sentence)
    except PreconditionError:
        return False
    if cert.exponent != spec.exponent or cert.multiplier != spec.multiplier:
        return False
    if len(cert.blocks) != spec.multiplier:
        return False
    return chain_ok(cert.blocks, spec.exponent, 0, len(xs))
