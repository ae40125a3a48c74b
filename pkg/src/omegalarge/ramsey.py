"""Largeness and density relative to partition statements, the transitive
and homogeneous extraction pipelines, and the explicit bound table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional

from .budget import Budget, budget_or_unlimited
from .formula import TOP, Pi03Sentence, RtLikeStatement
from .budget import BudgetExceeded
from .grouping import (
    ABSENT,
    EXHAUSTED,
    FOUND,
    GroupingWalk,
    LSpec,
    SearchOutcome,
    find_homogeneous,
    find_transitive,
)
from .largeness import (
    Certificate,
    LargenessSpec,
    PreconditionError,
    check_large,
    verify_certificate,
)
from .sets import ColoringTable, FinSet, restrict_coloring

TRUE = "true"
FALSE = "false"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    value: str  # true | false | inconclusive
    reason: str = ""

    def __bool__(self) -> bool:  # pragma: no cover - guard against misuse
        raise TypeError("three-valued verdict; compare .value explicitly")


@dataclass(frozen=True)
class Mode:
    """Exact enumeration or seeded sampling, with explicit ceilings."""

    kind: str = "exact"  # 'exact' | 'sampled'
    seed: int = 1729
    trials: int = 200
    coloring_ceiling: int = 2 ** 20
    subset_ceiling: int = 2 ** 20


@dataclass(frozen=True)
class DensityParams:
    statement: RtLikeStatement
    sentence: Pi03Sentence
    level: int
    mode: Mode = Mode()


class CeilingExceeded(ValueError):
    pass


def _all_colorings(domain: FinSet, arity: int, colors: int, ceiling: int):
    tuples = list(combinations(domain.elements, arity))
    count = colors ** len(tuples)
    if count > ceiling:
        raise CeilingExceeded(
            f"coloring space {colors}^{len(tuples)} exceeds ceiling {ceiling}"
        )
    for table in product(range(colors), repeat=len(tuples)):
        yield ColoringTable(domain, arity, colors, table)


def _subsets(z: FinSet, ceiling: int):
    if 2 ** len(z) > ceiling:
        raise CeilingExceeded(f"subset space 2^{len(z)} exceeds ceiling {ceiling}")
    for size in range(len(z), 0, -1):
        for sub in combinations(z.elements, size):
            yield FinSet(sub)


def _qualifying_subset(
    z: FinSet,
    f: ColoringTable,
    statement: RtLikeStatement,
    large_subsets: list[FinSet],
) -> Optional[FinSet]:
    for y in large_subsets:
        if statement.solution_ok(f, y):
            return y
    return None


def is_large_gamma(
    z: FinSet,
    r: int,
    s: int,
    sentence: Pi03Sentence,
    statement: RtLikeStatement,
    mode: Mode = Mode(),
) -> Verdict:
    """Does every coloring of z admit a large solution subset?

    Exact mode enumerates the full coloring space (ceiling-guarded) and is
    definitive both ways; sampled mode can only refute or stay inconclusive.
    """
    spec = LargenessSpec(r, s, sentence)
    large_subsets = [y for y in _subsets(z, mode.subset_ceiling) if check_large(y, spec)]
    if mode.kind == "exact":
        for f in _all_colorings(z, statement.arity, statement.colors, mode.coloring_ceiling):
            if _qualifying_subset(z, f, statement, large_subsets) is None:
                return Verdict(FALSE, f"counterexample coloring {list(f.table)}")
        return Verdict(TRUE, "exhaustive over the coloring space")
    rng = random.Random(mode.seed)
    tuples = list(combinations(z.elements, statement.arity))
    for _ in range(mode.trials):
        table = tuple(rng.randrange(statement.colors) for _ in tuples)
        f = ColoringTable(z, statement.arity, statement.colors, table)
        if _qualifying_subset(z, f, statement, large_subsets) is None:
            return Verdict(FALSE, f"counterexample coloring {list(table)}")
    return Verdict(INCONCLUSIVE, f"{mode.trials} sampled colorings all admit solutions")


def _interval_partitions(z: FinSet, parts: int):
    """Ordered partitions of z into `parts` consecutive nonempty runs."""
    n = len(z)
    for cuts in combinations(range(1, n), parts - 1):
        bounds = (0,) + cuts + (n,)
        yield [FinSet(z.elements[bounds[i]: bounds[i + 1]]) for i in range(parts)]


def is_n_dense(z: FinSet, params: DensityParams) -> Verdict:
    """Iterated density: level 0 is largeness at exponent 1 under the
    sentence; level m+1 closes under one statement application, interval
    partitions, min-many colorings, and a bounding step for the sentence.
    """
    statement, sentence, mode = params.statement, params.sentence, params.mode
    memo: dict[tuple[tuple[int, ...], int], bool] = {}

    def dense(y: FinSet, m: int) -> bool:
        if not y.elements:
            return False
        key = (y.elements, m)
        hit = memo.get(key)
        if hit is None:
            hit = _dense_raw(y, m)
            memo[key] = hit
        return hit

    def dense_subset_exists(y: FinSet, m: int, extra=None) -> bool:
        for sub in _subsets(y, mode.subset_ceiling):
            if (extra is None or extra(sub)) and dense(sub, m):
                return True
        return False

    def _dense_raw(y: FinSet, m: int) -> bool:
        if m == 0:
            return check_large(y, LargenessSpec(1, 1, sentence)) is not None
        # (a) one statement application
        for f in _all_colorings(y, statement.arity, statement.colors, mode.coloring_ceiling):
            if not dense_subset_exists(y, m - 1, extra=lambda s: statement.solution_ok(f, s)):
                return False
        # (b) interval partitions with at most min-many parts
        for parts in range(1, min(y.minimum, len(y)) + 1):
            for partition in _interval_partitions(y, parts):
                if not any(dense(p, m - 1) for p in partition):
                    return False
        # (c) colorings of points by fewer than min colors
        count = y.minimum ** len(y)
        if count > mode.coloring_ceiling:
            raise CeilingExceeded(f"point-coloring space {count} exceeds ceiling")
        for values in product(range(y.minimum), repeat=len(y)):
            coloring = dict(zip(y.elements, values))
            if not dense_subset_exists(
                y, m - 1, extra=lambda s: len({coloring[v] for v in s}) == 1
            ):
                return False
        # (d) a bounding step for the sentence
        if not dense_subset_exists(
            y, m - 1, extra=lambda s: sentence.holds_bounded(y.minimum, s.minimum, s.maximum)
        ):
            return False
        return True

    if mode.kind == "exact":
        if params.level > 2:
            raise CeilingExceeded("exact density is capped at level 2")
        try:
            out = dense(z, params.level)
        except CeilingExceeded as err:
            return Verdict(INCONCLUSIVE, str(err))
        return Verdict(TRUE if out else FALSE, "exhaustive density recursion")
    return _sampled_dense(z, params)


def _sampled_dense(z: FinSet, params: DensityParams) -> Verdict:
    """Replace the universal quantifiers by seeded trials; a failed trial
    refutes density, success is only inconclusive."""
    statement, sentence, mode = params.statement, params.sentence, params.mode
    rng = random.Random(mode.seed)
    if params.level == 0:
        ok = check_large(z, LargenessSpec(1, 1, sentence)) is not None
        return Verdict(TRUE if ok else FALSE, "level 0 is a largeness check")
    if 2 ** len(z) > mode.subset_ceiling:
        return Verdict(INCONCLUSIVE, f"subset space 2^{len(z)} exceeds ceiling")

    def sub_dense(y: FinSet, m: int) -> Verdict:
        return is_n_dense(
            y, DensityParams(statement, sentence, m, Mode("sampled", rng.randrange(2 ** 30), max(1, mode.trials // 4)))
        )

    def any_subset(extra) -> bool:
        for sub in _subsets(z, mode.subset_ceiling):
            if extra(sub) and sub_dense(sub, params.level - 1).value != FALSE:
                return True
        return False

    tuples = list(combinations(z.elements, statement.arity))
    for _ in range(mode.trials):
        table = tuple(rng.randrange(statement.colors) for _ in tuples)
        f = ColoringTable(z, statement.arity, statement.colors, table)
        if not any_subset(lambda s: statement.solution_ok(f, s)):
            return Verdict(FALSE, "sampled statement coloring admits no dense solution")
    for _ in range(mode.trials):
        parts = rng.randrange(1, min(z.minimum, len(z)) + 1)
        cuts = sorted(rng.sample(range(1, len(z)), parts - 1)) if parts > 1 else []
        bounds = [0] + cuts + [len(z)]
        partition = [FinSet(z.elements[bounds[i]: bounds[i + 1]]) for i in range(parts)]
        if not any(sub_dense(p, params.level - 1).value != FALSE for p in partition):
            return Verdict(FALSE, "sampled partition has no dense part")
    for _ in range(mode.trials):
        coloring = {v: rng.randrange(z.minimum) for v in z.elements}
        if not any_subset(lambda s: len({coloring[v] for v in s}) == 1):
            return Verdict(FALSE, "sampled point coloring admits no dense class")
    if not any_subset(lambda s: sentence.holds_bounded(z.minimum, s.minimum, s.maximum)):
        return Verdict(FALSE, "no dense subset satisfies the bounding step")
    return Verdict(INCONCLUSIVE, f"{mode.trials} trials per item found no counterexample")


# ---------------------------------------------------------------------------
# Transitive-subset extraction pipeline
# ---------------------------------------------------------------------------

FAITHFUL_BASE = 16 ** 6 + 1


@dataclass(frozen=True)
class EmConstants:
    """Per-level block exponents and the transversal requirement.

    The faithful values ((16^6+1)^(level-1) blocks, plainly large transversal
    at exponent 6) are far beyond desk scale; scaled profiles keep the same
    pipeline shape on small instances.
    """

    block_exponents: tuple[int, ...]
    transversal: LSpec

    @classmethod
    def faithful(cls, n: int) -> "EmConstants":
        return cls(
            tuple(FAITHFUL_BASE ** (level - 1) for level in range(1, n + 1)),
            LSpec.largeness(LargenessSpec(6, 1, TOP)),
        )

    @classmethod
    def scaled(cls, n: int) -> "EmConstants":
        return cls(
            tuple(0 for _ in range(n)),
            LSpec.largeness(LargenessSpec(1, 1, TOP)),
        )

    def exponent(self, level: int) -> int:
        return self.block_exponents[level - 1]


@dataclass
class EmResult:
    status: str  # found | absent | exhausted
    stage: str = ""
    subset: Optional[FinSet] = None
    certificate: Optional[Certificate] = None
    blocks: tuple[FinSet, ...] = ()


def em_extract(
    x: FinSet,
    f: ColoringTable,
    n: int,
    sentence: Pi03Sentence,
    budget: Budget | None = None,
    constants: EmConstants | None = None,
) -> EmResult:
    """Extract a transitive subset large at exponent n under the sentence.

    Level by level: find a grouping whose blocks are large at the previous
    level's exponent, recurse inside each block for a transitive piece, and
    join the pieces along a transitive tournament over their minima found
    by homogeneous-style search.  Failures report the failing stage; every
    success is re-validated (triple scan plus certificate check).
    """
    if f.arity != 2:
        raise PreconditionError("expects a pair coloring")
    budget = budget_or_unlimited(budget)
    constants = constants if constants is not None else EmConstants.faithful(max(n, 1))
    result = _em_level(x, f, n, sentence, budget, constants)
    if result.status == FOUND:
        table = restrict_coloring(f, result.subset)
        idx = table.domain.elements
        for i in range(len(idx)):
            for j in range(i + 1, len(idx)):
                for k in range(j + 1, len(idx)):
                    assert not (
                        table(idx[i], idx[j]) == table(idx[j], idx[k]) != table(idx[i], idx[k])
                    ), "output not transitive"
        spec = LargenessSpec(n, 1, sentence)
        assert result.certificate is not None
        assert verify_certificate(result.subset, result.certificate, spec)
    return result


def _em_level(x, f, n, sentence, budget, constants) -> EmResult:
    if not x.elements:
        return EmResult(ABSENT, stage="empty input")
    if n == 0:
        single = FinSet((x.minimum,))
        cert = check_large(single, LargenessSpec(0, 1, sentence), budget=budget)
        return EmResult(FOUND, subset=single, certificate=cert)

    l0 = LSpec.largeness(LargenessSpec(constants.exponent(n), 1, sentence))
    budget.enter(f"grouping at level {n}")
    walk = GroupingWalk(x, f, l0, constants.transversal, sentence, budget)
    stage = f"grouping at level {n}"
    try:
        # the first grouping found need not admit transitive pieces with a
        # usable tournament; keep drawing groupings until one does
        for witness in walk.witnesses():
            out = _em_join(witness.blocks, f, n, sentence, budget, constants)
            if out.status == FOUND:
                return out
            stage = out.stage
    except BudgetExceeded as err:
        return EmResult(EXHAUSTED, stage=err.stage)
    if walk.ceiling_hit:
        return EmResult(EXHAUSTED, stage=stage)
    return EmResult(ABSENT, stage=stage)


def _em_join(blocks, f, n, sentence, budget, constants) -> EmResult:
    pieces: list[FinSet] = []
    for blk in blocks:
        sub = _em_level(blk, f, n - 1, sentence, budget, constants)
        if sub.status != FOUND:
            return EmResult(sub.status, stage=f"recursion into a block at level {n}")
        pieces.append(sub.subset)

    minima = FinSet(tuple(p.minimum for p in pieces))
    reps = {p.minimum: p for p in pieces}
    # blocks are cross-monochromatic, so minima stand in for whole pieces
    tournament = ColoringTable.from_function(minima, 2, 2, f)
    budget.enter(f"representative selection at level {n}")
    sel = find_transitive(minima, tournament, LargenessSpec(1, 1, TOP), budget)
    if sel.status != FOUND:
        return EmResult(sel.status, stage=f"representative selection at level {n}")

    chosen = [reps[v] for v in sel.subset]
    union = FinSet(tuple(v for p in chosen for v in p))
    cert = check_large(union, LargenessSpec(n, 1, sentence), budget=budget)
    if cert is None:
        return EmResult(ABSENT, stage=f"final certification at level {n}")
    return EmResult(FOUND, subset=union, certificate=cert, blocks=tuple(pieces))


# ---------------------------------------------------------------------------
# Interval-length coloring for transitive instances
# ---------------------------------------------------------------------------

DROP_MAX = "drop_max"
DROP_MIN = "drop_min"


class QTotalityError(ValueError):
    pass


def _is_transitive(x: FinSet, f: ColoringTable) -> bool:
    e = x.elements
    for i in range(len(e)):
        for j in range(i + 1, len(e)):
            for k in range(j + 1, len(e)):
                if f(e[i], e[j]) == f(e[j], e[k]) != f(e[i], e[k]):
                    return False
    return True


def ads_q_coloring(
    x: FinSet,
    f: ColoringTable,
    n: int,
    sentence: Pi03Sentence,
    successor: str = DROP_MAX,
    budget: Budget | None = None,
) -> ColoringTable:
    """Recolor pairs of a transitive instance by how long a homogeneous,
    tail-apart stretch fits inside the interval they span.

    A pair (v, w) gets 4k + 2*color (+1 when the stretch extends one step
    past exponent k).  The one-step-past notion is read as "still large at
    exponent k after dropping the maximum" by default; `successor` switches
    to dropping the minimum.  Pairs with no applicable case raise
    QTotalityError.
    """
    if f.arity != 2:
        raise PreconditionError("expects a pair coloring")
    if successor not in (DROP_MAX, DROP_MIN):
        raise ValueError(f"unknown successor reading {successor!r}")
    if not _is_transitive(x, f):
        raise PreconditionError("coloring is not transitive on the set")
    budget = budget_or_unlimited(budget)
    budget.enter("interval recoloring")

    def q(v: int, w: int) -> int:
        i = f(v, w)
        best = None
        for k in range(n + 1):
            if interval_long(x, f, sentence, v, w, i, k, budget=budget):
                best = k
            else:
                break
        if best is None:
            raise QTotalityError(
                f"pair ({v}, {w}) spans no homogeneous tail-apart stretch at all"
            )
        if best >= n:
            raise QTotalityError(
                f"pair ({v}, {w}) is long at exponent {n}; no case applies"
            )
        extra = (
            1
            if interval_long(x, f, sentence, v, w, i, best, succ=True, successor=successor, budget=budget)
            else 0
        )
        return 4 * best + 2 * i + extra

    return ColoringTable.from_function(x, 2, 4 * n, q)


def interval_long(
    x: FinSet,
    f: ColoringTable,
    sentence: Pi03Sentence,
    v: int,
    w: int,
    i: int,
    k: int,
    succ: bool = False,
    successor: str = DROP_MAX,
    budget: Budget | None = None,
) -> bool:
    """Does [v, w) hold a stretch through v, homogeneous with w in color i,
    apart from the tail from w on, and large at exponent k (one element
    past it when `succ`)?"""
    budget = budget_or_unlimited(budget)
    if f(v, w) != i:
        return False
    candidates = tuple(u for u in x.elements if v <= u < w and (u == v or f(u, w) == i))
    if not candidates or candidates[0] != v:
        return False
    # the stretch must be apart from the tail [w, max]; that constraint
    # depends only on the stretch maximum and only gets harder upward
    limit = None
    for u in reversed(candidates):
        if sentence.holds_bounded(u, w, x.maximum):
            limit = u
            break
    if limit is None:
        return False
    pool = FinSet(tuple(u for u in candidates if u <= limit))

    accept = None
    if succ:
        chop = (lambda c: c[:-1]) if successor == DROP_MAX else (lambda c: c[1:])

        def accept(chosen: tuple[int, ...]):
            if len(chosen) < 2:
                return None
            return check_large(FinSet(chop(chosen)), LargenessSpec(k, 1, sentence), budget=budget)

    out = find_homogeneous(
        pool,
        f,
        LargenessSpec(k, 1, sentence),
        budget=budget,
        color=i,
        anchor=v,
        accept=accept,
    )
    return out.status == FOUND


def ads_extract(
    x: FinSet,
    f: ColoringTable,
    n: int,
    sentence: Pi03Sentence,
    budget: Budget | None = None,
) -> SearchOutcome:
    """Homogeneous large subset of a transitive instance (direct search)."""
    if not _is_transitive(x, f):
        raise PreconditionError("coloring is not transitive on the set")
    return find_homogeneous(x, f, LargenessSpec(n, 1, sentence), budget=budget)


# ---------------------------------------------------------------------------
# Explicit bound table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundsRow:
    n: int
    pigeonhole: int
    grouping_chain: tuple[int, int, int, int]
    em: int
    ads: int
    rt22: int
    lower: int


def bounds_table(n_max: int, k: int = 2) -> list[BoundsRow]:
    """Exact integer bound table, one row per exponent up to n_max."""
    rows = []
    for n in range(n_max + 1):
        rows.append(
            BoundsRow(
                n=n,
                pigeonhole=2 * n,
                grouping_chain=(2 * n, 4 * n + 1, 16 * n + 5, 16 ** k * (n + 1)),
                em=FAITHFUL_BASE ** n,
                ads=4 * n + 4,
                rt22=FAITHFUL_BASE ** (4 * n + 4),
                lower=max(0, 2 * n - 1),
            )
        )
    return rows


BOUNDS_TSV_HEADER = (
    "n\tpigeonhole\tgrouping1\tgrouping2\tgrouping3\tgrouping4\tem\tads\trt22\tlower"
)


def bounds_tsv(rows: list[BoundsRow]) -> str:
    lines = [BOUNDS_TSV_HEADER]
    for r in rows:
        chain = "\t".join(str(v) for v in r.grouping_chain)
        lines.append(
            f"{r.n}\t{r.pigeonhole}\t{chain}\t{r.em}\t{r.ads}\t{r.rt22}\t{r.lower}"
        )
    return "\n".join(lines) + "\n"
