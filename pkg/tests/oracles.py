"""Independent brute-force oracles used by the test suite.

Everything here re-derives answers straight from the definitions, sharing
no search logic with the package: largeness by enumerating block
decompositions over all subsets, formulas by ground substitution.
"""

from __future__ import annotations

import random
from itertools import combinations

from omegalarge import formula as fm

# ---------------------------------------------------------------------------
# Plain largeness by exhaustive decomposition enumeration (bitmask form)
# ---------------------------------------------------------------------------


class BruteForcePlain:
    """Decides largeness with no apartness constraint over one universe.

    Blocks are enumerated as arbitrary subsets (bitmasks over the universe).
    The only shortcuts are single unfoldings of the definition itself:
    a set is large at exponent 1 iff it has at least min+1 elements, and
    k blocks at exponent 0 exist iff the pool has at least k elements.
    """

    def __init__(self, universe: tuple[int, ...]):
        self.universe = universe
        self._single: dict[tuple[int, int], bool] = {}
        self._multi: dict[tuple[int, int, int], bool] = {}

    def _low_value(self, mask: int) -> int:
        return self.universe[(mask & -mask).bit_length() - 1]

    def _above_msb(self, mask: int, full: int) -> int:
        return full & ~((1 << mask.bit_length()) - 1)

    def single(self, mask: int, n: int) -> bool:
        if mask == 0:
            return False
        if n == 0:
            return True
        if n == 1:
            return mask.bit_count() >= self._low_value(mask) + 1
        key = (mask, n)
        hit = self._single.get(key)
        if hit is None:
            low = self._low_value(mask)
            hit = self.multi(mask & (mask - 1), n - 1, low)
            self._single[key] = hit
        return hit

    def multi(self, mask: int, n: int, k: int) -> bool:
        if k == 0:
            return True
        if n == 0:
            return mask.bit_count() >= k
        key = (mask, n, k)
        hit = self._multi.get(key)
        if hit is not None:
            return hit
        hit = False
        sub = mask
        while sub:
            if self.single(sub, n) and self.multi(self._above_msb(sub, mask), n, k - 1):
                hit = True
                break
            sub = (sub - 1) & mask
        self._multi[key] = hit
        return hit

    def mask_of(self, values) -> int:
        pos = {v: i for i, v in enumerate(self.universe)}
        m = 0
        for v in values:
            m |= 1 << pos[v]
        return m

    def is_large(self, values, n: int, k: int) -> bool:
        return self.multi(self.mask_of(values), n, k)


# ---------------------------------------------------------------------------
# Largeness under an apartness sentence, tiny sets only
# ---------------------------------------------------------------------------


def _apart_literal(left: tuple[int, ...], right: tuple[int, ...], sentence) -> bool:
    # forall v < max(left) exists w < min(right) forall u < max(right) theta
    for v in range(left[-1]):
        if not any(
            all(sentence.theta_at(v, w, u) for u in range(right[-1]))
            for w in range(right[0])
        ):
            return False
    return True


def bf_large_t(values: tuple[int, ...], n: int, k: int, sentence) -> bool:
    """Exhaustive over all block families with all-pairs apartness."""

    def single(vals: tuple[int, ...], n: int) -> bool:
        if not vals:
            return False
        if n == 0:
            return True
        return multi(vals[1:], n - 1, vals[0])

    def multi(pool: tuple[int, ...], n: int, k: int) -> bool:
        def rec(pool: tuple[int, ...], chosen: list[tuple[int, ...]]) -> bool:
            if len(chosen) == k:
                return all(
                    _apart_literal(chosen[i], chosen[j], sentence)
                    for i in range(k)
                    for j in range(i + 1, k)
                )
            for size in range(1, len(pool) + 1):
                for block in combinations(pool, size):
                    if not single(block, n):
                        continue
                    rest = tuple(v for v in pool if v > block[-1])
                    chosen.append(block)
                    if rec(rest, chosen):
                        chosen.pop()
                        return True
                    chosen.pop()
            return False

        if k == 0:
            return True
        return rec(pool, [])

    return multi(values, n, k)


# ---------------------------------------------------------------------------
# Decomposition enumeration (for uniqueness checks on minimal sets)
# ---------------------------------------------------------------------------


def _min_card_chain(v: int, n: int, cap: int) -> int:
    if n == 0:
        return 1
    total = 1
    nxt = v + 1
    for _ in range(v):
        c = _min_card_chain(nxt, n - 1, cap)
        total += c
        nxt += c
        if total > cap:
            return cap + 1
    return total


def plain_decompositions(values: tuple[int, ...], n: int, limit: int = 16):
    """All decompositions of `values` at exponent n: families of at least
    min-many blocks large at exponent n-1, drawn from values minus min.

    Blocks are arbitrary subsets, grown element by element; branches are cut
    only when even the cheapest completion of the family cannot fit in the
    remaining elements (a count argument straight from the definition).
    """
    assert n >= 1
    head, pool = values[0], values[1:]
    found: list[tuple[tuple[int, ...], ...]] = []

    def single(vals: tuple[int, ...]) -> bool:
        if not vals:
            return False
        if n - 1 == 0:
            return True
        u = BruteForcePlain(vals)
        return u.is_large(vals, n - 1, 1)

    def chain_fits(first: int, count: int, available: int) -> bool:
        """Can `count` blocks, the first with min >= first, fit in
        `available` elements?  Uses the minimal-cardinality chain."""
        need, v = 0, first
        for _ in range(count):
            c = _min_card_chain(v, n - 1, available + 1)
            need += c
            v += c
            if need > available:
                return False
        return True

    def after(idx: int) -> int:
        return len(pool) - idx  # elements at positions >= idx

    def rec(start: int, blocks: list[tuple[int, ...]]) -> None:
        if len(found) >= limit:
            return
        if len(blocks) >= head:
            found.append(tuple(blocks))
        rest = head - len(blocks)
        if rest > 0 and (start >= len(pool) or not chain_fits(pool[start], rest, after(start))):
            return
        for s in range(start, len(pool)):
            if rest > 0 and not chain_fits(pool[s], rest, after(s)):
                break  # later starts only get worse
            grow(s, s + 1, [pool[s]], blocks)

    def grow(s: int, nxt: int, current: list[int], blocks: list[tuple[int, ...]]) -> None:
        """Extend the block starting at pool[s]; try closing, then extending."""
        if len(found) >= limit:
            return
        still = head - len(blocks) - 1
        # cheapest completion: fill the block up to its required size with
        # the next consecutive elements, then chain the remaining blocks
        required = _min_card_chain(current[0], n - 1, len(pool) + 1)
        missing = max(0, required - len(current))
        close_at = nxt + missing
        if close_at > len(pool):
            return
        if still > 0:
            if close_at >= len(pool):
                return
            if not chain_fits(pool[close_at], still, after(close_at)):
                return
        if missing == 0 and single(tuple(current)):
            blocks.append(tuple(current))
            rec(nxt, blocks)
            blocks.pop()
        for j in range(nxt, len(pool)):
            current.append(pool[j])
            grow(s, j + 1, current, blocks)
            current.pop()

    rec(0, [])
    return found


# ---------------------------------------------------------------------------
# Ground-substitution formula evaluator (independent of omegalarge.formula)
# ---------------------------------------------------------------------------


def naive_eval(phi, env: dict, a: int, bits: str) -> bool:
    """Evaluate by substituting numerals for variables, no environments."""

    def gterm(t, env):
        if isinstance(t, fm.TConst):
            return t.value
        if isinstance(t, fm.TConstA):
            return a
        if isinstance(t, fm.TVar):
            return env[t.name]
        if isinstance(t, fm.TAdd):
            return gterm(t.left, env) + gterm(t.right, env)
        if isinstance(t, fm.TMul):
            return gterm(t.left, env) * gterm(t.right, env)
        if isinstance(t, fm.TPow):
            return gterm(t.base, env) ** t.exponent
        raise TypeError(t)

    def go(phi, env):
        if isinstance(phi, fm.FTrue):
            return True
        if isinstance(phi, fm.FFalse):
            return False
        if isinstance(phi, fm.FCmp):
            l, r = gterm(phi.left, env), gterm(phi.right, env)
            return {"<": l < r, "=": l == r, "<=": l <= r}[phi.op]
        if isinstance(phi, fm.FIn):
            v = gterm(phi.term, env)
            return v < len(bits) and bits[v] == "1"
        if isinstance(phi, fm.FNot):
            return not go(phi.body, env)
        if isinstance(phi, fm.FAnd):
            return go(phi.left, env) and go(phi.right, env)
        if isinstance(phi, fm.FOr):
            return go(phi.left, env) or go(phi.right, env)
        if isinstance(phi, fm.FImp):
            return (not go(phi.left, env)) or go(phi.right, env)
        if isinstance(phi, fm.FQuant):
            bound = gterm(phi.bound, env)
            values = [go(phi.body, {**env, phi.var: v}) for v in range(bound)]
            return all(values) if phi.kind == "forall" else any(values)
        raise TypeError(phi)

    return go(phi, dict(env))


# ---------------------------------------------------------------------------
# Random generators (seeded by the caller)
# ---------------------------------------------------------------------------


def random_term(rng: random.Random, variables, size: int):
    if size <= 1:
        pick = rng.randrange(3)
        if pick == 0 or not variables:
            return fm.TConst(rng.randrange(0, 9))
        if pick == 1:
            return fm.TConstA()
        return fm.TVar(rng.choice(variables))
    cut = rng.randrange(1, size)
    pick = rng.randrange(3)
    if pick == 0:
        return fm.TAdd(random_term(rng, variables, cut), random_term(rng, variables, size - cut))
    if pick == 1:
        return fm.TMul(random_term(rng, variables, cut), random_term(rng, variables, size - cut))
    return fm.TPow(random_term(rng, variables, size - 1), rng.randrange(0, 3))


def random_formula(rng: random.Random, variables, size: int):
    if size <= 1:
        pick = rng.randrange(5)
        if pick == 0:
            return fm.TRUE
        if pick == 1:
            return fm.FALSE
        if pick == 2:
            return fm.FIn(random_term(rng, variables, 1))
        op = rng.choice(["<", "=", "<="])
        return fm.FCmp(op, random_term(rng, variables, 1), random_term(rng, variables, 1))
    pick = rng.randrange(6)
    if pick == 0:
        return fm.FNot(random_formula(rng, variables, size - 1))
    if pick <= 3:
        cut = rng.randrange(1, size)
        ctor = {1: fm.FAnd, 2: fm.FOr, 3: fm.FImp}[pick]
        return ctor(
            random_formula(rng, variables, cut),
            random_formula(rng, variables, size - cut),
        )
    if pick == 4:
        op = rng.choice(["<", "=", "<="])
        cut = max(1, size // 2)
        return fm.FCmp(op, random_term(rng, variables, cut), random_term(rng, variables, size - cut))
    var = f"q{rng.randrange(3)}"
    kind = rng.choice(["forall", "exists"])
    bound = random_term(rng, variables, 1)
    body = random_formula(rng, list(variables) + [var], size - 2 if size > 2 else 1)
    return fm.FQuant(kind, var, bound, body)
