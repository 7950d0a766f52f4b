"""The packing partial order on baskets.

A single *packing* replaces two entries (b1, r1), (b2, r2) by their sum
(b1+b2, r1+r2); it is *prime* when |b1*r2 - b2*r1| = 1.  Compositions of
packings generate the domination order ``B >= B'``.  Along any packing

    sigma stays fixed, sigma' / Delta^n / gamma never increase,
    -K^3 and P_{-m} (m >= 2) never decrease,

which is what makes breadth-first closure search with monotone pruning
sound: a clause like ``gamma >= c`` that fails now fails forever, and
``-K^3 <= c`` that fails now fails forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .core import (
    Basket,
    OrbifoldPair,
    WeightedBasket,
    anti_volume,
    gamma,
    plurigenus,
    r_max,
    sigma,
    sigma_prime,
)

__all__ = [
    "PackingStep",
    "packing_step",
    "merge_pairs",
    "is_prime_packing",
    "pack_once",
    "single_packings",
    "ClosureLimits",
    "ClosureResult",
    "ClosureTruncated",
    "closure",
    "dominates",
    "gamma_at_least",
    "volume_at_most",
    "plurigenus_at_most",
    "all_of",
    "coprime_only",
]

Predicate = Callable[[Basket], bool]


@dataclass(frozen=True)
class PackingStep:
    """A single merge, with the primality certificate."""

    left: OrbifoldPair
    right: OrbifoldPair
    result: OrbifoldPair
    prime: bool


def merge_pairs(p: OrbifoldPair, q: OrbifoldPair) -> OrbifoldPair:
    # 2(b1+b2) <= r1+r2 holds automatically, so the merge is always legal
    return OrbifoldPair.of(p.b + q.b, p.r + q.r)


def is_prime_packing(p: OrbifoldPair, q: OrbifoldPair) -> bool:
    """True iff |b1*r2 - b2*r1| = 1 (a unimodular, "Farey-neighbor" merge)."""
    return abs(p.b * q.r - q.b * p.r) == 1


def packing_step(p: OrbifoldPair, q: OrbifoldPair) -> PackingStep:
    return PackingStep(left=p, right=q, result=merge_pairs(p, q), prime=is_prime_packing(p, q))


def pack_once(basket: Basket, i: int, j: int) -> Basket:
    """Merge the entries at multiset positions i and j (canonical order).

    The same pair type may be merged with itself when its multiplicity
    is >= 2, by giving two distinct positions.
    """
    n = len(basket)
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"pack_once needs two distinct positions in 0..{n - 1}")
    entries = list(basket.entries)
    i, j = min(i, j), max(i, j)
    q = entries.pop(j)
    p = entries.pop(i)
    entries.append(merge_pairs(p, q))
    return Basket(entries)


def single_packings(basket: Basket) -> list[Basket]:
    """All distinct results of one packing step, deduplicated."""
    out = set()
    counts = basket.counts()
    for a in range(len(counts)):
        pa, ka = counts[a]
        rest = list(basket.entries)
        rest.remove(pa)
        if ka >= 2:
            both = list(rest)
            both.remove(pa)
            out.add(Basket(both + [merge_pairs(pa, pa)]))
        for bidx in range(a + 1, len(counts)):
            pb, _ = counts[bidx]
            two = list(rest)
            two.remove(pb)
            out.add(Basket(two + [merge_pairs(pa, pb)]))
    return sorted(out)


# ---------------------------------------------------------------------------
# closure search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosureLimits:
    # all the classification closures are far smaller than this; a hard stop
    # with an explicit report beats an unbounded search
    max_visited: int = 10 ** 6


@dataclass(frozen=True)
class ClosureResult:
    baskets: tuple[Basket, ...]
    visited: int
    truncated: bool

    def require_complete(self) -> "ClosureResult":
        if self.truncated:
            raise ClosureTruncated(
                f"closure truncated after visiting {self.visited} baskets"
            )
        return self


class ClosureTruncated(RuntimeError):
    """The visited-state budget ran out; the answer would be partial."""


def closure(
    basket: Basket,
    prune: Predicate | None = None,
    emit: Predicate | None = None,
    limits: ClosureLimits = ClosureLimits(),
) -> ClosureResult:
    """All packings of ``basket`` (itself included) passing the filters.

    ``prune`` must be downward-closed along packing (helpers below build
    safe clauses); a basket failing it is cut together with its whole
    subtree.  ``emit`` is applied only at output and may be arbitrary.
    The result is deduplicated by canonical form and canonically sorted,
    so any traversal order yields the same answer.
    """
    if prune is not None and not prune(basket):
        return ClosureResult(baskets=(), visited=0, truncated=False)
    seen = {basket}
    frontier = [basket]
    truncated = False
    while frontier:
        nxt: list[Basket] = []
        for current in frontier:
            for child in single_packings(current):
                if child in seen:
                    continue
                if len(seen) >= limits.max_visited:
                    truncated = True
                    nxt = []
                    break
                if prune is not None and not prune(child):
                    continue
                seen.add(child)
                nxt.append(child)
            if truncated:
                break
        frontier = nxt
    kept = sorted(b for b in seen if emit is None or emit(b))
    return ClosureResult(baskets=tuple(kept), visited=len(seen), truncated=truncated)


def dominates(basket: Basket, other: Basket) -> bool:
    """True iff ``other`` is reachable from ``basket`` by finitely many packings."""
    if basket == other:
        return True
    # fast rejects: packing preserves sigma and sum(r), shortens the basket,
    # and never increases sigma'
    if sigma(basket) != sigma(other):
        return False
    if sum(p.r for p in basket) != sum(p.r for p in other):
        return False
    if len(basket) <= len(other):
        return False
    if sigma_prime(basket) < sigma_prime(other):
        return False
    target_len = len(other)
    sp_target = sigma_prime(other)
    seen = {basket}
    frontier = [basket]
    while frontier:
        nxt = []
        for current in frontier:
            for child in single_packings(current):
                if child in seen:
                    continue
                if child == other:
                    return True
                if len(child) <= target_len:
                    continue
                if sigma_prime(child) < sp_target:
                    continue
                seen.add(child)
                nxt.append(child)
        frontier = nxt
    return False


# -- prune / emission clause helpers ----------------------------------------

def gamma_at_least(bound: Fraction | int) -> Predicate:
    """Prune-safe: gamma never increases along packing."""
    bound = Fraction(bound)
    return lambda basket: gamma(basket) >= bound


def volume_at_most(bound: Fraction | int, p1: int, strict: bool = False) -> Predicate:
    """Prune-safe: -K^3 never decreases along packing (p1 fixed)."""
    bound = Fraction(bound)
    if strict:
        return lambda basket: anti_volume(WeightedBasket(basket, p1)) < bound
    return lambda basket: anti_volume(WeightedBasket(basket, p1)) <= bound


def plurigenus_at_most(m: int, bound: int, p1: int) -> Predicate:
    """Prune-safe for m >= 2: P_{-m} never decreases along packing."""
    return lambda basket: plurigenus(WeightedBasket(basket, p1), m) <= bound


def all_of(*predicates: Predicate) -> Predicate:
    return lambda basket: all(p(basket) for p in predicates)


def coprime_only(basket: Basket) -> bool:
    return basket.all_terminal
