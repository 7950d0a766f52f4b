"""Canonical sequences of baskets via Farey-neighbor unpacking.

The admissible fraction sets are

    S(0) = {1/k : k >= 2},   S(5) = S(0) + {2/5},
    S(n) = S(n-1) + {b/n in lowest terms, 0 < b < n/2}   for n >= 6,

each dividing (0, 1/2] into intervals whose endpoints q_i/p_i, q_{i+1}/p_{i+1}
satisfy q_i*p_{i+1} - p_i*q_{i+1} = 1.  Unpacking an entry (b, r) whose
fraction b/r is not admissible at level n splits it along the bracketing
division points:

    (r*q_l - b*p_l) copies of (q_{l+1}, p_{l+1})
    (-r*q_{l+1} + b*p_{l+1}) copies of (q_l, p_l)

Unimodularity makes this preserve sigma and sum(r) on the nose.  Applying
it entrywise defines the level-n approximation of a basket; levels 0, 5,
6, ... form a descending chain under the packing order that stabilizes at
the basket itself, and the number of prime packings consumed between
consecutive levels is epsilon_n = Delta^n(level n-1) - Delta^n(B).

Levels 1-4 are not part of the construction and are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import Basket, OrbifoldPair, delta_n

__all__ = [
    "FractionLevelSet",
    "in_level_set",
    "farey_neighbors",
    "unpack",
    "epsilon_n",
    "CanonicalSequence",
    "canonical_sequence",
    "Infeasible",
    "b0_from_plurigenera",
    "b5_from_plurigenera",
    "epsilon5_from_plurigenera",
    "epsilon6_residual",
    "epsilon7_from_plurigenera",
    "epsilon8_from_plurigenera",
]


def _check_level(level: int) -> None:
    if level != 0 and level < 5:
        raise ValueError(f"levels 1-4 are not defined (got {level})")


def in_level_set(frac: Fraction, level: int) -> bool:
    """Membership of a fraction in (0, 1/2] in S(level)."""
    _check_level(level)
    if not 0 < frac <= Fraction(1, 2):
        raise ValueError(f"fraction {frac} outside (0, 1/2]")
    return frac.numerator == 1 or frac.denominator <= level


@dataclass(frozen=True)
class FractionLevelSet:
    """The admissible set S(level) as a queryable object.

    Membership and neighbor queries are answered on demand; the set is
    never materialized (it contains every unit fraction).
    """

    level: int

    def __post_init__(self) -> None:
        _check_level(self.level)

    def __contains__(self, frac: Fraction) -> bool:
        return in_level_set(frac, self.level)

    def neighbors(self, frac: Fraction) -> tuple[Fraction, Fraction]:
        return farey_neighbors(frac, self.level)


@lru_cache(maxsize=None)
def farey_neighbors(frac: Fraction, level: int) -> tuple[Fraction, Fraction]:
    """Adjacent division points (upper, lower) of S(level) around ``frac``.

    Precondition: ``frac`` is in (0, 1/2] but not in S(level).  The result
    satisfies lower < frac < upper with the unimodularity relation
    upper.n * lower.d - upper.d * lower.n = 1.
    """
    _check_level(level)
    if not 0 < frac <= Fraction(1, 2):
        raise ValueError(f"fraction {frac} outside (0, 1/2]")
    if in_level_set(frac, level):
        raise ValueError(f"{frac} already lies in S({level})")
    q, p = frac.numerator, frac.denominator
    k = p // q  # 1/(k+1) < frac < 1/k; k >= 2 because frac < 1/2 here
    upper, lower = Fraction(1, k), Fraction(1, k + 1)
    if level == 0 or k >= level:
        # no admissible fraction with denominator <= level fits strictly
        # between consecutive unit fractions below 1/level
        return upper, lower
    # mediant (Stern-Brocot) descent: refine within the unit-fraction
    # bracket while the mediant still has admissible denominator
    while True:
        med = Fraction(upper.numerator + lower.numerator, upper.denominator + lower.denominator)
        if med.denominator > level:
            break
        if med < frac:
            lower = med
        else:
            upper = med
    assert upper.numerator * lower.denominator - upper.denominator * lower.numerator == 1
    return upper, lower


@lru_cache(maxsize=None)
def _unpack_entry(b: int, r: int, level: int) -> tuple[tuple[int, int, int], ...]:
    frac = Fraction(b, r)
    if in_level_set(frac, level):
        return ((b, r, 1),)
    upper, lower = farey_neighbors(frac, level)
    ql, pl = upper.numerator, upper.denominator
    qn, pn = lower.numerator, lower.denominator
    m_low = r * ql - b * pl     # copies of the lower point (qn, pn)
    m_high = -r * qn + b * pn   # copies of the upper point (ql, pl)
    assert m_low >= 1 and m_high >= 1
    assert m_low * qn + m_high * ql == b and m_low * pn + m_high * pl == r
    return ((qn, pn, m_low), (ql, pl, m_high))


def unpack(basket: Basket, level: int) -> Basket:
    """The level-n approximation: entrywise Farey unpacking (idempotent)."""
    _check_level(level)
    entries: list[OrbifoldPair] = []
    for pair in basket:
        for b, r, mult in _unpack_entry(pair.b, pair.r, level):
            entries.extend([OrbifoldPair.of(b, r)] * mult)
    return Basket(entries)


def epsilon_n(basket: Basket, n: int) -> int:
    """Number of prime packings in the chain step from level n-1 to level n.

    The chain jumps from level 0 straight to level 5, so the predecessor
    of level 5 is level 0.  Always a non-negative integer; anything else
    indicates a broken invariant and is asserted away.
    """
    if n < 5:
        raise ValueError(f"epsilon_n needs n >= 5, got {n}")
    prev = 0 if n == 5 else n - 1
    value = delta_n(unpack(basket, prev), n) - delta_n(basket, n)
    assert value.denominator == 1 and value >= 0, f"epsilon_{n} = {value}"
    return int(value)


@dataclass(frozen=True)
class CanonicalSequence:
    """The chain of level approximations of a basket, with packing counts."""

    base: Basket
    levels: tuple[tuple[int, Basket, int], ...]  # (n, level-n basket, epsilon_n)
    stabilization_level: int


def _stabilization_level(basket: Basket) -> int:
    # B equals its own level-n approximation for every n >= r_max, so this
    # terminates
    if unpack(basket, 0) == basket:
        return 0
    n = 5
    while unpack(basket, n) != basket:
        n += 1
    return n


def canonical_sequence(basket: Basket, upto: int | None = None) -> CanonicalSequence:
    """Levels 0, 5, 6, ... up to stabilization (or ``upto``, if given)."""
    stabilization = _stabilization_level(basket)
    stop = upto if upto is not None else max(stabilization, 5)
    levels: list[tuple[int, Basket, int]] = [(0, unpack(basket, 0), 0)]
    for n in range(5, max(stop, 5) + 1):
        levels.append((n, unpack(basket, n), epsilon_n(basket, n)))
    return CanonicalSequence(base=basket, levels=tuple(levels), stabilization_level=stabilization)


# ---------------------------------------------------------------------------
# level-0 / level-5 baskets from anti-plurigenera
#
# With p_m short for P_{-m} and sigma5 = sum of the prescribed multiplicities
# n0[1,r] for r >= 5, the level-0 basket has
#
#   n0[1,2] = 5 - 6 p1 + 4 p2 - p3
#   n0[1,3] = 4 - 2 p1 - 2 p2 + 3 p3 - p4
#   n0[1,4] = 1 + 3 p1 - p2 - 2 p3 + p4 - sigma5
#
# and the level-5 basket has
#
#   n5[1,2] = 3 - 6 p1 + 3 p2 - p3 + 2 p4 - p5 + sigma5
#   n5[2,5] = 2 + p2 - 2 p4 + p5 - sigma5          (= epsilon_5)
#   n5[1,3] = 2 - 2 p1 - 3 p2 + 3 p3 + p4 - p5 + sigma5
#   n5[1,4] = n0[1,4]
#   n5[1,r] = n0[1,r] for r >= 5.
#
# A negative multiplicity means the plurigenus tuple is infeasible; that is
# data for the classifier, not an error.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Infeasible:
    """Named witness of an impossible plurigenus tuple."""

    coefficient: str
    value: int

    def __bool__(self) -> bool:
        return False


def _tail_entries(tail: dict[int, int]) -> list[OrbifoldPair]:
    entries: list[OrbifoldPair] = []
    for r in sorted(tail):
        if r < 5:
            raise ValueError(f"tail indices start at r = 5, got {r}")
        if tail[r] < 0:
            raise ValueError(f"tail multiplicity for r = {r} is negative")
        entries.extend([OrbifoldPair.of(1, r)] * tail[r])
    return entries


def b0_from_plurigenera(
    p1: int, p2: int, p3: int, p4: int, tail: dict[int, int] | None = None
) -> Basket | Infeasible:
    """The level-0 basket determined by P_{-1}..P_{-4} and the r >= 5 tail."""
    tail = tail or {}
    sigma5 = sum(tail.values())
    n12 = 5 - 6 * p1 + 4 * p2 - p3
    n13 = 4 - 2 * p1 - 2 * p2 + 3 * p3 - p4
    n14 = 1 + 3 * p1 - p2 - 2 * p3 + p4 - sigma5
    for name, value in (("n0[1,2]", n12), ("n0[1,3]", n13), ("n0[1,4]", n14)):
        if value < 0:
            return Infeasible(coefficient=name, value=value)
    entries = (
        [OrbifoldPair.of(1, 2)] * n12
        + [OrbifoldPair.of(1, 3)] * n13
        + [OrbifoldPair.of(1, 4)] * n14
        + _tail_entries(tail)
    )
    return Basket(entries)


def b5_from_plurigenera(
    p1: int, p2: int, p3: int, p4: int, p5: int, tail: dict[int, int] | None = None
) -> Basket | Infeasible:
    """The level-5 basket determined by P_{-1}..P_{-5} and the r >= 5 tail."""
    tail = tail or {}
    sigma5 = sum(tail.values())
    n12 = 3 - 6 * p1 + 3 * p2 - p3 + 2 * p4 - p5 + sigma5
    n25 = 2 + p2 - 2 * p4 + p5 - sigma5
    n13 = 2 - 2 * p1 - 3 * p2 + 3 * p3 + p4 - p5 + sigma5
    n14 = 1 + 3 * p1 - p2 - 2 * p3 + p4 - sigma5
    for name, value in (
        ("n5[1,2]", n12), ("n5[2,5]", n25), ("n5[1,3]", n13), ("n5[1,4]", n14),
    ):
        if value < 0:
            return Infeasible(coefficient=name, value=value)
    entries = (
        [OrbifoldPair.of(1, 2)] * n12
        + [OrbifoldPair.of(1, 3)] * n13
        + [OrbifoldPair.of(1, 4)] * n14
        + [OrbifoldPair.of(2, 5)] * n25
        + _tail_entries(tail)
    )
    return Basket(entries)


def epsilon5_from_plurigenera(p2: int, p4: int, p5: int, sigma5: int) -> int:
    return 2 + p2 - 2 * p4 + p5 - sigma5


def epsilon6_residual(
    p1: int, p2: int, p3: int, p4: int, p5: int, p6: int, tail: dict[int, int] | None = None
) -> tuple[int, int]:
    """(epsilon_6, epsilon) for the tuple; feasible iff epsilon_6 = 0 and epsilon >= 0.

    epsilon = 2*sigma5 - n0[1,5] is automatically >= 0 when the tail is a
    genuine multiplicity table, but the identity linking P_{-6} to the tail
    is a real constraint: epsilon_6 = 3p1 + p2 - p3 - p4 - p5 + p6 - epsilon
    must vanish.
    """
    tail = tail or {}
    sigma5 = sum(tail.values())
    eps = 2 * sigma5 - tail.get(5, 0)
    eps6 = 3 * p1 + p2 - p3 - p4 - p5 + p6 - eps
    return eps6, eps


def epsilon7_from_plurigenera(
    p1: int, p2: int, p5: int, p6: int, p7: int, tail: dict[int, int] | None = None
) -> int:
    tail = tail or {}
    sigma5 = sum(tail.values())
    return (
        1 + p1 + p2 - p5 - p6 + p7
        - 2 * sigma5 + 2 * tail.get(5, 0) + tail.get(6, 0)
    )


def epsilon8_from_plurigenera(
    p1: int, p2: int, p3: int, p4: int, p5: int, p7: int, p8: int,
    tail: dict[int, int] | None = None,
) -> int:
    tail = tail or {}
    sigma5 = sum(tail.values())
    return (
        2 * p1 + p2 + p3 - p4 - p5 - p7 + p8
        - 3 * sigma5 + 3 * tail.get(5, 0) + 2 * tail.get(6, 0) + tail.get(7, 0)
    )
