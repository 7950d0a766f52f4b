"""Exact arithmetic for Reid baskets of terminal weak Q-Fano 3-folds.

A *basket* is a finite multiset of pairs (b, r) with 0 < b <= r/2, each pair
standing for a virtual cyclic quotient singularity of type 1/r(1, -1, b).
Together with the first anti-plurigenus P_{-1}, a basket determines the
anti-canonical volume -K^3 and the whole sequence of anti-plurigenera
P_{-m} through Reid's orbifold Riemann-Roch formula.

Everything here is computed in exact rational arithmetic (``fractions``);
there is deliberately no floating point anywhere in this module.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

__all__ = [
    "OrbifoldPair",
    "Basket",
    "WeightedBasket",
    "BasketSyntaxError",
    "parse_basket",
    "format_basket",
    "format_rational",
    "sigma",
    "sigma_prime",
    "delta_n",
    "gamma",
    "anti_volume",
    "plurigenus",
    "plurigenus_sequence",
    "plurigenus_closed",
    "l_term",
    "r_index",
    "r_max",
    "FilterConfig",
    "FilterResult",
    "geometric_filter",
]


@dataclass(frozen=True)
class OrbifoldPair:
    """One basket entry (b, r): a point of type 1/r(1, -1, b).

    Entries produced by packing may have gcd(b, r) > 1; such generalized
    pairs are legal lattice elements but are not terminal singularities.
    """

    b: int
    r: int

    def __post_init__(self) -> None:
        if self.b < 1:
            raise ValueError(f"pair ({self.b},{self.r}): b must be >= 1")
        if self.r < 2:
            raise ValueError(f"pair ({self.b},{self.r}): r must be >= 2")
        if 2 * self.b > self.r:
            raise ValueError(f"pair ({self.b},{self.r}): needs 2b <= r")

    @staticmethod
    def of(b: int, r: int) -> "OrbifoldPair":
        return OrbifoldPair(b, r)

    def __lt__(self, other: "OrbifoldPair") -> bool:
        # canonical entry order inside a basket is by (r, b)
        return (self.r, self.b) < (other.r, other.b)

    @property
    def terminal(self) -> bool:
        return math.gcd(self.b, self.r) == 1

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.b, self.r)

    def __str__(self) -> str:
        return f"({self.b},{self.r})"


class Basket:
    """Canonical immutable multiset of OrbifoldPairs, sorted by (r, b).

    Two baskets compare equal iff their sorted entry tuples agree, so the
    canonical form doubles as the deduplication key everywhere.  The empty
    basket is legal and corresponds to the Gorenstein (smooth) case.
    """

    __slots__ = ("entries", "_hash")

    entries: tuple[OrbifoldPair, ...]

    def __init__(self, entries: Iterable[OrbifoldPair] = ()) -> None:
        object.__setattr__(self, "entries", tuple(sorted(entries)))
        object.__setattr__(self, "_hash", hash(self.entries))

    @staticmethod
    def of(*pairs: tuple[int, int]) -> "Basket":
        """Build from (b, r) tuples: Basket.of((1, 2), (2, 5))."""
        return Basket(OrbifoldPair.of(b, r) for b, r in pairs)

    @staticmethod
    def parse(text: str) -> "Basket":
        return parse_basket(text)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Basket is immutable")

    def __reduce__(self):
        return (Basket, (self.entries,))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Basket) and self.entries == other.entries

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Basket") -> bool:
        # canonical cross-basket order, used to sort listings deterministically
        return self.sort_key() < other.sort_key()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[OrbifoldPair]:
        return iter(self.entries)

    def __str__(self) -> str:
        return format_basket(self)

    def __repr__(self) -> str:
        return f"Basket({format_basket(self)!r})"

    def sort_key(self) -> tuple:
        return tuple((p.r, p.b) for p in self.entries)

    def counts(self) -> list[tuple[OrbifoldPair, int]]:
        """Entries grouped with multiplicities, in canonical order."""
        out: list[tuple[OrbifoldPair, int]] = []
        for p in self.entries:
            if out and out[-1][0] == p:
                out[-1] = (p, out[-1][1] + 1)
            else:
                out.append((p, 1))
        return out

    @property
    def all_terminal(self) -> bool:
        return all(p.terminal for p in self.entries)


@dataclass(frozen=True)
class WeightedBasket:
    """A basket weighted by the first anti-plurigenus P_{-1} >= 0."""

    basket: Basket
    p1: int

    def __post_init__(self) -> None:
        if self.p1 < 0:
            raise ValueError("P_{-1} must be a non-negative integer")

    @property
    def volume(self) -> Fraction:
        return anti_volume(self)

    def __str__(self) -> str:
        return f"({format_basket(self.basket)}; p1={self.p1})"


# ---------------------------------------------------------------------------
# text grammar
#
#   basket := item ("," item)* | ""          ("" is the empty basket)
#   item   := [ mult "x" ] "(" int "," int ")"
#
# Whitespace is ignored around tokens; mult >= 1.  Example:
#   "2x(1,2),(2,5),(1,3)"
# ---------------------------------------------------------------------------

class BasketSyntaxError(ValueError):
    """Malformed basket text; the message names the offending token."""


_ITEM = re.compile(r"\s*(?:(\d+)\s*x\s*)?\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*")


def parse_basket(text: str) -> Basket:
    if text.strip() == "":
        return Basket()
    pairs: list[OrbifoldPair] = []
    pos = 0
    while True:
        m = _ITEM.match(text, pos)
        if m is None:
            raise BasketSyntaxError(
                f"bad basket item at {text[pos:pos + 20]!r} (expected '[Nx](b,r)')"
            )
        mult = int(m.group(1)) if m.group(1) else 1
        if mult < 1:
            raise BasketSyntaxError(f"bad multiplicity in {m.group(0).strip()!r}")
        b, r = int(m.group(2)), int(m.group(3))
        try:
            pair = OrbifoldPair.of(b, r)
        except ValueError as exc:
            raise BasketSyntaxError(str(exc)) from exc
        pairs.extend([pair] * mult)
        pos = m.end()
        if pos == len(text):
            break
        if text[pos] != ",":
            raise BasketSyntaxError(
                f"expected ',' at {text[pos:pos + 20]!r}"
            )
        pos += 1
    return Basket(pairs)


def format_basket(basket: Basket) -> str:
    items = []
    for pair, k in basket.counts():
        items.append(f"{k}x{pair}" if k > 1 else str(pair))
    return ",".join(items)


def format_rational(q: Fraction | int) -> str:
    """Serialize exactly: "p/q" in lowest terms, plain "p" for integers."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# basket invariants
# ---------------------------------------------------------------------------

def sigma(basket: Basket) -> int:
    """sigma(B) = sum of the b_i, counted with multiplicity."""
    return sum(p.b for p in basket)


def sigma_prime(basket: Basket) -> Fraction:
    """sigma'(B) = sum of b_i^2 / r_i."""
    return sum((Fraction(p.b * p.b, p.r) for p in basket), Fraction(0))


@lru_cache(maxsize=None)
def _delta_entry(b: int, r: int, n: int) -> Fraction:
    # Orbifold correction of one pair at level n.  The first summand reduces
    # b*n modulo r; the second deliberately uses the unreduced product b*n,
    # so it can go negative.  This reading is pinned down by the identities
    # Delta^3 = n_{1,2} and Delta^4 = 2 n_{1,2} + n_{1,3} on unpacked baskets.
    s = (b * n) % r
    num = s * (r - s) - b * n * (r - b * n)
    return Fraction(num, 2 * r)


def delta_n(basket: Basket, n: int) -> Fraction:
    """The correction term Delta^n(B) of the plurigenus recursion, n >= 2."""
    if n < 2:
        raise ValueError(f"delta_n needs n >= 2, got {n}")
    return sum((_delta_entry(p.b, p.r, n) for p in basket), Fraction(0))


def gamma(basket: Basket) -> Fraction:
    """gamma(B) = sum 1/r_i - sum r_i + 24.

    Geometric baskets satisfy gamma >= 0 (the Kollar-Miyaoka-Mori-Takagi
    positivity constraint), which bounds both the number of entries and
    every local index.
    """
    total = Fraction(24)
    for p in basket:
        total += Fraction(1, p.r) - p.r
    return total


def anti_volume(wb: WeightedBasket) -> Fraction:
    """The anti-canonical volume -K^3 = 2*P_{-1} + sigma - sigma' - 6."""
    return 2 * wb.p1 + sigma(wb.basket) - sigma_prime(wb.basket) - 6


def r_index(basket: Basket) -> int:
    """Gorenstein index r_X = lcm of the local indices (1 for the empty basket)."""
    return math.lcm(*(p.r for p in basket)) if len(basket) else 1


def r_max(basket: Basket) -> int:
    if not len(basket):
        raise ValueError("r_max is undefined on the empty basket")
    return max(p.r for p in basket)


# ---------------------------------------------------------------------------
# anti-plurigenera
#
# Recursion:   P_{-(m+1)} - P_{-m}
#                = (m+1)^2/2 * (-K^3 + sigma') + 2 - (m+1)/2 * sigma
#                  - Delta^{m+1}(B)
# seeded at P_{-1} = p1.  Note -K^3 + sigma' = 2*p1 + sigma - 6.
#
# Closed form (Reid Riemann-Roch):
#   P_{-n} = n(n+1)(2n+1)/12 * (-K^3) + (2n+1) - l(-n)
# with the orbifold term l(-n) below.  The two routes agree identically;
# they are kept separate on purpose as mutual oracles.
# ---------------------------------------------------------------------------

def plurigenus(wb: WeightedBasket, m: int) -> Fraction:
    """P_{-m} by the recursion, as an exact Fraction.

    Integrality (``.denominator == 1``) is a filter signal, not an
    exception: callers that screen for geometric baskets test it, along
    with non-negativity, which is the condition that actually fails on
    non-geometric seeds (the increments themselves are always integral
    for an integer P_{-1}).
    """
    if m < 1:
        raise ValueError(f"plurigenus needs m >= 1, got {m}")
    return plurigenus_sequence(wb, m)[m]


def plurigenus_sequence(wb: WeightedBasket, upto: int) -> list[Fraction]:
    """[unused, P_{-1}, ..., P_{-upto}] computed in one sweep (index = m)."""
    if upto < 1:
        raise ValueError(f"plurigenus_sequence needs upto >= 1, got {upto}")
    sig = sigma(wb.basket)
    vol_plus_sp = Fraction(2 * wb.p1 + sig - 6)  # -K^3 + sigma'
    seq: list[Fraction] = [Fraction(0), Fraction(wb.p1)]
    for m1 in range(2, upto + 1):
        step = (
            Fraction(m1 * m1, 2) * vol_plus_sp
            + 2
            - Fraction(m1, 2) * sig
            - delta_n(wb.basket, m1)
        )
        seq.append(seq[-1] + step)
    return seq


@lru_cache(maxsize=None)
def _l_entry(b: int, r: int, n: int) -> Fraction:
    # sum_{j<=n} of the reduced-residue parabola for one pair, over 2r once
    total = 0
    for j in range(1, n + 1):
        s = (j * b) % r
        total += s * (r - s)
    return Fraction(total, 2 * r)


def l_term(basket: Basket, n: int) -> Fraction:
    """l(-n) = sum_i sum_{j=1..n} jb_i~(r_i - jb_i~)/(2 r_i), residues mod r_i."""
    if n < 1:
        raise ValueError(f"l_term needs n >= 1, got {n}")
    return sum((_l_entry(p.b, p.r, n) for p in basket), Fraction(0))


def plurigenus_closed(basket: Basket, k3: Fraction, n: int) -> Fraction:
    """P_{-n} by the Riemann-Roch closed form, given the volume -K^3."""
    if n < 1:
        raise ValueError(f"plurigenus_closed needs n >= 1, got {n}")
    return Fraction(n * (n + 1) * (2 * n + 1), 12) * k3 + (2 * n + 1) - l_term(basket, n)


# ---------------------------------------------------------------------------
# geometric filter
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FilterConfig:
    """Which geometric constraints to test, each individually toggleable.

    The default set is the one that the classification arguments actually
    invoke: positivity of the volume, the known lower bound -K^3 >= 1/330,
    gamma >= 0 with its consequence r_max <= 24, the Gorenstein index
    restriction (r_X <= 660 or r_X = 840 with r_max = 8), integrality and
    non-negativity of every P_{-m} up to the horizon, P_{-m} > 0 for
    m >= 6, P_{-8} >= 2, the sigma identity sigma = 10 - 5 P_{-1} + P_{-2},
    and superadditivity P_{-m-n} >= P_{-m} + P_{-n} - 1.
    """

    volume_positive: bool = True
    min_volume: bool = True
    gamma_nonneg: bool = True
    rmax_le_24: bool = True
    index_bound: bool = True
    integrality: bool = True
    p_positive_from_6: bool = True
    p8_at_least_2: bool = True
    sigma_identity: bool = True
    superadditivity: bool = True
    horizon: int = 24

    @staticmethod
    def none() -> "FilterConfig":
        return FilterConfig(
            volume_positive=False, min_volume=False, gamma_nonneg=False,
            rmax_le_24=False, index_bound=False, integrality=False,
            p_positive_from_6=False, p8_at_least_2=False,
            sigma_identity=False, superadditivity=False,
        )


@dataclass(frozen=True)
class FilterResult:
    ok: bool
    failures: tuple[str, ...]

    @property
    def first_failure(self) -> str | None:
        return self.failures[0] if self.failures else None

    def __bool__(self) -> bool:
        return self.ok


def geometric_filter(wb: WeightedBasket, config: FilterConfig = FilterConfig()) -> FilterResult:
    """Run the selected geometric checks; failures are reported in check order."""
    failures: list[str] = []
    basket = wb.basket
    vol = anti_volume(wb)

    if config.volume_positive and not vol > 0:
        failures.append(f"volume_positive: -K^3 = {format_rational(vol)} <= 0")
    if config.min_volume and not vol >= Fraction(1, 330):
        failures.append(f"min_volume: -K^3 = {format_rational(vol)} < 1/330")
    if config.gamma_nonneg:
        g = gamma(basket)
        if g < 0:
            failures.append(f"gamma_nonneg: gamma = {format_rational(g)} < 0")
    if config.rmax_le_24 and len(basket) and r_max(basket) > 24:
        failures.append(f"rmax_le_24: r_max = {r_max(basket)}")
    if config.index_bound:
        rx = r_index(basket)
        if rx > 660 and rx != 840:
            failures.append(f"index_bound: r_X = {rx}")
        elif rx == 840 and r_max(basket) != 8:
            failures.append(f"index_bound: r_X = 840 needs r_max = 8, got {r_max(basket)}")

    horizon = max(config.horizon, 8)
    seq = plurigenus_sequence(wb, horizon)

    if config.integrality:
        for m in range(1, horizon + 1):
            if seq[m].denominator != 1 or seq[m] < 0:
                failures.append(
                    f"integrality: P[-{m}] = {format_rational(seq[m])}"
                )
                break
    if config.p_positive_from_6:
        for m in range(6, horizon + 1):
            if not seq[m] > 0:
                failures.append(f"p_positive_from_6: P[-{m}] = {format_rational(seq[m])}")
                break
    if config.p8_at_least_2 and not seq[8] >= 2:
        failures.append(f"p8_at_least_2: P[-8] = {format_rational(seq[8])}")
    if config.sigma_identity:
        if sigma(basket) != 10 - 5 * seq[1] + seq[2]:
            failures.append(
                f"sigma_identity: sigma = {sigma(basket)}, "
                f"10 - 5*P[-1] + P[-2] = {format_rational(10 - 5 * seq[1] + seq[2])}"
            )
    if config.superadditivity:
        done = False
        for m in range(1, horizon):
            if done:
                break
            for n in range(m, horizon - m + 1):
                if seq[m] > 0 and seq[n] > 0 and seq[m + n] < seq[m] + seq[n] - 1:
                    failures.append(
                        f"superadditivity: P[-{m + n}] = {format_rational(seq[m + n])} "
                        f"< P[-{m}] + P[-{n}] - 1"
                    )
                    done = True
                    break

    return FilterResult(ok=not failures, failures=tuple(failures))
