"""Constraint-driven enumeration of geometric weighted baskets.

The engine walks the same road the classification arguments do:

1. enumerate the feasible level-0 baskets from the P_{-1}..P_{-4} ranges
   and the r >= 5 tail (bounded a priori by gamma >= 0, which caps every
   local index at 24 and the total entry weight at Sigma(r - 1/r) <= 24);
2. close each level-0 candidate under packing, pruning with the monotone
   clauses (gamma >= 0 downward-closed; -K^3 and P_{-m} upper bounds
   downward-closed because both only grow along packings);
3. re-verify every survivor against the full constraint set and the
   geometric filter -- mandatory, not an optimization.

Everything is exact; output is deduplicated by canonical form and sorted.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .canonical import Infeasible, b0_from_plurigenera
from .core import (
    Basket,
    FilterConfig,
    OrbifoldPair,
    WeightedBasket,
    anti_volume,
    gamma,
    geometric_filter,
    plurigenus_sequence,
    r_index,
    r_max,
)
from .packing import ClosureLimits, ClosureTruncated, single_packings

__all__ = [
    "ClassificationConstraints",
    "parse_constraints",
    "enumerate_b0",
    "classify",
    "enumerate_index_profiles",
]

_GAMMA_BUDGET = Fraction(24)


def _entry_cost(r: int) -> Fraction:
    return r - Fraction(1, r)


@dataclass(frozen=True)
class ClassificationConstraints:
    """Exact search constraints.

    ``p_fixed`` pins anti-plurigenera, ``p_ranges`` bounds them (closed
    integer ranges).  P_{-1} must be pinned or finitely ranged: an
    unbounded constraint set is rejected.  Volume bounds carry their own
    strictness flags so open intervals like (0, 1/30) are representable.
    """

    p_fixed: dict[int, int] = field(default_factory=dict)
    p_ranges: dict[int, tuple[int, int]] = field(default_factory=dict)
    sigma5: tuple[int, int] | None = None
    k3_min: Fraction | None = None
    k3_min_strict: bool = False
    k3_max: Fraction | None = None
    k3_max_strict: bool = False
    rmax_range: tuple[int, int] | None = None
    rx_exact: int | None = None
    rx_max: int | None = None
    rx_in: frozenset[int] | None = None
    allowed_indices: frozenset[int] | None = None
    filters: FilterConfig = FilterConfig()
    tail_max_index: int = 24
    limits: ClosureLimits = ClosureLimits()

    # -- plurigenus range helpers -------------------------------------------

    def p_bounds(self, m: int) -> tuple[int | None, int | None]:
        if m in self.p_fixed:
            v = self.p_fixed[m]
            return v, v
        if m in self.p_ranges:
            return self.p_ranges[m]
        return None, None

    def constrained_ms(self) -> list[int]:
        return sorted(set(self.p_fixed) | set(self.p_ranges))

    def p1_values(self) -> range:
        lo, hi = self.p_bounds(1)
        if lo is None or hi is None:
            raise ValueError("P_{-1} must be fixed or finitely ranged")
        return range(lo, hi + 1)

    # -- emission checks ----------------------------------------------------

    def volume_ok(self, vol: Fraction) -> bool:
        if self.k3_min is not None:
            if self.k3_min_strict and not vol > self.k3_min:
                return False
            if not self.k3_min_strict and not vol >= self.k3_min:
                return False
        if self.k3_max is not None:
            if self.k3_max_strict and not vol < self.k3_max:
                return False
            if not self.k3_max_strict and not vol <= self.k3_max:
                return False
        return True

    def indices_ok(self, basket: Basket) -> bool:
        if self.allowed_indices is not None:
            if any(p.r not in self.allowed_indices for p in basket):
                return False
        if self.rmax_range is not None:
            if not len(basket):
                return False
            lo, hi = self.rmax_range
            if not lo <= r_max(basket) <= hi:
                return False
        rx = r_index(basket)
        if self.rx_exact is not None and rx != self.rx_exact:
            return False
        if self.rx_max is not None and rx > self.rx_max:
            return False
        if self.rx_in is not None and rx not in self.rx_in:
            return False
        return True

    def admits(self, wb: WeightedBasket) -> bool:
        """Full re-verification of one candidate (the mandatory final pass)."""
        if not self.volume_ok(anti_volume(wb)):
            return False
        if not self.indices_ok(wb.basket):
            return False
        if self.sigma5 is not None:
            # sigma5 is a property of the basket itself: the number of
            # r >= 5 entries of its own level-0 unpacking
            from .canonical import unpack

            lo, hi = self.sigma5
            s5 = sum(1 for p in unpack(wb.basket, 0) if p.r >= 5)
            if not lo <= s5 <= hi:
                return False
        ms = self.constrained_ms()
        if ms:
            seq = plurigenus_sequence(wb, max(ms))
            for m in ms:
                lo, hi = self.p_bounds(m)
                v = seq[m]
                if v.denominator != 1:
                    return False
                if lo is not None and v < lo:
                    return False
                if hi is not None and v > hi:
                    return False
        return geometric_filter(wb, self.filters).ok


def enumerate_b0(constraints: ClassificationConstraints) -> list[tuple[WeightedBasket, tuple[int, int, int, int]]]:
    """All feasible level-0 weighted baskets with their (P_{-1}..P_{-4}).

    Ranges for P_{-2}, P_{-3}, P_{-4} that the caller leaves open are
    derived from non-negativity of the level-0 multiplicities together
    with the gamma budget (sigma(B0) = 10 - 5 p1 + p2 <= 16 because every
    level-0 entry costs at least 3/2 of the budget).
    """
    out: list[tuple[WeightedBasket, tuple[int, int, int, int]]] = []
    seen: set[tuple[Basket, int]] = set()
    s5lo, s5hi = constraints.sigma5 if constraints.sigma5 else (0, None)

    for p1 in constraints.p1_values():
        lo2, hi2 = constraints.p_bounds(2)
        # sigma(B0) = 10 - 5 p1 + p2 and 3/2 * sigma(B0) <= 24
        p2_cap = 16 - 10 + 5 * p1
        lo2 = 0 if lo2 is None else lo2
        hi2 = p2_cap if hi2 is None else min(hi2, p2_cap)
        for p2 in range(max(lo2, 0), hi2 + 1):
            lo3, hi3 = constraints.p_bounds(3)
            cap3 = 5 - 6 * p1 + 4 * p2  # n0[1,2] >= 0
            lo3 = 0 if lo3 is None else max(lo3, 0)
            hi3 = cap3 if hi3 is None else min(hi3, cap3)
            for p3 in range(lo3, hi3 + 1):
                lo4, hi4 = constraints.p_bounds(4)
                cap4 = 4 - 2 * p1 - 2 * p2 + 3 * p3  # n0[1,3] >= 0
                lo4 = 0 if lo4 is None else max(lo4, 0)
                hi4 = cap4 if hi4 is None else min(hi4, cap4)
                for p4 in range(lo4, hi4 + 1):
                    sigma5_cap = 1 + 3 * p1 - p2 - 2 * p3 + p4  # n0[1,4] >= 0
                    if s5hi is not None:
                        sigma5_cap = min(sigma5_cap, s5hi)
                    if sigma5_cap < s5lo:
                        continue
                    for tail in _tails(constraints, p1, p2, p3, p4, sigma5_cap):
                        if sum(tail.values()) < s5lo:
                            continue
                        basket = b0_from_plurigenera(p1, p2, p3, p4, tail)
                        if isinstance(basket, Infeasible):
                            continue
                        if gamma(basket) < 0:
                            continue
                        key = (basket, p1)
                        if key in seen:
                            continue
                        seen.add(key)
                        out.append((WeightedBasket(basket, p1), (p1, p2, p3, p4)))
    out.sort(key=lambda item: (item[0].p1, item[0].basket.sort_key()))
    return out


def _tails(constraints, p1, p2, p3, p4, sigma5_cap):
    """Tail multiplicity tables {r >= 5: n0[1,r]} within the gamma budget."""
    n12 = 5 - 6 * p1 + 4 * p2 - p3
    n13 = 4 - 2 * p1 - 2 * p2 + 3 * p3 - p4
    if n12 < 0 or n13 < 0:
        return
    base_cost = n12 * _entry_cost(2) + n13 * _entry_cost(3)
    n14_full = 1 + 3 * p1 - p2 - 2 * p3 + p4

    def rec(r, remaining_slots, budget, tail):
        # each tail entry replaces one (1,4): its net cost is r - 1/r - 15/4
        yield dict(tail)
        if remaining_slots <= 0:
            return
        for rr in range(r, constraints.tail_max_index + 1):
            cost = _entry_cost(rr) - _entry_cost(4)
            if cost > budget:
                break
            tail[rr] = tail.get(rr, 0) + 1
            yield from rec(rr, remaining_slots - 1, budget - cost, tail)
            tail[rr] -= 1
            if tail[rr] == 0:
                del tail[rr]

    budget0 = _GAMMA_BUDGET - base_cost - n14_full * _entry_cost(4)
    if budget0 < 0:
        # no tail can rescue a basket whose r <= 4 part already blows gamma
        return
    yield from rec(5, sigma5_cap, budget0, {})


def _prune_factory(constraints: ClassificationConstraints, p1: int):
    """Downward-closed clause used during closure expansion."""
    upper_ms: list[tuple[int, int]] = []
    for m in constraints.constrained_ms():
        if m == 1:
            continue
        _, hi = constraints.p_bounds(m)
        if hi is not None:
            upper_ms.append((m, hi))
    top = max((m for m, _ in upper_ms), default=0)
    use_gamma = constraints.filters.gamma_nonneg
    k3_hi, k3_hi_strict = constraints.k3_max, constraints.k3_max_strict
    min_vol = Fraction(1, 330) if constraints.filters.min_volume else None

    def prune_ok(basket: Basket) -> bool:
        if use_gamma and gamma(basket) < 0:
            return False
        wb = WeightedBasket(basket, p1)
        vol = anti_volume(wb)
        if k3_hi is not None:
            if k3_hi_strict and vol >= k3_hi:
                return False
            if not k3_hi_strict and vol > k3_hi:
                return False
        if min_vol is not None:
            # -K^3 only grows along packing, so no *lower* prune is sound;
            # but sigma' > 0 caps the reachable volume from above:
            # final -K^3 < 2 p1 + sigma - 6, and sigma is a packing invariant
            if 2 * p1 + sum(p.b for p in basket) - 6 < min_vol:
                return False
        if top:
            seq = plurigenus_sequence(wb, top)
            for m, hi in upper_ms:
                if seq[m] > hi:
                    return False
        return True

    return prune_ok


def _expand_and_admit(
    constraints: ClassificationConstraints, p1: int, roots: list[Basket]
) -> set[WeightedBasket]:
    """Close the given level-0 roots under packing and keep the admitted ones."""
    prune_ok = _prune_factory(constraints, p1)
    seen: set[Basket] = set()
    frontier: list[Basket] = []
    for b in roots:
        if b not in seen and prune_ok(b):
            seen.add(b)
            frontier.append(b)
    while frontier:
        nxt: list[Basket] = []
        for current in frontier:
            for child in single_packings(current):
                if child in seen:
                    continue
                if len(seen) >= constraints.limits.max_visited:
                    raise ClosureTruncated(
                        f"classification search truncated at {len(seen)} states"
                    )
                if not prune_ok(child):
                    continue
                seen.add(child)
                nxt.append(child)
        frontier = nxt
    results: set[WeightedBasket] = set()
    for basket in seen:
        if not basket.all_terminal:
            continue
        wb = WeightedBasket(basket, p1)
        if constraints.admits(wb):
            results.add(wb)
    return results


def classify(constraints: ClassificationConstraints, jobs: int = 1) -> list[WeightedBasket]:
    """All weighted baskets meeting the constraints and the geometric filter.

    Raises ClosureTruncated if a visited budget runs out: a partial
    classification is never returned silently.  ``jobs`` > 1 distributes
    the level-0 roots over worker processes (workers may re-explore
    shared packing diamonds; the merged, sorted output is identical).
    """
    roots = enumerate_b0(constraints)
    by_p1: dict[int, list[Basket]] = {}
    for wb, _ in roots:
        by_p1.setdefault(wb.p1, []).append(wb.basket)

    results: set[WeightedBasket] = set()
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        tasks = []
        for p1, baskets in by_p1.items():
            chunk = max(1, -(-len(baskets) // jobs))
            tasks.extend(
                (p1, baskets[i: i + chunk]) for i in range(0, len(baskets), chunk)
            )
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(
                _expand_and_admit,
                [constraints] * len(tasks),
                [p1 for p1, _ in tasks],
                [chunk for _, chunk in tasks],
            ):
                results |= part
    else:
        for p1, baskets in by_p1.items():
            results |= _expand_and_admit(constraints, p1, baskets)

    return sorted(results, key=lambda wb: (wb.p1, wb.basket.sort_key()))


# ---------------------------------------------------------------------------
# index-profile enumeration (fixed Gorenstein index)
# ---------------------------------------------------------------------------

def enumerate_index_profiles(
    lcm_target: int, constraints: ClassificationConstraints
) -> list[WeightedBasket]:
    """All coprime baskets whose local indices have lcm exactly ``lcm_target``,

    filtered by the constraint set.  Index multisets are cut down a priori
    by the gamma budget (so each index divides the target and is <= 24),
    then every coprime numerator assignment is screened by the mandatory
    re-verification pass.
    """
    divisors = [
        d for d in range(2, min(lcm_target, 24) + 1)
        if lcm_target % d == 0 and _entry_cost(d) <= _GAMMA_BUDGET
    ]
    divisors.sort(reverse=True)

    profiles: list[tuple[int, ...]] = []

    def grow(idx: int, current: list[int], budget: Fraction, lcm_now: int) -> None:
        if idx == len(divisors):
            if lcm_now == lcm_target:
                profiles.append(tuple(current))
            return
        d = divisors[idx]
        grow(idx + 1, current, budget, lcm_now)
        cost = _entry_cost(d)
        added = 0
        while budget - cost * (added + 1) >= 0:
            added += 1
            current.append(d)
            grow(idx + 1, current, budget - cost * added, math.lcm(lcm_now, d))
        for _ in range(added):
            current.pop()

    grow(0, [], _GAMMA_BUDGET, 1)

    out: set[WeightedBasket] = set()
    for profile in profiles:
        for basket in _numerator_assignments(profile):
            for p1 in constraints.p1_values():
                wb = WeightedBasket(basket, p1)
                if constraints.admits(wb):
                    out.add(wb)
    return sorted(out, key=lambda wb: (wb.p1, wb.basket.sort_key()))


def _numerator_assignments(profile: tuple[int, ...]):
    """All coprime (b, r) choices over an index multiset, deduplicated."""
    from itertools import combinations_with_replacement, product

    groups: dict[int, int] = {}
    for r in profile:
        groups[r] = groups.get(r, 0) + 1
    per_group: list[list[tuple[OrbifoldPair, ...]]] = []
    for r, count in sorted(groups.items()):
        options = [
            OrbifoldPair.of(b, r)
            for b in range(1, r // 2 + 1)
            if math.gcd(b, r) == 1
        ]
        per_group.append(
            [combo for combo in combinations_with_replacement(options, count)]
        )
    for chosen in product(*per_group):
        yield Basket([p for combo in chosen for p in combo])


# ---------------------------------------------------------------------------
# constraints file format
#
#   p[1]=1  p[2]=1  p[8]=2  sigma5=0..3  k3=(0,1/30)  rmax=2..24
#   rx=840             (or rx<=660, rx in {330,660})
#   indices={2,3,5,7,8}
#   filters=default    (or filters=none, or filters=volume,gamma,...)
#
# Tokens are whitespace-separated; '#' starts a comment.  Interval ends for
# k3 accept integers, fractions p/q and exact decimals like 0.21; '(' / ')'
# mean strict, '[' / ']' inclusive.
# ---------------------------------------------------------------------------

_FILTER_FIELDS = {
    "volume": "volume_positive",
    "min_volume": "min_volume",
    "gamma": "gamma_nonneg",
    "rmax24": "rmax_le_24",
    "index": "index_bound",
    "integrality": "integrality",
    "p6": "p_positive_from_6",
    "p8": "p8_at_least_2",
    "sigma": "sigma_identity",
    "superadditive": "superadditivity",
}


def _parse_exact(token: str) -> Fraction:
    token = token.strip()
    if "/" in token:
        num, den = token.split("/")
        return Fraction(int(num), int(den))
    if "." in token:
        whole, frac = token.split(".")
        scale = 10 ** len(frac)
        sign = -1 if whole.startswith("-") else 1
        return Fraction(int(whole) * scale + sign * int(frac or 0), scale)
    return Fraction(int(token))


def _parse_int_range(token: str) -> tuple[int, int]:
    if ".." in token:
        lo, hi = token.split("..")
        return int(lo), int(hi)
    v = int(token)
    return v, v


def parse_constraints(text: str) -> ClassificationConstraints:
    p_fixed: dict[int, int] = {}
    p_ranges: dict[int, tuple[int, int]] = {}
    kwargs: dict = {}
    filters = FilterConfig()

    tokens: list[str] = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())

    for token in tokens:
        if "=" not in token and not token.startswith("rx"):
            raise ValueError(f"bad constraints token {token!r}")
        if token.startswith("p["):
            close = token.index("]")
            m = int(token[2:close])
            value = token[close + 2:]
            lo, hi = _parse_int_range(value)
            if lo == hi:
                p_fixed[m] = lo
            else:
                p_ranges[m] = (lo, hi)
        elif token.startswith("sigma5="):
            kwargs["sigma5"] = _parse_int_range(token[len("sigma5="):])
        elif token.startswith("k3="):
            body = token[len("k3="):]
            if body[0] not in "([" or body[-1] not in ")]":
                raise ValueError(f"bad k3 interval {body!r}")
            lo_s, hi_s = body[1:-1].split(",")
            kwargs["k3_min"] = _parse_exact(lo_s)
            kwargs["k3_min_strict"] = body[0] == "("
            kwargs["k3_max"] = _parse_exact(hi_s)
            kwargs["k3_max_strict"] = body[-1] == ")"
        elif token.startswith("rmax="):
            kwargs["rmax_range"] = _parse_int_range(token[len("rmax="):])
        elif token.startswith("rx<="):
            kwargs["rx_max"] = int(token[len("rx<="):])
        elif token.startswith("rx="):
            kwargs["rx_exact"] = int(token[len("rx="):])
        elif token.startswith("indices={") and token.endswith("}"):
            inner = token[len("indices={"):-1]
            kwargs["allowed_indices"] = frozenset(int(x) for x in inner.split(",") if x)
        elif token.startswith("tailmax="):
            kwargs["tail_max_index"] = int(token[len("tailmax="):])
        elif token.startswith("filters="):
            body = token[len("filters="):]
            if body == "default":
                filters = FilterConfig()
            elif body == "none":
                filters = FilterConfig.none()
            else:
                enabled = {f.strip() for f in body.split(",") if f.strip()}
                unknown = enabled - set(_FILTER_FIELDS)
                if unknown:
                    raise ValueError(f"unknown filter names {sorted(unknown)}")
                filters = dataclasses.replace(
                    FilterConfig.none(),
                    **{_FILTER_FIELDS[name]: True for name in enabled},
                )
        else:
            raise ValueError(f"bad constraints token {token!r}")

    if not p_fixed and not p_ranges and not kwargs:
        raise ValueError("empty constraint set is rejected (unbounded search)")
    return ClassificationConstraints(
        p_fixed=p_fixed, p_ranges=p_ranges, filters=filters, **kwargs
    )
