import math
import random

import pytest
from hypothesis import strategies as st

from reidbasket.core import Basket, OrbifoldPair


def pair_strategy(rmax: int = 24, coprime: bool = False):
    return st.integers(min_value=2, max_value=rmax).flatmap(
        lambda r: st.integers(min_value=1, max_value=r // 2)
        .filter(lambda b: not coprime or math.gcd(b, r) == 1)
        .map(lambda b: OrbifoldPair.of(b, r))
    )


def random_pair(rng: random.Random, rmax: int = 24, coprime: bool = True) -> OrbifoldPair:
    while True:
        r = rng.randint(2, rmax)
        b = rng.randint(1, r // 2)
        if not coprime or math.gcd(b, r) == 1:
            return OrbifoldPair.of(b, r)


def random_basket(
    rng: random.Random,
    max_entries: int = 8,
    rmax: int = 24,
    coprime: bool = True,
    min_entries: int = 0,
) -> Basket:
    n = rng.randint(min_entries, max_entries)
    return Basket(random_pair(rng, rmax, coprime) for _ in range(n))


def all_coprime_baskets(max_sum_r: int) -> list[Basket]:
    """Every coprime basket with sum of local indices <= max_sum_r.

    Independent of the packing machinery on purpose: a plain multiset
    enumeration used as the brute-force oracle.
    """
    pairs = sorted(
        ((b, r) for r in range(2, max_sum_r + 1)
         for b in range(1, r // 2 + 1) if math.gcd(b, r) == 1),
        key=lambda t: (t[1], t[0]),
    )
    results: list[Basket] = []

    def rec(idx: int, budget: int, acc: list) -> None:
        results.append(Basket.of(*acc))
        for i in range(idx, len(pairs)):
            b, r = pairs[i]
            if r <= budget:
                acc.append((b, r))
                rec(i, budget - r, acc)
                acc.pop()

    rec(0, max_sum_r, [])
    return results


@pytest.fixture(scope="session")
def baskets_sum_r_20() -> list[Basket]:
    return all_coprime_baskets(20)
