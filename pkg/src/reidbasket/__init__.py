"""Exact Reid-basket calculus for terminal weak Q-Fano 3-folds.

Submodules:

* ``core``      -- baskets, anti-plurigenera, geometric filters
* ``packing``   -- the packing partial order and closure search
* ``canonical`` -- Farey-level approximations and packing counts
* ``criteria``  -- pencil-exclusion and birationality bounds
* ``classify``  -- constraint-driven enumeration of geometric baskets
* ``fixtures``  -- bundled reference tables and the verification harness
* ``cli``       -- the ``reidbasket`` command-line front end
"""

from .core import (
    Basket,
    BasketSyntaxError,
    FilterConfig,
    OrbifoldPair,
    WeightedBasket,
    anti_volume,
    delta_n,
    gamma,
    geometric_filter,
    l_term,
    parse_basket,
    plurigenus,
    plurigenus_closed,
    plurigenus_sequence,
    r_index,
    r_max,
    sigma,
    sigma_prime,
)

__version__ = "0.1.0"
