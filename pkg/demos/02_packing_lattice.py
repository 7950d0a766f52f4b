"""The packing partial order in action.

Merging two entries (b1,r1), (b2,r2) into (b1+b2, r1+r2) moves a basket
*down* the lattice: sigma stays put while gamma and sigma' fall and the
volume rises.  Closing a basket under all packings, with monotone
pruning, is the workhorse behind every classification.
"""

from reidbasket.core import Basket, WeightedBasket, anti_volume, gamma, r_max
from reidbasket.packing import (
    all_of,
    closure,
    coprime_only,
    dominates,
    gamma_at_least,
    is_prime_packing,
    pack_once,
)

b = Basket.parse("(1,2),(1,3)")
print(b, "--pack-->", pack_once(b, 0, 1))
print("is that a prime packing?",
      is_prime_packing(*b.entries), "(1*3 - 1*2 = 1)")

# A classification-sized example: which coprime baskets with a large
# local index can descend from seven half-points and one third-point?
root = Basket.parse("7x(1,2),(1,3)")
result = closure(
    root,
    prune=gamma_at_least(0),
    emit=all_of(coprime_only, lambda basket: r_max(basket) >= 11),
)
print(f"\nclosure of {root} (gamma >= 0, coprime, r_max >= 11):")
for basket in result.baskets:
    print(f"  {basket}   -K^3 = {anti_volume(WeightedBasket(basket, 1))}")
print(f"  [visited {result.visited} baskets in total]")

# gamma really is monotone along the chain:
chain = [root, pack_once(root, 0, 7), Basket.parse("5x(1,2),(3,7)")]
print("\ngamma along a packing chain:", [gamma(x) for x in chain])

# Domination is decidable; packing can never be undone.
assert dominates(root, Basket.parse("(8,17)"))
assert not dominates(Basket.parse("(8,17)"), root)
print("\n7x(1,2),(1,3) dominates (8,17):", dominates(root, Basket.parse("(8,17)")))
