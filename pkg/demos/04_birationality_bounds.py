"""From a basket to an effective birationality bound.

The pipeline mirrors how the bounds are assembled by hand:

1. lambda(M), with M = r_X * (-K^3), gauges when |-mK| cannot be
   composed with a pencil: it suffices that P_{-m} > lambda(M) m + 1.
2. the least such m becomes n1; the least m with P_{-m} >= 2 becomes m0.
3. a case of the birationality criterion (or the small-index variant)
   turns (m0, m1, mu0', nu0) into a bound n2: the m-th anti-canonical
   map is birational for every m >= n2, under the stated pencil
   assumptions.

Everything below is exact; square-root comparisons are settled by
integer squaring.
"""

from fractions import Fraction

from reidbasket.core import Basket, WeightedBasket
from reidbasket.criteria import (
    BranchSpec,
    PipelinePolicy,
    lambda_of,
    not_pencil_threshold,
    rr_lower_bound,
    table_pipeline,
    theta_max,
)

# lambda and theta at a few instructive points
for m_big, rx in ((1, 330), (83, 840), (47, 840)):
    print(f"lambda({m_big}) over r_X = {rx}: {lambda_of(m_big, rx)}"
          f"   (theta_max = {theta_max(m_big, rx)})")

# A volume bound alone already yields plurigenus growth...
print("\nRR lower bound at -K^3 >= 1/30, n = 18, t = 18/8:",
      rr_lower_bound(Fraction(1, 30), 24, 18, Fraction(18, 8)), "> 20")
# ...and hence a uniform pencil-exclusion threshold for a whole family.
print("pencil-free for m >=",
      not_pencil_threshold(Fraction(1, 30), 660, 24, Fraction(35, 8)),
      "whenever -K^3 >= 1/30 and r_X <= 660")

# The full pipeline on the extremal basket, with the branch pair that
# settles its bound: either |-24K| is a new non-pencil system (m1 = 24),
# or it shares the pencil of |-5K| and the small-index criterion with
# mu0' = 24/(P_{-24} - 1) takes over.
wb = WeightedBasket(Basket.parse("(1,2),(2,5),(1,3),(2,11)"), 1)
report = table_pipeline(wb, PipelinePolicy(case=3, branches=(
    BranchSpec("|-24K| and |-5K| not composed with the same pencil", "b", case=3, m1=24),
    BranchSpec("|-24K| and |-5K| composed with the same pencil", "b2",
               mu0=Fraction(24, 15), n0=1),
)))
print()
print(report.to_text())
print("\nheadline: birational for all m >=", report.headline_n2)
assert report.headline_n2 == 52
