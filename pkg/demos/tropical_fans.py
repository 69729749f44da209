"""
Polytopes as weighted fans
==========================

A polygon can be replaced by its normal fan with edge lengths as weights.
Multiplying two such fans (after a generic shift) returns their mixed area.
"""

from expcond.polytope import Polytope, mixed_volume
from expcond.ring import RingElement, in_Jvol, weighted_fan_of
from expcond.tropical import admissible_point, dual_fan, e_intersection, stable_product, zero_cone_weight

tri = Polytope([(0, 0), (2, 0), (0, 1)])
sq = Polytope([(0, 0), (1, 0), (0, 1), (1, 1)])

K, L = dual_fan(tri, 1), dual_fan(sq, 1)
for cone, w in K.cones:
    print("ray", [str(c) for c in cone.rays[0]], "weight", w)

# pick a shift that avoids every proper coincidence, then intersect
e = admissible_point(K, L)
print("shift:", tuple(str(c) for c in e))
print("zero cone weight:", zero_cone_weight(e_intersection(K, L, e)))
print("mixed area:      ", mixed_volume([tri, sq]))

# stable_product does the same thing at several shifts and checks they agree
print("stable product:  ", zero_cone_weight(stable_product(K, L)))

# translating a polytope does not change its fan, so the difference has no weights
x = RingElement.power(tri, 1) - RingElement.power(tri.translate((3, -1)), 1)
print("fan of the difference:", weighted_fan_of(x).cones, " in J_vol:", in_Jvol(x))
