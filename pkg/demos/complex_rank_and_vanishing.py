"""
When does a mixed pseudovolume vanish?
======================================

Mixed volume vanishes exactly when some sub-collection of polytopes is too
thin. The pseudovolume version asks the same question with complex dimension.
"""

from expcond.polytope import Polytope, complex_rank, mixed_volume, rank
from expcond.pseudovolume import mixed_pseudovolume

# coordinates on C^2* are (Re z1, Im z1, Re z2, Im z2)
o = (0, 0, 0, 0)
a = Polytope.segment(o, (1, 0, 0, 0))  # [0, 1] in the first coordinate
b = Polytope.segment(o, (0, 1, 0, 0))  # [0, i] in the first coordinate
c = Polytope.segment(o, (0, 0, 1, 0))  # [0, 1] in the second coordinate

# a and b span a real plane, so the real mixed volume does not see a problem
print("real rank of {a, b}:", rank([a, b]))
# but that plane is one complex line
print("complex rank of {a, b}:", complex_rank([a, b]))

r = mixed_pseudovolume([a, b])
print("mixed pseudovolume of a, b:", r.value, "error", r.error_bound)
# every face was skipped before any angle was sampled
print("angles:", [t.angle for t in r.terms])

r = mixed_pseudovolume([a, c])
print("mixed pseudovolume of a, c:", r.value, "(2 pi)^2 times it:", r.scaled_exact)

# the real statement, in the plane
sq = Polytope([(0, 0), (1, 0), (0, 1), (1, 1)])
seg = Polytope.segment((0, 0), (1, 1))
print("MV(segment, segment) =", mixed_volume([seg, seg]), " rank", rank([seg, seg]))
print("MV(square, segment) =", mixed_volume([sq, seg]), " rank", rank([sq, seg]))
