"""
Zeros that form a lattice
=========================

The common zeros of e^{lambda_p(z)} - 1 form a lattice in a real subspace of
C^n. Its density is a covolume computation, and it matches the mixed
pseudovolume of the segments [0, lambda_p].
"""

from expcond.expsum import check_lattice, lattice_density, lattice_from_characters
from expcond.polytope import Polytope
from expcond.pseudovolume import mixed_pseudovolume

lams = [(1, 0, 0, 1), (0, 1, 2, 0)]  # lambda_1 = z1 + i z2, lambda_2 = i z1 + 2 z2
spec = lattice_from_characters(lams)
print("kernel L has dimension", spec.L.dim)
print("generators of S / 2 pi:", [[str(c) for c in m.coords] for m in spec.mus])
print("exp(lambda_p(s)) = 1 on generators:", check_lattice(spec))

d = lattice_density(spec)
segs = [Polytope.segment((0, 0, 0, 0), l) for l in lams]
r = mixed_pseudovolume(segs)
print(f"density {d:.6f}   2! * mixed pseudovolume {2 * r.value:.6f}")

# a degenerate choice: both characters vanish on the same complex line
try:
    lattice_from_characters([(1, 0, 0, 0), (0, 1, 0, 0)])
except ValueError as err:
    print("degenerate:", err)

