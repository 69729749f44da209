"""
Counting zeros of exponential sums in the plane
================================================

An exponential sum in one variable has infinitely many zeros, but they are
spread out at a predictable rate. Here we compare that rate, computed from the
Newton polygon alone, with an honest count from the argument principle.
"""

from expcond.expsum import count_zeros_disk, intersection_index, newton_polytope, parse_expsum

# e^z + e^{iz} + 1 has the unit right triangle as its Newton polygon
f = parse_expsum("exp(z1) + exp(i*z1) + 1")
print("Newton polygon vertices:", [tuple(str(c) for c in v) for v in newton_polytope(f).vertices])

# the index is half the perimeter over 2 pi, so (2 + sqrt 2) / (4 pi)
idx = intersection_index([f])
print("index:", idx.exact_tag(), "=", round(idx.value, 6))

# zeros in a disk of radius R grow like 2 R * index
for R in (10.0, 20.0, 40.0, 80.0):
    zc = count_zeros_disk(f, R)
    print(f"R = {R:5.1f}  zeros = {zc.count:3d}  N/(2R) = {zc.count / (2 * zc.radius):.4f}")

# a contour that runs straight through a zero is nudged outward
g = parse_expsum("exp(2*pi*i*z1) - 1")
zc = count_zeros_disk(g, 10.0)
print(f"e^(2 pi i z) - 1: asked for R = 10, used R = {zc.radius:.6f}, found {zc.count}")
