"""Rational convex polytopes in V-representation with an exact face lattice."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from ..exactnum import (
    Subspace,
    Surd,
    add,
    complex_hull,
    det,
    dot,
    gram,
    gram_det,
    orthogonal_complement,
    rat_str,
    rref,
    solve_linear,
    sub,
    vec,
)
from ._dd import extreme_rays
from .cone import Cone


class Polytope:
    """Convex hull of finitely many rational points.

    Vertices are the minimal generating set, sorted lexicographically, so two
    polytopes are equal exactly when their vertex tuples agree.  The face
    lattice, tangent spaces and dual cones are computed lazily.
    """

    def __init__(self, vertices: Sequence[Sequence], ambient_dim: int | None = None, *, _checked=False):
        pts = sorted(set(vec(v) for v in vertices))
        if not pts:
            raise ValueError("a polytope needs at least one point")
        m = len(pts[0]) if ambient_dim is None else ambient_dim
        if any(len(p) != m for p in pts):
            raise ValueError("points of different dimensions")
        self.ambient_dim = m
        if _checked:
            self.vertices = tuple(pts)
        else:
            self.vertices = tuple(_hull_vertices(pts))

    # -- construction ----------------------------------------------------
    @classmethod
    def hull(cls, points: Iterable[Sequence]) -> "Polytope":
        pts = list(points)
        if not pts:
            raise ValueError("empty point set")
        return cls(pts)

    @classmethod
    def point(cls, p: Sequence) -> "Polytope":
        return cls([p])

    @classmethod
    def segment(cls, a: Sequence, b: Sequence) -> "Polytope":
        return cls([a, b])

    def __eq__(self, other) -> bool:
        return isinstance(other, Polytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        vs = ", ".join("(" + ", ".join(rat_str(a) for a in v) + ")" for v in self.vertices)
        return f"Polytope([{vs}])"

    def __add__(self, other: "Polytope") -> "Polytope":
        return minkowski_sum([self, other])

    def translate(self, t: Sequence) -> "Polytope":
        t = vec(t)
        return Polytope([add(v, t) for v in self.vertices], _checked=True)

    def scale(self, c) -> "Polytope":
        c = Fraction(c)
        if c < 0:
            raise ValueError("negative homothety is not a polytope-ring operation")
        if c == 0:
            return Polytope.point([0] * self.ambient_dim)
        return Polytope([tuple(c * a for a in v) for v in self.vertices], _checked=True)

    def linear_image(self, A: Sequence[Sequence]) -> "Polytope":
        return Polytope([tuple(dot(row, v) for row in A) for v in self.vertices])

    def normalized(self) -> "Polytope":
        """Translate so the lexicographically smallest vertex is the origin."""
        return self.translate(tuple(-a for a in self.vertices[0]))

    # -- affine structure ------------------------------------------------
    @cached_property
    def _frame(self):
        return _Frame(self.vertices)

    @property
    def dim(self) -> int:
        return self._frame.dim

    @property
    def tangent(self) -> Subspace:
        return Subspace.span(self._frame.basis, self.ambient_dim)

    def complex_dim(self) -> int:
        if self.ambient_dim % 2:
            raise ValueError("complex dimension needs an even ambient dimension")
        return complex_hull(self.tangent).dim // 2

    def support_function(self, v: Sequence) -> Fraction:
        v = vec(v)
        return max(dot(v, p) for p in self.vertices)

    def argmax_vertices(self, v: Sequence) -> frozenset:
        v = vec(v)
        vals = [dot(v, p) for p in self.vertices]
        top = max(vals)
        return frozenset(i for i, x in enumerate(vals) if x == top)

    def contains(self, p: Sequence) -> bool:
        p = vec(p)
        fr = self._frame
        rel = sub(p, self.vertices[0])
        if not self.tangent.contains(rel):
            return False
        if fr.dim == 0:
            return True
        c = fr.coords(p)
        return all(b + dot(a, c) >= 0 for a, b, _ in self._lattice.facets)

    # -- face lattice ----------------------------------------------------
    @cached_property
    def _lattice(self) -> "_Lattice":
        return _Lattice(self)

    def faces(self, d: int) -> list["Face"]:
        if not 0 <= d <= self.dim:
            raise ValueError(f"face dimension {d} outside 0..{self.dim}")
        return [Face(self, S, d) for S in self._lattice.by_dim[d]]

    def face_of(self, vertex_ids: Iterable[int]) -> "Face":
        S = frozenset(vertex_ids)
        d = self._lattice.dim_of.get(S)
        if d is None:
            raise ValueError("vertex set is not a face")
        return Face(self, S, d)

    def argmax_face(self, v: Sequence) -> "Face":
        return self.face_of(self.argmax_vertices(v))

    def outer_facet_normals(self) -> list[tuple]:
        """Outer normals (inside the tangent space) of the facets."""
        return [self._lattice.outer_normal(i) for i in range(len(self._lattice.facets))]

    # -- measures ---------------------------------------------------------
    def coordinate_volume(self) -> Fraction:
        """Volume in the coordinates of the frame basis (rational)."""
        return self._lattice.coordinate_volume()

    def lebesgue_volume(self) -> Fraction:
        """Standard volume in R^m; zero unless full-dimensional."""
        if self.dim < self.ambient_dim:
            return Fraction(0)
        if self.dim == 0:
            return Fraction(1)
        return self.coordinate_volume() * abs(det(self._frame.basis))

    def volume(self) -> Surd:
        """Intrinsic ``dim``-dimensional Euclidean volume."""
        if self.dim == 0:
            return Surd(1)
        return Surd.sqrt(gram_det(self._frame.basis)) * self.coordinate_volume()


class Face:
    """Face of a polytope given by the indices of its vertices."""

    def __init__(self, parent: Polytope, vertex_ids: frozenset, dim: int):
        self.parent = parent
        self.vertex_ids = frozenset(vertex_ids)
        self.dim = dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Face)
            and self.parent == other.parent
            and self.vertex_ids == other.vertex_ids
        )

    def __hash__(self) -> int:
        return hash((self.parent, self.vertex_ids))

    def __repr__(self) -> str:
        return f"Face(dim={self.dim}, vertices={[self.parent.vertices[i] for i in sorted(self.vertex_ids)]})"

    @cached_property
    def vertices(self) -> tuple:
        return tuple(self.parent.vertices[i] for i in sorted(self.vertex_ids))

    @cached_property
    def polytope(self) -> Polytope:
        return Polytope(self.vertices, _checked=True)

    @cached_property
    def tangent(self) -> Subspace:
        v0 = self.vertices[0]
        return Subspace.span([sub(v, v0) for v in self.vertices[1:]], self.parent.ambient_dim)

    @cached_property
    def dual_cone(self) -> Cone:
        """Functionals whose maximum over the parent is attained on all of this face."""
        P = self.parent
        lat = P._lattice
        gens = [lat.outer_normal(i) for i, (_, _, inc) in enumerate(lat.facets) if self.vertex_ids <= inc]
        perp = orthogonal_complement(P.tangent)
        for b in perp.basis:
            gens.append(b)
            gens.append(tuple(-a for a in b))
        return Cone.from_generators(gens, P.ambient_dim)

    def relint_functional(self) -> tuple:
        """A rational functional in the relative interior of the dual cone."""
        lat = self.parent._lattice
        m = self.parent.ambient_dim
        w = [Fraction(0)] * m
        for i, (_, _, inc) in enumerate(lat.facets):
            if self.vertex_ids <= inc:
                n = lat.outer_normal(i)
                for j in range(m):
                    w[j] += n[j]
        return tuple(w)

    def volume(self) -> Surd:
        return self.polytope.volume()


# ---------------------------------------------------------------------------
# internals


class _Frame:
    """Affine frame ``p0 + span(basis)`` of a point set, with exact local coordinates."""

    def __init__(self, pts: Sequence[tuple]):
        self.p0 = pts[0]
        chosen: list[tuple] = []
        for p in pts[1:]:
            d = sub(p, self.p0)
            trial = chosen + [d]
            if len(rref(trial)[1]) == len(trial):
                chosen = trial
        self.basis = chosen
        self.dim = len(chosen)
        self._G = gram(chosen) if chosen else []

    def coords(self, p: Sequence) -> tuple:
        if self.dim == 0:
            return ()
        rel = sub(p, self.p0)
        return solve_linear(self._G, [dot(b, rel) for b in self.basis])


def _facets_local(coords: list[tuple], d: int) -> list[tuple]:
    """Facet inequalities ``b + a . c >= 0`` of a full-dimensional point set in Q^d."""
    rows = [(Fraction(1),) + tuple(c) for c in coords]
    rays = extreme_rays(rows, d + 1)
    return [(tuple(Fraction(x) for x in r[1:]), Fraction(r[0])) for r in rays]


def _hull_vertices(pts: list[tuple]) -> list[tuple]:
    if len(pts) == 1:
        return pts
    fr = _Frame(pts)
    d = fr.dim
    if d == 0:
        return [pts[0]]
    coords = [fr.coords(p) for p in pts]
    if d == 1:
        lo = min(range(len(pts)), key=lambda i: coords[i][0])
        hi = max(range(len(pts)), key=lambda i: coords[i][0])
        return sorted({pts[lo], pts[hi]})
    facets = _facets_local(coords, d)
    out = []
    for p, c in zip(pts, coords):
        tight = [a for a, b in facets if b + dot(a, c) == 0]
        if len(tight) >= d and len(rref(tight)[1]) == d:
            out.append(p)
    return sorted(out)


class _Lattice:
    def __init__(self, P: Polytope):
        self.P = P
        fr = P._frame
        d = fr.dim
        self.d = d
        nv = len(P.vertices)
        full = frozenset(range(nv))
        self.coords = [fr.coords(v) for v in P.vertices]
        if d == 0:
            self.facets = []
        elif d == 1:
            lo = min(range(nv), key=lambda i: self.coords[i][0])
            hi = max(range(nv), key=lambda i: self.coords[i][0])
            x_lo, x_hi = self.coords[lo][0], self.coords[hi][0]
            self.facets = [
                ((Fraction(1),), -x_lo, frozenset([lo])),
                ((Fraction(-1),), x_hi, frozenset([hi])),
            ]
        else:
            self.facets = []
            for a, b in _facets_local(self.coords, d):
                inc = frozenset(i for i, c in enumerate(self.coords) if b + dot(a, c) == 0)
                self.facets.append((a, b, inc))
        self.by_dim: dict[int, list[frozenset]] = {d: [full]}
        self.dim_of: dict[frozenset, int] = {full: d}
        self.children: dict[frozenset, list[frozenset]] = {}
        level = [full]
        for k in range(d, 0, -1):
            nxt: dict[frozenset, None] = {}
            for F in level:
                cands = {F & inc for _, _, inc in self.facets if not F <= inc}
                cands.discard(frozenset())
                maximal = [G for G in cands if not any(G < H for H in cands)]
                if k == 1:
                    maximal = [G for G in maximal if len(G) == 1]
                self.children[F] = maximal
                for G in maximal:
                    nxt[G] = None
            level = list(nxt)
            self.by_dim[k - 1] = sorted(level, key=lambda S: sorted(S))
            for G in level:
                self.dim_of[G] = k - 1
        for S in self.by_dim.get(0, []):
            self.children[S] = []
        self._outer: dict[int, tuple] = {}

    def outer_normal(self, i: int) -> tuple:
        if i not in self._outer:
            a, _, _ = self.facets[i]
            fr = self.P._frame
            y = solve_linear(fr._G, a)
            m = self.P.ambient_dim
            w = [Fraction(0)] * m
            for yi, b in zip(y, fr.basis):
                for j in range(m):
                    w[j] -= yi * b[j]
            self._outer[i] = tuple(w)
        return self._outer[i]

    def _simplices(self, F: frozenset, k: int) -> list[list[int]]:
        if k == 0:
            return [[next(iter(F))]]
        v0 = min(F)
        out = []
        for G in self.children[F]:
            if v0 in G:
                continue
            for s in self._simplices(G, k - 1):
                out.append([v0] + s)
        return out

    def coordinate_volume(self) -> Fraction:
        d = self.d
        if d == 0:
            return Fraction(1)
        full = self.by_dim[d][0]
        total = Fraction(0)
        for s in self._simplices(full, d):
            c0 = self.coords[s[0]]
            M = [sub(self.coords[i], c0) for i in s[1:]]
            total += abs(det(M))
        return total / math.factorial(d)


# ---------------------------------------------------------------------------
# operations


def minkowski_sum(polys: Sequence[Polytope]) -> Polytope:
    """Minkowski sum, folded pairwise with a hull after each step."""
    polys = list(polys)
    if not polys:
        raise ValueError("empty sum")
    m = polys[0].ambient_dim
    if any(P.ambient_dim != m for P in polys):
        raise ValueError("ambient dimension mismatch")
    acc = polys[0]
    for Q in polys[1:]:
        if len(Q.vertices) == 1:
            acc = acc.translate(Q.vertices[0])
        elif len(acc.vertices) == 1:
            acc = Q.translate(acc.vertices[0])
        else:
            acc = Polytope([add(u, v) for u in acc.vertices for v in Q.vertices])
    return acc


def face_summands(polys: Sequence[Polytope], F: Face) -> list[Face]:
    """Faces ``F_i`` of the summands with ``F = sum F_i``."""
    S = F.parent
    if S != minkowski_sum(polys):
        raise ValueError("face does not belong to the Minkowski sum of these polytopes")
    w = F.relint_functional()
    parts = [P.argmax_face(w) for P in polys]
    check = minkowski_sum([f.polytope for f in parts])
    if check != F.polytope:
        raise ValueError("face summand decomposition failed")
    return parts


def volume(P: Polytope) -> Surd:
    return P.volume()


def support_function(P: Polytope, v: Sequence) -> Fraction:
    return P.support_function(v)


def _coords_in(W: Subspace, P: Polytope) -> Polytope:
    v0 = P.vertices[0]
    return Polytope([W.coordinates(sub(v, v0)) for v in P.vertices], _checked=True)


def _mixed_volume_full(polys: Sequence[Polytope]) -> Fraction:
    """Inclusion-exclusion in Q^m with the standard coordinate volume."""
    m = len(polys)
    total = Fraction(0)
    for k in range(1, m + 1):
        sign = (-1) ** (m - k)
        for S in combinations(range(m), k):
            Q = minkowski_sum([polys[i] for i in S])
            if Q.dim == m:
                total += sign * Q.lebesgue_volume()
    return total / math.factorial(m)


def mixed_volume(polys: Sequence[Polytope], within: Subspace | None = None) -> Surd:
    """Mixed volume normalised so that ``mixed_volume([P]*m) == volume(P)``.

    Without ``within`` the polytopes must number the ambient dimension.  With
    ``within`` (a subspace of dimension ``len(polys)``) each polytope must lie
    in a translate of it and the intrinsic mixed volume is returned.
    """
    polys = list(polys)
    if not polys:
        return Surd(1)
    m = polys[0].ambient_dim
    if any(P.ambient_dim != m for P in polys):
        raise ValueError("ambient dimension mismatch")
    if within is None:
        if len(polys) != m:
            raise ValueError(f"need {m} polytopes in R^{m}, got {len(polys)}")
        return Surd(_mixed_volume_full(polys))
    if within.dim != len(polys):
        raise ValueError("subspace dimension must equal the number of polytopes")
    for P in polys:
        if not within.contains_subspace(P.tangent):
            raise ValueError("polytope does not lie in a translate of the subspace")
    local = [_coords_in(within, P) for P in polys]
    return Surd.sqrt(gram_det(within.basis)) * _mixed_volume_full(local)


def rank(polys: Sequence[Polytope]) -> int:
    """min over nonempty subsets S of dim(sum_S) - |S| (real affine dimension)."""
    polys = list(polys)
    best = None
    for k in range(1, len(polys) + 1):
        for S in combinations(range(len(polys)), k):
            T = Subspace.span([b for i in S for b in polys[i].tangent.basis], polys[0].ambient_dim)
            val = T.dim - k
            best = val if best is None else min(best, val)
    return best


def complex_rank(polys: Sequence[Polytope]) -> int:
    """Same minimisation with the complex dimension of the smallest complex affine hull."""
    polys = list(polys)
    m = polys[0].ambient_dim
    if m % 2:
        raise ValueError("complex rank needs ambient dimension 2n")
    best = None
    for k in range(1, len(polys) + 1):
        for S in combinations(range(len(polys)), k):
            T = Subspace.span([b for i in S for b in polys[i].tangent.basis], m)
            val = complex_hull(T).dim // 2 - k
            best = val if best is None else min(best, val)
    return best
