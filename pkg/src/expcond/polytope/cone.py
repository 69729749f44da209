"""Rational polyhedral cones with exact V- and H-descriptions."""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from ..exactnum import (
    Subspace,
    dot,
    gram,
    is_zero,
    nullspace,
    orthogonal_complement,
    primitive,
    rref,
    solve_linear,
    vec,
)
from ._dd import extreme_rays


def _pointed_part(A: Sequence[Sequence], k: int) -> tuple[list, list]:
    """Lineality basis and extreme rays (coordinates) of ``{c in Q^k : A c >= 0}``."""
    if not A:
        eye = [tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k)]
        return eye, []
    lin = nullspace(A, k)
    W, _ = rref(A)
    r = len(W)
    if r == 0:
        return lin, []
    # c = W^T z
    AW = [[dot(a, w) for w in W] for a in A]
    zs = extreme_rays(AW, r)
    rays = []
    for z in zs:
        c = [Fraction(0)] * k
        for zi, w in zip(z, W):
            for j in range(k):
                c[j] += zi * w[j]
        rays.append(tuple(c))
    return lin, rays


def _from_coords(basis: Sequence[Sequence], c: Sequence) -> tuple:
    m = len(basis[0])
    out = [Fraction(0)] * m
    for ci, b in zip(c, basis):
        if ci:
            for j in range(m):
                out[j] += ci * b[j]
    return tuple(out)


def _functional_to_ambient(basis: Sequence[Sequence], f: Sequence) -> tuple:
    """Vector n in span(basis) with n . (sum c_i b_i) = f . c."""
    G = gram(basis)
    y = solve_linear(G, f)
    return _from_coords(basis, y)


class Cone:
    """Convex polyhedral cone ``K`` in R^m.

    Stored canonically as a lineality subspace plus primitive extreme rays of
    ``K`` projected onto the orthogonal complement of the lineality space.
    Facet normals ``n`` satisfy ``n . x >= 0`` on ``K`` and lie in ``V_K``.
    """

    def __init__(self, ambient_dim: int, lineality: Subspace, rays: Iterable[Sequence]):
        self.ambient_dim = ambient_dim
        self.lineality = lineality
        lperp = orthogonal_complement(lineality) if lineality.dim else None
        canon = set()
        for r in rays:
            r = vec(r)
            if lperp is not None:
                r = lperp.project(r)
            if not is_zero(r):
                canon.add(primitive(r))
        self.rays = tuple(sorted(canon))

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_generators(cls, generators: Iterable[Sequence], ambient_dim: int) -> "Cone":
        gens = [vec(g) for g in generators if not is_zero(g)]
        span = Subspace.span(gens, ambient_dim)
        k = span.dim
        if k == 0:
            return cls(ambient_dim, Subspace.zero(ambient_dim), [])
        B = span.basis
        coords = [span.coordinates(g) for g in gens]
        facets = extreme_rays(coords, k)
        lin, rays = _pointed_part(facets, k)
        lineality = Subspace.span([_from_coords(B, c) for c in lin], ambient_dim)
        cone = cls(ambient_dim, lineality, [_from_coords(B, c) for c in rays])
        cone.__dict__["span"] = span
        return cone

    @classmethod
    def from_inequalities(
        cls, normals: Iterable[Sequence], space: Subspace
    ) -> "Cone":
        """``{x in space : n . x >= 0 for all n}``."""
        k = space.dim
        m = space.ambient_dim
        if k == 0:
            return cls(m, Subspace.zero(m), [])
        B = space.basis
        A = [[dot(n, b) for b in B] for n in normals]
        A = [row for row in A if any(row)]
        lin, rays = _pointed_part(A, k)
        gens = [_from_coords(B, c) for c in rays]
        for c in lin:
            v = _from_coords(B, c)
            gens.append(v)
            gens.append(tuple(-a for a in v))
        return cls.from_generators(gens, m)

    @classmethod
    def subspace(cls, S: Subspace) -> "Cone":
        return cls(S.ambient_dim, S, [])

    # -- basic data ------------------------------------------------------
    @cached_property
    def span(self) -> Subspace:
        return self.lineality + Subspace.span(self.rays, self.ambient_dim)

    @property
    def dim(self) -> int:
        return self.span.dim

    @property
    def generators(self) -> list[tuple]:
        gens = [vec(r) for r in self.rays]
        for b in self.lineality.basis:
            gens.append(b)
            gens.append(tuple(-a for a in b))
        return gens

    @cached_property
    def facet_normals(self) -> tuple:
        """Inward normals in ``V_K`` orthogonal to the lineality space."""
        if not self.rays:
            return ()
        V = self.span
        B = V.basis
        coords = [V.coordinates(g) for g in self.generators]
        fs = extreme_rays(coords, V.dim)
        return tuple(primitive(_functional_to_ambient(B, f)) for f in fs)

    @property
    def key(self) -> tuple:
        return (self.ambient_dim, self.lineality.basis, self.rays)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cone) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        rays = [list(map(int, r)) for r in self.rays]
        lin = [[str(a) for a in b] for b in self.lineality.basis]
        return f"Cone(dim={self.dim}, rays={rays}, lineality={lin})"

    def is_pointed(self) -> bool:
        return self.lineality.dim == 0

    def is_subspace(self) -> bool:
        return not self.rays

    # -- queries ----------------------------------------------------------
    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        if not self.span.contains(x):
            return False
        return all(dot(n, x) >= 0 for n in self.facet_normals)

    def in_relative_interior(self, x: Sequence) -> bool:
        x = vec(x)
        if not self.span.contains(x):
            return False
        return all(dot(n, x) > 0 for n in self.facet_normals)

    def relint_point(self) -> tuple:
        m = self.ambient_dim
        p = [Fraction(0)] * m
        for r in self.rays:
            for j in range(m):
                p[j] += r[j]
        if not self.rays and self.lineality.dim:
            return tuple(self.lineality.basis[0])
        return tuple(p)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators)

    def intersection(self, other: "Cone") -> "Cone":
        V = self.span.intersect(other.span)
        return Cone.from_inequalities(
            list(self.facet_normals) + list(other.facet_normals), V
        )

    def project_out(self, U: Subspace) -> "Cone":
        """Image under orthogonal projection onto ``U^perp``."""
        P = orthogonal_complement(U)
        return Cone.from_generators([P.project(g) for g in self.generators], self.ambient_dim)

    def faces(self) -> list["Cone"]:
        """All faces, from the lineality space up to the cone itself."""
        if not self.rays:
            return [self]
        normals = self.facet_normals
        incid = [
            frozenset(i for i, r in enumerate(self.rays) if dot(n, r) == 0) for n in normals
        ]
        full = frozenset(range(len(self.rays)))
        seen = {full}
        frontier = [full]
        while frontier:
            nxt = []
            for F in frontier:
                for S in incid:
                    G = F & S
                    if G not in seen:
                        seen.add(G)
                        nxt.append(G)
            frontier = nxt
        out = []
        for S in seen:
            gens = [self.rays[i] for i in S]
            gens += [b for b in self.lineality.basis] + [
                tuple(-a for a in b) for b in self.lineality.basis
            ]
            out.append(Cone.from_generators(gens, self.ambient_dim))
        uniq = {c.key: c for c in out}
        return sorted(uniq.values(), key=lambda c: (c.dim, c.key))
