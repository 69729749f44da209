"""Weighted fans: addition, equivalence, factorization and stable intersection.

A :class:`WeightedFan` keeps only its top-dimensional cones, each with an
exact :class:`~expcond.exactnum.Surd` weight in Euclidean units (the weight of
the cone dual to a face is the face's intrinsic volume).  Lower cones are
implicit as faces.  Overlapping top cones are allowed on input; every
operation that compares or combines fans first refines the cones sharing a
linear span by the arrangement of all their facet hyperplanes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exactnum import (
    Subspace,
    Surd,
    dot,
    orthogonal_complement,
    primitive,
    subspace_cosine_squared,
    vec,
)
from .polytope import Cone, Polytope

NORMALIZATION = "euclidean"


class InstabilityError(RuntimeError):
    """Admissible points gave different products (input fan is not tropical)."""


class InadmissiblePointError(ValueError):
    pass


def _as_surd(w) -> Surd:
    return w if isinstance(w, Surd) else Surd(w)


@dataclass(frozen=True)
class WeightedFan:
    ambient_dim: int
    dim: int
    cones: tuple  # tuple[(Cone, Surd), ...]
    normalization: str = NORMALIZATION

    def __post_init__(self):
        cones = tuple((K, _as_surd(w)) for K, w in self.cones)
        for K, _ in cones:
            if K.ambient_dim != self.ambient_dim:
                raise ValueError("cone lives in a different ambient space")
            if K.dim != self.dim:
                raise ValueError(f"top cone of dimension {K.dim} in a {self.dim}-dimensional fan")
        object.__setattr__(self, "cones", cones)

    @classmethod
    def empty(cls, ambient_dim: int, dim: int) -> "WeightedFan":
        return cls(ambient_dim, dim, ())

    def __len__(self) -> int:
        return len(self.cones)

    def scaled(self, c) -> "WeightedFan":
        return WeightedFan(self.ambient_dim, self.dim, tuple((K, w * c) for K, w in self.cones))

    def __neg__(self) -> "WeightedFan":
        return self.scaled(-1)

    def weight_at(self, x: Sequence) -> Surd:
        """Total weight of the top cones containing ``x`` (meant for generic points)."""
        tot = Surd(0)
        for K, w in self.cones:
            if K.contains(x):
                tot = tot + w
        return tot

    def is_zero(self) -> bool:
        return all(w.is_zero() for _, w in canonical(self).cones)

    def support_key(self) -> frozenset:
        return frozenset(K.key for K, w in canonical(self).cones)


# ---------------------------------------------------------------------------
# refinement


def _hyperplanes(cones: Iterable[Cone]) -> list[tuple]:
    seen = {}
    for K in cones:
        for n in K.facet_normals:
            p = primitive(n)
            neg = tuple(-a for a in p)
            key = max(p, neg)
            seen[key] = key
    return sorted(seen)


def _split(K: Cone, normals: Sequence[tuple]) -> list[Cone]:
    cells = [K]
    for h in normals:
        nxt = []
        for X in cells:
            vals = [dot(h, g) for g in X.generators]
            if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
                nxt.append(X)
                continue
            for s in (1, -1):
                hs = tuple(s * a for a in h)
                Y = Cone.from_inequalities(list(X.facet_normals) + [hs], X.span)
                if Y.dim == K.dim:
                    nxt.append(Y)
        cells = nxt
    return cells


def _refine(fans: Sequence[WeightedFan]) -> list[tuple[Cone, list[Surd]]]:
    """Common refinement: chambers with the weight each fan puts on them."""
    groups: dict = {}
    for i, F in enumerate(fans):
        for K, w in F.cones:
            groups.setdefault(K.span.basis, []).append((i, K, w))
    out = []
    for _, items in sorted(groups.items()):
        H = _hyperplanes(K for _, K, _ in items)
        chambers: dict = {}
        for _, K, _ in items:
            for C in _split(K, H):
                chambers.setdefault(C.key, C)
        for key in sorted(chambers):
            C = chambers[key]
            p = C.relint_point()
            ws = [Surd(0) for _ in fans]
            for i, K, w in items:
                if K.contains(p):
                    ws[i] = ws[i] + w
            out.append((C, ws))
    return out


def _check_compatible(fans: Sequence[WeightedFan]) -> None:
    f0 = fans[0]
    for F in fans[1:]:
        if F.ambient_dim != f0.ambient_dim:
            raise ValueError("fans live in different ambient spaces")
        if F.dim != f0.dim:
            raise ValueError(f"fan dimensions differ: {f0.dim} != {F.dim}")


def canonical(F: WeightedFan) -> WeightedFan:
    """Refined representative with zero-weight chambers removed."""
    cells = [(C, ws[0]) for C, ws in _refine([F]) if not ws[0].is_zero()]
    return WeightedFan(F.ambient_dim, F.dim, tuple(cells), F.normalization)


def fan_add(*fans: WeightedFan) -> WeightedFan:
    if not fans:
        raise ValueError("nothing to add")
    _check_compatible(fans)
    merged = WeightedFan(
        fans[0].ambient_dim, fans[0].dim, tuple(c for F in fans for c in F.cones)
    )
    return canonical(merged)


def fan_equivalent(K: WeightedFan, L: WeightedFan) -> bool:
    if K.ambient_dim != L.ambient_dim or K.dim != L.dim:
        return False
    return all(a == b for _, (a, b) in _refine([K, L]))


# ---------------------------------------------------------------------------
# constructors


def dual_fan(P: Polytope, k: int) -> WeightedFan:
    """Cones of dimension ``k`` of the normal fan of ``P``, weighted by face volume."""
    m = P.ambient_dim
    d = m - k
    if not 0 <= k <= m:
        raise ValueError("fan dimension out of range")
    if d > P.dim:
        return WeightedFan.empty(m, k)
    return WeightedFan(m, k, tuple((F.dual_cone, F.volume()) for F in P.faces(d)))


def subspace_fan(L: Subspace, weight=1) -> WeightedFan:
    return WeightedFan(L.ambient_dim, L.dim, ((Cone.subspace(L), Surd(weight)),))


def balance_defect(F: WeightedFan) -> tuple:
    """``sum w * unit direction`` over the rays of a one-dimensional fan."""
    if F.dim != 1:
        raise ValueError("balancing is only checked for one-dimensional fans")
    tot = [Surd(0) for _ in range(F.ambient_dim)]
    for C, w in canonical(F).cones:
        if not C.rays:
            continue  # a line is balanced on its own
        (r,) = C.rays
        inv_len = Surd.sqrt(Fraction(1, dot(r, r)))
        for j, a in enumerate(r):
            if a:
                tot[j] = tot[j] + w * inv_len * a
    return tuple(tot)


# ---------------------------------------------------------------------------
# admissible points and the e-intersection


def _proper_sums(K: WeightedFan, L: WeightedFan) -> list[Subspace]:
    m = K.ambient_dim
    fk = {C.span.basis: C.span for T, _ in K.cones for C in T.faces()}
    fl = {C.span.basis: C.span for T, _ in L.cones for C in T.faces()}
    out = {}
    for A in fk.values():
        for B in fl.values():
            S = A + B
            if S.dim < m:
                out[S.basis] = S
    return list(out.values())


def is_admissible(K: WeightedFan, L: WeightedFan, e: Sequence) -> bool:
    e = vec(e)
    return not any(S.contains(e) for S in _proper_sums(K, L))


def admissible_point(K: WeightedFan, L: WeightedFan, seed: int = 0) -> tuple:
    """Rational ``e`` outside every proper subspace ``V_K' + V_L'``."""
    if K.ambient_dim != L.ambient_dim:
        raise ValueError("fans live in different ambient spaces")
    m = K.ambient_dim
    bad = _proper_sums(K, L)
    rng = np.random.default_rng(seed)
    bound = 7
    while True:
        for _ in range(16):
            e = vec(int(a) for a in rng.integers(-bound, bound + 1, size=m))
            if not any(S.contains(e) for S in bad):
                return e
        bound *= 4


def _product_weight(Kc: Cone, Lc: Cone, M: Cone, m: int) -> Surd:
    a = m - Kc.dim
    b = m - Lc.dim
    coef = Fraction(math.factorial(a) * math.factorial(b), math.factorial(a + b))
    if b == 0:
        return Surd(coef)
    A = orthogonal_complement(Lc.span)
    B = Kc.span.intersect(orthogonal_complement(M.span))
    return Surd.sqrt(subspace_cosine_squared(A, B)) * coef


def e_intersection(K: WeightedFan, L: WeightedFan, e: Sequence) -> WeightedFan:
    """Fan displacement product of two weighted fans at the shift ``e``."""
    m = K.ambient_dim
    if L.ambient_dim != m:
        raise ValueError("fans live in different ambient spaces")
    e = vec(e)
    r = K.dim + L.dim - m
    if r < 0:
        return WeightedFan.empty(m, r)
    if not is_admissible(K, L, e):
        raise InadmissiblePointError(f"{e} is not admissible for this pair of fans")
    full = Subspace.full(m)
    cells = []
    for Kc, wK in K.cones:
        for Lc, wL in L.cones:
            if wK.is_zero() or wL.is_zero():
                continue
            if (Kc.span + Lc.span) != full:
                continue
            M = Kc.intersection(Lc)
            if M.dim != r:
                continue
            x = M.relint_point()
            gens = list(Lc.generators) + [tuple(-a for a in g) for g in Kc.generators]
            if any(x):
                gens += [x, tuple(-a for a in x)]
            if not Cone.from_generators(gens, m).contains(e):
                continue
            cells.append((M, wK * wL * _product_weight(Kc, Lc, M, m)))
    return canonical(WeightedFan(m, r, tuple(cells)))


def stable_product(K: WeightedFan, L: WeightedFan, seed: int = 0, checks: int = 3) -> WeightedFan:
    """e-intersection certified by agreement at ``checks`` admissible points."""
    results = []
    points = []
    s = seed
    while len(points) < checks:
        e = admissible_point(K, L, s)
        s += 1
        if e not in points:
            points.append(e)
    for e in points:
        results.append(e_intersection(K, L, e))
    for other in results[1:]:
        if not fan_equivalent(results[0], other):
            raise InstabilityError(f"products at {points} disagree")
    return results[0]


def factorize(F: WeightedFan, U: Subspace, anchor: Cone) -> WeightedFan:
    """Top cones containing ``anchor`` projected to ``U^perp`` (a model of E*/U)."""
    if not anchor.span.contains_subspace(U):
        raise ValueError("U is not contained in the span of the anchor cone")
    cells = []
    for C, w in F.cones:
        if C.contains_cone(anchor):
            cells.append((C.project_out(U), w))
    return WeightedFan(F.ambient_dim, F.dim - U.dim, tuple(cells))


def zero_cone_weight(F: WeightedFan) -> Surd:
    """Weight of the zero cone of a 0-dimensional fan (0 if the fan is empty)."""
    if F.dim != 0:
        raise ValueError("not a zero-dimensional fan")
    tot = Surd(0)
    for _, w in F.cones:
        tot = tot + w
    return tot
