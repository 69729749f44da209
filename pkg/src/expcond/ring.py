"""The graded polytope ring: virtual polytopes, pure-power normal forms and pairings.

Elements are finite sums ``sum c_i * Gamma_i^k`` of pure powers of virtual
polytopes.  Any monomial ``D_1 * ... * D_k`` is rewritten in this form by
polarization, so evaluating a symmetric multilinear form (mixed volume,
mixed pseudovolume) only ever needs its diagonal ``nu(Gamma, ..., Gamma)``.
For a virtual ``Gamma = P - Q`` the diagonal is a polynomial of degree ``k``
in ``t`` along ``P + tQ``; it is sampled at ``t = 0..k`` and extrapolated
to ``t = -1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exactnum import Surd, mat_mul, rat
from .polytope import Polytope
from .pseudovolume import AngleConfig, pseudovolume
from .tropical import WeightedFan, canonical, fan_add


def _zero_polytope(m: int) -> Polytope:
    return Polytope.point([0] * m)


class VirtualPolytope:
    """Formal difference ``plus - minus`` of translation classes of polytopes."""

    __slots__ = ("plus", "minus")

    def __init__(self, plus: Polytope, minus: Polytope | None = None):
        if minus is None:
            minus = _zero_polytope(plus.ambient_dim)
        if plus.ambient_dim != minus.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        self.plus = plus.normalized()
        self.minus = minus.normalized()

    @property
    def ambient_dim(self) -> int:
        return self.plus.ambient_dim

    @classmethod
    def zero(cls, m: int) -> "VirtualPolytope":
        return cls(_zero_polytope(m))

    def __eq__(self, other) -> bool:
        if not isinstance(other, VirtualPolytope):
            return NotImplemented
        if self.plus == other.plus and self.minus == other.minus:
            return True
        return (self.plus + other.minus).normalized() == (other.plus + self.minus).normalized()

    def __hash__(self):
        raise TypeError("virtual polytopes have no canonical hash; compare with ==")

    def is_zero(self) -> bool:
        return self.plus == self.minus

    def __add__(self, other: "VirtualPolytope") -> "VirtualPolytope":
        return VirtualPolytope(self.plus + other.plus, self.minus + other.minus)

    def __neg__(self) -> "VirtualPolytope":
        return VirtualPolytope(self.minus, self.plus)

    def __sub__(self, other: "VirtualPolytope") -> "VirtualPolytope":
        return self + (-other)

    def scale(self, c) -> "VirtualPolytope":
        c = rat(c)
        if c >= 0:
            return VirtualPolytope(self.plus.scale(c), self.minus.scale(c))
        return VirtualPolytope(self.minus.scale(-c), self.plus.scale(-c))

    def linear_image(self, A) -> "VirtualPolytope":
        return VirtualPolytope(self.plus.linear_image(A), self.minus.linear_image(A))

    def __repr__(self) -> str:
        if self.minus.dim == 0:
            return f"V({self.plus!r})"
        return f"V({self.plus!r} - {self.minus!r})"


def as_virtual(x) -> VirtualPolytope:
    return x if isinstance(x, VirtualPolytope) else VirtualPolytope(x)


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    base: VirtualPolytope
    degree: int


class RingElement:
    """Graded element ``sum c_i * base_i^degree_i`` of the polytope ring on R^m."""

    def __init__(self, ambient_dim: int, terms: Sequence[Term] = ()):
        self.ambient_dim = ambient_dim
        merged: list[Term] = []
        for t in terms:
            if t.base.ambient_dim != ambient_dim:
                raise ValueError("term lives in a different space")
            c = rat(t.coeff)
            base = VirtualPolytope.zero(ambient_dim) if t.degree == 0 else t.base
            if c == 0 or (t.degree > 0 and base.is_zero()):
                continue
            for i, u in enumerate(merged):
                if u.degree == t.degree and u.base == base:
                    merged[i] = Term(u.coeff + c, u.base, u.degree)
                    break
            else:
                merged.append(Term(c, base, t.degree))
        self.terms = tuple(t for t in merged if t.coeff != 0)

    # -- constructors ----------------------------------------------------
    @classmethod
    def scalar(cls, m: int, c=1) -> "RingElement":
        return cls(m, [Term(rat(c), VirtualPolytope.zero(m), 0)])

    @classmethod
    def power(cls, P, k: int = 1, coeff=1) -> "RingElement":
        P = as_virtual(P)
        return cls(P.ambient_dim, [Term(rat(coeff), P, k)])

    # -- structure --------------------------------------------------------
    @property
    def degrees(self) -> set[int]:
        return {t.degree for t in self.terms}

    def component(self, k: int) -> "RingElement":
        return RingElement(self.ambient_dim, [t for t in self.terms if t.degree == k])

    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    def degree(self) -> int:
        if not self.is_homogeneous():
            raise ValueError("element is not homogeneous")
        return next(iter(self.degrees), 0)

    def __add__(self, other: "RingElement") -> "RingElement":
        _same_space(self, other)
        return RingElement(self.ambient_dim, self.terms + other.terms)

    def __neg__(self) -> "RingElement":
        return self * -1

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def __mul__(self, c) -> "RingElement":
        if isinstance(c, RingElement):
            return ring_multiply(self, c)
        c = rat(c)
        return RingElement(self.ambient_dim, [Term(t.coeff * c, t.base, t.degree) for t in self.terms])

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self.terms:
            return "RingElement(0)"
        return " + ".join(f"{t.coeff}*{t.base!r}^{t.degree}" for t in self.terms)


def _same_space(x: RingElement, y: RingElement) -> None:
    if x.ambient_dim != y.ambient_dim:
        raise ValueError(f"elements live in R^{x.ambient_dim} and R^{y.ambient_dim}")


def _polarize_multiset(factors: Sequence[tuple[VirtualPolytope, int]], m: int) -> list[Term]:
    """Pure-power expansion of ``prod V_i^{m_i}`` (k = sum m_i)."""
    k = sum(e for _, e in factors)
    if k == 0:
        return [Term(Fraction(1), VirtualPolytope.zero(m), 0)]
    if len(factors) == 1:
        return [Term(Fraction(1), factors[0][0], k)]
    out = []
    kf = math.factorial(k)
    for a in product(*(range(e + 1) for _, e in factors)):
        s = sum(a)
        if s == 0:
            continue
        c = Fraction((-1) ** (k - s), kf)
        for (_, e), ai in zip(factors, a):
            c *= math.comb(e, ai)
        base = VirtualPolytope.zero(m)
        for (V, _), ai in zip(factors, a):
            if ai:
                base = base + V.scale(ai)
        out.append(Term(c, base, k))
    return out


def polarize(monomial: Sequence) -> RingElement:
    """Rewrite ``D_1 * ... * D_k`` as a combination of pure k-th powers."""
    vs = [as_virtual(D) for D in monomial]
    if not vs:
        raise ValueError("empty monomial")
    m = vs[0].ambient_dim
    groups: list[list] = []
    for v in vs:
        for g in groups:
            if g[0] == v:
                g[1] += 1
                break
        else:
            groups.append([v, 1])
    return RingElement(m, _polarize_multiset([(g[0], g[1]) for g in groups], m))


def ring_multiply(x: RingElement, y: RingElement) -> RingElement:
    _same_space(x, y)
    m = x.ambient_dim
    terms = []
    for s in x.terms:
        for t in y.terms:
            if s.degree == 0 or t.degree == 0:
                base = t.base if s.degree == 0 else s.base
                terms.append(Term(s.coeff * t.coeff, base, s.degree + t.degree))
                continue
            if s.base == t.base:
                factors = [(s.base, s.degree + t.degree)]
            else:
                factors = [(s.base, s.degree), (t.base, t.degree)]
            for u in _polarize_multiset(factors, m):
                terms.append(Term(u.coeff * s.coeff * t.coeff, u.base, u.degree))
    return RingElement(m, terms)


def pushforward(A: Sequence[Sequence], x: RingElement) -> RingElement:
    """Image under the linear map ``A`` (rows = target coordinates)."""
    A = [[rat(a) for a in row] for row in A]
    if any(len(row) != x.ambient_dim for row in A):
        raise ValueError(f"map must have {x.ambient_dim} columns")
    m2 = len(A)
    return RingElement(
        m2, [Term(t.coeff, t.base.linear_image(A), t.degree) for t in x.terms]
    )


def compose(B: Sequence[Sequence], A: Sequence[Sequence]) -> list[list[Fraction]]:
    return mat_mul(B, A)


# ---------------------------------------------------------------------------
# pairings


@dataclass(frozen=True)
class PairingValue:
    value: float
    exact: Fraction | None = None
    error_bound: float = 0.0

    def __post_init__(self):
        if self.exact is not None and abs(self.value - float(self.exact)) > 1e-12 * max(1.0, abs(self.value)):
            raise ValueError("numeric value disagrees with the exact value")


def _lagrange_at_minus_one(k: int) -> list[Fraction]:
    """Weights w_t with p(-1) = sum_t w_t p(t), t = 0..k, for deg p <= k."""
    ws = []
    for t in range(k + 1):
        w = Fraction(1)
        for s in range(k + 1):
            if s != t:
                w *= Fraction(-1 - s, t - s)
        ws.append(w)
    return ws


def _diagonal(V: VirtualPolytope, k: int, f):
    """``nu(V, ..., V)`` for a form with diagonal ``f`` on genuine polytopes."""
    if V.minus.dim == 0:
        return [(Fraction(1), f(V.plus))]
    ws = _lagrange_at_minus_one(k)
    return [(w, f(V.plus + V.minus.scale(t))) for t, w in enumerate(ws)]


def eval_I(nu: str, x: RingElement, cfg: AngleConfig | None = None) -> PairingValue:
    """``I_nu``: the form on the top-degree component, zero elsewhere."""
    m = x.ambient_dim
    if nu == "vol":
        top = m
        exact = Fraction(0)
        for t in x.terms:
            if t.degree != top:
                continue
            for w, v in _diagonal(t.base, top, lambda P: P.lebesgue_volume()):
                exact += t.coeff * w * v
        return PairingValue(float(exact), exact, 0.0)
    if nu in ("pseudo", "p"):
        if m % 2:
            raise ValueError("the pseudovolume pairing needs R^{2n}")
        top = m // 2
        cfg = cfg or AngleConfig()
        total = 0.0
        var = 0.0
        for t in x.terms:
            if t.degree != top:
                continue
            for w, r in _diagonal(t.base, top, lambda P: pseudovolume(P, cfg)):
                c = float(t.coeff * w)
                total += c * r.value
                var += (c * r.error_bound) ** 2
        return PairingValue(total, None, math.sqrt(var))
    raise ValueError(f"unknown form {nu!r}; use 'vol' or 'pseudo'")


def eval_L(nu: str, x: RingElement, y: RingElement, cfg: AngleConfig | None = None) -> PairingValue:
    return eval_I(nu, ring_multiply(x, y), cfg)


# ---------------------------------------------------------------------------
# weighted fans and J_vol


def _virtual_volume(V: VirtualPolytope, d: int) -> Surd:
    """Intrinsic d-volume of a virtual polytope lying in a d-dimensional direction."""

    def vol(P: Polytope) -> Surd:
        return P.volume() if P.dim == d else Surd(0)

    tot = Surd(0)
    for w, v in _diagonal(V, d, vol):
        tot = tot + v * w
    return tot


def _fan_of_power(V: VirtualPolytope, d: int) -> WeightedFan:
    m = V.ambient_dim
    k = m - d
    S = V.plus + V.minus
    if S.dim < d:
        return WeightedFan.empty(m, k)
    cells = []
    for F in S.faces(d):
        w = F.relint_functional()
        piece = VirtualPolytope(V.plus.argmax_face(w).polytope, V.minus.argmax_face(w).polytope)
        cells.append((F.dual_cone, _virtual_volume(piece, d)))
    return WeightedFan(m, k, tuple(cells))


def weighted_fan_of(x: RingElement) -> WeightedFan:
    """Dual weighted fan of a homogeneous element (refined, zero cells removed)."""
    d = x.degree()
    m = x.ambient_dim
    k = m - d
    if k < 0:
        return WeightedFan.empty(m, k)
    fans = [_fan_of_power(t.base, d).scaled(t.coeff) for t in x.terms]
    if not fans:
        return WeightedFan.empty(m, k)
    return fan_add(*fans)


def in_Jvol(x: RingElement) -> bool:
    """Membership in the kernel of the volume pairing via vanishing fan weights."""
    if not x.is_homogeneous():
        raise ValueError("J_vol membership is tested on homogeneous elements")
    if x.degree() > x.ambient_dim:
        return True
    return len(canonical(weighted_fan_of(x)).cones) == 0


def support_expansion(upsilon: Polytope, x: RingElement) -> Surd:
    """``sum_v h_upsilon(v) * (m-1)! * w_v`` over the rays of the fan of ``x``.

    ``v`` runs over unit ray directions of the weighted fan of ``x`` (degree
    ``m - 1``); lines contribute both of their directions.
    """
    m = x.ambient_dim
    if x.degree() != m - 1:
        raise ValueError("support expansion needs an element of degree m - 1")
    F = weighted_fan_of(x)
    fact = math.factorial(m - 1)
    tot = Surd(0)
    for C, w in F.cones:
        dirs = list(C.rays) or [C.lineality.basis[0], tuple(-a for a in C.lineality.basis[0])]
        for r in dirs:
            n2 = sum(a * a for a in r)
            h = upsilon.support_function(r)
            tot = tot + w * Surd.sqrt(Fraction(1, n2)) * h * fact
    return tot
