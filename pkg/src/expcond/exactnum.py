"""Exact rational linear algebra over R^{2n} with the complex structure of C^n.

Vectors are tuples of :class:`fractions.Fraction`.  A point of ``(C^n)*`` is
stored as ``(Re z1, Im z1, ..., Re zn, Im zn)``.  Irrational quantities
(lengths, cosines) only appear through :class:`Surd`, a finite sum of
rational multiples of square roots, or through a final float.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction
Vec = tuple  # tuple[Fraction, ...]


def rat(x) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact coordinates")
    return Fraction(x)


def vec(xs: Iterable) -> Vec:
    return tuple(rat(x) for x in xs)


def rat_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence) -> Vec:
    return tuple(c * a for a in u)


def is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def primitive(u: Sequence) -> tuple[int, ...]:
    """Smallest integer vector positively proportional to ``u``."""
    den = 1
    for a in u:
        den = den * Fraction(a).denominator // math.gcd(den, Fraction(a).denominator)
    ints = [int(Fraction(a) * den) for a in u]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    if g == 0:
        return tuple(ints)
    return tuple(a // g for a in ints)


# ---------------------------------------------------------------------------
# row reduction


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[rat(a) for a in r] for r in rows]
    if not m:
        return [], []
    ncol = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [a * inv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_of(vectors: Sequence[Sequence]) -> int:
    """Rank of a list of vectors (exact)."""
    return len(rref(vectors)[1]) if len(vectors) else 0


def nullspace(rows: Sequence[Sequence], ncol: int | None = None) -> list[Vec]:
    """Basis of ``{x : row . x = 0 for every row}``."""
    if ncol is None:
        ncol = len(rows[0])
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncol)) for i in range(ncol)]
    red, piv = rref(rows)
    free = [c for c in range(ncol) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncol
        x[f] = Fraction(1)
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve_linear(M: Sequence[Sequence], b: Sequence) -> Vec | None:
    """One solution of ``M x = b`` or ``None`` when inconsistent."""
    ncol = len(M[0])
    aug = [list(map(rat, row)) + [rat(bi)] for row, bi in zip(M, b)]
    red, piv = rref(aug)
    if ncol in piv:
        return None
    x = [Fraction(0)] * ncol
    for row, p in zip(red, piv):
        x[p] = row[ncol]
    return tuple(x)


def det(M: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free Bareiss elimination on a rational matrix."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    den = 1
    for row in M:
        for a in row:
            den = den * Fraction(a).denominator // math.gcd(den, Fraction(a).denominator)
    A = [[int(Fraction(a) * den) for a in row] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return Fraction(sign * A[n - 1][n - 1], den**n)


def gram(A: Sequence[Sequence], B: Sequence[Sequence] | None = None) -> list[list[Fraction]]:
    B = A if B is None else B
    return [[dot(a, b) for b in B] for a in A]


def gram_det(A: Sequence[Sequence]) -> Fraction:
    return det(gram(A))


def mat_vec(M: Sequence[Sequence], v: Sequence) -> Vec:
    return tuple(dot(row, v) for row in M)


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list[Fraction]]:
    cols = list(zip(*B))
    return [[dot(r, c) for c in cols] for r in A]


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of R^m given by a basis, canonicalised to RREF."""

    ambient_dim: int
    basis: tuple  # tuple[Vec, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vs = [vec(v) for v in vectors]
        red, _ = rref(vs) if vs else ([], [])
        return cls(ambient_dim, tuple(tuple(r) for r in red))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls.span(
            [[int(i == j) for j in range(ambient_dim)] for i in range(ambient_dim)], ambient_dim
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        if is_zero(v):
            return True
        return rank_of(list(self.basis) + [vec(v)]) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        return orthogonal_complement(
            orthogonal_complement(self) + orthogonal_complement(other)
        )

    def project(self, v: Sequence) -> Vec:
        """Orthogonal projection of ``v`` onto this subspace (exact)."""
        if self.dim == 0:
            return tuple(Fraction(0) for _ in v)
        G = gram(self.basis)
        c = solve_linear(G, [dot(b, v) for b in self.basis])
        out = [Fraction(0)] * self.ambient_dim
        for ci, b in zip(c, self.basis):
            for j, bj in enumerate(b):
                out[j] += ci * bj
        return tuple(out)

    def coordinates(self, v: Sequence) -> Vec:
        """Coordinates of ``v`` (assumed inside) with respect to ``basis``."""
        M = [list(col) for col in zip(*self.basis)]
        x = solve_linear(M, v)
        if x is None:
            raise ValueError("vector is not in the subspace")
        return x


def orthogonal_complement(S: Subspace) -> Subspace:
    """Euclidean orthogonal complement inside R^ambient_dim."""
    if S.dim == 0:
        return Subspace.full(S.ambient_dim)
    return Subspace.span(nullspace(S.basis, S.ambient_dim), S.ambient_dim)


def complex_rotate(v: Sequence) -> Vec:
    """Multiply by sqrt(-1) coordinatewise on (Re, Im) pairs."""
    if len(v) % 2:
        raise ValueError("complex vectors need an even number of real coordinates")
    out = []
    for k in range(0, len(v), 2):
        out.extend((-v[k + 1], v[k]))
    return tuple(out)


def complex_rotate_subspace(S: Subspace) -> Subspace:
    return Subspace.span([complex_rotate(b) for b in S.basis], S.ambient_dim)


def complex_hull(S: Subspace) -> Subspace:
    """Smallest complex subspace containing S."""
    return S + complex_rotate_subspace(S)


def subspace_cosine_squared(A: Subspace, B: Subspace) -> Fraction:
    """Exact square of the volume distortion of orthogonal projection A -> B."""
    if A.dim != B.dim:
        raise ValueError(f"dimension mismatch: {A.dim} != {B.dim}")
    if A.dim == 0:
        return Fraction(1)
    dab = det(gram(A.basis, B.basis))
    return dab * dab / (gram_det(A.basis) * gram_det(B.basis))


def subspace_cosine(A: Subspace, B: Subspace) -> float:
    return math.sqrt(subspace_cosine_squared(A, B))


# ---------------------------------------------------------------------------
# GaussianVector


@dataclass(frozen=True)
class GaussianVector:
    """Exact point of (C^n)* stored as 2n rationals (Re, Im interleaved)."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", vec(self.coords))
        if len(self.coords) % 2:
            raise ValueError("GaussianVector needs 2n coordinates")

    @classmethod
    def from_complex_pairs(cls, pairs: Iterable[tuple]) -> "GaussianVector":
        out = []
        for re, im in pairs:
            out.extend((rat(re), rat(im)))
        return cls(tuple(out))

    @property
    def n(self) -> int:
        return len(self.coords) // 2

    def rotate(self) -> "GaussianVector":
        return GaussianVector(complex_rotate(self.coords))

    def conjugate(self) -> "GaussianVector":
        return GaussianVector(
            tuple(-a if k % 2 else a for k, a in enumerate(self.coords))
        )

    def to_complex(self) -> list[complex]:
        c = self.coords
        return [complex(float(c[2 * k]), float(c[2 * k + 1])) for k in range(self.n)]


# ---------------------------------------------------------------------------
# Surd: rational combinations of square roots


def _split_square(r: int) -> tuple[int, int]:
    """Write r = s^2 * t with small square factors pulled out; returns (s, t)."""
    s = 1
    root = math.isqrt(r)
    if root * root == r:
        return root, 1
    p = 2
    while p * p <= r and p < 2000:
        pp = p * p
        while r % pp == 0:
            r //= pp
            s *= p
        p += 1 if p == 2 else 2
    root = math.isqrt(r)
    if root * root == r:
        return s * root, 1
    return s, r


class Surd:
    """Finite sum ``sum_r c_r * sqrt(r)`` with rational ``c_r`` and integer ``r > 0``.

    Radicands are kept pairwise independent (no product of two keys is a
    perfect square), so the representation is unique and equality is exact.
    """

    __slots__ = ("_t",)

    def __init__(self, value=0):
        if isinstance(value, Surd):
            self._t = dict(value._t)
            return
        q = rat(value)
        self._t = {1: q} if q != 0 else {}

    @classmethod
    def sqrt(cls, q) -> "Surd":
        q = rat(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        out = cls()
        if q == 0:
            return out
        s, t = _split_square(q.numerator * q.denominator)
        out._t = {t: Fraction(s, q.denominator)}
        return out

    @classmethod
    def _from_terms(cls, terms: dict) -> "Surd":
        out = cls()
        for r, c in terms.items():
            out._iadd_term(r, c)
        return out

    def _iadd_term(self, r: int, c: Fraction) -> None:
        if c == 0:
            return
        if r in self._t:
            key = r
            coef = c
        else:
            key = None
            for k in self._t:
                prod = k * r
                root = math.isqrt(prod)
                if root * root == prod:
                    key = k
                    coef = c * Fraction(root, k)  # sqrt(r) = sqrt(k r)/k * sqrt(k)
                    break
            if key is None:
                self._t[r] = c
                return
        v = self._t[key] + coef
        if v == 0:
            del self._t[key]
        else:
            self._t[key] = v

    def __add__(self, other):
        other = other if isinstance(other, Surd) else Surd(other)
        out = Surd(self)
        for r, c in other._t.items():
            out._iadd_term(r, c)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Surd()
        out._t = {r: -c for r, c in self._t.items()}
        return out

    def __sub__(self, other):
        return self + (-(other if isinstance(other, Surd) else Surd(other)))

    def __rsub__(self, other):
        return Surd(other) - self

    def __mul__(self, other):
        if not isinstance(other, Surd):
            q = rat(other)
            out = Surd()
            if q != 0:
                out._t = {r: c * q for r, c in self._t.items()}
            return out
        out = Surd()
        for r1, c1 in self._t.items():
            for r2, c2 in other._t.items():
                g = math.gcd(r1, r2)
                s, t = _split_square((r1 // g) * (r2 // g))
                out._iadd_term(t, c1 * c2 * g * s)
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = rat(other)
        return self * (1 / q)

    def __float__(self) -> float:
        return float(sum(float(c) * math.sqrt(r) for r, c in self._t.items()))

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_rational(self) -> bool:
        return set(self._t) <= {1}

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._t.get(1, Fraction(0))

    def terms(self) -> dict:
        return dict(self._t)

    def sign(self) -> int:
        # exact when a single term, float otherwise
        if not self._t:
            return 0
        if len(self._t) == 1:
            return 1 if next(iter(self._t.values())) > 0 else -1
        return 1 if float(self) > 0 else -1

    def __eq__(self, other) -> bool:
        if isinstance(other, float):
            return False
        try:
            return (self - other).is_zero()
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __repr__(self) -> str:
        if not self._t:
            return "Surd(0)"
        parts = []
        for r, c in sorted(self._t.items()):
            parts.append(rat_str(c) if r == 1 else f"{rat_str(c)}*sqrt({r})")
        return "Surd(" + " + ".join(parts) + ")"

    def __str__(self) -> str:
        if not self._t:
            return "0"
        return " + ".join(
            rat_str(c) if r == 1 else f"{rat_str(c)}*sqrt({r})" for r, c in sorted(self._t.items())
        )

    def to_json(self) -> dict:
        return {"terms": [[rat_str(c), r] for r, c in sorted(self._t.items())], "value": float(self)}
