"""Exponential sums, their Newton polytopes, intersection indices and density oracles.

An exponential sum on C^n is ``f(z) = sum_k c_k exp(s * lambda_k(z))`` with
``lambda_k(z) = sum_j lambda_kj z_j``, Gaussian-rational ``c_k`` and
``lambda_kj`` and a per-sum scale ``s`` that is 1 or 2*pi.  The exponent
``lambda_k`` is stored as the point ``(Re lambda_k1, Im lambda_k1, ...)`` of
``(C^n)* = R^{2n}``.
"""
from __future__ import annotations

import ast
import cmath
import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate

from .exactnum import (
    GaussianVector,
    Subspace,
    Surd,
    complex_rotate_subspace,
    gram_det,
    nullspace,
    orthogonal_complement,
    rat,
    rat_str,
    solve_linear,
    subspace_cosine_squared,
)
from .polytope import Polytope, complex_rank
from .pseudovolume import AngleConfig, PseudoVolumeResult, mixed_pseudovolume

TWO_PI = 2 * math.pi


class ExpSumParseError(ValueError):
    def __init__(self, msg: str, pos: int | None = None):
        self.pos = pos
        super().__init__(msg if pos is None else f"{msg} (at position {pos})")


# ---------------------------------------------------------------------------
# Gaussian rationals


@dataclass(frozen=True)
class GaussRat:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", rat(self.re))
        object.__setattr__(self, "im", rat(self.im))

    def __add__(self, o):
        return GaussRat(self.re + o.re, self.im + o.im)

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __truediv__(self, o):
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero")
        return GaussRat((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __bool__(self):
        return bool(self.re or self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_json(self) -> list[str]:
        return [rat_str(self.re), rat_str(self.im)]

    def __str__(self) -> str:
        if not self.im:
            return rat_str(self.re)
        if not self.re:
            return f"{rat_str(self.im)}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({rat_str(self.re)}{sign}{rat_str(abs(self.im))}*i)"


ZERO = GaussRat(0)
ONE = GaussRat(1)


# ---------------------------------------------------------------------------
# ExpSum


@dataclass(frozen=True)
class ExpSum:
    n: int
    terms: tuple  # tuple[(GaussRat coeff, GaussianVector exponent), ...], sorted by exponent
    two_pi: bool = False

    def __post_init__(self):
        merged: dict = {}
        for c, lam in self.terms:
            lam = lam if isinstance(lam, GaussianVector) else GaussianVector(lam)
            if lam.n != self.n:
                raise ValueError(f"exponent {lam.coords} is not a functional on C^{self.n}")
            if not c:
                raise ValueError("zero coefficient")
            merged[lam.coords] = merged.get(lam.coords, ZERO) + c
        terms = tuple(
            (c, GaussianVector(k)) for k, c in sorted(merged.items()) if c
        )
        if not terms:
            raise ValueError("exponential sum is identically zero")
        object.__setattr__(self, "terms", terms)

    @property
    def scale(self) -> float:
        return TWO_PI if self.two_pi else 1.0

    def __call__(self, z: Sequence[complex]) -> complex:
        return sum(complex(c) * cmath.exp(self.scale * _apply(lam, z)) for c, lam in self.terms)

    def times_exp(self, lam: Sequence) -> "ExpSum":
        """``f * exp(s * lambda(z))``: the Newton polytope is translated."""
        lam = GaussianVector(lam)
        return ExpSum(
            self.n,
            tuple((c, GaussianVector(tuple(a + b for a, b in zip(mu.coords, lam.coords)))) for c, mu in self.terms),
            self.two_pi,
        )

    def rescaled(self, t) -> "ExpSum":
        """``z -> f(t z)``: every exponent is multiplied by ``t``."""
        t = rat(t)
        return ExpSum(
            self.n, tuple((c, GaussianVector(tuple(t * a for a in mu.coords))) for c, mu in self.terms), self.two_pi
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "two_pi": self.two_pi,
            "terms": [
                {
                    "coeff": c.to_json(),
                    "exp": [[rat_str(mu.coords[2 * j]), rat_str(mu.coords[2 * j + 1])] for j in range(self.n)],
                }
                for c, mu in self.terms
            ],
        }

    def __str__(self) -> str:
        parts = []
        pre = "2*pi*" if self.two_pi else ""
        for c, mu in self.terms:
            lin = " + ".join(
                f"{GaussRat(mu.coords[2 * j], mu.coords[2 * j + 1])}*z{j + 1}"
                for j in range(self.n)
                if mu.coords[2 * j] or mu.coords[2 * j + 1]
            )
            parts.append(f"{c}" if not lin else f"{c}*exp({pre}({lin}))")
        return " + ".join(parts)


def _apply(lam: GaussianVector, z: Sequence[complex]) -> complex:
    return sum(w * zj for w, zj in zip(lam.to_complex(), z))


# ---------------------------------------------------------------------------
# parsing


_VAR = re.compile(r"^z(\d*)$")


class _Expr:
    """Sum of monomials ``coeff * pi^k * z_j * exp(E)`` keyed by (k, j, E)."""

    def __init__(self, d=None):
        self.d = {k: v for k, v in (d or {}).items() if v}

    @classmethod
    def const(cls, c: GaussRat):
        return cls({(0, 0, None): c})

    def __add__(self, o):
        d = dict(self.d)
        for k, v in o.d.items():
            d[k] = d.get(k, ZERO) + v
        return _Expr(d)

    def __neg__(self):
        return _Expr({k: -v for k, v in self.d.items()})

    def mul(self, o, pos):
        d: dict = {}
        for (k1, j1, e1), v1 in self.d.items():
            for (k2, j2, e2), v2 in o.d.items():
                if j1 and j2:
                    raise ExpSumParseError("product of variables is not linear", pos)
                if e1 is not None and e2 is not None:
                    if e1[0] != e2[0]:
                        raise ExpSumParseError("cannot multiply exponentials with different 2*pi markers", pos)
                    c = dict(e1[1])
                    for jj, vv in e2[1]:
                        c[jj] = c.get(jj, ZERO) + vv
                    e = (e1[0], tuple(sorted((jj, vv) for jj, vv in c.items() if vv)))
                else:
                    e = e1 if e1 is not None else e2
                key = (k1 + k2, j1 or j2, e)
                d[key] = d.get(key, ZERO) + v1 * v2
        return _Expr(d)

    def scalar(self):
        """The value if this is a Gaussian-rational constant, else None."""
        if not self.d:
            return ZERO
        if set(self.d) == {(0, 0, None)}:
            return self.d[(0, 0, None)]
        return None


def _parse_exponent(arg: _Expr, n_hint: list, pos) -> tuple:
    pis = set()
    coeffs: dict[int, GaussRat] = {}
    for (k, j, e), v in arg.d.items():
        if e is not None:
            raise ExpSumParseError("nested exponential", pos)
        if j == 0:
            raise ExpSumParseError("constant inside exp() is not supported; move it to the coefficient", pos)
        pis.add(k)
        coeffs[j] = coeffs.get(j, ZERO) + v
    if len(pis) > 1 or (pis and next(iter(pis)) not in (0, 1)):
        raise ExpSumParseError("exponent must be rational or 2*pi times rational", pos)
    k = next(iter(pis), 0)
    if k == 1:
        coeffs = {j: c * GaussRat(Fraction(1, 2)) for j, c in coeffs.items()}
    if coeffs:
        n_hint[0] = max(n_hint[0], max(coeffs))
    return k, coeffs


def _eval(node, n_hint: list) -> _Expr:
    pos = getattr(node, "col_offset", None)
    if isinstance(node, ast.Expression):
        return _eval(node.body, n_hint)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, str)):
            raise ExpSumParseError(f"unsupported literal {node.value!r}; write decimals as fractions", pos)
        return _Expr.const(GaussRat(Fraction(node.value)))
    if isinstance(node, ast.Name):
        name = node.id
        if name in ("i", "I", "j"):
            return _Expr.const(GaussRat(0, 1))
        if name == "pi":
            return _Expr({(1, 0, None): ONE})
        m = _VAR.match(name)
        if m:
            j = int(m.group(1) or 1)
            if j < 1:
                raise ExpSumParseError("variables are numbered from z1", pos)
            n_hint[0] = max(n_hint[0], j)
            return _Expr({(0, j, None): ONE})
        raise ExpSumParseError(f"unknown name {name!r}", pos)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, n_hint)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a = _eval(node.left, n_hint)
        b = _eval(node.right, n_hint)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a + (-b)
        if isinstance(node.op, ast.Mult):
            return a.mul(b, pos)
        if isinstance(node.op, ast.Div):
            s = b.scalar()
            if s is None:
                raise ExpSumParseError("can only divide by a Gaussian-rational constant", pos)
            return a.mul(_Expr.const(ONE / s), pos)
        if isinstance(node.op, ast.Pow):
            s = b.scalar()
            if s is None or s.im or s.re.denominator != 1 or s.re < 0:
                raise ExpSumParseError("exponent of ** must be a nonnegative integer", pos)
            out = _Expr.const(ONE)
            for _ in range(int(s.re)):
                out = out.mul(a, pos)
            return out
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "exp":
        if len(node.args) != 1 or node.keywords:
            raise ExpSumParseError("exp() takes one argument", pos)
        k, coeffs = _parse_exponent(_eval(node.args[0], n_hint), n_hint, pos)
        return _Expr({(0, 0, (k, tuple(sorted(coeffs.items())))): ONE})
    raise ExpSumParseError(f"unsupported syntax {type(node).__name__}", pos)


def _parse_text(text: str, n: int | None) -> ExpSum:
    src = re.sub(r"(\d)\s*pi\b", r"\1*pi", text.strip())
    src = re.sub(r"(\d)\s*([iz])\b", r"\1*\2", src)
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ExpSumParseError(f"syntax error: {exc.msg}", exc.offset) from None
    n_hint = [0]
    expr = _eval(tree, n_hint)
    nn = n if n is not None else max(n_hint[0], 1)
    terms = []
    markers = set()
    for (k, j, e), v in expr.d.items():
        if j:
            raise ExpSumParseError("bare variable outside exp()")
        if k:
            raise ExpSumParseError("pi may only appear inside exp()")
        if e is None:
            e = (0, ())
        mk, coeffs = e
        if coeffs:
            markers.add(mk)
        lam = [Fraction(0)] * (2 * nn)
        for jj, c in coeffs:
            if jj > nn:
                raise ExpSumParseError(f"z{jj} exceeds the declared dimension {nn}")
            lam[2 * (jj - 1)] += c.re
            lam[2 * (jj - 1) + 1] += c.im
        terms.append((v, GaussianVector(tuple(lam))))
    if len(markers) > 1:
        raise ExpSumParseError("mixing 2*pi-scaled and rational exponents in one sum is not supported")
    if not terms:
        raise ExpSumParseError("expression is identically zero")
    return ExpSum(nn, tuple(terms), markers == {1})


def _parse_json(obj: dict) -> ExpSum:
    try:
        raw = obj["terms"]
        if not raw:
            raise ExpSumParseError("no terms")
        n = int(obj.get("n", len(raw[0]["exp"])))
        terms = []
        for t in raw:
            c = t["coeff"]
            coeff = GaussRat(rat(c[0]), rat(c[1])) if isinstance(c, list) else GaussRat(rat(c))
            if not coeff:
                raise ExpSumParseError("zero coefficient")
            lam = [rat(a) for pair in t["exp"] for a in (pair if isinstance(pair, list) else [pair, 0])]
            terms.append((coeff, GaussianVector(tuple(lam))))
        return ExpSum(n, tuple(terms), bool(obj.get("two_pi", False)))
    except (KeyError, TypeError, IndexError) as exc:
        raise ExpSumParseError(f"malformed exponential-sum JSON: {exc!r}") from None


def parse_expsum(src, n: int | None = None) -> ExpSum:
    """Parse an expression string, a JSON string or an already decoded JSON object."""
    if isinstance(src, dict):
        return _parse_json(src)
    s = src.strip()
    if s.startswith("{"):
        try:
            return _parse_json(json.loads(s))
        except json.JSONDecodeError as exc:
            raise ExpSumParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if re.search(r"(?<![\w.])0+(\.0*)?\s*\*\s*exp", s) or re.fullmatch(r"\s*0+\s*", s):
        raise ExpSumParseError("zero coefficient")
    return _parse_text(s, n)


# ---------------------------------------------------------------------------
# Newton polytopes and indices


def newton_polytope(f: ExpSum) -> Polytope:
    """Hull of the exponents (without the 2*pi factor; see ``ExpSum.scale``)."""
    return Polytope([lam.coords for _, lam in f.terms])


def is_quasi_algebraic(f: ExpSum) -> bool:
    return all(a == 0 for _, lam in f.terms for a in lam.coords[1::2])


@dataclass(frozen=True)
class HypersurfaceClass:
    newton: Polytope
    two_pi: bool = False

    @classmethod
    def of(cls, f: ExpSum) -> "HypersurfaceClass":
        return cls(newton_polytope(f), f.two_pi)


@dataclass
class IndexResult(PseudoVolumeResult):
    # value = exact_coefficient * (2 pi)^pi_power when exact_coefficient is set
    exact_coefficient: Surd | None = None
    pi_power: int = 0
    complex_rank: int | None = None

    def exact_tag(self) -> str | None:
        if self.exact_coefficient is None:
            return None
        c = self.exact_coefficient
        if c.is_zero():
            return "0"
        num = _surd_str(c)
        k = self.pi_power
        if k == 0:
            return num
        if k > 0:
            return f"{num}*(2π)" + (f"^{k}" if k > 1 else "")
        return f"{num}/(2π)" + (f"^{-k}" if k < -1 else "")


def _surd_str(s: Surd) -> str:
    parts = []
    for r, c in sorted(s.terms().items()):
        parts.append(rat_str(c) if r == 1 else f"{rat_str(c)}*√{r}")
    out = " + ".join(parts)
    return f"({out})" if len(parts) > 1 else out


def _index(classes: Sequence[HypersurfaceClass], cfg: AngleConfig | None) -> IndexResult:
    classes = list(classes)
    if not classes:
        raise ValueError("no hypersurfaces")
    m = classes[0].newton.ambient_dim
    n = m // 2
    if len(classes) != n:
        raise ValueError(f"need exactly n = {n} hypersurfaces in C^{n}, got {len(classes)}")
    polys = [h.newton for h in classes]
    crank = complex_rank(polys)
    fact = math.factorial(n)
    markers = sum(h.two_pi for h in classes)
    mult = fact * TWO_PI**markers
    if crank < 0:
        return IndexResult(0.0, 0.0, [], Surd(0), n, Surd(0), 0, crank)
    r = mixed_pseudovolume(polys, cfg)
    coef = r.scaled_exact * fact if r.scaled_exact is not None else None
    return IndexResult(
        r.value * mult, r.error_bound * mult, r.terms, None, n, coef, markers - n, crank
    )


def intersection_index(fs: Sequence[ExpSum], cfg: AngleConfig | None = None) -> IndexResult:
    """``n! * mixed pseudovolume`` of the Newton polytopes of ``f_1, ..., f_n``."""
    fs = list(fs)
    if not fs:
        raise ValueError("no exponential sums")
    n = fs[0].n
    if any(f.n != n for f in fs):
        raise ValueError("exponential sums live on different C^n")
    if len(fs) != n:
        raise ValueError(f"need exactly n = {n} sums on C^{n}, got {len(fs)}")
    return _index([HypersurfaceClass.of(f) for f in fs], cfg)


def weak_density(classes: Sequence[HypersurfaceClass], cfg: AngleConfig | None = None) -> IndexResult:
    return _index(classes, cfg)


# ---------------------------------------------------------------------------
# lattice density


@dataclass(frozen=True)
class LatticeSpec:
    L: Subspace
    lambdas: tuple  # GaussianVector
    mus: tuple  # GaussianVector, lambda_p(mu_q) = i delta_pq; S = 2 pi (Z mu_1 + ...)

    @property
    def n(self) -> int:
        return len(self.lambdas)


class DegenerateLatticeError(ValueError):
    pass


def _re_im_rows(lam: GaussianVector) -> tuple[tuple, tuple]:
    """Rows of Re lambda(z) and Im lambda(z) as functionals of (x_1, y_1, ...)."""
    re_row, im_row = [], []
    for j in range(lam.n):
        a, b = lam.coords[2 * j], lam.coords[2 * j + 1]
        re_row += [a, -b]
        im_row += [b, a]
    return tuple(re_row), tuple(im_row)


def lattice_from_characters(lambdas: Sequence) -> LatticeSpec:
    lams = tuple(l if isinstance(l, GaussianVector) else GaussianVector(l) for l in lambdas)
    n = len(lams)
    if n == 0 or any(l.n != n for l in lams):
        raise ValueError("need n characters on C^n")
    rows = [_re_im_rows(l) for l in lams]
    re_rows = [r for r, _ in rows]
    im_rows = [i for _, i in rows]
    # common complex kernel: lambda_p(v) = 0 for all p
    ker = nullspace(re_rows + im_rows, 2 * n)
    if ker:
        v = ker[0]
        pt = ", ".join(str(GaussRat(v[2 * j], v[2 * j + 1])) for j in range(n))
        raise DegenerateLatticeError(f"the real kernel L contains the complex line through ({pt})")
    L = Subspace.span(nullspace(re_rows, 2 * n), 2 * n)
    mus = []
    for q in range(n):
        rhs = [0] * n + [int(p == q) for p in range(n)]
        mu = solve_linear(re_rows + im_rows, rhs)
        mus.append(GaussianVector(mu))
    return LatticeSpec(L, lams, tuple(mus))


def check_lattice(spec: LatticeSpec, tol: float = 1e-9) -> bool:
    """``exp(lambda_p(2 pi mu_q)) = 1`` for all p, q."""
    for lam in spec.lambdas:
        for mu in spec.mus:
            val = cmath.exp(TWO_PI * _apply(lam, mu.to_complex()))
            if abs(val - 1) > tol:
                return False
    return True


def lattice_density_exact(spec: LatticeSpec) -> Surd:
    """``(2 pi)^n`` times the density: cos(L^perp, iL) * vol_n(Pi(lambda))."""
    perp = orthogonal_complement(spec.L)
    c2 = subspace_cosine_squared(perp, complex_rotate_subspace(spec.L))
    vol2 = gram_det([l.coords for l in spec.lambdas])
    return Surd.sqrt(c2 * vol2)


def lattice_density(spec: LatticeSpec) -> float:
    return float(lattice_density_exact(spec)) / TWO_PI**spec.n


def lattice_density_from_mus(spec: LatticeSpec) -> float:
    """``1 / covolume`` of ``S = 2 pi (Z mu_1 + ... + Z mu_n)`` inside L."""
    vol = math.sqrt(float(gram_det([m.coords for m in spec.mus])))
    return 1.0 / (TWO_PI**spec.n * vol)


# ---------------------------------------------------------------------------
# zero counting in C^1


@dataclass(frozen=True)
class ZeroCount:
    count: int
    radius: float
    residual: float
    panels: int

    def __int__(self) -> int:
        return self.count


class CertificationError(RuntimeError):
    pass


def _log_derivative(f: ExpSum):
    cs = np.array([complex(c) for c, _ in f.terms])
    ls = np.array([lam.to_complex()[0] for _, lam in f.terms]) * f.scale

    def fprime_over_f(z):
        u = np.outer(z, ls)
        shift = u.real.max(axis=1, keepdims=True)
        e = cs * np.exp(u - shift)
        return (e * ls).sum(axis=1) / e.sum(axis=1)

    def rel_abs(z):
        u = np.outer(z, ls)
        shift = u.real.max(axis=1, keepdims=True)
        e = cs * np.exp(u - shift)
        return np.abs(e.sum(axis=1)) / np.abs(e).sum(axis=1)

    return fprime_over_f, rel_abs, float(np.abs(ls).max(initial=0.0))


def _winding(g, R: float, panels: int) -> float:
    def integrand(theta):
        z = R * np.exp(1j * np.atleast_1d(theta))
        return (g(z) * z).real[0]

    edges = np.linspace(0.0, 2 * math.pi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(integrand, a, b, limit=200, epsabs=1e-10, epsrel=1e-10)
        total += val
    return total / (2 * math.pi)


def count_zeros_disk(f: ExpSum, R: float, max_retries: int = 8, min_gap: float = 1e-3) -> ZeroCount:
    """Zeros of ``f`` in ``|z| < R`` (with multiplicity) by the argument principle.

    If the contour passes too close to a zero the radius is nudged outward by a
    deterministic sequence of small relative offsets; the radius actually used
    is reported.
    """
    if f.n != 1:
        raise ValueError("zero counting is implemented on C^1 only")
    g, rel_abs, lmax = _log_derivative(f)
    if lmax == 0:
        return ZeroCount(0, R, 0.0, 0)
    panels = max(64, int(8 * R * lmax / math.pi))
    probe = np.exp(1j * np.linspace(0, 2 * math.pi, 40 * panels, endpoint=False))
    offsets = [0.0] + [0.0137 * (k + 1) / (1 + 0.618 * k) for k in range(max_retries)]
    for off in offsets:
        Ru = R * (1 + off / max(R, 1.0))
        if rel_abs(Ru * probe).min() < min_gap:
            continue
        w = _winding(g, Ru, panels)
        res = abs(w - round(w))
        if res < 0.25:
            return ZeroCount(int(round(w)), Ru, res, panels)
        raise CertificationError(f"winding number {w} at R={Ru} is not within 0.25 of an integer")
    raise CertificationError(f"zeros too close to |z| = {R} after {max_retries} perturbations")
