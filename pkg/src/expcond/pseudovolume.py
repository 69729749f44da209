"""Exterior angles, the complex cosine of a face, and (mixed) pseudovolumes.

The pseudovolume of a polytope in ``(C^n)* = R^{2n}`` is

    (2 pi)^{-n} * sum over n-dimensional faces F of  c(F) * A(F) * vol_n(F)

where ``A(F)`` is the normalised solid angle of the dual cone of ``F`` and
``c(F)`` is the cosine between ``T_F^perp`` and ``i T_F``.
"""
from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .exactnum import (
    Subspace,
    Surd,
    complex_rotate_subspace,
    dot,
    orthogonal_complement,
    subspace_cosine_squared,
)
from .polytope import Cone, Face, Polytope, complex_rank, minkowski_sum, mixed_volume

DEFAULT_SAMPLES = 200_000
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class AngleConfig:
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    batch: int = 50_000

    @classmethod
    def from_env(cls, seed: int = 0) -> "AngleConfig":
        n = int(os.environ.get("EXPCOND_ANGLE_SAMPLES", DEFAULT_SAMPLES))
        return cls(samples=n, seed=seed)


@dataclass(frozen=True)
class AngleEstimate:
    value: float
    method: str  # "exact" or "monte_carlo"
    std_error: float = 0.0
    samples: int = 0
    exact: Fraction | None = None  # set when the angle is rational (1 or 1/2)

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"angle {self.value} outside [0, 1]")
        if (self.std_error == 0.0) != (self.method == "exact"):
            raise ValueError("std_error must vanish exactly for exact angles")


@dataclass(frozen=True)
class Term:
    face: tuple  # vertex tuple of the face of the (sum) polytope
    c: float
    angle: float | None  # None when the face was skipped before sampling
    mixed_vol: float
    contribution: float
    std_error: float = 0.0


@dataclass
class PseudoVolumeResult:
    value: float
    error_bound: float = 0.0
    terms: list = field(default_factory=list)
    # (2 pi)^n * value as an exact surd when every angle was rational
    scaled_exact: Surd | None = None
    n: int = 0

    @property
    def is_exact(self) -> bool:
        return self.error_bound == 0.0


def _cone_seed(K: Cone, seed: int) -> int:
    h = hashlib.sha256(repr((K.key, seed)).encode()).digest()
    return int.from_bytes(h[:8], "little")


def exterior_angle(K: Cone, cfg: AngleConfig | None = None) -> AngleEstimate:
    """Solid angle of ``K`` inside its span, the full angle counting as 1."""
    cfg = cfg or AngleConfig()
    if K.dim == 0:
        raise ValueError("zero cone has no angle")
    rays = K.rays
    if not rays:
        return AngleEstimate(1.0, "exact", exact=Fraction(1))
    W = Subspace.span(rays, K.ambient_dim)
    r = W.dim
    if r == 1:
        return AngleEstimate(0.5, "exact", exact=Fraction(1, 2))
    if r == 2:
        u, v = rays
        uv = dot(u, v)
        cross2 = dot(u, u) * dot(v, v) - uv * uv
        theta = math.atan2(math.sqrt(cross2), float(uv))
        return AngleEstimate(theta / TWO_PI, "exact")
    # Monte Carlo over the unit sphere of the pointed part
    Bf = np.array([[float(a) for a in b] for b in W.basis]).T
    Q, _ = np.linalg.qr(Bf)
    N = np.array([[float(a) for a in n] for n in K.facet_normals])
    G = N @ Q
    rng = np.random.default_rng(_cone_seed(K, cfg.seed))
    hits = 0
    done = 0
    while done < cfg.samples:
        b = min(cfg.batch, cfg.samples - done)
        U = rng.standard_normal((b, r))
        hits += int(np.count_nonzero(np.all(U @ G.T >= 0.0, axis=1)))
        done += b
    p = hits / done
    # floor the variance at one hit so a zero count still reports an error
    var = max(p * (1 - p), (1 - 1 / done) / done)
    return AngleEstimate(p, "monte_carlo", math.sqrt(var / done), done)


def c_coefficient_squared(T: Subspace) -> Fraction:
    """cos^2(T^perp, i T), exact."""
    m = T.ambient_dim
    if m % 2 or T.dim != m // 2:
        raise ValueError(f"tangent space must have dimension n = {m // 2}, got {T.dim}")
    return subspace_cosine_squared(orthogonal_complement(T), complex_rotate_subspace(T))


def c_coefficient(T: Subspace) -> float:
    return math.sqrt(c_coefficient_squared(T))


class _AngleCache:
    def __init__(self, cfg: AngleConfig):
        self.cfg = cfg
        self._d: dict = {}

    def __call__(self, K: Cone) -> AngleEstimate:
        if K.key not in self._d:
            self._d[K.key] = exterior_angle(K, self.cfg)
        return self._d[K.key]


def _accumulate(items, n: int) -> PseudoVolumeResult:
    """items: (face, c2, weight Surd, AngleEstimate or None)."""
    norm = TWO_PI**n
    terms = []
    total = 0.0
    var = 0.0
    exact = Surd(0)
    all_exact = True
    for face, c2, weight, ang in items:
        cw = Surd.sqrt(c2) * weight  # c * volume, exact
        if ang is None:
            terms.append(Term(face, math.sqrt(c2), None, float(weight), 0.0))
            continue
        cwf = float(cw)
        contrib = cwf * ang.value / norm
        err = cwf * ang.std_error / norm
        total += contrib
        var += err * err
        if ang.exact is not None:
            exact = exact + cw * ang.exact
        else:
            all_exact = False
        terms.append(Term(face, math.sqrt(c2), ang.value, float(weight), contrib, err))
    return PseudoVolumeResult(
        total, math.sqrt(var), terms, exact if all_exact else None, n
    )


def _complex_dim_of(P: Polytope) -> int:
    if P.ambient_dim % 2:
        raise ValueError("pseudovolume needs a polytope in (C^n)* = R^{2n}")
    return P.ambient_dim // 2


def pseudovolume(P: Polytope, cfg: AngleConfig | None = None) -> PseudoVolumeResult:
    cfg = cfg or AngleConfig()
    n = _complex_dim_of(P)
    if P.dim < n:
        return PseudoVolumeResult(0.0, 0.0, [], Surd(0), n)
    angle = _AngleCache(cfg)
    items = []
    for F in P.faces(n):
        c2 = c_coefficient_squared(F.tangent)
        if c2 == 0:
            items.append((F.vertices, c2, F.volume(), None))
            continue
        items.append((F.vertices, c2, F.volume(), angle(F.dual_cone)))
    return _accumulate(items, n)


def _summands(polys: Sequence[Polytope], F: Face) -> list[Polytope]:
    w = F.relint_functional()
    parts = [P.argmax_face(w).polytope for P in polys]
    if minkowski_sum(parts) != F.polytope:
        raise RuntimeError("face summand decomposition failed")
    return parts


def mixed_pseudovolume(polys: Sequence[Polytope], cfg: AngleConfig | None = None) -> PseudoVolumeResult:
    """Mixed pseudovolume summed over n-faces of the Minkowski sum."""
    cfg = cfg or AngleConfig()
    polys = list(polys)
    if not polys:
        raise ValueError("no polytopes")
    n = _complex_dim_of(polys[0])
    if len(polys) != n:
        raise ValueError(f"need exactly n = {n} polytopes in (C^{n})*, got {len(polys)}")
    if any(P.ambient_dim != 2 * n for P in polys):
        raise ValueError("ambient dimension mismatch")
    S = minkowski_sum(polys)
    if S.dim < n:
        return PseudoVolumeResult(0.0, 0.0, [], Surd(0), n)
    angle = _AngleCache(cfg)
    items = []
    for F in S.faces(n):
        c2 = c_coefficient_squared(F.tangent)
        parts = _summands(polys, F)
        mv = mixed_volume(parts, within=F.tangent)
        if c2 == 0 or mv.is_zero():
            items.append((F.vertices, c2, mv, None))
            continue
        items.append((F.vertices, c2, mv, angle(F.dual_cone)))
    return _accumulate(items, n)


def mixed_pseudovolume_polarized(polys: Sequence[Polytope], cfg: AngleConfig | None = None) -> PseudoVolumeResult:
    """Inclusion-exclusion over subset sums of plain pseudovolumes."""
    cfg = cfg or AngleConfig()
    polys = list(polys)
    n = _complex_dim_of(polys[0])
    if len(polys) != n:
        raise ValueError(f"need exactly n = {n} polytopes in (C^{n})*, got {len(polys)}")
    total = 0.0
    var = 0.0
    exact = Surd(0)
    all_exact = True
    terms = []
    fact = math.factorial(n)
    for k in range(1, n + 1):
        sign = (-1) ** (n - k)
        for S in combinations(range(n), k):
            r = pseudovolume(minkowski_sum([polys[i] for i in S]), cfg)
            total += sign * r.value / fact
            var += (r.error_bound / fact) ** 2
            if r.scaled_exact is None:
                all_exact = False
            else:
                exact = exact + r.scaled_exact * Fraction(sign, fact)
            terms.append((S, r.value))
    return PseudoVolumeResult(total, math.sqrt(var), terms, exact if all_exact else None, n)


def pseudovolume_vanishes(polys: Sequence[Polytope]) -> bool:
    """Exact vanishing test: the complex rank is negative."""
    return complex_rank(list(polys)) < 0
