"""Exact double description on integer data.

``extreme_rays(A)`` returns the extreme rays of the pointed cone
``{x : A x >= 0}``.  Everything here is integer arithmetic with gcd
normalisation; adjacency is decided combinatorially on tight-constraint
bitmasks.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from ..exactnum import rref


def int_row(row: Sequence) -> tuple[int, ...]:
    den = 1
    for a in row:
        d = Fraction(a).denominator
        den = den * d // math.gcd(den, d)
    ints = [int(Fraction(a) * den) for a in row]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    return tuple(a // g for a in ints) if g > 1 else tuple(ints)


def _normalize(v: list[int]) -> tuple[int, ...]:
    g = 0
    for a in v:
        g = math.gcd(g, a)
    if g > 1:
        return tuple(a // g for a in v)
    return tuple(v)


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def extreme_rays(A: Sequence[Sequence], d: int) -> list[tuple[int, ...]]:
    """Extreme rays of ``{x in Q^d : A x >= 0}``; ``A`` must have rank ``d``."""
    rows = [int_row(r) for r in A]
    rows = [r for r in rows if any(r)]
    if d == 0:
        return []
    # initial simplex cone from d independent rows
    basis_idx: list[int] = []
    chosen = []
    for i, r in enumerate(rows):
        if len(chosen) == d:
            break
        trial = chosen + [r]
        if len(rref(trial)[1]) == len(trial):
            chosen = trial
            basis_idx.append(i)
    if len(chosen) < d:
        raise ValueError("constraint matrix is rank deficient; cone is not pointed")
    # inverse of the chosen square block: columns are the initial rays
    inv_aug = rref([list(r) + [int(i == j) for j in range(d)] for i, r in enumerate(chosen)])[0]
    inv = [row[d:] for row in inv_aug]
    rays: list[tuple[int, ...]] = []
    masks: list[int] = []
    for j in range(d):
        col = [inv[i][j] for i in range(d)]
        rays.append(_normalize(list(int_row(col))))
    order = basis_idx + [i for i in range(len(rows)) if i not in basis_idx]
    # constraint k in processing order gets bit k
    for j in range(d):
        m = 0
        for k in range(d):
            if k != j:
                m |= 1 << k
        masks.append(m)
    for k in range(d, len(order)):
        a = rows[order[k]]
        vals = [_dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        bit = 1 << k
        if not neg:
            for i in zer:
                masks[i] |= bit
            continue
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_masks = [masks[i] for i in pos] + [masks[i] | bit for i in zer]
        for p in pos:
            for q in neg:
                common = masks[p] & masks[q]
                if bin(common).count("1") < d - 2:
                    continue
                adjacent = True
                for r in range(len(rays)):
                    if r != p and r != q and (masks[r] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], -vals[q]
                nr = [vq * x + vp * y for x, y in zip(rays[p], rays[q])]
                new_rays.append(_normalize(nr))
                new_masks.append(common | bit)
        rays, masks = new_rays, new_masks
        if not rays:
            return []
    return sorted(set(rays))
