"""JSON formats for rationals, polytopes, ring elements and weighted fans."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .exactnum import Surd, rat, rat_str
from .polytope import Cone, Polytope
from .ring import RingElement, Term, VirtualPolytope
from .tropical import WeightedFan


class InputError(ValueError):
    """Malformed input document."""


def parse_rational(x) -> Fraction:
    if isinstance(x, float):
        raise InputError(f"{x!r}: write rationals as strings 'p/q' or integers")
    try:
        return rat(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"not a rational: {x!r}") from exc


def polytope_to_json(P: Polytope) -> dict:
    return {"ambient_dim": P.ambient_dim, "vertices": [[rat_str(a) for a in v] for v in P.vertices]}


def polytope_from_json(obj) -> Polytope:
    if isinstance(obj, list):
        obj = {"vertices": obj}
    try:
        verts = [[parse_rational(a) for a in v] for v in obj["vertices"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"polytope needs a 'vertices' list: {exc!r}") from None
    if not verts:
        raise InputError("polytope has no vertices")
    m = obj.get("ambient_dim", len(verts[0]))
    if any(len(v) != m for v in verts):
        raise InputError(f"every vertex must have {m} coordinates")
    return Polytope(verts, m)


def polytopes_from_json(obj) -> list[Polytope]:
    """A list of polytopes, or ``{"polytopes": [...]}``."""
    if isinstance(obj, dict):
        if "polytopes" in obj:
            obj = obj["polytopes"]
        else:
            return [polytope_from_json(obj)]
    return [polytope_from_json(p) for p in obj]


def surd_to_json(s: Surd):
    if s.is_rational():
        return rat_str(s.as_fraction())
    return s.to_json()


def surd_from_json(x) -> Surd:
    if isinstance(x, dict):
        tot = Surd(0)
        for c, r in x["terms"]:
            tot = tot + Surd.sqrt(int(r)) * parse_rational(c)
        return tot
    return Surd(parse_rational(x))


def ring_element_to_json(x: RingElement) -> dict:
    return {
        "space": {"ambient_dim": x.ambient_dim},
        "terms": [
            {
                "degree": t.degree,
                "coeff": rat_str(t.coeff),
                "plus": polytope_to_json(t.base.plus),
                "minus": polytope_to_json(t.base.minus),
            }
            for t in x.terms
        ],
    }


def ring_element_from_json(obj) -> RingElement:
    try:
        m = int(obj.get("space", obj)["ambient_dim"])
        terms = []
        for t in obj["terms"]:
            plus = polytope_from_json(t["plus"])
            minus = polytope_from_json(t["minus"]) if "minus" in t else None
            terms.append(Term(parse_rational(t.get("coeff", 1)), VirtualPolytope(plus, minus), int(t["degree"])))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed ring element: {exc!r}") from None
    return RingElement(m, terms)


def fan_to_json(F: WeightedFan) -> dict:
    return {
        "ambient_dim": F.ambient_dim,
        "dim": F.dim,
        "normalization": F.normalization,
        "cones": [
            {"generators": [[rat_str(a) for a in g] for g in C.generators], "weight": surd_to_json(w)}
            for C, w in F.cones
        ],
    }


def fan_from_json(obj) -> WeightedFan:
    try:
        m = int(obj["ambient_dim"])
        k = int(obj["dim"])
        cones = []
        for c in obj["cones"]:
            gens = [[parse_rational(a) for a in g] for g in c["generators"]]
            cones.append((Cone.from_generators(gens, m), surd_from_json(c.get("weight", 1))))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed fan: {exc!r}") from None
    try:
        return WeightedFan(m, k, tuple(cones))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def load_json(path) -> object:
    text = Path(path).read_text() if str(path) != "-" else __import__("sys").stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
