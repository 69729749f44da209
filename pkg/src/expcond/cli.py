"""Command-line front end.

Every subcommand writes one JSON report to stdout and a short human summary
to stderr.  Exit status: 0 on success, 2 on bad input, 3 when a numeric
certificate (winding-number rounding, stable-product agreement) fails.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .exactnum import GaussianVector, rat_str
from .expsum import (
    CertificationError,
    DegenerateLatticeError,
    ExpSum,
    ExpSumParseError,
    check_lattice,
    count_zeros_disk,
    intersection_index,
    lattice_density,
    lattice_density_exact,
    lattice_density_from_mus,
    lattice_from_characters,
    parse_expsum,
)
from .io import (
    InputError,
    fan_from_json,
    fan_to_json,
    polytope_from_json,
    polytopes_from_json,
    ring_element_from_json,
    surd_to_json,
)
from .polytope import complex_rank, mixed_volume, rank
from .pseudovolume import (
    DEFAULT_SAMPLES,
    AngleConfig,
    PseudoVolumeResult,
    mixed_pseudovolume,
    mixed_pseudovolume_polarized,
    pseudovolume,
)
from .ring import weighted_fan_of
from .tropical import (
    InstabilityError,
    dual_fan,
    fan_add,
    fan_equivalent,
    stable_product,
    zero_cone_weight,
)

EXIT_INPUT = 2
EXIT_CERT = 3


class _Run:
    def __init__(self, args, inputs: list[str]):
        self.args = args
        self.inputs = inputs
        self.t0 = time.perf_counter()

    def digest(self) -> str:
        h = hashlib.sha256()
        for text in self.inputs:
            h.update(text.encode())
            h.update(b"\0")
        return h.hexdigest()


def _read(path: str, run: _Run):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    run.inputs.append(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


def _cfg(args) -> AngleConfig:
    n = args.angle_samples
    if n is None:
        n = int(os.environ.get("EXPCOND_ANGLE_SAMPLES", DEFAULT_SAMPLES))
    if n <= 0:
        raise InputError("--angle-samples must be positive")
    return AngleConfig(samples=n, seed=args.seed)


def _pv_json(r: PseudoVolumeResult) -> dict:
    out = {"value": r.value, "error_bound": r.error_bound}
    if r.scaled_exact is not None:
        out["exact_times_2pi_n"] = surd_to_json(r.scaled_exact)
    out["terms"] = [
        {
            "face": [[rat_str(a) for a in v] for v in t.face],
            "c": t.c,
            "angle": t.angle,
            "mixed_volume": t.mixed_vol,
            "contribution": t.contribution,
            "std_error": t.std_error,
        }
        for t in r.terms
        if hasattr(t, "face")
    ]
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_pseudovolume(args, run: _Run) -> dict:
    cfg = _cfg(args)
    polys = polytopes_from_json(_read(args.file, run))
    if args.mixed or args.polarized:
        fn = mixed_pseudovolume_polarized if args.polarized else mixed_pseudovolume
        r = fn(polys, cfg)
    else:
        if len(polys) != 1:
            raise InputError("give one polytope, or use --mixed for a list")
        r = pseudovolume(polys[0], cfg)
    res = _pv_json(r)
    res["mode"] = "polarized" if args.polarized else "mixed" if args.mixed else "single"
    run.summary = f"pseudovolume = {r.value:.12g} +/- {r.error_bound:.3g}"
    return res


def cmd_mixed_volume(args, run: _Run) -> dict:
    polys = polytopes_from_json(_read(args.file, run))
    mv = mixed_volume(polys)
    run.summary = f"mixed volume = {mv}"
    return {"exact": surd_to_json(mv), "value": float(mv), "error_bound": 0.0}


def cmd_index(args, run: _Run) -> dict:
    fs = []
    for e in args.expr or []:
        run.inputs.append(e)
        fs.append(parse_expsum(e, args.n))
    for path in args.files:
        fs.append(parse_expsum(_read(path, run)))
    if not fs:
        raise InputError("no exponential sums given (use --expr or files)")
    n = max(f.n for f in fs)
    fs = [_lift(f, n) for f in fs]
    r = intersection_index(fs, _cfg(args))
    res = {"value": r.value, "error_bound": r.error_bound, "exact": r.exact_tag()}
    res["complex_rank"] = r.complex_rank
    if r.complex_rank is not None and r.complex_rank < 0:
        res["vanishing_certificate"] = f"complex rank {r.complex_rank} < 0"
    res["newton_polytopes"] = [[[rat_str(a) for a in lam.coords] for _, lam in f.terms] for f in fs]
    run.summary = f"index = {r.value:.12g} +/- {r.error_bound:.3g}" + (f"  [{r.exact_tag()}]" if r.exact_tag() else "")
    return res


def _lift(f: ExpSum, n: int) -> ExpSum:
    """View a sum in fewer variables as a sum on C^n."""
    if f.n == n:
        return f
    pad = (0,) * (2 * (n - f.n))
    return ExpSum(n, tuple((c, GaussianVector(lam.coords + pad)) for c, lam in f.terms), f.two_pi)


def cmd_fan(args, run: _Run) -> dict:
    sub = args.fan_cmd
    if sub == "dual":
        P = polytope_from_json(_read(args.file, run))
        F = dual_fan(P, args.dim)
        run.summary = f"dual fan: {len(F)} cones of dimension {F.dim}"
        return {"fan": fan_to_json(F)}
    if sub == "of-element":
        x = ring_element_from_json(_read(args.file, run))
        F = weighted_fan_of(x)
        run.summary = f"fan of element: {len(F)} cones of dimension {F.dim}"
        return {"fan": fan_to_json(F)}
    A = fan_from_json(_read(args.a, run))
    B = fan_from_json(_read(args.b, run))
    if sub == "add":
        F = fan_add(A, B)
        run.summary = f"sum: {len(F)} cones"
        return {"fan": fan_to_json(F)}
    if sub == "equiv":
        eq = fan_equivalent(A, B)
        run.summary = "equivalent" if eq else "not equivalent"
        return {"equivalent": eq}
    if sub == "multiply":
        F = stable_product(A, B, seed=args.seed)
        res = {"fan": fan_to_json(F)}
        if F.dim == 0:
            w = zero_cone_weight(F)
            res["zero_cone_weight"] = surd_to_json(w)
            run.summary = f"zero cone weight = {w}"
        else:
            run.summary = f"product: {len(F)} cones of dimension {F.dim}"
        return res
    raise InputError(f"unknown fan subcommand {sub}")


def cmd_rank(args, run: _Run) -> dict:
    polys = polytopes_from_json(_read(args.file, run))
    r = complex_rank(polys) if args.complex else rank(polys)
    run.summary = f"{'complex ' if args.complex else ''}rank = {r}"
    return {"rank": r, "complex": bool(args.complex)}


def cmd_oracle(args, run: _Run) -> dict:
    if args.oracle_cmd == "zeros-disk":
        run.inputs.append(args.expr)
        f = parse_expsum(args.expr)
        z = count_zeros_disk(f, args.radius)
        run.summary = f"{z.count} zeros in |z| < {z.radius:g}"
        return {
            "count": z.count,
            "radius": z.radius,
            "residual": z.residual,
            "density": z.count / (2 * z.radius),
        }
    run.inputs.append(args.lambdas)
    try:
        raw = json.loads(args.lambdas)
        lams = [GaussianVector(tuple(l)) for l in raw]
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise InputError(f"--lambdas must be a JSON list of 2n-rational lists: {exc}") from None
    spec = lattice_from_characters(lams)
    d = lattice_density(spec)
    run.summary = f"lattice density = {d:.12g}"
    return {
        "density": d,
        "density_times_2pi_n": surd_to_json(lattice_density_exact(spec)),
        "density_from_dual_basis": lattice_density_from_mus(spec),
        "mus": [[rat_str(a) for a in m.coords] for m in spec.mus],
        "exponential_identity_holds": check_lattice(spec),
    }


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="expcond", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized step (default 0)")
    common.add_argument(
        "--angle-samples", type=int, default=None,
        help=f"Monte Carlo samples per cone (default {DEFAULT_SAMPLES} or $EXPCOND_ANGLE_SAMPLES)",
    )
    common.add_argument("--json", action="store_true", help="accepted for compatibility; stdout is always JSON")
    common.add_argument("--timing", action="store_true", help="include wall time in the report")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("pseudovolume", parents=[common], help="pseudovolume or mixed pseudovolume")
    s.add_argument("file")
    s.add_argument("--mixed", action="store_true")
    s.add_argument("--polarized", action="store_true")
    s.set_defaults(func=cmd_pseudovolume)

    s = sub.add_parser("mixed-volume", parents=[common], help="exact mixed volume")
    s.add_argument("file")
    s.set_defaults(func=cmd_mixed_volume)

    s = sub.add_parser("index", parents=[common], help="intersection index of exponential sums")
    s.add_argument("files", nargs="*")
    s.add_argument("--expr", action="append", help="exponential sum as an expression (repeatable)")
    s.add_argument("--n", type=int, default=None, help="complex dimension for --expr")
    s.set_defaults(func=cmd_index)

    s = sub.add_parser("fan", help="weighted fan operations")
    fs = s.add_subparsers(dest="fan_cmd", required=True)
    f = fs.add_parser("dual", parents=[common])
    f.add_argument("file")
    f.add_argument("--dim", type=int, required=True, help="dimension of the cones")
    for name in ("add", "multiply", "equiv"):
        f = fs.add_parser(name, parents=[common])
        f.add_argument("a")
        f.add_argument("b")
    f = fs.add_parser("of-element", parents=[common])
    f.add_argument("file")
    s.set_defaults(func=cmd_fan)

    s = sub.add_parser("rank", parents=[common], help="rank or complex rank of a polytope family")
    s.add_argument("file")
    s.add_argument("--complex", action="store_true")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("oracle", help="independent numeric oracles")
    os_ = s.add_subparsers(dest="oracle_cmd", required=True)
    o = os_.add_parser("zeros-disk", parents=[common])
    o.add_argument("--expr", required=True)
    o.add_argument("--radius", type=float, required=True)
    o = os_.add_parser("lattice-density", parents=[common])
    o.add_argument("--lambdas", required=True, help='JSON, e.g. [["0","1"]] for lambda = i')
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    run = _Run(args, [])
    run.summary = ""
    try:
        results = args.func(args, run)
    except (InputError, ExpSumParseError, DegenerateLatticeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CertificationError, InstabilityError) as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_CERT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {
        "command": ["expcond"] + argv,
        "inputs_digest": run.digest(),
        "seed": getattr(args, "seed", 0),
        "samples": getattr(args, "angle_samples", None) or int(os.environ.get("EXPCOND_ANGLE_SAMPLES", DEFAULT_SAMPLES)),
        "results": results,
    }
    if getattr(args, "timing", False):
        report["wall_time"] = time.perf_counter() - run.t0
    json.dump(report, sys.stdout, indent=2, sort_keys=True, ensure_ascii=False)
    sys.stdout.write("\n")
    if run.summary:
        print(run.summary, file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
