"""Command-line front end: ``quadmesh gen | error | optimal | oracle``.

Exit codes: 0 success, 2 usage error or degenerate surface, 3 file I/O
failure, 4 malformed mesh, 5 oracle search failed to find a feasible point.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateSurface, MeshFormatError, SearchBudgetExceeded
from .meshio import mesh_format, read_mesh, write_mesh
from .optimal import DENSITY_CONSTANTS, SQRT3, SQRT5, Mode, convex_optimal, optimal_for, saddle_interpolating, saddle_offset
from .oracle import SearchConfig, oracle_convex, oracle_max_area_interpolating, oracle_max_area_offset
from .quadratic import QuadraticSurface, SurfaceClass, classify
from .tiling import Region, measure, tile_region, vertex_density
from .vertical_error import sampled_error_batch

EXIT_OK = 0
EXIT_DEGENERATE = 2
EXIT_IO = 3
EXIT_BAD_MESH = 4
EXIT_SEARCH = 5

COEFF_HELP = (
    "comma-separated a,b,c,d,e,g of f = a x^2 + 2 b x y + c y^2 + d x + e y + g "
    "(note the factor 2 on the cross term: 2xy is 0,1,0,0,0,0)"
)

# flags whose values may start with '-' (e.g. --region -10,-10,10,10)
_LIST_FLAGS = ("--coeffs", "--region", "--translate")


def _floats(n):
    def parse(text):
        try:
            vals = tuple(float(t) for t in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}") from None
        if len(vals) != n or not all(math.isfinite(v) for v in vals):
            raise argparse.ArgumentTypeError(f"expected {n} finite comma-separated numbers, got {text!r}")
        return vals

    return parse


def _positive(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive and finite, got {text!r}")
    return v


def _nonzero(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if v == 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite and nonzero, got {text!r}")
    return v


@dataclass(frozen=True)
class RunSpec:
    coefficients: tuple
    eps: float
    region: Region
    mode: Mode = Mode.UNIFORM_OFFSET
    m: float = 1.0
    translate: tuple = (0.0, 0.0)
    out: str = None
    report: str = None
    samples: int = 16
    jobs: int = 1

    @property
    def surface(self) -> QuadraticSurface:
        return QuadraticSurface.from_coefficients(self.coefficients)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _degenerate_message(q: QuadraticSurface) -> str:
    return (
        f"degenerate surface: ac - b^2 = {q.discriminant():g}. The quadratic part is semidefinite, "
        "so the graph is a parabolic cylinder (or a plane) and no bounded optimal triangle exists."
    )


def build_report(spec: RunSpec):
    """Mesh the region and return (patch, report dict)."""
    q = spec.surface
    res = optimal_for(q, spec.eps, spec.mode, spec.m)
    patch = tile_region(q, res, spec.region, translate=spec.translate, n_jobs=spec.jobs)
    rep = measure(q, patch, spec.eps, spec.mode, samples_per_triangle=spec.samples)
    report = {
        "eps": spec.eps,
        "mode": spec.mode.value,
        "m": spec.m,
        "coefficients": list(spec.coefficients),
        "triangle_count": rep.triangle_count,
        "region": list(spec.region.as_tuple()),
        "empirical_density": rep.empirical_density,
        "theoretical_density": rep.theoretical_density,
        "vertex_density": vertex_density(patch),
        "sampled_max_error": rep.sampled_max_error,
        "dz": res.dz,
    }
    return patch, report


def cmd_gen(args) -> int:
    spec = RunSpec(
        coefficients=args.coeffs,
        eps=args.eps,
        region=Region(*args.region),
        mode=Mode.parse(args.mode),
        m=args.m,
        translate=args.translate,
        out=args.out,
        report=args.report,
        samples=args.samples,
        jobs=args.jobs,
    )
    q = spec.surface
    if classify(q) is SurfaceClass.DEGENERATE:
        print(_degenerate_message(q), file=sys.stderr)
        return EXIT_DEGENERATE
    if spec.out:
        mesh_format(spec.out)
    patch, report = build_report(spec)
    try:
        if spec.out:
            write_mesh(spec.out, patch.vertices, patch.triangles)
        if spec.report:
            with open(spec.report, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(_dumps(report))
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if not spec.report:
        sys.stdout.write(_dumps(report))
    return EXIT_OK


def cmd_error(args) -> int:
    q = QuadraticSurface.from_coefficients(args.coeffs)
    try:
        V, F = read_mesh(args.mesh)
    except OSError as exc:
        print(f"cannot read mesh: {exc}", file=sys.stderr)
        return EXIT_IO
    except MeshFormatError as exc:
        print(f"malformed mesh: {exc}", file=sys.stderr)
        return EXIT_BAD_MESH
    P = V[F][..., :2]
    cross = (P[:, 1, 0] - P[:, 0, 0]) * (P[:, 2, 1] - P[:, 0, 1]) - (P[:, 1, 1] - P[:, 0, 1]) * (P[:, 2, 0] - P[:, 0, 0])
    bad = np.flatnonzero(np.abs(cross) <= 1e-14 * max(1.0, float(np.abs(P).max()) ** 2))
    if bad.size:
        print(f"malformed mesh: triangle {int(bad[0])} has a degenerate plan-view projection", file=sys.stderr)
        return EXIT_BAD_MESH
    errs = sampled_error_batch(q, P, V[F][..., 2], n=args.samples)
    worst = int(np.argmax(errs))
    out = {"max_error": float(errs[worst]), "triangle": worst, "triangle_count": int(F.shape[0])}
    if args.eps is not None:
        out["eps"] = args.eps
        out["within_eps"] = bool(errs[worst] <= args.eps * (1.0 + 1e-6))
    sys.stdout.write(_dumps(out))
    return EXIT_OK


def _result_dict(res):
    t = res.triangle
    return {
        "frame": res.canonical_frame,
        "eps": res.eps,
        "p1": list(t.p1),
        "p2": list(t.p2),
        "p3": list(t.p3),
        "dz": res.dz,
        "area": res.area,
        "density": res.density,
        "constants": {f"{kind}/{mode.value}": c for (kind, mode), c in DENSITY_CONSTANTS.items()},
    }


def cmd_optimal(args) -> int:
    mode = Mode.parse(args.mode)
    if args.cls == "saddle":
        res = saddle_interpolating(args.eps, args.m) if mode is Mode.INTERPOLATING else saddle_offset(args.eps, args.m)
    else:
        res = convex_optimal(args.eps, mode, concave=args.cls == "concave")
    d = _result_dict(res)
    if args.json:
        sys.stdout.write(_dumps(d))
        return EXIT_OK
    g = lambda v: f"{v:.6f}"
    lines = [
        f"frame    f = {d['frame']}",
        f"p1       ({g(d['p1'][0])}, {g(d['p1'][1])})",
        f"p2       ({g(d['p2'][0])}, {g(d['p2'][1])})",
        f"p3       ({g(d['p3'][0])}, {g(d['p3'][1])})",
        f"dz       {g(d['dz'])}",
        f"area     {g(d['area'])}",
        f"density  {g(d['density'])}",
        "density constants (times sqrt|ac - b^2| / eps):",
    ]
    lines += [f"  {k:<16} {g(v)}" for k, v in d["constants"].items()]
    print("\n".join(lines))
    return EXIT_OK


_ORACLES = {
    "saddle-interp": (lambda eps, cfg: oracle_max_area_interpolating(eps, cfg), lambda eps: SQRT5 * eps, 0.0),
    "saddle-offset": (lambda eps, cfg: oracle_max_area_offset(eps, cfg), lambda eps: 4.0 * eps / SQRT3, -1.0 / 3.0),
    "convex": (lambda eps, cfg: oracle_convex(eps, cfg), lambda eps: 0.75 * SQRT3 * eps, 0.0),
    "convex-offset": (lambda eps, cfg: oracle_convex(eps, cfg, free_dz=True), lambda eps: 1.5 * SQRT3 * eps, -1.0),
}


def cmd_oracle(args) -> int:
    try:
        cfg = SearchConfig(
            resolution=args.resolution,
            rounds=args.rounds,
            half_width=args.half_width,
            feas_slack=args.slack,
            starts=args.starts,
        )
    except ValueError as exc:
        print(f"invalid search settings: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    run, area_of, dz_unit = _ORACLES[args.kind]
    try:
        out = run(args.eps, cfg)
    except SearchBudgetExceeded as exc:
        print(f"search failed: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    target = area_of(args.eps)
    d = {
        "kind": args.kind,
        "eps": args.eps,
        "p1": [0.0, 0.0],
        "p2": list(out.p2),
        "p3": list(out.p3),
        "dz": out.dz,
        "area": out.area,
        "residual": out.residual,
        "evaluations": out.evaluations,
        "closed_form_area": target,
        "closed_form_dz": dz_unit * args.eps,
        "area_ratio": out.area / target,
    }
    sys.stdout.write(_dumps(d))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadmesh", description="Optimal-density triangle meshes for quadratic surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="tile a region with optimal triangles and write mesh + report")
    g.add_argument("--coeffs", type=_floats(6), required=True, help=COEFF_HELP)
    g.add_argument("--eps", type=_positive, required=True, help="vertical error budget")
    g.add_argument("--mode", choices=["offset", "interp"], default="offset")
    g.add_argument("--region", type=_floats(4), required=True, help="xmin,ymin,xmax,ymax")
    g.add_argument("--m", type=_nonzero, default=1.0, help="saddle shape parameter (x, y) -> (m x, y / m)")
    g.add_argument("--translate", type=_floats(2), default=(0.0, 0.0), help="lattice shift in the canonical frame")
    g.add_argument("--out", help="mesh path (.obj or .off)")
    g.add_argument("--report", help="JSON report path (stdout when omitted)")
    g.add_argument("--samples", type=int, default=16, help="error samples per triangle edge")
    g.add_argument("--jobs", type=int, default=1, help="worker threads for tiling")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("error", help="audit the vertical error of a mesh against a quadratic")
    e.add_argument("--mesh", required=True)
    e.add_argument("--coeffs", type=_floats(6), required=True, help=COEFF_HELP)
    e.add_argument("--eps", type=_positive)
    e.add_argument("--samples", type=int, default=16)
    e.set_defaults(func=cmd_error)

    o = sub.add_parser("optimal", help="print the closed-form optimal triangle")
    o.add_argument("--class", dest="cls", choices=["saddle", "convex", "concave"], required=True)
    o.add_argument("--mode", choices=["offset", "interp"], default="offset")
    o.add_argument("--eps", type=_positive, required=True)
    o.add_argument("--m", type=_nonzero, default=1.0)
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_optimal)

    r = sub.add_parser("oracle", help="brute-force search for the largest admissible triangle")
    r.add_argument("--kind", choices=sorted(_ORACLES), required=True)
    r.add_argument("--eps", type=_positive, default=1.0)
    r.add_argument("--resolution", type=int, default=SearchConfig.resolution)
    r.add_argument("--rounds", type=int, default=SearchConfig.rounds)
    r.add_argument("--half-width", type=float, default=SearchConfig.half_width)
    r.add_argument("--slack", type=float, default=SearchConfig.feas_slack)
    r.add_argument("--starts", type=int, default=SearchConfig.starts)
    r.set_defaults(func=cmd_oracle)
    return p


def _join_list_flags(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _LIST_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_list_flags(argv))
    try:
        return args.func(args)
    except DegenerateSurface as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
