"""Command-line front end.

Subcommands: mag, magfn, weights, check, diversity, dim, pixel (modes
--intrinsic, --weights, --convexity, --bounds), oracle (closed forms:
line sets, balls, spheres, asymptotics), approx (magnitude along a
refinement family approaching a compact space). Every run prints a
report envelope holding the echoed command, a digest of the parsed
inputs, the results, the package version, and the elapsed time; with
--format json the envelope is one JSON object whose keys are sorted, so
two runs on the same inputs differ only in the timing field. --format
csv prints the results alone as comma-separated rows. Exact rationals
are rendered as strings like "15/4".

Exit codes: 0 success, 2 bad input (parse or validation failure),
3 undefined magnitude (the mag command only), 4 internal failure,
including a refinement sweep that should be monotone but is not.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__, engine, euclid, lines, pixels
from . import diversity as dv
from .spaces import (
    BadSpec,
    MatrixParseError,
    MetricError,
    SpaceSpec,
    generate_space,
    graph_metric,
    load_distance_csv,
    named_graph_edges,
    validate_metric,
)

INPUT_ERRORS = (
    MetricError, BadSpec, MatrixParseError, pixels.PixelError,
    lines.LineError, euclid.EuclidError, dv.TooLarge, dv.WindowTooNarrow,
    ValueError, OSError,
)


def _rat(x: Fraction) -> str:
    return str(Fraction(x))


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]
    except ValueError as exc:
        raise BadSpec(f"cannot parse number list {text!r}: {exc}") from None


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]
    except ValueError as exc:
        raise BadSpec(f"cannot parse integer list {text!r}: {exc}") from None


def _parse_pairs(text: str) -> list[tuple[float, float]]:
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        nums = _parse_floats(part)
        if len(nums) != 2:
            raise BadSpec(f"expected 'a,b' pairs, got {part!r}")
        out.append((nums[0], nums[1]))
    return out


def _space_inputs(args):
    """Build the metric space selected by the input flags; also return a
    plain dict describing the inputs for the digest."""
    chosen = [
        name for name, flag in [
            ("stdin_matrix", args.stdin_matrix),
            ("matrix", args.matrix),
            ("points_1d", args.points_1d),
            ("graph", args.graph),
            ("grid", args.grid),
            ("cantor", args.cantor_depth is not None),
            ("ball", args.ball),
            ("spec", args.spec),
        ] if flag
    ]
    if len(chosen) != 1:
        raise BadSpec(
            f"need exactly one input source, got {chosen or 'none'}"
        )
    src = chosen[0]
    if src == "stdin_matrix":
        text = sys.stdin.read()
        return validate_metric(load_distance_csv(text)), \
            {"kind": "explicit_matrix", "sha256": hashlib.sha256(text.encode()).hexdigest()}
    if src == "matrix":
        with open(args.matrix, "r", encoding="utf-8") as fh:
            text = fh.read()
        return validate_metric(load_distance_csv(text)), \
            {"kind": "explicit_matrix", "sha256": hashlib.sha256(text.encode()).hexdigest()}
    if src == "points_1d":
        coords = _parse_floats(args.points_1d)
        spec = SpaceSpec("points_1d", {"coordinates": coords})
    elif src == "graph":
        edges = named_graph_edges(args.graph)
        return graph_metric(edges), {"kind": "graph", "name": args.graph}
    elif src == "grid":
        shape = [int(s) for s in args.grid.lower().split("x")]
        spec = SpaceSpec("lp_grid", {"shape": shape, "p": args.p,
                                     "spacing": args.spacing})
    elif src == "cantor":
        spec = SpaceSpec("cantor_endpoints",
                         {"depth": args.cantor_depth, "length": args.length})
    elif src == "ball":
        nums = _parse_floats(args.ball)
        if len(nums) != 3:
            raise BadSpec("--ball needs 'n,R,count'")
        if args.seed is None:
            raise BadSpec("--ball requires --seed")
        spec = SpaceSpec("ball_sample",
                         {"n": int(nums[0]), "radius": nums[1],
                          "count": int(nums[2]), "p": args.p},
                         seed=args.seed)
    else:
        text = args.spec
        if text.strip().startswith("{"):
            spec = SpaceSpec.from_json(text)
        else:
            with open(text, "r", encoding="utf-8") as fh:
                spec = SpaceSpec.from_json(fh.read())
    return generate_space(spec), json.loads(spec.to_json())


def _digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _emit(args, command, inputs, results, t0) -> None:
    if args.format == "csv":
        _emit_csv(results)
        return
    report = {
        "command": command,
        "inputs_digest": _digest(inputs),
        "results": results,
        "timing_seconds": round(time.perf_counter() - t0, 6),
        "version": __version__,
    }
    print(json.dumps(report, sort_keys=True))


def _emit_csv(results) -> None:
    if isinstance(results, dict) and isinstance(results.get("samples"), list):
        rows = results["samples"]
        keys = list(rows[0].keys())
        print(",".join(keys))
        for r in rows:
            print(",".join("" if r[k] is None else str(r[k]) for k in keys))
        return
    if isinstance(results, dict):
        flat = {}

        def put(prefix, val):
            if isinstance(val, dict):
                for kk, vv in val.items():
                    put(f"{prefix}.{kk}" if prefix else str(kk), vv)
            elif isinstance(val, list):
                flat[prefix] = ";".join(str(x) for x in val)
            else:
                flat[prefix] = val

        put("", results)
        for k, v in flat.items():
            print(f"{k},{v}")
        return
    print(results)


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_mag(args, command, t0) -> int:
    space, inputs = _space_inputs(args)
    res = engine.solve_weighting(space, args.t, args.tol)
    results = {
        "t": args.t,
        "magnitude": res.magnitude,
        "status": res.status,
        "condition_estimate": res.condition_estimate,
        "residual": res.residual,
        "n_points": space.n_points,
    }
    _emit(args, command, {"space": inputs, "t": args.t}, results, t0)
    return 3 if not res.defined else 0


def _cmd_magfn(args, command, t0) -> int:
    space, inputs = _space_inputs(args)
    if not (0 < args.tmin < args.tmax):
        raise BadSpec("need 0 < --tmin < --tmax")
    ts = (np.geomspace if args.log else np.linspace)(
        args.tmin, args.tmax, args.steps
    )
    samples = [
        {"t": s.t, "magnitude": s.magnitude,
         "positive_definite": s.positive_definite, "status": s.status}
        for s in engine.magnitude_function(space, ts, args.tol)
    ]
    # a sweep reports failed scales inside the data, never via exit code
    results = {"samples": samples, "n_points": space.n_points}
    _emit(args, command,
          {"space": inputs, "tmin": args.tmin, "tmax": args.tmax,
           "steps": args.steps, "log": args.log},
          results, t0)
    return 0


def _cmd_weights(args, command, t0) -> int:
    space, inputs = _space_inputs(args)
    res = engine.solve_weighting(space, args.t, args.tol)
    results = {
        "t": args.t,
        "status": res.status,
        "magnitude": res.magnitude,
        "condition_estimate": res.condition_estimate,
        "residual": res.residual,
        "weighting": None if res.weighting is None else [float(x) for x in res.weighting],
        "coweighting": None if res.coweighting is None else [float(x) for x in res.coweighting],
    }
    _emit(args, command, {"space": inputs, "t": args.t}, results, t0)
    return 0


def _cmd_check(args, command, t0) -> int:
    try:
        space, inputs = _space_inputs(args)
    except MetricError as exc:
        results = {"valid": False, "error": type(exc).__name__, "detail": str(exc)}
        _emit(args, command, {"error": True}, results, t0)
        return 2
    rep = engine.definiteness_report(space, args.t)
    results = {
        "valid": True,
        "n_points": space.n_points,
        "t": args.t,
        "is_positive_definite": rep.is_positive_definite,
        "negative_type_verdict": rep.negative_type_verdict,
        "cnd_max_eigenvalue": rep.cnd_max_eigenvalue,
        "scattered_bound_holds": rep.scattered_bound_holds,
    }
    _emit(args, command, {"space": inputs, "t": args.t}, results, t0)
    return 0


def _cmd_diversity(args, command, t0) -> int:
    space, inputs = _space_inputs(args)
    if args.exact:
        res = dv.max_diversity_exact(space, args.t)
        results = {
            "t": args.t, "method": "support_enumeration",
            "value": res.value, "support": list(res.optimizer.support),
            "kkt_gap": res.kkt_gap, "supports_checked": res.iterations,
        }
    else:
        try:
            res = dv.max_diversity(space, args.t, args.tol, args.max_iters)
        except dv.NonConvergence as exc:
            results = {"t": args.t, "method": "frank_wolfe", "converged": False,
                       "kkt_gap": exc.gap, "iterations": exc.iterations}
            _emit(args, command, {"space": inputs, "t": args.t}, results, t0)
            return 0
        results = {
            "t": args.t, "method": "frank_wolfe", "converged": True,
            "value": res.value, "support": list(res.optimizer.support),
            "kkt_gap": res.kkt_gap, "iterations": res.iterations,
        }
    _emit(args, command, {"space": inputs, "t": args.t, "exact": args.exact},
          results, t0)
    return 0


def _cmd_dim(args, command, t0) -> int:
    space, inputs = _space_inputs(args)
    est = dv.dimension_estimate(space, args.tmin, args.tmax, args.method,
                                args.samples, args.tol, args.max_iters)
    results = {
        "slope": est.slope,
        "window": list(est.window),
        "fit_residual": est.fit_residual,
        "method": est.method,
        "samples": args.samples,
    }
    finest = space.min_distance
    if args.tmax * finest > 1.0:
        msg = (f"window may overresolve the space: tmax * smallest gap = "
               f"{args.tmax * finest:.3g} > 1")
        results["window_warning"] = msg
        print(f"warning: {msg}", file=sys.stderr)
    _emit(args, command,
          {"space": inputs, "tmin": args.tmin, "tmax": args.tmax,
           "method": args.method, "samples": args.samples},
          results, t0)
    return 0


def _pixel_input(args) -> pixels.PixelSet:
    if args.ascii and args.pixel_file:
        raise BadSpec("give either --ascii or --pixel-file, not both")
    if args.ascii:
        art = args.ascii.replace("\\n", "\n")
        return pixels.parse_ascii(art, args.scale, dim=args.dim)
    if args.pixel_file:
        with open(args.pixel_file, "r", encoding="utf-8") as fh:
            return pixels.parse_pixel_file(fh.read())
    raise BadSpec("pixel needs --ascii, --pixel-file, or a --body-* option")


def _cmd_pixel(args, command, t0) -> int:
    body_opts = [args.body_box, args.body_simplex, args.body_vertices]
    if sum(1 for b in body_opts if b) > 1:
        raise BadSpec("give at most one --body-* option")
    modes = [name for name, flag in [
        ("intrinsic", args.intrinsic),
        ("weights", args.weights),
        ("convexity", args.convexity),
        ("bounds", args.bounds),
    ] if flag]
    if len(modes) > 1:
        raise BadSpec("give at most one of --intrinsic, --weights, "
                      "--convexity, --bounds")
    mode = modes[0] if modes else ("bounds" if any(body_opts) else "intrinsic")
    if mode == "bounds":
        if not any(body_opts):
            raise BadSpec("--bounds needs a --body-* option")
        if args.body_box:
            spec = pixels.ConvexBodySpec(
                len(args.body_box.split(",")), "box",
                lengths=tuple(args.body_box.split(",")))
        else:
            raw = args.body_simplex or args.body_vertices
            kind = "simplex_vertices" if args.body_simplex else "polytope_vertices"
            verts = tuple(tuple(tok for tok in part.split(","))
                          for part in raw.split(";") if part.strip())
            spec = pixels.ConvexBodySpec(len(verts[0]), kind, vertices=verts)
        body = pixels.build_body(spec)
        bounds = pixels.body_magnitude_bounds(body, args.scale, args.t)
        results = {
            "lower": bounds.lower,
            "upper": bounds.upper,
            "alpha": _rat(bounds.alpha),
            "pixelation_cells": bounds.pixelation.n_cells,
            "V": [_rat(v) for v in bounds.steiner.coefficients],
            "t": args.t,
        }
        _emit(args, command,
              {"body": spec.kind, "raw": body_opts, "scale": str(args.scale),
               "t": args.t}, results, t0)
        return 0

    p = _pixel_input(args)
    inputs = {"dim": p.dim, "scale": _rat(p.scale), "cells": sorted(p.cells)}
    if mode == "weights":
        fm = pixels.weight_measure(p)
        results = {
            "total_mass": _rat(fm.total_mass_exact()),
            "mass_by_dimension": {
                str(k): _rat(v) for k, v in sorted(fm.mass_by_dimension().items())
            },
            "faces": len(fm.coefficients),
            "l1_convex": pixels.is_l1_convex(p),
        }
    elif mode == "convexity":
        ok, pair = pixels.is_l1_convex(p, witness=True)
        results = {
            "l1_convex": ok,
            "witness": None if pair is None else [list(pair[0]), list(pair[1])],
        }
    else:
        sp = pixels.steiner_polynomial(p)
        results = {
            "V": [_rat(v) for v in sp.coefficients],
            "magnitude": _rat(sp.magnitude_exact()),
        }
        if not pixels.is_l1_convex(p):
            results["l1_convex"] = False
            results["note"] = "set is not l1-convex; magnitude is an upper bound"
        if args.t != 1.0:
            results["magnitude_at_t"] = sp.magnitude_at(args.t)
    _emit(args, command, inputs, results, t0)
    return 0


def _parse_nr(text: str, flag: str) -> tuple[int, float]:
    nums = _parse_floats(text)
    if len(nums) != 2:
        raise BadSpec(f"{flag} needs 'n,R'")
    return int(nums[0]), nums[1]


def _cmd_oracle(args, command, t0) -> int:
    chosen = [name for name, flag in [
        ("points", args.points),
        ("interval", args.interval),
        ("compact", args.compact),
        ("cantor", args.cantor),
        ("ball", args.ball),
        ("sphere", args.sphere),
        ("residual", args.residual),
        ("conjecture", args.conjecture),
        ("leading", args.leading),
    ] if flag]
    if len(chosen) != 1:
        raise BadSpec("oracle needs exactly one of --points, --interval, "
                      "--compact, --cantor, --ball, --sphere, --residual, "
                      "--conjecture, --leading")
    src = chosen[0]
    if src == "points":
        pts = _parse_floats(args.points)
        xs, w = lines.line_weighting(pts, args.t)
        results = {"magnitude": lines.line_magnitude(pts, args.t),
                   "weighting": [float(v) for v in w],
                   "points": [float(v) for v in xs]}
        inputs = {"points": pts, "t": args.t}
    elif src == "interval":
        a, b = _parse_floats(args.interval)
        m = lines.interval_magnitude(a, b, args.t)
        results = {"magnitude": m,
                   "measure": lines.interval_weight_measure(a, b, args.t)}
        inputs = {"interval": [a, b], "t": args.t}
    elif src == "compact":
        comps = _parse_pairs(args.compact)
        results = {"magnitude": lines.compact_magnitude(comps, args.t)}
        inputs = {"compact": comps, "t": args.t}
    elif src == "cantor":
        results = {"magnitude": lines.cantor_magnitude(args.t, args.length),
                   "length": args.length}
        inputs = {"cantor": True, "length": args.length, "t": args.t}
    elif src == "ball":
        n, r = _parse_nr(args.ball, "--ball")
        results = {"magnitude": euclid.ball_magnitude(n, r), "n": n, "R": r}
        if float(r).is_integer():
            results["magnitude_exact"] = _rat(
                euclid.ball_magnitude_exact(n, int(r)))
        inputs = {"ball": [n, r]}
    elif src == "sphere":
        n, r = _parse_nr(args.sphere, "--sphere")
        results = {
            "magnitude": euclid.sphere_magnitude(n, r),
            "polynomial_part": euclid.sphere_polynomial_part(n, r),
            "residual": euclid.sphere_residual(n, r),
            "n": n, "R": r,
        }
        inputs = {"sphere": [n, r]}
    elif src == "residual":
        n, r = _parse_nr(args.residual, "--residual")
        results = {"residual": euclid.sphere_residual(n, r), "n": n, "R": r}
        inputs = {"residual": [n, r]}
    elif src == "conjecture":
        n, r = _parse_nr(args.conjecture, "--conjecture")
        exact, conj, diff = euclid.conjecture_compare(n, r)
        results = {"exact": exact, "conjectured": conj, "difference": diff,
                   "n": n, "R": r}
        inputs = {"conjecture": [n, r]}
    else:
        nums = _parse_floats(args.leading)
        if len(nums) != 2:
            raise BadSpec("--leading needs 'n,p'")
        n, p = int(nums[0]), int(nums[1])
        results = {"coefficient": euclid.magnitude_leading_coefficient(n, p),
                   "n": n, "p": p}
        inputs = {"leading": [n, p]}
    _emit(args, command, inputs, results, t0)
    return 0


def _cmd_approx(args, command, t0) -> int:
    chosen = [name for name, flag in [
        ("grid_sizes", args.grid_sizes),
        ("cantor_depths", args.cantor_depths),
        ("ball_counts", args.ball_counts),
    ] if flag]
    if len(chosen) != 1:
        raise BadSpec("approx needs exactly one of --grid-sizes, "
                      "--cantor-depths, --ball-counts")
    src = chosen[0]
    if src == "grid_sizes":
        sizes = _parse_ints(args.grid_sizes)
        if any(n < 2 for n in sizes):
            raise BadSpec("grid sizes must be >= 2")
        specs = [SpaceSpec("lp_grid",
                           {"shape": [n], "spacing": args.length / (n - 1)})
                 for n in sizes]
        levels = sizes
        # a finer uniform grid contains a coarser one iff the coarse
        # steps land on fine points
        nested = all((b - 1) % (a - 1) == 0 for a, b in zip(sizes, sizes[1:]))
        inputs = {"family": "grid", "sizes": sizes, "length": args.length}
    elif src == "cantor_depths":
        depths = _parse_ints(args.cantor_depths)
        if any(d < 0 for d in depths):
            raise BadSpec("depths must be >= 0")
        specs = [SpaceSpec("cantor_endpoints",
                           {"depth": d, "length": args.length})
                 for d in depths]
        levels = depths
        # endpoints survive further subdivision
        nested = all(b > a for a, b in zip(depths, depths[1:]))
        inputs = {"family": "cantor_endpoints", "depths": depths,
                  "length": args.length}
    else:
        counts = _parse_ints(args.ball_counts)
        if not args.ball:
            raise BadSpec("--ball-counts needs --ball 'n,R'")
        n, r = _parse_nr(args.ball, "--ball")
        if args.seed is None:
            raise BadSpec("--ball-counts requires --seed")
        specs = [SpaceSpec("ball_sample",
                           {"n": n, "radius": r, "count": c, "p": args.p},
                           seed=args.seed)
                 for c in counts]
        levels = counts
        # one seed = one sample stream, so larger counts extend smaller ones
        nested = all(b > a for a, b in zip(counts, counts[1:]))
        inputs = {"family": "ball_sample", "n": n, "R": r, "counts": counts,
                  "seed": args.seed, "p": args.p}
    rows = engine.approximate_compact_magnitude(
        specs, args.t, args.tol, levels=levels, nested=nested)
    samples = [
        {"level": s.level, "n_points": s.n_points, "magnitude": s.magnitude,
         "status": s.status, "delta": s.delta}
        for s in rows
    ]
    results = {"samples": samples, "nested": nested, "t": args.t}
    _emit(args, command, {**inputs, "t": args.t}, results, t0)
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_space_inputs(sub) -> None:
    g = sub.add_argument_group("space input (choose one)")
    g.add_argument("--points-1d", help="comma-separated 1-d coordinates")
    g.add_argument("--graph", help="named graph: k32 (= K_{3,2}), k5, c6, p4, k3,4")
    g.add_argument("--grid", help="lattice grid, e.g. 4x5 or 3x3x2")
    g.add_argument("--cantor-depth", type=int, help="middle-thirds endpoints")
    g.add_argument("--ball", help="'n,R,count' seeded lp-ball sample")
    g.add_argument("--matrix", help="CSV distance matrix file")
    g.add_argument("--stdin-matrix", action="store_true",
                   help="read CSV distance matrix from stdin")
    g.add_argument("--spec", help="space spec as JSON text or a file path")
    sub.add_argument("--p", type=int, default=2, choices=(1, 2),
                     help="lp exponent for grid/ball inputs")
    sub.add_argument("--spacing", type=float, default=1.0)
    sub.add_argument("--length", type=float, default=1.0)
    sub.add_argument("--seed", type=int, default=None)


def _common(sub, t_default=1.0) -> None:
    sub.add_argument("--t", type=float, default=t_default, help="scale factor")
    sub.add_argument("--tol", type=float, default=1e-9)
    sub.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="magnitude",
        description="Magnitude, weightings, diversity, and exact oracles "
                    "for finite metric spaces.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    subs = ap.add_subparsers(dest="cmd", required=True)

    for name, helptext in [
        ("mag", "magnitude at one scale"),
        ("magfn", "magnitude function over a scale sweep"),
        ("weights", "weighting and coweighting vectors"),
        ("check", "validate a metric and report definiteness"),
        ("diversity", "maximum diversity at one scale"),
        ("dim", "growth-based dimension estimate"),
    ]:
        sub = subs.add_parser(name, help=helptext)
        _add_space_inputs(sub)
        _common(sub)
        if name == "magfn":
            sub.add_argument("--tmin", type=float, required=True)
            sub.add_argument("--tmax", type=float, required=True)
            sub.add_argument("--steps", type=int, default=32)
            sub.add_argument("--log", action="store_true",
                             help="log-spaced scales (default linear)")
        if name == "diversity":
            sub.add_argument("--exact", action="store_true",
                             help="support enumeration (up to 15 points)")
            sub.add_argument("--max-iters", type=int, default=100_000)
        if name == "dim":
            sub.add_argument("--tmin", type=float, required=True)
            sub.add_argument("--tmax", type=float, required=True)
            sub.add_argument("--samples", type=int, default=12)
            sub.add_argument("--method", default="diversity_growth",
                             choices=("diversity_growth", "covering_growth"))
            sub.add_argument("--max-iters", type=int, default=300_000)
            # growth fits need a laxer optimizer gap than single solves
            sub.set_defaults(tol=1e-6)

    sub = subs.add_parser("pixel", help="exact pixel-set and convex-body machinery")
    sub.add_argument("--ascii", help=r"art rows, e.g. '##\n#.'")
    sub.add_argument("--pixel-file", help="file with 'dim <n> scale <p>/<q>' header")
    sub.add_argument("--scale", default="1", help="cell size as a rational")
    sub.add_argument("--dim", type=int, default=2, choices=(1, 2))
    sub.add_argument("--intrinsic", action="store_true",
                     help="expansion-polynomial coefficients and magnitude (default)")
    sub.add_argument("--weights", action="store_true",
                     help="weight-measure masses instead")
    sub.add_argument("--convexity", action="store_true",
                     help="l1-convexity verdict with a witness pair on failure")
    sub.add_argument("--bounds", action="store_true",
                     help="pixelation bounds for a convex body (needs --body-*)")
    sub.add_argument("--body-box", help="box side lengths 'L1,L2[,L3]'")
    sub.add_argument("--body-simplex", help="simplex vertices 'x,y;x,y;x,y'")
    sub.add_argument("--body-vertices", help="polytope vertices 'x,y;...'")
    _common(sub)

    sub = subs.add_parser("oracle", help="closed forms: line sets, balls, "
                                         "spheres, asymptotics")
    sub.add_argument("--points", help="finite subset of R")
    sub.add_argument("--interval", help="'a,b'")
    sub.add_argument("--compact", help="disjoint closed intervals 'a,b;c,d'")
    sub.add_argument("--cantor", action="store_true",
                     help="middle-thirds limit set")
    sub.add_argument("--length", type=float, default=1.0)
    sub.add_argument("--ball", help="'n,R' Euclidean ball, n odd <= 5")
    sub.add_argument("--sphere", help="'n,R' Euclidean sphere, n even")
    sub.add_argument("--residual", help="'n,R' sphere minus polynomial part")
    sub.add_argument("--conjecture", help="'n,R' intrinsic-volume comparison")
    sub.add_argument("--leading", help="'n,p' large-scale coefficient")
    _common(sub)

    sub = subs.add_parser("approx",
                          help="magnitude along a refinement family of "
                               "finite approximations to a compact space")
    sub.add_argument("--grid-sizes", help="uniform grids on [0, length], "
                                          "e.g. '11,101,1001'")
    sub.add_argument("--cantor-depths", help="endpoint sets, e.g. '1,2,3'")
    sub.add_argument("--ball-counts", help="sample sizes, needs --ball and --seed")
    sub.add_argument("--ball", help="'n,R' for --ball-counts")
    sub.add_argument("--length", type=float, default=1.0)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--p", type=int, default=2, choices=(1, 2))
    _common(sub)

    return ap


_HANDLERS = {
    "mag": _cmd_mag,
    "magfn": _cmd_magfn,
    "weights": _cmd_weights,
    "check": _cmd_check,
    "diversity": _cmd_diversity,
    "dim": _cmd_dim,
    "pixel": _cmd_pixel,
    "oracle": _cmd_oracle,
    "approx": _cmd_approx,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    try:
        return _HANDLERS[args.cmd](args, argv, t0)
    except engine.UndefinedMagnitude as exc:
        print(json.dumps({"error": "UndefinedMagnitude", "detail": str(exc)}),
              file=sys.stderr)
        return 3 if args.cmd == "mag" else 4
    except INPUT_ERRORS as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
              file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
              file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
