"""Configuration-driven command line front end.

Commands: spectrum, structure, stationary, limitset, jsr, regularity, and
reproduce (the three bundled example measures with figure-style exports).
Artifacts (JSON/CSV/SVG) are byte-deterministic for a fixed (config, seed),
regardless of the thread count in RMPLAB_THREADS.

Exit codes: 0 success, 2 config/measure validation error, 3 aborted because
the top Lyapunov gap could not be certified.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import kernels
from .fields import FieldSpec
from .jsr import compactness_certificate, jsr_bounds, noncompactness_witness
from .limitset import (attractor_point_block, limit_set_sample, orbit_escape_test,
                       proximal_check)
from .linalg import LinalgError, Matrix, ProjPoint, Subspace
from .measure import MeasureSpec, RngStream, validate
from .presets import example_chart, example_line, example_measure
from .regularity import direction_convergence_rate, hitting_probability_curve
from .skew import ChartError, SkewChart, to_chart
from .stationary import sample_stationary, stationarity_test
from .structure import algebra_closure, compute_structure, duality_check, minimal_invariant_subspace
from .svg import emit_svg_scatter
from .walks import lyapunov_spectrum, top_gap

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNCERTIFIED = 3

_NUMBER = {"type": ["number", "string"]}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["command"],
    "properties": {
        "command": {
            "enum": ["spectrum", "structure", "stationary", "limitset",
                     "jsr", "regularity", "reproduce"]
        },
        "seed": {"type": "integer", "minimum": 0},
        "out": {"type": "string"},
        "measure": {
            "type": "object",
            "additionalProperties": False,
            "required": ["field", "atoms"],
            "properties": {
                "field": {
                    "oneOf": [
                        {"const": "real"},
                        {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["padic"],
                            "properties": {"padic": {"type": "integer", "minimum": 2}},
                        },
                    ]
                },
                "dimension": {"type": "integer", "minimum": 1},
                "atoms": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"type": "array", "items": {"type": "array", "items": _NUMBER}},
                },
                "weights": {"type": "array", "items": _NUMBER},
            },
        },
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "trials": {"type": "integer", "minimum": 1},
                "depth": {"type": "integer", "minimum": 1},
                "eps": {"type": "number", "exclusiveMinimum": 0},
                "n_grid": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                "example": {"enum": [1, 2, 3]},
                "sampler": {"enum": ["top", "pushforward"]},
                "max_word_len": {"type": "integer", "minimum": 1},
                "budget": {"type": "integer", "minimum": 1},
                "start": {"type": "array", "items": _NUMBER},
                "functional": {"type": "array", "items": _NUMBER},
            },
        },
    },
}


class ConfigError(ValueError):
    pass


class UncertifiedGapError(RuntimeError):
    pass


def _fail(kind: str, detail: str) -> None:
    print(json.dumps({"error": kind, "detail": detail}), file=sys.stderr)


def _dump_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _dump_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(x)) if isinstance(x, float) else str(x)
                              for x in row))
    path.write_text("\n".join(lines) + "\n")


def load_config(obj: dict) -> dict:
    try:
        jsonschema.validate(obj, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ConfigError(e.message) from None
    if obj["command"] == "reproduce":
        if "example" not in obj.get("params", {}):
            raise ConfigError("reproduce needs params.example in {1,2,3}")
    elif "measure" not in obj:
        raise ConfigError(f"command {obj['command']!r} needs a measure")
    return obj


def _measure_from_config(cfg: dict) -> MeasureSpec:
    try:
        spec = MeasureSpec.from_json(cfg["measure"])
    except (ValueError, ZeroDivisionError, KeyError) as e:
        raise ConfigError(f"bad measure: {e}") from None
    report = validate(spec)
    if not report:
        raise ConfigError("; ".join(report.problems))
    return spec


def _require_gap(spec: MeasureSpec, rng: RngStream, n: int = 500, trials: int = 100):
    gap = top_gap(spec, n, trials, rng)
    if not gap.simple_top:
        raise UncertifiedGapError(
            f"top gap not certified (gap={gap.gap:.4g}, ci={gap.ci})")
    return gap


def _subspace_json(s: Subspace | None):
    if s is None:
        return None
    return [[repr(float(x)) if s.field.is_real else str(x) for x in v] for v in s.basis]


def _cmd_spectrum(spec, params, rng, out: Path):
    n = params.get("n", 1000)
    trials = params.get("trials", 200)
    gap = top_gap(spec, n, trials, rng.substream(1))
    est = gap.spectrum
    result = {
        "lambda": list(est.lambdas),
        "stderr": list(est.stderr),
        "gap": gap.gap,
        "gap_ci": list(gap.ci),
        "simple_top": gap.simple_top,
        "n": n,
        "trials": trials,
        "backend": kernels.BACKEND if spec.field.is_real else "exact",
    }
    _dump_json(out / "spectrum.json", result)
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def _cmd_structure(spec, params, rng, out: Path):
    n = params.get("n", 800)
    trials = params.get("trials", 150)
    report = compute_structure(spec, n, trials, rng.substream(1))
    result = report.to_json()
    if report.gap_certified:
        try:
            result["duality_ok"] = duality_check(spec, report, n, trials, rng.substream(2))
        except ValueError:
            result["duality_ok"] = None
    _dump_json(out / "structure.json", result)
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def _cmd_stationary(spec, params, rng, out: Path):
    _require_gap(spec, rng.substream(99))
    n = params.get("n", 200)
    trials = params.get("trials", 2000)
    sampler = params.get("sampler", "top")
    start = None
    if sampler == "pushforward":
        coords = params.get("start")
        if coords is None:
            raise ConfigError("pushforward sampler needs params.start")
        start = ProjPoint.make(spec.field, [spec.field.coerce(c) for c in coords])
    nu = sample_stationary(spec, n, trials, rng.substream(1), sampler, start=start)
    resid, threshold, ok = stationarity_test(nu, spec, rng.substream(2), n_perm=100)
    result = {
        "sampler": sampler,
        "n": n,
        "trials": trials,
        "stationarity_residual": resid,
        "stationarity_threshold": threshold,
        "stationary": bool(ok),
    }
    _dump_csv(out / "stationary.csv",
              [f"x{i}" for i in range(spec.dim)],
              [[float(c) for c in p.coords] for p in nu.points])
    _dump_json(out / "stationary.json", result)
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def _cmd_limitset(spec, params, rng, out: Path):
    depth = params.get("max_word_len", 8)
    budget = params.get("budget", 4000)
    samples = limit_set_sample(spec, depth, budget, rng.substream(1))
    rows = []
    for s in samples:
        rows.append([*(float(c) for c in s.attractor.coords),
                     float(s.lambda_top), "".join(str(i) for i in s.word)])
    _dump_csv(out / "limitset.csv",
              [f"x{i}" for i in range(spec.dim)] + ["lambda_top", "word"], rows)
    result = {"attractors": len(samples), "max_word_len": depth, "budget": budget}
    _dump_json(out / "limitset.json", result)
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def _invariant_line(spec: MeasureSpec) -> Subspace | None:
    """Smallest proper invariant subspace generated by a canonical vector."""
    alg = algebra_closure(spec.atoms)
    best = None
    one = 1.0 if spec.field.is_real else 1
    for i in range(spec.dim):
        e = [0] * spec.dim
        e[i] = one
        w = minimal_invariant_subspace(alg, e)
        if w.dim < spec.dim and (best is None or w.dim < best.dim):
            best = w
    return best


def _cmd_jsr(spec, params, rng, out: Path):
    depth = params.get("depth", 4)
    bounds = jsr_bounds(spec.atoms, depth)
    result = {
        "jsr_lower": bounds.lower,
        "jsr_upper": bounds.upper,
        "depth": bounds.depth,
        "norm_used": bounds.norm_used,
        "witness_word_lower": list(bounds.witness_word_lower),
    }
    line = _invariant_line(spec) if spec.field.is_real else None
    if line is not None and line.dim == 1:
        chart = SkewChart.make(line)
        cert = compactness_certificate(spec, chart, depth)
        result["certificate"] = cert.to_json()
        witness = noncompactness_witness(spec, chart, min(depth + 4, 8))
        result["noncompactness_witness"] = list(witness) if witness else None
    _dump_json(out / "jsr.json", result)
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def _cmd_regularity(spec, params, rng, out: Path):
    _require_gap(spec, rng.substream(99))
    trials = params.get("trials", 2000)
    n_grid = params.get("n_grid", [25, 50, 75, 100, 150, 200])
    eps = params.get("eps", 0.1)
    coords = params.get("start")
    x = (ProjPoint.make(spec.field, [spec.field.coerce(c) for c in coords])
         if coords else ProjPoint.make(spec.field, [0.0] * (spec.dim - 1) + [1.0]))
    fco = params.get("functional")
    f = (ProjPoint.make(spec.field, [spec.field.coerce(c) for c in fco])
         if fco else x)
    curve = direction_convergence_rate(spec, x, n_grid, trials, rng.substream(1))
    hit = hitting_probability_curve(spec, x, f, eps, n_grid, trials, rng.substream(2))
    result = {
        "direction_slope": curve.slope,
        "direction_slope_ci": list(curve.slope_ci),
        "hitting_slope": hit.slope,
        "eps": eps,
        "n_grid": list(curve.ns),
    }
    _dump_csv(out / "direction_decay.csv", ["n", "statistic", "stderr"],
              list(zip(curve.ns, curve.values, curve.stderr)))
    _dump_csv(out / "hitting_decay.csv", ["n", "probability", "stderr"],
              list(zip(hit.ns, hit.values, hit.stderr)))
    _dump_json(out / "regularity.json", result)
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def _escape_evidence(spec, chart, starts, n=2000, threshold=1e3):
    """(label, atom index) pairs whose fiber orbit blows up monotonically."""
    escapes = []
    for label, s in starts:
        for gi, g in enumerate(spec.atoms):
            try:
                escaped, _ = orbit_escape_test(g, s, chart, n, threshold)
            except (ChartError, LinalgError):
                continue
            if escaped:
                escapes.append({"atom": gi, "start": label})
    return escapes


def reproduce_example(which: int, seed: int, out: Path) -> dict:
    """Run the full diagnostic bundle for one bundled example measure."""
    spec = example_measure(which)
    chart = example_chart()
    rng = RngStream(seed)

    gap = top_gap(spec, 1000, 200, rng.substream(1))
    report = compute_structure(spec, 600, 120, rng.substream(2))

    nu = sample_stationary(spec, 200, 1500, rng.substream(3), "top")
    cyl_rows, circ_rows = [], []
    for p in nu.points:
        try:
            s = to_chart(p, chart)
        except ChartError:
            continue
        t = float(s.t[0])
        x1, x2 = (float(c) for c in s.xi)
        for sg in (1.0, -1.0):
            cyl_rows.append((sg * t, math.atan2(sg * x2, sg * x1), sg * x1, sg * x2))
            circ_rows.append((sg * x1, sg * x2))
    _dump_csv(out / "cylinder.csv", ["t", "theta", "xi1", "xi2"], cyl_rows)
    _dump_csv(out / "circle.csv", ["xi1", "xi2"], circ_rows)
    (out / "cylinder.svg").write_text(emit_svg_scatter(
        [(r[1], r[0]) for r in cyl_rows], title=f"example {which}: fiber vs base angle"))
    (out / "circle.svg").write_text(emit_svg_scatter(
        circ_rows, title=f"example {which}: base circle", xlim=(-1.2, 1.2), ylim=(-1.2, 1.2)))

    attractors = []
    starts = []
    for gi, g in enumerate(spec.atoms):
        data = proximal_check(g)
        if data is None:
            continue
        entry = {"atom": gi, "lambda_top": data.lambda_top}
        try:
            s = attractor_point_block(g, chart)
            entry["t0"] = float(s.t[0])
            entry["xi0"] = [float(c) for c in s.xi]
            starts.append((f"p+(g{gi + 1})", s))
        except (LinalgError, ChartError):
            try:
                s = to_chart(data.attractor, chart)
                starts.append((f"p+(g{gi + 1})", s))
            except ChartError:
                pass
        attractors.append(entry)
    starts.append(("generic", to_chart(
        ProjPoint.make(spec.field, [0.0, 1.0, 0.0]), chart)))

    cert = compactness_certificate(spec, chart, depth=4)
    witness = None
    escapes = []
    if cert.passed:
        verdict = "compact-certified"
    else:
        witness = noncompactness_witness(spec, chart, depth=6)
        if witness is not None:
            verdict = "non-compact-witness"
        else:
            escapes = _escape_evidence(spec, chart, starts)
            verdict = "non-compact-escape" if escapes else "undetermined"

    findings = {
        "example": which,
        "seed": seed,
        "lambda": list(report.spectrum.lambdas),
        "gap": gap.gap,
        "gap_ci": list(gap.ci),
        "gap_certified": gap.simple_top,
        "L_mu": _subspace_json(report.L_mu),
        "U_mu": _subspace_json(report.U_mu),
        "attractors": attractors,
        "compactness": {
            "verdict": verdict,
            "certificate": cert.to_json(),
            "witness": list(witness) if witness else None,
            "escapes": escapes,
        },
        "stationary_samples": len(cyl_rows),
    }
    _dump_json(out / "findings.json", findings)
    return findings


def run(config: dict, seed: int | None = None, out: str | None = None) -> int:
    """Execute a validated config; returns the process exit code."""
    try:
        config = load_config(config)
    except ConfigError as e:
        _fail("validation", str(e))
        return EXIT_INVALID
    params = config.get("params", {})
    use_seed = seed if seed is not None else config.get("seed", 0)
    outdir = Path(out if out is not None else config.get("out", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    rng = RngStream(use_seed)
    try:
        if config["command"] == "reproduce":
            findings = reproduce_example(params["example"], use_seed, outdir)
            print(json.dumps(findings, sort_keys=True))
            return EXIT_OK
        spec = _measure_from_config(config)
        handler = {
            "spectrum": _cmd_spectrum,
            "structure": _cmd_structure,
            "stationary": _cmd_stationary,
            "limitset": _cmd_limitset,
            "jsr": _cmd_jsr,
            "regularity": _cmd_regularity,
        }[config["command"]]
        return handler(spec, params, rng, outdir)
    except ConfigError as e:
        _fail("validation", str(e))
        return EXIT_INVALID
    except UncertifiedGapError as e:
        _fail("uncertified-gap", str(e))
        return EXIT_UNCERTIFIED
    except NotImplementedError as e:
        _fail("validation", f"unsupported over this field: {e}")
        return EXIT_INVALID


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rmplab",
        description="Random matrix product laboratory: Lyapunov spectra, "
                    "invariant structure, stationary measures, limit sets.")
    sub = parser.add_subparsers(dest="mode", required=True)
    p_run = sub.add_parser("run", help="execute a JSON config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None)
    p_rep = sub.add_parser("reproduce", help="rebuild a bundled example's figure data")
    p_rep.add_argument("--example", type=int, required=True, choices=(1, 2, 3))
    p_rep.add_argument("--seed", type=int, default=0)
    p_rep.add_argument("--out", default=None)
    args = parser.parse_args(argv)

    if args.mode == "reproduce":
        config = {"command": "reproduce", "params": {"example": args.example}}
        return run(config, seed=args.seed, out=args.out)
    try:
        obj = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as e:
        _fail("validation", f"cannot read config: {e}")
        return EXIT_INVALID
    if not isinstance(obj, dict):
        _fail("validation", "config must be a JSON object")
        return EXIT_INVALID
    return run(obj, seed=args.seed, out=args.out)


if __name__ == "__main__":
    sys.exit(main())
