"""Command-line interface: verification, leaves, monodromy, completeness.

Every subcommand emits a report with a fixed provenance envelope::

    {tool, version, subcommand, seed, tolerances, params, payload, pass}

serialized as deterministic JSON (sorted keys) or, with ``--text``, as an
aligned human-readable table.  Exit status: 0 when the report's verdict
passes, 1 when it fails, 2 on usage or runtime errors.

Numeric options resolve with precedence

    built-in defaults < CARTANKIT_* environment < --config file < flags.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, ek, su21
from .errors import CartanKitError
from .foliation import flow, probe
from .metric import complete_solution_report
from .models import BUILTIN_MODELS, builtin_model, scale_curvature
from .monodromy import g_monodromy
from .rationality import QUALITY_MARGIN
from .verify import (
    check_anchor_morphism,
    check_equivariance,
    check_jacobi,
    classify_type,
    jacobi_conditions,
)

__all__ = ["main", "build_parser", "run"]


class UsageError(Exception):
    pass


DEFAULTS = {
    "tol": 1e-8,
    "quad_tol": 1e-10,
    "rank_tol": 1e-9,
    "denominator_bound": 10**6,
    "rational_tol": 1e-12,
    "seed": 0,
    "samples": 25,
}

ENV_PREFIX = "CARTANKIT_"
ENV_NAMES = {
    "tol": "TOL",
    "quad_tol": "QUAD_TOL",
    "rank_tol": "RANK_TOL",
    "denominator_bound": "DENOM_BOUND",
    "rational_tol": "RATIONAL_TOL",
    "seed": "SEED",
    "samples": "SAMPLES",
}
_INT_OPTIONS = {"denominator_bound", "seed", "samples", "grid"}


def _coerce(name, raw):
    try:
        return int(raw) if name in _INT_OPTIONS else float(raw)
    except (TypeError, ValueError):
        raise UsageError(f"option {name!r}: cannot parse {raw!r}") from None


def resolve_options(args, config):
    """Apply the defaults < env < config < flags precedence chain."""
    out = {}
    for name, default in DEFAULTS.items():
        value = default
        env_key = ENV_PREFIX + ENV_NAMES[name]
        if env_key in os.environ:
            value = _coerce(name, os.environ[env_key])
        if name in config:
            value = _coerce(name, config[name])
        explicit = getattr(args, name, None)
        if explicit is not None:
            value = explicit
        if name != "seed" and not value > 0:
            raise UsageError(f"option {name!r} must be positive, got {value}")
        out[name] = value
    return out


def _tolerances_block(opts):
    return {
        "identity_tol": opts["tol"],
        "quad_rel_tol": opts["quad_tol"],
        "rank_tol": opts["rank_tol"],
        "denominator_bound": opts["denominator_bound"],
        "rational_tol": opts["rational_tol"],
        "quality_margin": QUALITY_MARGIN,
    }


def _jsonify(value):
    """Recursively convert numpy scalars/arrays to JSON-safe primitives."""
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonify(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return repr(value)
    return value


def _envelope(subcommand, opts, params, payload, ok):
    return _jsonify({
        "tool": "cartankit",
        "version": __version__,
        "subcommand": subcommand,
        "seed": opts["seed"],
        "tolerances": _tolerances_block(opts),
        "params": params,
        "payload": payload,
        "pass": bool(ok),
    })


def _flatten(prefix, value, lines):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], lines)
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, lines)
    else:
        lines.append((prefix, json.dumps(value)))


def render_text(report):
    """Aligned two-column rendering of a report for human readers."""
    lines = []
    _flatten("", report, lines)
    width = max(len(k) for k, _ in lines)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in lines) + "\n"


def _model_from_args(args):
    params = {}
    if getattr(args, "params", None):
        try:
            params = json.loads(args.params)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--params is not valid JSON: {exc}") from None
        if not isinstance(params, dict):
            raise UsageError("--params must be a JSON object")
    return builtin_model(args.model, **params), params


def _parse_point(text, dim):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"--point is not a comma-separated vector: {text!r}")
    if len(vals) != dim:
        raise UsageError(f"--point has {len(vals)} coordinates, model base "
                         f"has dimension {dim}")
    return np.array(vals)


# -- subcommand implementations ----------------------------------------------


def _run_verify(args, opts):
    model, params = _model_from_args(args)
    if getattr(args, "corrupt_curvature", None) is not None:
        model = scale_curvature(model, args.corrupt_curvature)
    rng = np.random.default_rng(opts["seed"])
    samples = opts["samples"]
    xs = rng.uniform(-1.5, 1.5, size=(samples, model.d))
    fdim = model.fiber_dim
    maxima = {"group_jacobi": 0.0, "matrix_representation": 0.0,
              "equivariance_infinitesimal": 0.0, "equivariance_finite": 0.0,
              "bianchi": 0.0, "jacobiator": 0.0, "anchor_morphism": 0.0}
    for x in xs:
        xi = rng.normal(size=(3, fdim))
        conds = jacobi_conditions(model, x, *xi)
        maxima["group_jacobi"] = max(maxima["group_jacobi"],
                                     conds["g_jacobi"])
        maxima["matrix_representation"] = max(
            maxima["matrix_representation"], conds["representation"])
        maxima["equivariance_infinitesimal"] = max(
            maxima["equivariance_infinitesimal"], conds["equivariance"])
        maxima["bianchi"] = max(maxima["bianchi"], conds["bianchi"])
        jac = check_jacobi(model, x, *xi)
        maxima["jacobiator"] = max(maxima["jacobiator"],
                                   float(np.linalg.norm(jac)))
        anc = check_anchor_morphism(model, x, xi[0], xi[1])
        maxima["anchor_morphism"] = max(maxima["anchor_morphism"],
                                        float(np.linalg.norm(anc)))
        alpha = rng.normal(size=model.group.dim)
        u, v = rng.normal(size=(2, model.n))
        fin = check_equivariance(model, x, alpha, u, v,
                                 t=float(rng.uniform(0.1, 2.0)),
                                 infinitesimal=False)
        maxima["equivariance_finite"] = max(maxima["equivariance_finite"],
                                            fin["max_finite"])
    checks = [{"name": k, "max_residual": v, "tolerance": opts["tol"],
               "pass": v < opts["tol"]} for k, v in sorted(maxima.items())]
    ok = all(c["pass"] for c in checks)
    payload = {
        "model": args.model,
        "model_params": params,
        "samples": samples,
        "corrupt_curvature": getattr(args, "corrupt_curvature", None),
        "checks": checks,
        "geometric_type": classify_type(model, seed=opts["seed"]).as_dict(),
    }
    return payload, {"model": args.model, "params": params}, ok


def _invariant_functions(model):
    if model.name == "extremal_kahler":
        return {"I1": lambda x: ek.invariants(x)[0],
                "I2": lambda x: ek.invariants(x)[1]}
    if model.name == "ek_su21":
        return {"I1": lambda x: ek.invariants(su21.to_ek_point(*x))[0],
                "I2": lambda x: ek.invariants(su21.to_ek_point(*x))[1]}
    return {}


def _run_leaf(args, opts):
    model, params = _model_from_args(args)
    x = _parse_point(args.point, model.d)
    info = probe(model, x, tol=opts["rank_tol"])
    payload = {
        "model": args.model,
        "point": [float(v) for v in x],
        "rank": info.leaf_dim,
        "isotropy_dim": info.isotropy_dim,
        "orbit_dim": info.orbit_dim,
        "kernel": [[float(v) for v in row] for row in info.kernel],
        "invariant_drift": None,
        "flow": None,
    }
    if args.flow_section is not None:
        section = _parse_section(args.flow_section, model.fiber_dim)
        result = flow(model, x, section, args.t)
        drift = {}
        for name, f in _invariant_functions(model).items():
            vals = np.array([f(p) for p in result.points])
            drift[name] = float(np.max(np.abs(vals - vals[0])))
        payload["invariant_drift"] = drift or None
        payload["flow"] = {
            "section": args.flow_section,
            "t_final": args.t,
            "end": [float(v) for v in result.end],
        }
    return payload, {"model": args.model, "point": payload["point"]}, True


def _parse_section(text, fiber_dim):
    if text.startswith("e") and text[1:].isdigit():
        k = int(text[1:]) - 1
        if not 0 <= k < fiber_dim:
            raise UsageError(f"section {text!r} outside fiber dimension "
                             f"{fiber_dim}")
        vec = np.zeros(fiber_dim)
        vec[k] = 1.0
        return vec
    try:
        vec = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise UsageError(f"--flow-section must be e<k> or csv: {text!r}")
    if vec.size != fiber_dim:
        raise UsageError(f"--flow-section has {vec.size} entries, fiber "
                         f"dimension is {fiber_dim}")
    return vec


def _run_monodromy(args, opts):
    if args.model != "extremal_kahler":
        raise UsageError(
            "monodromy problems are generated from the extremal_kahler "
            f"leaf atlas; got model {args.model!r}")
    problem = ek.monodromy_problem(args.c1, args.c2,
                                   numeric=bool(args.numeric))
    report = g_monodromy(problem, rel_tol=opts["quad_tol"],
                         bound=opts["denominator_bound"],
                         rational_tol=opts["rational_tol"])
    ok = report.discrete == "discrete"
    return (report.as_dict(),
            {"model": args.model, "c1": args.c1, "c2": args.c2,
             "numeric": bool(args.numeric)}, ok)


def _run_complete(args, opts):
    model, params = _model_from_args(args)
    payload = complete_solution_report(model, {"c1": args.c1, "c2": args.c2})
    ok = any(leaf["complete"] for leaf in payload["leaves"])
    return payload, {"model": args.model, "c1": args.c1, "c2": args.c2}, ok


def _run_ek_classify(args, opts):
    cls = ek.classify(args.c1, args.c2, bound=opts["denominator_bound"],
                      rational_tol=opts["rational_tol"])
    return cls.as_dict(), {"c1": args.c1, "c2": args.c2}, True


def _run_ek_table1(args, opts):
    rows = [{"condition": r.condition, "frame_bundle": r.frame_bundle,
             "solution": r.solution} for r in ek.table1()]
    return {"rows": rows}, {}, True


def _run_ek_su21(args, opts):
    a, b = args.a, args.b
    u1 = args.u1 or 0.0
    u2 = args.u2 or 0.0
    x = su21.su21_embed(a, b, complex(u1, u2))
    casimir, det = su21.su21_invariants(x)
    point = su21.to_ek_point(a, b, u1, u2)
    i1, i2 = ek.invariants(point)
    kernel = su21.su21_kernel_closed(a, b, bound=opts["denominator_bound"],
                                     tol=opts["rational_tol"])
    payload = {
        "point": {"a": a, "b": b, "u1": u1, "u2": u2},
        "casimir": [casimir.real, casimir.imag],
        "det": [det.real, det.imag],
        "ek_point": [float(v) for v in point],
        "I1": float(i1),
        "I2": float(i2),
        "dictionary_residuals": {
            k: float(v)
            for k, v in su21.dictionary_residuals(a, b, u1, u2).items()},
        "kernel": kernel.as_dict(),
    }
    return payload, {"a": a, "b": b, "u1": u1, "u2": u2}, \
        kernel.closed == "closed"


def _run_ek_sweep(args, opts):
    kwargs = {"bound": opts["denominator_bound"],
              "rational_tol": opts["rational_tol"]}
    if args.grid is not None:
        kwargs["grid"] = args.grid
    if args.c1_min is not None or args.c1_max is not None:
        if args.c1_min is None or args.c1_max is None:
            raise UsageError("provide both --c1-min and --c1-max")
        kwargs["c1_range"] = (args.c1_min, args.c1_max)
    if args.c2_min is not None or args.c2_max is not None:
        if args.c2_min is None or args.c2_max is None:
            raise UsageError("provide both --c2-min and --c2-max")
        kwargs["c2_range"] = (args.c2_min, args.c2_max)
    atlas = ek.sweep(**kwargs)
    return atlas, {k: (list(v) if isinstance(v, tuple) else v)
                   for k, v in kwargs.items()}, True


# -- parser ----------------------------------------------------------------


def _add_common(sp):
    sp.add_argument("--out", help="write the report to this path")
    sp.add_argument("--text", action="store_true",
                    help="aligned text output instead of JSON")
    sp.add_argument("--config", help="JSON file with default options")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--tol", type=float, help="identity residual tolerance")
    sp.add_argument("--quad-tol", dest="quad_tol", type=float,
                    help="quadrature relative tolerance")
    sp.add_argument("--rank-tol", dest="rank_tol", type=float,
                    help="anchor rank threshold")
    sp.add_argument("--denominator-bound", dest="denominator_bound",
                    type=int, help="rationality search bound")
    sp.add_argument("--rational-tol", dest="rational_tol", type=float,
                    help="rationality residual tolerance")
    sp.add_argument("--samples", type=int, help="sample point count")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cartankit",
        description="verification and classification for G-structure "
                    "algebroids in canonical form")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("verify", help="structure-identity suite on a model")
    p.add_argument("--model", required=True, choices=sorted(BUILTIN_MODELS))
    p.add_argument("--params", help="JSON object of model parameters")
    p.add_argument("--corrupt-curvature", dest="corrupt_curvature",
                   type=float, help="scale R by this factor (negative "
                   "control)")
    _add_common(p)
    p.set_defaults(run=_run_verify)

    p = sub.add_parser("leaf", help="leaf probe and optional anchor flow")
    p.add_argument("--model", required=True, choices=sorted(BUILTIN_MODELS))
    p.add_argument("--params", help="JSON object of model parameters")
    p.add_argument("--point", required=True, help="base point, csv")
    p.add_argument("--flow-section", dest="flow_section",
                   help="constant section e<k> or csv coefficients")
    p.add_argument("--t", type=float, default=5.0, help="flow time")
    _add_common(p)
    p.set_defaults(run=_run_leaf)

    p = sub.add_parser("monodromy",
                       help="monodromy / G-monodromy of a sphere leaf")
    p.add_argument("--model", default="extremal_kahler")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--numeric", action="store_true",
                   help="integrate splitting curvature by finite "
                   "differences instead of closed forms")
    _add_common(p)
    p.set_defaults(run=_run_monodromy)

    p = sub.add_parser("complete",
                       help="completeness verdicts for a level set")
    p.add_argument("--model", default="extremal_kahler")
    p.add_argument("--params", help="JSON object of model parameters")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    _add_common(p)
    p.set_defaults(run=_run_complete)

    p_ek = sub.add_parser("ek", help="extremal-Kahler classification tools")
    ek_sub = p_ek.add_subparsers(dest="ek_subcommand", required=True)

    p = ek_sub.add_parser("classify", help="leaf families of a level set")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    _add_common(p)
    p.set_defaults(run=_run_ek_classify, subname="ek classify")

    p = ek_sub.add_parser("table1", help="classification table")
    _add_common(p)
    p.set_defaults(run=_run_ek_table1, subname="ek table1")

    p = ek_sub.add_parser("su21", help="su(2,1) dictionary at a point")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--u1", type=float)
    p.add_argument("--u2", type=float)
    _add_common(p)
    p.set_defaults(run=_run_ek_su21, subname="ek su21")

    p = ek_sub.add_parser("sweep", help="classify a (c1, c2) grid")
    p.add_argument("--grid", type=int)
    p.add_argument("--c1-min", dest="c1_min", type=float)
    p.add_argument("--c1-max", dest="c1_max", type=float)
    p.add_argument("--c2-min", dest="c2_min", type=float)
    p.add_argument("--c2-max", dest="c2_max", type=float)
    _add_common(p)
    p.set_defaults(run=_run_ek_sweep, subname="ek sweep")

    return parser


def run(args):
    """Execute parsed arguments; returns (report dict, rendered str, code)."""
    config = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read --config: {exc}") from None
        if not isinstance(config, dict):
            raise UsageError("--config must hold a JSON object")
    opts = resolve_options(args, config)
    payload, params, ok = args.run(args, opts)
    name = getattr(args, "subname", args.subcommand)
    report = _envelope(name, opts, params, payload, ok)
    if getattr(args, "text", False):
        if name == "ek table1":
            rendered = ek.render_table1()
        else:
            rendered = render_text(report)
    else:
        rendered = json.dumps(report, sort_keys=True, indent=2,
                              allow_nan=False) + "\n"
    return report, rendered, 0 if ok else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, rendered, code = run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CartanKitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "out", None):
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(rendered)
        except OSError as exc:
            print(f"error: cannot write --out: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
