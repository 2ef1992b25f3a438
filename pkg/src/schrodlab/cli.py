"""Command-line surface: experiment orchestration and reporting.

Subcommands: propagate, sweep, extremizer, packing, equivalence, exponents,
fit, run.  Every run writes a manifest (config hash, seed, grid parameters,
version, timestamps) sufficient to reproduce its outputs; CSV and fitted
JSON records round-trip through the ``fit`` subcommand.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .config import (
    ConfigError,
    Manifest,
    atomic_write,
    load_config,
    now_iso,
    output_dir,
    parse_exponent_list,
    parse_float_list,
)
from .exponents import (
    INF,
    ExponentTriple,
    alpha_critical,
    as_exponent,
    exponent_float,
    predicted_exponents_1d,
    q_star,
)
from .extremizers import ExtremizerSpec
from .fields import GridSpec, SampledField
from .normlab import (
    CSV_COLUMNS,
    EstimateBudget,
    ScalingRun,
    fit_power_log,
    fit_record,
    run_sweep,
    sweep_rows,
)
from .norms import MixedNormSpec, lebesgue_norm, mixed_norm
from .packing import keich_translations, serialize_packing, union_measure
from .propagator import evolve_spectral


def _write_rows(path: str, rows: list[dict]) -> None:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(str(row[c]) for c in CSV_COLUMNS))
    atomic_write(path, "\n".join(lines) + "\n")


def _read_rows(path: str) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _emit(args, name: str, payload: dict) -> None:
    os.makedirs(args.out, exist_ok=True)
    atomic_write(os.path.join(args.out, name), json.dumps(payload, indent=1, sort_keys=True))


def _manifest(args, grid: dict, started: str) -> None:
    man = Manifest(
        config_hash=getattr(args, "config_hash", "cli"),
        seed=getattr(args, "seed", 0),
        grid=grid,
        version=__version__,
        started_at=started,
        finished_at=now_iso(),
    )
    man.write(os.path.join(args.out, "manifest.json"))


def cmd_propagate(args) -> int:
    started = now_iso()
    grid = GridSpec(args.d, args.n, args.extent)
    x = grid.space_meshes()
    if args.datum == "gaussian":
        r2 = sum(m**2 for m in x)
        vals = np.exp(-r2 / 2).astype(complex)
    elif args.datum == "delta":
        vals = np.zeros(grid.shape, dtype=complex)
        vals[(grid.points_per_axis // 2,) * grid.dim] = 1.0 / grid.cell_volume
    else:
        raise SystemExit(f"unknown datum {args.datum!r}")
    f = SampledField(grid, vals)
    times = np.array(parse_float_list(args.times))
    u = evolve_spectral(f, times)
    spec = MixedNormSpec(as_exponent(args.q), as_exponent(args.r), (float(times[0]), float(times[-1])))
    report = {
        "datum": args.datum,
        "l2_initial": lebesgue_norm(f, 2),
        "l2_final": lebesgue_norm(SampledField(grid, u.values[-1]), 2),
        "times": [float(t) for t in times],
    }
    if times.size >= 2:
        report["mixed_norm"] = mixed_norm(u, spec)
        report["mixed_spec"] = {"q": str(spec.q), "r": str(spec.r)}
    os.makedirs(args.out, exist_ok=True)
    np.save(os.path.join(args.out, "field_final.npy"), u.values[-1])
    _emit(args, "propagate.json", report)
    _manifest(args, {"dim": grid.dim, "n": grid.points_per_axis, "extent": grid.extent}, started)
    print(json.dumps(report, indent=1, sort_keys=True))
    return 0


def _triple(args) -> ExponentTriple:
    return ExponentTriple(as_exponent(args.p), as_exponent(args.q), as_exponent(args.r), args.d)


def cmd_sweep(args) -> int:
    started = now_iso()
    triple = _triple(args)
    budget = EstimateBudget(random_trials=args.random_trials, ascent_iters=args.ascent_iters)
    run = run_sweep(triple, parse_float_list(args.lambdas), budget=budget, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    _write_rows(os.path.join(args.out, "sweep.csv"), sweep_rows(run))
    _emit(args, "sweep_fit.json", fit_record(run))
    _manifest(args, {"dim": triple.d, "lambdas": parse_float_list(args.lambdas)}, started)
    rec = fit_record(run)
    print(json.dumps(rec, indent=1, sort_keys=True))
    return 0


def cmd_extremizer(args) -> int:
    started = now_iso()
    spec = ExtremizerSpec(args.family, args.scale, args.d, {"eps": args.eps})
    built = spec.build()
    report = {"family": args.family, "scale": args.scale, "d": args.d}
    if args.family in ("focusing", "knapp_traveling", "plate"):
        f = built
        report["l2"] = lebesgue_norm(f, 2)
        report["l4"] = lebesgue_norm(f, 4)
        report["grid_n"] = f.grid.points_per_axis
        report["grid_extent"] = f.grid.extent
    elif args.family == "besicovitch_family":
        report["bumps"] = built.count
        report["disjoint"] = built.disjoint()
        report["inside_unit_ball"] = built.inside_unit_ball()
        report["square_function_l4"] = built.square_function_norm(4.0)
    else:
        report["directions"] = len(built.nu_values)
        report["length_half"] = built.length_half
        report["width_half"] = built.width_half
    os.makedirs(args.out, exist_ok=True)
    _emit(args, "extremizer.json", report)
    _manifest(args, {"dim": args.d}, started)
    print(json.dumps(report, indent=1, sort_keys=True))
    return 0


def cmd_packing(args) -> int:
    started = now_iso()
    packing = keich_translations(args.lam, args.d)
    if not packing.contained_in_band():
        print("containment check failed", file=sys.stderr)
        return 2
    measure = union_measure(packing, resolution=args.resolution)
    os.makedirs(args.out, exist_ok=True)
    atomic_write(os.path.join(args.out, "packing.txt"), serialize_packing(packing))
    _emit(
        args,
        "packing.json",
        {
            "lambda": args.lam,
            "d": args.d,
            "count": len(packing.slabs),
            "union_measure": measure,
            "normalized": measure * np.log(args.lam) / args.lam ** (args.d + 3),
        },
    )
    _manifest(args, {"dim": args.d, "lambda": args.lam}, started)
    print(f"packing lam={args.lam} d={args.d} count={len(packing.slabs)} union={measure:.6g}")
    return 0


def cmd_equivalence(args) -> int:
    from .extension_lab import equivalence_ratio

    started = now_iso()
    rows = []
    for lam in parse_float_list(args.lambdas):
        res = equivalence_ratio(lam, as_exponent(args.p), as_exponent(args.q), beta=args.beta, seed=args.seed)
        rows.append(
            {
                "lambda": lam,
                "extension_side": res.extension_side,
                "schrodinger_side": res.schrodinger_side,
                "ratio": res.ratio,
            }
        )
        print(f"lam={lam:g} ext={res.extension_side:.6g} schr={res.schrodinger_side:.6g} ratio={res.ratio:.4f}")
    os.makedirs(args.out, exist_ok=True)
    _emit(args, "equivalence.json", {"beta": args.beta, "rows": rows})
    _manifest(args, {"dim": 1}, started)
    return 0


def _fmt(fr) -> str:
    return str(fr)


def cmd_exponents(args) -> int:
    out = {}
    if args.q0 is not None:
        out["q_star"] = _fmt(q_star(args.d, as_exponent(args.q0)))
    if args.p and args.q and args.r:
        t = ExponentTriple(as_exponent(args.p), as_exponent(args.q), as_exponent(args.r), args.d)
        out["alpha_critical"] = _fmt(alpha_critical(t))
        if args.d == 1:
            try:
                a, b = predicted_exponents_1d(t)
                out["predicted_power"] = _fmt(a)
                out["predicted_log_power"] = _fmt(b)
            except ValueError as e:
                out["predicted"] = f"n/a ({e})"
    if not out:
        print("nothing to compute: pass --q0 and/or a full triple", file=sys.stderr)
        return 2
    for k, v in sorted(out.items()):
        print(f"{k} = {v}")
    return 0


def cmd_fit(args) -> int:
    rows = _read_rows(args.csv)
    if not rows:
        print("empty csv", file=sys.stderr)
        return 2
    pts = [(float(r["lambda"]), float(r["value"])) for r in rows]
    f = fit_power_log(pts)
    rec = {"a": f.a, "b": f.b, "c": f.c, "residual": f.residual}
    trip = rows[0]
    try:
        t = ExponentTriple(
            as_exponent(trip["p"]), as_exponent(trip["q"]), as_exponent(trip["r"]), int(trip["dim"])
        )
        if t.d == 1:
            pa, pb = predicted_exponents_1d(t)
            rec["predicted_a"] = float(pa)
            rec["predicted_b"] = float(pb)
    except (ValueError, KeyError):
        pass
    print(json.dumps(rec, indent=1, sort_keys=True))
    if args.json_out:
        atomic_write(args.json_out, json.dumps(rec, indent=1, sort_keys=True))
    return 0


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    outdir = output_dir(cfg)
    started = now_iso()
    failures = 0
    for exp in cfg.experiments:
        sub = os.path.join(outdir, exp.name.replace(":", "_"))
        ns = _experiment_namespace(exp, cfg, sub)
        try:
            rc = COMMANDS[exp.kind](ns)
        except Exception as e:  # orchestrator: one experiment must not kill the run
            print(f"[{exp.name}] failed: {e}", file=sys.stderr)
            rc = 3
        if rc != 0:
            failures += 1
    Manifest(
        config_hash=cfg.config_hash,
        seed=cfg.seed,
        grid={},
        version=__version__,
        started_at=started,
        finished_at=now_iso(),
    ).write(os.path.join(outdir, "manifest.json"))
    return 1 if failures else 0


def _experiment_namespace(exp, cfg, outdir: str) -> argparse.Namespace:
    o = exp.options
    ns = argparse.Namespace(out=outdir, seed=cfg.seed, config_hash=cfg.config_hash)
    if exp.kind == "propagate":
        ns.d = int(o.get("d", 1)) if "d" in o else 1
        ns.n = int(o.get("n", 256))
        ns.extent = float(o.get("extent", 16.0))
        ns.datum = o.get("datum", "gaussian")
        ns.times = o.get("times", "0.0")
        ns.q = o.get("q", "2")
        ns.r = o.get("r", "2")
    elif exp.kind == "sweep":
        ns.d = int(o.get("d", 1))
        ns.p, ns.q, ns.r = o.get("p", "2"), o.get("q", "2"), o.get("r", "2")
        ns.lambdas = o.get("lambdas", "8,16,32")
        ns.random_trials = int(o.get("random_trials", 3))
        ns.ascent_iters = int(o.get("ascent_iters", 5))
    elif exp.kind == "extremizer":
        ns.family = o.get("family", "focusing")
        ns.scale = float(o.get("scale", 16))
        ns.d = int(o.get("d", 1))
        ns.eps = float(o.get("eps", 0.5))
    elif exp.kind == "packing":
        ns.lam = int(o.get("lambda", 16))
        ns.d = int(o.get("d", 1))
        ns.resolution = int(o.get("resolution", 64))
    elif exp.kind == "equivalence":
        ns.p = o.get("p", "4")
        ns.q = o.get("q", "4")
        ns.beta = float(o.get("beta", 0.0))
        ns.lambdas = o.get("lambdas", "8,16")
    elif exp.kind == "exponents":
        ns.d = int(o.get("d", 1))
        ns.p = o.get("p")
        ns.q = o.get("q")
        ns.r = o.get("r")
        ns.q0 = o.get("q0")
    elif exp.kind == "bilinear":
        ns.p = o.get("p", "2")
        ns.q = o.get("q", "4")
        ns.r = o.get("r", "4")
        ns.centers = o.get("centers", "8,16")
        ns.rho = float(o.get("rho", 1.0))
    return ns


def cmd_bilinear(args) -> int:
    from .bilinear import lambda_bilinear

    started = now_iso()
    triple = ExponentTriple(as_exponent(args.p), as_exponent(args.q), as_exponent(args.r), 2)
    rows = []
    for center in parse_float_list(args.centers):
        est = lambda_bilinear(center, args.rho, triple, seed=args.seed)
        rows.append({"center": center, "value": est.value, "strategy": est.witness_strategy})
        print(f"N={center:g} value={est.value:.6g} ({est.witness_strategy})")
    os.makedirs(args.out, exist_ok=True)
    _emit(args, "bilinear.json", {"rho": args.rho, "rows": rows})
    _manifest(args, {"dim": 2}, started)
    return 0


COMMANDS = {
    "propagate": cmd_propagate,
    "sweep": cmd_sweep,
    "extremizer": cmd_extremizer,
    "packing": cmd_packing,
    "equivalence": cmd_equivalence,
    "exponents": cmd_exponents,
    "fit": cmd_fit,
    "bilinear": cmd_bilinear,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="schrodlab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("propagate", help="evolve one datum and dump field + norms")
    p.add_argument("--d", type=int, default=1, choices=(1, 2))
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--extent", type=float, default=16.0)
    p.add_argument("--datum", default="gaussian", choices=("gaussian", "delta"))
    p.add_argument("--times", default="0.0,0.5")
    p.add_argument("--q", default="2")
    p.add_argument("--r", default="2")

    p = sub.add_parser("sweep", help="dyadic band-norm sweep with exponent fit")
    p.add_argument("--d", type=int, default=1, choices=(1,))
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--lambdas", default="8,16,32,64")
    p.add_argument("--random-trials", dest="random_trials", type=int, default=3)
    p.add_argument("--ascent-iters", dest="ascent_iters", type=int, default=5)

    p = sub.add_parser("extremizer", help="construct and verify one lower-bound family")
    p.add_argument("--family", required=True)
    p.add_argument("--scale", type=float, required=True)
    p.add_argument("--d", type=int, default=1, choices=(1, 2))
    p.add_argument("--eps", type=float, default=0.5)

    p = sub.add_parser("packing", help="sheared-slab packing construction + measure")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--d", type=int, default=1, choices=(1, 2))
    p.add_argument("--resolution", type=int, default=64)

    p = sub.add_parser("equivalence", help="restriction/evolution equivalence ratio table")
    p.add_argument("--p", default="4")
    p.add_argument("--q", default="4")
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--lambdas", default="8,16,32")

    p = sub.add_parser("exponents", help="exponent arithmetic tables")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--r")
    p.add_argument("--q0")

    p = sub.add_parser("fit", help="re-fit growth exponents from an existing CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--json-out", dest="json_out")

    p = sub.add_parser("bilinear", help="separated-pair bilinear measurement")
    p.add_argument("--p", default="2")
    p.add_argument("--q", default="4")
    p.add_argument("--r", default="4")
    p.add_argument("--centers", default="8,16")
    p.add_argument("--rho", type=float, default=1.0)

    p = sub.add_parser("run", help="execute every experiment in a config file")
    p.add_argument("--config", required=True)

    for name, parser in sub.choices.items():
        if name not in ("exponents", "fit"):
            parser.add_argument("--out", default="schrodlab_out")
        parser.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
