"""Command line front end: generate fingers, run solves, run design sweeps.

Exit codes are a stable contract: 0 success, 2 invalid input, 3 divergence
(the partial history is still written). Set FINBEAM_LOG_LEVEL=INFO or DEBUG
for solver progress on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .finray import (
    FinRayParams,
    generate,
    load_at_contact_node,
    model_to_dict,
    params_from_dict,
)
from .model import ModelError, load_case, structure_from_dict
from .solver import BracketInvalid, SolverConfig, probe_max_force, solve

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DIVERGED = 3

SWEEP_AXES = ("n_crossbeams", "top_angle", "inclination", "connection")
DEFAULT_PROBE = {"f_lo": 0.05, "f_hi": 4.0, "resolution": 0.05}

log = logging.getLogger(__name__)


class InputError(ValueError):
    """Anything wrong with a command's input files or flags."""


def main(argv: Optional[Sequence[str]] = None) -> int:
    level = os.environ.get("FINBEAM_LOG_LEVEL", "WARNING").upper()
    known = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET"}
    logging.basicConfig(
        level=level if level in known else "WARNING",
        format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ModelError, ValueError, KeyError,
            json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finbeam",
        description="Nonlinear 2D frame solver and Fin-Ray design sweeps")
    sub = parser.add_subparsers(required=True)

    gen = sub.add_parser("generate", help="mesh a finger from a params file")
    gen.add_argument("params_file")
    gen.add_argument("out_file")
    gen.set_defaults(func=_cmd_generate)

    slv = sub.add_parser("solve", help="run one incremental solve")
    slv.add_argument("structure_file")
    slv.add_argument("load_file")
    slv.add_argument("out_file")
    slv.add_argument("--n-inc", type=int, default=10)
    slv.add_argument("--tolerance", type=float, default=1e-3)
    slv.add_argument("--maxiter", type=int, default=100)
    slv.set_defaults(func=_cmd_solve)

    swp = sub.add_parser("sweep", help="run a design-parameter sweep")
    swp.add_argument("sweep_file")
    swp.add_argument("out_file")
    swp.add_argument("--probe-max-force", action="store_true")
    swp.add_argument("--parallel", action="store_true")
    swp.set_defaults(func=_cmd_sweep)

    return parser


def _read_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _cmd_generate(args) -> int:
    params = params_from_dict(_read_json(args.params_file))
    model = generate(params)
    with open(args.out_file, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")
    return EXIT_OK


def _load_vector_from_file(structure, data):
    forces = {}
    for entry in data.get("forces", []):
        node = int(entry["node"])
        fx = float(entry.get("fx", 0.0))
        fy = float(entry.get("fy", 0.0))
        m = float(entry.get("m", 0.0))
        prev = forces.get(node, (0.0, 0.0, 0.0))
        forces[node] = (prev[0] + fx, prev[1] + fy, prev[2] + m)
    return load_case(structure, forces)


def _cmd_solve(args) -> int:
    structure = structure_from_dict(_read_json(args.structure_file))
    case = _load_vector_from_file(structure, _read_json(args.load_file))
    config = SolverConfig(n_inc=args.n_inc, tolerance=args.tolerance,
                          maxiter=args.maxiter)

    result = solve(structure, case, config)

    with open(args.out_file, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["increment", "node", "u", "w", "theta",
                         "residual_norm", "iterations"])
        for record in result.increments:
            for node in structure.nodes:
                base = 3 * node.id
                writer.writerow([
                    record.n, node.id,
                    repr(float(record.displacement[base])),
                    repr(float(record.displacement[base + 1])),
                    repr(float(record.displacement[base + 2])),
                    repr(float(record.residual_norm)),
                    record.iterations,
                ])

    if not result.completed:
        print(f"diverged at increment {result.diverged_at} "
              f"({result.cause})", file=sys.stderr)
        return EXIT_DIVERGED
    return EXIT_OK


@dataclass(frozen=True)
class SweepSpec:
    """One-axis design study: which parameter varies, how it is loaded."""

    axis: str
    values: tuple
    load_node_rank: int
    load_magnitudes: tuple[float, ...]
    base_params: FinRayParams
    config: SolverConfig
    probe: dict
    load_direction: Optional[tuple[float, float]] = None


def _parse_sweep_spec(data) -> SweepSpec:
    axis = data.get("axis")
    if axis not in SWEEP_AXES:
        raise InputError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    values = tuple(data.get("values") or ())
    if not values:
        raise InputError("values must be a non-empty list")
    if axis == "n_crossbeams":
        values = tuple(int(v) for v in values)
    elif axis == "connection":
        values = tuple(str(v) for v in values)
    else:
        values = tuple(float(v) for v in values)
    magnitudes = tuple(float(m) for m in data.get("load_magnitudes") or ())
    if not magnitudes:
        raise InputError("load_magnitudes must be a non-empty list")
    if any(m <= 0 for m in magnitudes) or list(magnitudes) != sorted(magnitudes):
        raise InputError("load_magnitudes must be positive and ascending")
    rank = int(data.get("load_node_rank", 2))
    base = params_from_dict(data.get("base_params", {}))
    solver_cfg = SolverConfig(**data.get("solver", {}))
    probe = dict(DEFAULT_PROBE)
    probe.update(data.get("probe", {}))
    direction = data.get("load_direction")
    if direction is not None:
        direction = (float(direction[0]), float(direction[1]))
    return SweepSpec(axis, values, rank, magnitudes, base, solver_cfg, probe,
                     direction)


def _run_variant(spec: SweepSpec, value, do_probe: bool) -> dict:
    """Solve one sweep variant at every load magnitude; optionally probe."""
    params = replace(spec.base_params, **{spec.axis: value})
    model = generate(params)
    label = f"{spec.axis}={value}"
    rows = []
    loaded_node_disp = {}
    for magnitude in spec.load_magnitudes:
        case = load_at_contact_node(model, spec.load_node_rank, magnitude,
                                    direction=spec.load_direction)
        result = solve(model.structure, case, spec.config)
        if result.increments:
            disp = result.increments[-1].displacement
            mean_iters = (sum(r.iterations for r in result.increments)
                          / len(result.increments))
        else:
            disp = None
            mean_iters = float("nan")
        for rank, node in enumerate(model.contact_nodes, start=1):
            base = 3 * node
            if result.completed:
                u, w, theta = (disp[base], disp[base + 1], disp[base + 2])
            else:
                u = w = theta = float("nan")
            rows.append({
                "variant": label, "load_n": magnitude, "node_rank": rank,
                "u": u, "w": w, "theta": theta,
                "converged": result.completed,
                "iterations": round(mean_iters, 3),
            })
            if rank == spec.load_node_rank and result.completed:
                loaded_node_disp[magnitude] = math.hypot(u, w)

    max_force = None
    if do_probe:
        pattern = load_at_contact_node(model, spec.load_node_rank, 1.0,
                                       direction=spec.load_direction).f_total
        try:
            max_force = probe_max_force(
                model.structure, pattern, spec.config,
                spec.probe["f_lo"], spec.probe["f_hi"],
                spec.probe["resolution"])
        except BracketInvalid as exc:
            log.warning("probe for %s: %s", label, exc)
    return {"label": label, "value": value, "rows": rows,
            "max_allowable_force": max_force,
            "loaded_node_disp": loaded_node_disp}


def _trend_checks(spec: SweepSpec, variants: list[dict], probed: bool) -> dict:
    """Monotonicity verdicts for the design-study properties on this axis.

    Displacement trends are judged at the largest magnitude every variant
    sustained: compliance differences between variants only develop once
    the response is meaningfully nonlinear.
    """
    trends: dict = {}
    common = [m for m in spec.load_magnitudes
              if all(m in v["loaded_node_disp"] for v in variants)]
    probe_mag = common[-1] if common else None
    disp = [v["loaded_node_disp"].get(probe_mag) for v in variants]
    have_disp = probe_mag is not None

    if spec.axis == "n_crossbeams" and have_disp:
        trends["displacement_decreasing_with_crossbeams"] = all(
            a > b for a, b in zip(disp, disp[1:]))
    elif spec.axis == "top_angle" and have_disp:
        trends["displacement_increasing_with_top_angle"] = all(
            a < b for a, b in zip(disp, disp[1:]))
    elif spec.axis == "inclination" and have_disp:
        trends["displacement_increasing_with_inclination"] = all(
            a < b for a, b in zip(disp, disp[1:]))
    elif spec.axis == "connection" and have_disp:
        by_value = {v["value"]: d for v, d in zip(variants, disp)}
        if "simple" in by_value and "rigid" in by_value and by_value["rigid"]:
            trends["simple_over_rigid_ratio"] = (
                by_value["simple"] / by_value["rigid"])

    if probed:
        forces = [v["max_allowable_force"] for v in variants]
        if spec.axis == "connection":
            by_value = {v["value"]: f for v, f in zip(variants, forces)}
            if by_value.get("simple") is not None and \
                    by_value.get("rigid") is not None:
                trends["rigid_max_force_exceeds_simple"] = (
                    by_value["rigid"] > by_value["simple"])
        else:
            # A variant that sustains the whole bracket (None) counts as
            # stronger than any probed value, but only at the top end.
            finite = [f for f in forces if f is not None]
            nones_trailing = all(f is None for f in forces[len(finite):])
            trends["max_force_ascending"] = (
                nones_trailing
                and all(a < b for a, b in zip(finite, finite[1:])))
    return trends


def _cmd_sweep(args) -> int:
    spec = _parse_sweep_spec(_read_json(args.sweep_file))

    if args.parallel:
        with ThreadPoolExecutor() as pool:
            futures = [pool.submit(_run_variant, spec, v,
                                   args.probe_max_force)
                       for v in spec.values]
            variants = [f.result() for f in futures]
    else:
        variants = [_run_variant(spec, v, args.probe_max_force)
                    for v in spec.values]

    with open(args.out_file, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["variant", "load_n", "node_rank", "u", "w", "theta",
                         "converged", "iterations"])
        for variant in variants:
            for row in variant["rows"]:
                writer.writerow([
                    row["variant"], repr(float(row["load_n"])),
                    row["node_rank"],
                    repr(float(row["u"])), repr(float(row["w"])),
                    repr(float(row["theta"])),
                    row["converged"], repr(float(row["iterations"])),
                ])

    summary = {
        "axis": spec.axis,
        "load_node_rank": spec.load_node_rank,
        "load_magnitudes": list(spec.load_magnitudes),
        "variants": [
            {"label": v["label"], "value": v["value"],
             "max_allowable_force": v["max_allowable_force"]}
            for v in variants
        ],
        "trends": _trend_checks(spec, variants, args.probe_max_force),
    }
    summary_path = os.path.splitext(args.out_file)[0] + ".summary.json"
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
