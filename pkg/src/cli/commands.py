"""
Handlers of the ``mwjoin`` subcommands.

Every handler takes the parsed arguments and returns an exit code; errors
propagate to the entry point, which maps them to exit codes.
"""

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, TextIO, Tuple

from ..config import get_settings
from ..datagen import relation_checksum, write_relation_csv
from ..engine import create_engine
from ..machine import MachineConfig, check_plan, default_config, effective_M
from ..models import HashPlan, PlanInfeasibleError, Strategy
from ..oracle import write_aggregate_csv
from ..perfmodel import (
    CostInputs,
    build_loop_tree,
    compare_best,
    cyclic_cost,
    cyclic_min_cost,
    evaluate_runtime,
    implied_comparisons,
    implied_dram_tuples,
    intermediate_size,
    optimal_H,
    shape_for,
    tuples_read_linear,
)
from ..pipeline import ExperimentSpec, create_pipeline

logger = logging.getLogger(__name__)

GB = 1e9
PLAN_FIELDS = ("H_bkt", "G_bkt", "g_bkt", "f_bkt")
PHASES = ("partition", "join1", "join2")

# axis -> strategies whose plan exposes it
AXIS_STRATEGIES = {
    "H_bkt": (Strategy.LINEAR3, Strategy.CASCADED_SELF),
    "g_bkt": (Strategy.LINEAR3, Strategy.STAR3),
}


def star_rows(g: int, U: int) -> int:
    """Rows h of a star grid with ``g`` columns over ``U`` units."""
    if g < 1 or U % g:
        raise ValueError(f"g_bkt={g} must divide U={U} for star3")
    return U // g


def machine_overrides(args: argparse.Namespace) -> Dict[str, float]:
    """Machine fields set on the command line; bandwidths are given in GB/s."""
    dram_bw = getattr(args, "dram_bw", None)
    ssd_bw = getattr(args, "ssd_bw", None)
    overrides = {
        "dram_bw": dram_bw * GB if dram_bw is not None else None,
        "ssd_bw": ssd_bw * GB if ssd_bw is not None else None,
        "onchip_bytes": getattr(args, "onchip_bytes", None),
        "dram_capacity_bytes": getattr(args, "dram_capacity", None),
        "clock_hz": getattr(args, "clock_hz", None),
    }
    return {key: value for key, value in overrides.items() if value is not None}


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    plan = {
        name: getattr(args, name)
        for name in PLAN_FIELDS
        if getattr(args, name, None) is not None
    }
    return ExperimentSpec(
        shape=args.shape,
        n=args.n,
        d=args.d,
        k=args.k,
        seed=args.seed,
        plan_overrides=plan,
        machine_overrides=machine_overrides(args),
    )


def _strategy(args: argparse.Namespace, spec: ExperimentSpec) -> Strategy:
    return Strategy(args.strategy) if args.strategy else spec.default_strategy


def _config_header(command: str, payload: dict) -> dict:
    return {"command": command, **payload}


def write_table(
    rows: List[dict],
    fieldnames: List[str],
    config: dict,
    out: Optional[str],
    fmt: str = "csv",
) -> None:
    """Write rows as CSV (with a ``# config:`` comment line) or JSON."""
    handle: TextIO
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        handle = open(path, "w", newline="")
    else:
        handle = sys.stdout

    try:
        if fmt == "json":
            json.dump({"config": config, "rows": rows}, handle, indent=2, default=str)
            handle.write("\n")
        else:
            header = json.dumps(config, sort_keys=True, default=str)
            handle.write(f"# config: {header}\n")
            writer = csv.DictWriter(
                handle, fieldnames=fieldnames, extrasaction="ignore"
            )
            writer.writeheader()
            writer.writerows(rows)
    finally:
        if out:
            handle.close()

    if out:
        logger.info(f"Wrote {len(rows)} rows to {out}")


def _ordered_map(fn: Callable, values: Iterable) -> List:
    """Evaluate points concurrently, keeping input order."""
    values = list(values)
    workers = get_settings().model.sweep_workers
    if workers <= 1 or len(values) <= 1:
        return [fn(value) for value in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, values))


def _plan_label(plan: HashPlan) -> str:
    names = ("H_bkt", "G_bkt", "h_bkt", "g_bkt")
    return ";".join(f"{name}={getattr(plan, name)}" for name in names)


def cmd_gen(args: argparse.Namespace) -> int:
    """
    Write R, S and T of the experiment as CSV files.

    Args:
        args: Parsed ``gen`` arguments

    Returns:
        Exit code; each file is echoed with its size and checksum
    """
    spec = spec_from_args(args)
    out = Path(args.out)
    for rel in spec.relations():
        path = write_relation_csv(rel, out / f"{rel.name}.csv")
        print(f"{path} {rel.size} {relation_checksum(path)}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    """
    Run one strategy, or every strategy of the shape, on the engine.

    Args:
        args: Parsed ``run`` arguments

    Returns:
        Exit code, 1 when a verified strategy disagrees with the oracle
    """
    spec = spec_from_args(args)
    cfg = spec.machine()
    spec.validate(cfg)
    strategies = list(spec.strategies) if args.all else [_strategy(args, spec)]

    pipeline = create_pipeline(args.workers)
    results = []
    aggregates = []
    for strategy in strategies:
        state = pipeline.run(spec, strategy, cfg, verify=args.verify)
        aggregate = state["aggregate"]
        aggregates.append(aggregate)
        result = {
            "strategy": strategy.value,
            "plan": state["plan"].to_dict(),
            "stats": state["stats"].to_dict(),
            "groups": len(aggregate),
            "total": aggregate.total,
            "verified": state.get("verified"),
            "verify_skipped": state.get("verify_skipped", False),
        }
        results.append(result)

        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            stats_path = out / f"{strategy.value}_stats.json"
            stats_path.write_text(json.dumps(result, indent=2))
            write_aggregate_csv(aggregate, out / f"{strategy.value}_aggregate.csv")

    if args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["strategy", "a_value", "count"])
        for strategy, aggregate in zip(strategies, aggregates):
            writer.writerows([strategy.value, a, n] for a, n in aggregate.rows())
    elif args.all:
        agree = all(agg == aggregates[0] for agg in aggregates)
        print(json.dumps({"results": results, "aggregates_agree": agree}, indent=2))
    else:
        print(json.dumps(results[0], indent=2))

    if args.verify and any(r["verified"] is False for r in results):
        logger.error("At least one strategy disagrees with the oracle")
        return 1
    return 0


def model_report(
    spec: ExperimentSpec,
    strategy: Strategy,
    cfg: MachineConfig,
    show_tree: bool = False,
) -> dict:
    size_r, size_s, size_t = spec.sizes()
    inp = CostInputs(size_r, size_s, size_t, M=effective_M(cfg), d=spec.d)
    plan = spec.plan_for(strategy, cfg)
    check_plan(strategy, size_r, size_s, size_t, plan, cfg)

    report: dict = {
        "strategy": strategy.value,
        "shape": spec.to_dict(),
        "M": inp.M,
        "plan": plan.to_dict(),
        "closed_form": {
            "tuples_read_linear": tuples_read_linear(inp),
            "cyclic_optimal_H": optimal_H(inp),
            "cyclic_min_cost": cyclic_min_cost(inp),
            "intermediate_size": intermediate_size(size_r, size_s, spec.d),
        },
    }

    if strategy is Strategy.CYCLIC3:
        report["closed_form"]["cyclic_cost_at_plan"] = cyclic_cost(
            replace(inp, G=plan.G_bkt), H=plan.H_bkt
        )
        report["estimate"] = None
        return report

    tree = build_loop_tree(strategy, inp, plan, cfg)
    report["estimate"] = evaluate_runtime(tree, cfg).to_dict()
    report["implied_dram_tuples"] = implied_dram_tuples(tree)
    report["implied_comparisons"] = implied_comparisons(tree)
    if show_tree:
        report["tree"] = tree.to_dict()
    return report


def cmd_model(args: argparse.Namespace) -> int:
    """
    Print the closed-form costs and the runtime estimate of the shape.

    Args:
        args: Parsed ``model`` arguments

    Returns:
        Exit code
    """
    spec = spec_from_args(args)
    cfg = spec.machine()
    spec.validate(cfg)
    strategy = _strategy(args, spec)
    show_tree = args.show_tree and args.format == "json"
    report = model_report(spec, strategy, cfg, show_tree=show_tree)

    if args.format == "json":
        print(json.dumps(report, indent=2))
        return 0

    writer = csv.writer(sys.stdout)
    writer.writerow(["metric", "value"])
    for key, value in report["closed_form"].items():
        writer.writerow([key, value])
    if report["estimate"] is not None:
        writer.writerow(["cycles", report["estimate"]["cycles"]])
        writer.writerow(["seconds", report["estimate"]["seconds"]])
        writer.writerow(["bottleneck", report["estimate"]["bottleneck"]])
        for phase, cycles in report["estimate"]["breakdown"].items():
            writer.writerow([f"breakdown_{phase}", cycles])
    if args.show_tree and strategy is not Strategy.CYCLIC3:
        size_r, size_s, size_t = spec.sizes()
        inp = CostInputs(size_r, size_s, size_t, M=effective_M(cfg), d=spec.d)
        print()
        plan = spec.plan_for(strategy, cfg)
        print(build_loop_tree(strategy, inp, plan, cfg).render())
    return 0


def sweep_rows(
    spec: ExperimentSpec,
    strategy: Strategy,
    axis: str,
    values: List[float],
    engine_counters: bool = False,
) -> List[dict]:
    """One modeled row per value of ``axis``; engine counters optional."""
    allowed = AXIS_STRATEGIES.get(axis)
    if allowed is not None and strategy not in allowed:
        raise ValueError(f"Axis {axis} does not apply to {strategy.value}")

    def point(value: float) -> dict:
        point_spec = spec
        if axis == "N":
            point_spec = replace(spec, n=int(value))
        elif axis == "d":
            point_spec = replace(spec, d=int(value))
        elif axis == "dram_bw":
            overrides = {**spec.machine_overrides, "dram_bw": value * GB}
            point_spec = replace(spec, machine_overrides=overrides)
        elif axis in PLAN_FIELDS:
            overrides = {**spec.plan_overrides, axis: int(value)}
            if axis == "g_bkt" and strategy is Strategy.STAR3:
                overrides["h_bkt"] = star_rows(int(value), spec.machine().U)
            point_spec = replace(spec, plan_overrides=overrides)

        cfg = point_spec.machine()
        point_spec.validate(cfg)
        plan = point_spec.plan_for(strategy, cfg)
        sizes = point_spec.sizes()
        check_plan(strategy, *sizes, plan, cfg)

        shape = shape_for(*sizes, point_spec.d, cfg)
        estimate = evaluate_runtime(build_loop_tree(strategy, shape, plan, cfg), cfg)
        row = {
            axis: value,
            "cycles": estimate.cycles,
            "seconds": estimate.seconds,
            "bottleneck": estimate.bottleneck,
            "plan": _plan_label(plan),
        }
        for phase in PHASES:
            row[phase] = estimate.breakdown.get(phase, 0.0)

        if engine_counters:
            R, S, T = point_spec.relations()
            _, stats = create_engine(cfg).run(strategy, R, S, T, plan)
            row.update(
                dram_tuples_read=stats.dram_tuples_read,
                onchip_broadcasts=stats.onchip_broadcasts,
                comparisons=stats.comparisons,
                intermediate_tuples=stats.intermediate_tuples,
            )
        logger.debug(f"Sweep {axis}={value}: {estimate.cycles:.6g} cycles")
        return row

    return _ordered_map(point, values)


def sweep_fields(axis: str, engine_counters: bool) -> List[str]:
    fields = [axis, "cycles", "seconds", "bottleneck", *PHASES, "plan"]
    if engine_counters:
        fields += [
            "dram_tuples_read",
            "onchip_broadcasts",
            "comparisons",
            "intermediate_tuples",
        ]
    return fields


def cmd_sweep(args: argparse.Namespace) -> int:
    """
    Sweep one parameter and tabulate the modeled runtime.

    Args:
        args: Parsed ``sweep`` arguments

    Returns:
        Exit code
    """
    spec = spec_from_args(args)
    spec.validate()
    strategy = _strategy(args, spec)
    rows = sweep_rows(spec, strategy, args.axis, args.values, args.engine_counters)
    config = _config_header(
        "sweep",
        {
            "spec": spec.to_dict(),
            "strategy": strategy.value,
            "axis": args.axis,
            "machine": spec.machine().to_dict(),
        },
    )
    fields = sweep_fields(args.axis, args.engine_counters)
    write_table(rows, fields, config, args.out, args.format)
    return 0


COMPARE_FIELDS = [
    "n",
    "d",
    "dram_bw_gbps",
    "three_way_seconds",
    "cascaded_seconds",
    "speedup",
    "spilled",
    "intermediate_tuples",
    "plan3",
    "plan2",
]


def compare_rows(
    shape: str,
    ns: List[int],
    ds: List[int],
    bandwidths: List[float],
    base: MachineConfig,
    k: Optional[int] = None,
) -> List[dict]:
    """Best-plan speedup of the 3-way join per (N, d, bandwidth)."""
    star = shape == "star"
    if star and (k is None or k < 1):
        raise ValueError("The star shape needs a positive k")
    if star and 2 * k > effective_M(base):
        raise PlanInfeasibleError(
            f"2K={2 * k} exceeds on-chip capacity M={effective_M(base)}"
        )

    points = [(n, d, bw) for n in ns for d in ds for bw in bandwidths]

    def point(item: Tuple[int, int, float]) -> dict:
        n, d, bw = item
        cfg = base.with_overrides(dram_bw=bw * GB)
        sizes = (k, n, k) if star else (n, n, n)
        comparison = compare_best(shape_for(*sizes, d, cfg), cfg, star=star)
        return {
            "n": n,
            "d": d,
            "dram_bw_gbps": bw,
            "three_way_seconds": comparison.three_way.seconds,
            "cascaded_seconds": comparison.cascaded.seconds,
            "speedup": comparison.speedup,
            "spilled": comparison.spilled,
            "intermediate_tuples": intermediate_size(sizes[0], sizes[1], d),
            "plan3": _plan_label(comparison.plan3),
            "plan2": _plan_label(comparison.plan2),
        }

    return _ordered_map(point, points)


def cmd_compare(args: argparse.Namespace) -> int:
    """
    Tabulate 3-way versus cascaded speedups over N, d and bandwidth.

    Args:
        args: Parsed ``compare`` arguments

    Returns:
        Exit code
    """
    base = default_config().with_overrides(**machine_overrides(args))
    rows = compare_rows(args.shape, args.n, args.d, args.bandwidths, base, args.k)
    config = _config_header(
        "compare",
        {
            "shape": args.shape,
            "k": args.k,
            "seed": args.seed,
            "machine": base.to_dict(),
        },
    )
    write_table(rows, COMPARE_FIELDS, config, args.out, args.format)
    return 0


COMMANDS: Dict[str, Callable[..., int]] = {
    "gen": cmd_gen,
    "run": cmd_run,
    "model": cmd_model,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
}
