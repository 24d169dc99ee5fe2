"""
Argument parser of the ``mwjoin`` command.
"""

import argparse
from typing import Callable, List, TypeVar

from ..models import Strategy
from ..pipeline import SHAPES

T = TypeVar("T")

SWEEP_AXES = ("H_bkt", "g_bkt", "dram_bw", "N", "d")
STRATEGY_CHOICES = [s.value for s in Strategy]


def comma_list(kind: Callable[[str], T]) -> Callable[[str], List[T]]:
    """argparse type for comma separated values."""

    def parse(text: str) -> List[T]:
        items = [item.strip() for item in text.split(",") if item.strip()]
        try:
            return [kind(item) for item in items]
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid list {text!r}") from None

    return parse


def count(text: str) -> int:
    """Integer that also accepts scientific notation such as 1e6."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid count {text!r}") from None
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"{text!r} is not a whole number")
    return int(value)


def _shape_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("experiment")
    group.add_argument("--shape", choices=SHAPES, default="self-linear")
    group.add_argument("--n", type=count, default=1000, help="relation size N")
    group.add_argument("--d", type=count, default=10, help="distinct values per column")
    group.add_argument("--k", type=count, default=None, help="dimension size K (star)")
    group.add_argument("--seed", type=int, default=0)
    return parent


def _plan_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("plan overrides")
    group.add_argument("--strategy", choices=STRATEGY_CHOICES, default=None)
    group.add_argument("--H-bkt", dest="H_bkt", type=count, default=None)
    group.add_argument("--G-bkt", dest="G_bkt", type=count, default=None)
    group.add_argument("--g-bkt", dest="g_bkt", type=count, default=None)
    group.add_argument("--f-bkt", dest="f_bkt", type=count, default=None)
    return parent


def _machine_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("machine overrides")
    group.add_argument("--dram-bw", type=float, default=None, help="GB/s")
    group.add_argument("--ssd-bw", type=float, default=None, help="GB/s")
    group.add_argument("--onchip-bytes", type=count, default=None)
    group.add_argument("--dram-capacity", type=count, default=None, help="bytes")
    group.add_argument("--clock-hz", type=float, default=None)
    return parent


def build_parser() -> argparse.ArgumentParser:
    shape = _shape_options()
    plan = _plan_options()
    machine = _machine_options()

    parser = argparse.ArgumentParser(
        prog="mwjoin",
        description="Simulate and model multiway hash joins on a spatial accelerator.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", parents=[shape], help="write R, S, T as CSV")
    gen.add_argument("--out", default="data", help="output directory")

    run = commands.add_parser(
        "run", parents=[shape, plan, machine], help="run a strategy on the engine"
    )
    run.add_argument(
        "--all", action="store_true", help="run every strategy of the shape"
    )
    run.add_argument("--verify", action="store_true", help="check against the oracle")
    run.add_argument("--workers", type=int, default=None)
    run.add_argument("--out", default=None, help="directory for stats and aggregates")
    run.add_argument("--format", choices=("json", "csv"), default="json")

    model = commands.add_parser(
        "model", parents=[shape, plan, machine], help="closed-form and loop-tree model"
    )
    model.add_argument("--show-tree", action="store_true")
    model.add_argument("--format", choices=("json", "csv"), default="json")

    sweep = commands.add_parser(
        "sweep", parents=[shape, plan, machine], help="sweep one parameter"
    )
    sweep.add_argument("--axis", choices=SWEEP_AXES, required=True)
    sweep.add_argument("--values", type=comma_list(float), default=[])
    sweep.add_argument("--engine-counters", action="store_true")
    sweep.add_argument("--out", default=None, help="CSV path (stdout when omitted)")
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")

    compare = commands.add_parser(
        "compare", parents=[machine], help="3-way vs cascaded speedups"
    )
    compare.add_argument(
        "--shape", choices=("self-linear", "star"), default="self-linear"
    )
    compare.add_argument("--n", type=comma_list(count), default=[1000])
    compare.add_argument("--d", type=comma_list(count), default=[10])
    compare.add_argument("--k", type=count, default=None)
    compare.add_argument("--seed", type=int, default=0)
    compare.add_argument("--bandwidths", type=comma_list(float), default=[49.0])
    compare.add_argument("--out", default=None, help="CSV path (stdout when omitted)")
    compare.add_argument("--format", choices=("csv", "json"), default="csv")

    return parser
