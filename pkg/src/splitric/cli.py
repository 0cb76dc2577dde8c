"""Command-line front end.

Usage examples::

    splitric preset --paper-defaults --out ntn.toml
    splitric cost --scenario s2 --config ntn.toml
    splitric crossover --axis input-size --pair s1:s2 --objective energy --per-op
    splitric classify --objective latency --set wait_time="45 min"
    splitric sweep --param input_size --lo "10 kB" --hi "50 MB" --points 200 --spacing log
    splitric map --kind energy --out energy_map.csv
    splitric validate

Exit status: 0 success, 1 evaluation or validation failure, 2 usage error.
Errors are a single ``error: <kind>: <message>`` line on stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import Sequence

from . import validate as validation
from .config import ConfigError, RunConfig, reference_defaults_toml
from .feasibility import BOUNDARIES, Objective, classify, crossover, power_budget_check
from .lifecycle import Scenario, breakdowns, control_loop_latency
from .model import ModelError
from .params import dimension_of, resolve
from .sweep import (
    AxisSpec,
    default_complexity_axis,
    default_deadline_axis,
    default_input_axis,
    default_wait_axis,
    run_energy_map,
    run_latency_map,
    run_sweep,
)
from .units import Dimension, QuantityError, parse_quantity


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


# default search ranges per crossover axis, as quantity strings
DEFAULT_RANGES = {
    "input_size": ("10 kB", "50000 kB"),
    "complexity": ("0.1 GFLOP", "500 GFLOP"),
    "wait_time": ("0 s", "60 min"),
    "uplink_rate": ("50 Mbit/s", "1 Gbit/s"),
    "longevity": ("1", "10000000"),
}


def _quantity(text: str, dim: Dimension) -> float:
    try:
        return parse_quantity(text, dim).value
    except QuantityError as exc:
        raise UsageError(str(exc)) from None


def _scenario(text: str) -> Scenario:
    try:
        return Scenario.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _pair(text: str) -> tuple[Scenario, Scenario]:
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"--pair expects a:b, got {text!r}")
    a, b = (_scenario(p) for p in parts)
    if a is b:
        raise UsageError("--pair needs two different scenarios")
    return a, b


def _axis_path(text: str) -> str:
    try:
        return resolve(text)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="TOML scenario file (default: built-in reference values)")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="PATH=QUANTITY",
        help='override one parameter, e.g. --set links.feeder.wait_time="45 min"',
    )
    common.add_argument("--out", dest="output_path", help="output file (default: stdout)")

    p = _Parser(prog="splitric", description="Lifecycle cost and feasibility analysis of split-RIC NTN deployments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("cost", parents=[common], help="lifecycle energy and latency breakdown")
    c.add_argument("--scenario", required=True)

    c = sub.add_parser("loop", parents=[common], help="control-loop latency against the inference deadline")
    c.add_argument("--scenario", required=True)

    c = sub.add_parser("boundary", parents=[common], help="evaluate one dominance condition")
    c.add_argument("--condition", required=True, choices=sorted(BOUNDARIES))

    c = sub.add_parser("crossover", parents=[common], help="solve the break-even point along one axis")
    c.add_argument("--axis", required=True, help="input-size, complexity, longevity, wait-time or uplink-rate")
    c.add_argument("--pair", required=True, help="two scenarios, e.g. s1:s2")
    c.add_argument("--objective", choices=["energy", "latency"], default="energy")
    c.add_argument("--per-op", action="store_true", help="compare per-inference costs (large-longevity limit)")
    c.add_argument("--lo", help="search range start (quantity)")
    c.add_argument("--hi", help="search range end (quantity)")
    c.add_argument("--method", choices=["closed_form", "bisection"])

    c = sub.add_parser("classify", parents=[common], help="winning scenario at the configured point")
    c.add_argument("--objective", choices=["energy", "latency"], required=True)

    c = sub.add_parser("power", parents=[common], help="average on-board compute power at an inference rate")
    c.add_argument("--node", choices=["ground", "leo", "geo"], default="leo")
    c.add_argument("--rate", required=True, help='inference rate, e.g. "100 Hz"')

    c = sub.add_parser("sweep", parents=[common], help="1-D sensitivity sweep (CSV)")
    c.add_argument("--param", required=True, help="parameter path or axis alias")
    c.add_argument("--lo", required=True)
    c.add_argument("--hi", required=True)
    c.add_argument("--points", type=int, default=50)
    c.add_argument("--spacing", choices=["linear", "log"], default="linear")
    c.add_argument("--scenarios", default="s1,s2,s3")

    c = sub.add_parser("map", parents=[common], help="2-D feasibility map (CSV)")
    c.add_argument("--kind", choices=["energy", "latency"], required=True)
    c.add_argument("--x-points", type=int)
    c.add_argument("--y-points", type=int)
    c.add_argument("--include-s3", action="store_true", help="energy map: also consider S3")
    c.add_argument("--learning-only", action="store_true", help="latency map: drop the inference phase from totals")

    sub.add_parser("validate", help="run the reference checks; nonzero exit on failure")

    c = sub.add_parser("preset", help="write the reference configuration file")
    c.add_argument("--paper-defaults", action="store_true", required=True)
    c.add_argument("--out", dest="output_path")
    return p


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


@contextlib.contextmanager
def _sink(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _run(args: argparse.Namespace) -> int:
    if args.command == "preset":
        _emit(reference_defaults_toml(), args.output_path)
        return 0
    if args.command == "validate":
        results = validation.run_all()
        for r in results:
            print(r.line())
        for note in validation.derived_notes():
            print(f"[NOTE] {note}")
        failed = [r for r in results if not r.passed]
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
        return 1 if failed else 0

    cfg = RunConfig.build(args.config, args.overrides, output_path=args.output_path)
    topo, w = cfg.topology, cfg.workload
    out = cfg.output_path

    if args.command == "cost":
        _emit(_json(breakdowns(_scenario(args.scenario), topo, w)), out)
    elif args.command == "loop":
        _emit(_json(control_loop_latency(_scenario(args.scenario), topo, w).to_dict()), out)
    elif args.command == "boundary":
        _emit(_json(BOUNDARIES[args.condition](topo, w).to_dict()), out)
    elif args.command == "classify":
        _emit(_json(classify(topo, w, args.objective).to_dict()), out)
    elif args.command == "power":
        node = getattr(topo, args.node)
        if node is None:
            raise ModelError(f"topology has no {args.node} node")
        rate = _quantity(args.rate, Dimension.HERTZ)
        _emit(_json(power_budget_check(node, w, rate).to_dict()), out)
    elif args.command == "crossover":
        path = _axis_path(args.axis)
        key = next((k for k in DEFAULT_RANGES if resolve(k) == path), None)
        if key is None:
            raise UsageError(f"--axis must be one of {', '.join(DEFAULT_RANGES)}")
        lo_text, hi_text = DEFAULT_RANGES[key]
        dim = dimension_of(path)
        lo = _quantity(args.lo or lo_text, dim)
        hi = _quantity(args.hi or hi_text, dim)
        res = crossover(key, args.objective, _pair(args.pair), topo, w, (lo, hi), per_op=args.per_op, method=args.method)
        _emit(_json(res.to_dict()), out)
        return 0
    elif args.command == "sweep":
        path = _axis_path(args.param)
        dim = dimension_of(path)
        spacing = "logarithmic" if args.spacing == "log" else "linear"
        try:
            axis = AxisSpec(path, _quantity(args.lo, dim), _quantity(args.hi, dim), args.points, spacing)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        scenarios = [_scenario(s) for s in args.scenarios.split(",") if s.strip()]
        if not scenarios:
            raise UsageError("--scenarios is empty")
        sweep = run_sweep(axis, topo, w, scenarios)
        for x, why in sweep.skipped:
            print(f"skipped: {path}={x!r}: {why}", file=sys.stderr)
        with _sink(out) as fh:
            sweep.write_csv(fh)
    elif args.command == "map":
        if args.kind == "energy":
            x = default_input_axis(args.x_points or 60)
            y = default_complexity_axis(args.y_points or 60)
            fmap = run_energy_map(topo, w, x, y, include_s3=args.include_s3)
        else:
            x = default_wait_axis(args.x_points or 61)
            y = default_deadline_axis(args.y_points or 50)
            fmap = run_latency_map(topo, w, x, y, learning_only=args.learning_only)
        with _sink(out) as fh:
            fmap.write_csv(fh)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except (ModelError, ArithmeticError, ValueError) as exc:
        print(f"error: evaluation: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
