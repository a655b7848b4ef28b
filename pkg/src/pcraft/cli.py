"""Command-line front end.

Scenario configuration files go in, CSV tables come out.  Subcommands:

* ``ingest``: extract saturation throughputs and degradation ratios
  from benchmark CSVs.
* ``avail``: availability of one configured cluster.
* ``integrity``: monthly correct/corrupt/down shares of one node.
* ``plan``: smallest extra-node counts meeting the configured target.
* ``sweep``: run a canned table or figure-data suite.
* ``simulate``: Monte Carlo estimate of the configured cluster's
  availability, as a cross-check of the analytic result.

Exit codes: 0 on success, 2 for usage or configuration errors, 1 when a
computation fails.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .availability import (
    ARA,
    ClusterSpec,
    availability,
    build_availability_model,
)
from .config import ConfigError, ScenarioConfig, load_config
from .integrity import build_integrity_model, integrity_breakdown
from .perf import degradation_ratios, parse_benchmark_csv, saturation_throughput
from .planner import (
    THROUGHPUT_RATIOS,
    plan_capacity,
    required_base_nodes,
)
from .simulate import simulate_ctmc
from .suites import SUITES, run_suite

__all__ = ["main"]


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse handles --help (0) and usage (2)
        return int(exit_.code or 0)

    try:
        config = load_config(args.config) if args.config else ScenarioConfig()
    except (ConfigError, OSError) as err:
        print(f"pcraft: {err}", file=sys.stderr)
        return 2

    try:
        header, rows = args.handler(args, config)
    except ConfigError as err:
        print(f"pcraft: {err}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError) as err:
        print(f"pcraft: {err}", file=sys.stderr)
        return 1

    _write_csv(header, rows, args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcraft",
        description="Capacity planning for fault-tolerant services: "
                    "availability and integrity models plus cluster sizing.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", metavar="FILE",
                       help="scenario file of key = value lines")
        p.add_argument("--out", metavar="FILE",
                       help="write CSV here instead of stdout")
        p.set_defaults(handler=handler)
        return p

    p = add("ingest", _cmd_ingest,
            "Extract saturation throughput per benchmark curve and "
            "degradation ratios versus native.")
    p.add_argument("curves", nargs="+", metavar="APP:VARIANT:CSV",
                   help="benchmark curve labelled as application:variant:path")
    p.add_argument("--latency-threshold-ms", type=float, default=None,
                   help="latency bound defining saturation (required here "
                        "or via the config key latency_threshold_ms)")

    add("avail", _cmd_avail,
        "Availability of the configured cluster over the horizon.")
    add("integrity", _cmd_integrity,
        "Monthly correct/corrupt/down time shares of one node.")
    add("plan", _cmd_plan,
        "Smallest extra-node count per variant meeting the target nines.")
    p = add("sweep", _cmd_sweep, "Run a canned table or figure-data sweep.")
    p.add_argument("--suite", required=True, choices=sorted(SUITES),
                   help="which canned sweep to run")
    p = add("simulate", _cmd_simulate,
            "Monte Carlo availability estimate of the configured cluster.")
    p.add_argument("--replications", type=int, default=None,
                   help="override the config replication count")
    p.add_argument("--seed", type=int, default=None,
                   help="override the config seed")
    return parser


def _write_csv(header, rows, out: str | None) -> None:
    def render(value):
        if value is None:
            return ""
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return repr(value)
        return str(value)

    if out:
        handle = open(out, "w", newline="")
    else:
        handle = sys.stdout
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([render(v) for v in row])
    finally:
        if out:
            handle.close()


def _variants_for(config: ScenarioConfig) -> list[str]:
    if config.node_variant:
        return [config.node_variant]
    return list(THROUGHPUT_RATIOS)


def _base_nodes(config: ScenarioConfig, variant: str) -> int:
    ratio = (config.throughput_ratio if config.throughput_ratio is not None
             else THROUGHPUT_RATIOS[variant])
    return required_base_nodes(config.sert_multiplier, ratio)


def _cluster_model(config: ScenarioConfig, variant: str):
    config.require("technique", "deployment")
    base = _base_nodes(config, variant)
    extra = config.extra_nodes
    if config.technique == ARA:
        spec = ClusterSpec(ARA, config.deployment, num=base, op=extra)
    else:
        spec = ClusterSpec(config.technique, config.deployment, num=base,
                           pool=extra)
    model = build_availability_model(spec, config.avail_rates(),
                                     config.parallel_recovery)
    return base, extra, model


def _cmd_ingest(args, config: ScenarioConfig):
    threshold = args.latency_threshold_ms
    if threshold is None:
        threshold = config.latency_threshold_ms
    if threshold is None:
        raise ConfigError(
            "a latency threshold is required: pass --latency-threshold-ms "
            "or set the configuration key 'latency_threshold_ms'")

    nodt: dict[str, dict[str, float]] = {}
    order: list[tuple[str, str]] = []
    for item in args.curves:
        parts = item.split(":", 2)
        if len(parts) != 3:
            raise ConfigError(
                f"curve {item!r} must be labelled APP:VARIANT:CSV")
        app, variant, path = parts
        curve = parse_benchmark_csv(path, application=app, variant=variant)
        nodt.setdefault(app, {})[variant] = saturation_throughput(curve, threshold)
        order.append((app, variant))

    ratios = {
        app: degradation_ratios(table).ratios if "native" in table else {}
        for app, table in nodt.items()
    }
    rows = [
        [app, variant, nodt[app][variant],
         ratios[app].get(variant, None)]
        for app, variant in order
    ]
    return ("application", "variant", "nodt", "ratio_vs_native"), rows


def _cmd_avail(args, config: ScenarioConfig):
    rows = []
    for variant in _variants_for(config):
        base, extra, model = _cluster_model(config, variant)
        report = availability(model, config.horizon_s)
        rows.append([config.technique, config.deployment, variant, base,
                     extra, report.availability, report.nines,
                     report.downtime_hours])
    return ("technique", "deployment", "variant", "base", "extra",
            "availability", "nines", "downtime_hours"), rows


def _cmd_integrity(args, config: ScenarioConfig):
    rows = []
    for variant in _variants_for(config):
        model = build_integrity_model(config.integrity_rates(variant))
        report = integrity_breakdown(model, config.horizon_s)
        rows.append([variant, config.transient_rate_per_month,
                     config.horizon_hours, report.correct, report.corrupt,
                     report.down])
    return ("variant", "transient_rate_per_month", "horizon_hours",
            "correct", "corrupt", "down"), rows


def _cmd_plan(args, config: ScenarioConfig):
    rows = []
    for variant in _variants_for(config):
        result = plan_capacity(config.plan_request(variant))
        extra = result.extra if result.feasible else "x"
        rows.append([variant, result.base, extra, result.availability,
                     result.nines])
    return ("variant", "base", "extra", "availability", "nines"), rows


def _cmd_sweep(args, config: ScenarioConfig):
    return run_suite(args.suite, config)


def _cmd_simulate(args, config: ScenarioConfig):
    replications = (args.replications if args.replications is not None
                    else config.replications)
    seed = args.seed if args.seed is not None else config.seed
    rows = []
    for variant in _variants_for(config):
        base, extra, model = _cluster_model(config, variant)
        est = simulate_ctmc(model.ctmc, model.up_reward, config.horizon_s,
                            replications, seed)
        rows.append([config.technique, config.deployment, variant, base,
                     extra, est.mean, est.ci_half_width, est.low, est.high,
                     replications, seed])
    return ("technique", "deployment", "variant", "base", "extra", "mean",
            "ci_half_width", "ci_low", "ci_high", "replications", "seed"), rows
