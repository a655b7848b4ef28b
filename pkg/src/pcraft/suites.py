"""Canned parameter sweeps.

Each suite regenerates one of the report tables or figure datasets as
CSV rows: node-count tables for both over-provisioning techniques, the
single-node and cluster availability curves, and the integrity time
shares.  Grids are fixed; knobs that are not swept (service target,
availability target, horizon, search cap) come from the scenario
configuration, so a config file can shrink an expensive sweep.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Callable, NamedTuple

from .availability import (
    ARA,
    CLOUD,
    ON_PREMISES,
    PF,
    AvailRates,
    ClusterSpec,
    availability,
    build_availability_model,
)
from .config import ScenarioConfig
from .integrity import VARIANTS, build_integrity_model, integrity_breakdown
from .planner import (
    THROUGHPUT_RATIOS,
    PlanRequest,
    plan_capacity,
    required_base_nodes,
)
from .units import MONTH

__all__ = ["SUITES", "Suite", "run_suite"]

CRASH_RATES_PER_YEAR = (1.0, 6.0)
RECOVERY_SECONDS = (15.0, 60.0, 1800.0)
FAULT_RATE_SPAN = tuple(float(r) for r in range(1, 13))
# Transient fault arrivals per month; 30.4375 is exactly one per day.
TRANSIENT_RATES_PER_MONTH = (1.0, 3.0, 10.0, 30.4375, 100.0)
CLUSTER_SIZES = tuple(range(1, 21))


class Suite(NamedTuple):
    name: str
    description: str
    header: tuple[str, ...]
    build: Callable[[ScenarioConfig], list[list]]


def _plan_row(config: ScenarioConfig, technique: str, deployment: str,
              variant: str, crashes: float, recovery_s: float,
              repair_per_hour: float | None):
    rates = AvailRates(
        hw_crash_per_year=crashes,
        crash_recovery_per_s=1.0 / recovery_s,
        pool_repair_per_s=None if repair_per_hour is None else repair_per_hour / 3600.0,
    )
    return plan_capacity(PlanRequest(
        technique=technique,
        deployment=deployment,
        node_variant=variant,
        sert_multiplier=config.sert_multiplier,
        target_nines=config.target_nines,
        horizon_s=config.horizon_s,
        rates=rates,
        ratio=config.throughput_ratio,
        search_cap=config.search_cap,
        parallel_recovery=config.parallel_recovery,
    ))


def _cloud_ara_extras(config: ScenarioConfig) -> list[list]:
    rows = []
    for variant in VARIANTS:
        for crashes in CRASH_RATES_PER_YEAR:
            for recovery_s in RECOVERY_SECONDS:
                r = _plan_row(config, ARA, CLOUD, variant, crashes, recovery_s, None)
                rows.append([variant, crashes, recovery_s, r.base, r.extra,
                             r.availability, r.nines, r.feasible])
    return rows


def _onprem_ara_extras(config: ScenarioConfig) -> list[list]:
    rows = []
    for variant in VARIANTS:
        for crashes in CRASH_RATES_PER_YEAR:
            r = _plan_row(config, ARA, ON_PREMISES, variant, crashes,
                          config.crash_recovery_seconds, None)
            rows.append([variant, crashes, r.base, r.extra,
                         r.availability, r.nines, r.feasible])
    return rows


def _onprem_pf_pool(config: ScenarioConfig) -> list[list]:
    rows = []
    for variant in VARIANTS:
        for crashes in CRASH_RATES_PER_YEAR:
            for recovery_s in RECOVERY_SECONDS:
                for repair in (None, 1.0):
                    r = _plan_row(config, PF, ON_PREMISES, variant, crashes,
                                  recovery_s, repair)
                    rows.append([variant, crashes, recovery_s, repair,
                                 r.base, r.extra, r.availability, r.nines,
                                 r.feasible])
    return rows


def _single_node_availability(config: ScenarioConfig) -> list[list]:
    rows = []
    for recovery_s in RECOVERY_SECONDS:
        for crashes in FAULT_RATE_SPAN:
            rates = AvailRates(crashes, 1.0 / recovery_s)
            model = build_availability_model(
                ClusterSpec(PF, CLOUD, num=1), rates, config.parallel_recovery)
            report = availability(model, config.horizon_s)
            rows.append([CLOUD, recovery_s, crashes,
                         report.availability, report.nines])
    for crashes in FAULT_RATE_SPAN:
        rates = AvailRates(crashes, 1.0 / config.crash_recovery_seconds)
        model = build_availability_model(
            ClusterSpec(PF, ON_PREMISES, num=1, pool=0), rates,
            config.parallel_recovery)
        report = availability(model, config.horizon_s)
        # No automatic recovery on-premises, so the recovery column is empty.
        rows.append([ON_PREMISES, None, crashes, report.availability, report.nines])
    return rows


def _cluster_availability(config: ScenarioConfig) -> list[list]:
    rows = []
    for deployment in (CLOUD, ON_PREMISES):
        for crashes in CRASH_RATES_PER_YEAR:
            rates = AvailRates(crashes, 1.0 / config.crash_recovery_seconds)
            for num in CLUSTER_SIZES:
                model = build_availability_model(
                    ClusterSpec(PF, deployment, num=num, pool=0), rates,
                    config.parallel_recovery)
                report = availability(model, config.horizon_s)
                rows.append([deployment, crashes, num,
                             report.availability, report.nines])
    return rows


def _deployment_fault_rates(config: ScenarioConfig) -> list[list]:
    variant = config.node_variant or "native"
    ratio = (config.throughput_ratio if config.throughput_ratio is not None
             else THROUGHPUT_RATIOS[variant])
    num = required_base_nodes(config.sert_multiplier, ratio)
    rows = []
    for deployment in (CLOUD, ON_PREMISES):
        for crashes in FAULT_RATE_SPAN:
            rates = AvailRates(crashes, 1.0 / config.crash_recovery_seconds)
            model = build_availability_model(
                ClusterSpec(PF, deployment, num=num, pool=0), rates,
                config.parallel_recovery)
            report = availability(model, config.horizon_s)
            rows.append([deployment, crashes, num,
                         report.availability, report.nines])
    return rows


def _integrity_time_shares(config: ScenarioConfig) -> list[list]:
    # Shares are reported over one month regardless of the availability
    # horizon; the transient-rate axis is the sweep.
    rows = []
    for variant in VARIANTS:
        for rate in TRANSIENT_RATES_PER_MONTH:
            scenario = replace(config, transient_rate_per_month=rate)
            model = build_integrity_model(scenario.integrity_rates(variant))
            report = integrity_breakdown(model, MONTH)
            rows.append([variant, rate, report.correct, report.corrupt,
                         report.down])
    return rows


SUITES: dict[str, Suite] = {
    suite.name: suite
    for suite in (
        Suite(
            "cloud-ara-extras",
            "Extra active nodes for a cloud cluster per variant, crash rate, "
            "and recovery time",
            ("variant", "hw_crash_per_year", "crash_recovery_s", "base",
             "extra", "availability", "nines", "feasible"),
            _cloud_ara_extras,
        ),
        Suite(
            "onprem-ara-extras",
            "Extra active nodes for an on-premises cluster per variant and "
            "crash rate",
            ("variant", "hw_crash_per_year", "base", "extra", "availability",
             "nines", "feasible"),
            _onprem_ara_extras,
        ),
        Suite(
            "onprem-pf-pool",
            "Standby pool sizes for on-premises failover per variant, crash "
            "rate, failover time, and repair policy",
            ("variant", "hw_crash_per_year", "crash_recovery_s",
             "pool_repair_per_hour", "base", "extra", "availability", "nines",
             "feasible"),
            _onprem_pf_pool,
        ),
        Suite(
            "single-node-availability",
            "Yearly availability of one node versus crash rate, cloud (three "
            "recovery times) and on-premises",
            ("deployment", "crash_recovery_s", "hw_crash_per_year",
             "availability", "nines"),
            _single_node_availability,
        ),
        Suite(
            "cluster-availability",
            "All-nodes-up availability versus cluster size, by deployment and "
            "crash rate",
            ("deployment", "hw_crash_per_year", "num", "availability",
             "nines"),
            _cluster_availability,
        ),
        Suite(
            "deployment-fault-rates",
            "Availability of a fixed-size cluster versus fault rate, cloud "
            "against on-premises",
            ("deployment", "hw_crash_per_year", "num", "availability",
             "nines"),
            _deployment_fault_rates,
        ),
        Suite(
            "integrity-time-shares",
            "Monthly time shares spent correct, corrupt, and down per variant "
            "and transient fault rate",
            ("variant", "transient_rate_per_month", "correct", "corrupt",
             "down"),
            _integrity_time_shares,
        ),
    )
}


def run_suite(name: str, config: ScenarioConfig) -> tuple[tuple[str, ...], list[list]]:
    if name not in SUITES:
        known = ", ".join(sorted(SUITES))
        raise ValueError(f"unknown suite {name!r}; available: {known}")
    suite = SUITES[name]
    return suite.header, suite.build(config)
