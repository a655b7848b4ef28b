"""Scenario configuration files.

Scenarios are flat ``key = value`` text files (``#`` starts a comment).
Units are fixed by the key name: crash rates per year, repair rates per
hour, recovery times in seconds, horizons in hours.  Unknown keys are
rejected by name so typos cannot silently fall back to defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .availability import ARA, CLOUD, ON_PREMISES, PF, AvailRates
from .integrity import (
    TRANSIENT_SPLITS,
    IntegrityRates,
    TransientSplit,
    derive_integrity_rates,
)
from .planner import THROUGHPUT_RATIOS, PlanRequest
from .units import HOUR, MONTH

__all__ = ["ScenarioConfig", "ConfigError", "load_config", "parse_config"]


class ConfigError(ValueError):
    """A scenario file violated the configuration contract."""


@dataclass
class ScenarioConfig:
    """One planning scenario; every field has a ``key = value`` spelling."""

    technique: str | None = None
    deployment: str | None = None
    node_variant: str | None = None
    sert_multiplier: float = 10.0
    target_nines: float = 3.0
    horizon_hours: float = 8766.0
    hw_crash_per_year: float = 1.0
    crash_recovery_seconds: float = 15.0
    pool_repair_per_hour: float | None = None
    transient_rate_per_month: float | None = None
    latency_threshold_ms: float | None = None
    # Per-variant outcome fractions, in percent, overriding the shipped table.
    corrupt_pct: float | None = None
    crash_pct: float | None = None
    retry_pct: float | None = None
    sdc_recovery_hours: float = 6.0
    retry_tx_us: float = 2.5
    retry_crash_per_hour: float = 0.0
    throughput_ratio: float | None = None
    extra_nodes: int = 0
    search_cap: int = 1000
    parallel_recovery: bool = True
    seed: int = 0
    replications: int = 10000

    @property
    def horizon_s(self) -> float:
        return self.horizon_hours * HOUR

    def require(self, *keys: str) -> None:
        for key in keys:
            if getattr(self, key) is None:
                raise ConfigError(f"configuration key {key!r} is required here")

    def avail_rates(self) -> AvailRates:
        repair = self.pool_repair_per_hour
        return AvailRates(
            hw_crash_per_year=self.hw_crash_per_year,
            crash_recovery_per_s=1.0 / self.crash_recovery_seconds,
            pool_repair_per_s=None if repair is None else repair / HOUR,
        )

    def plan_request(self, variant: str | None = None) -> PlanRequest:
        self.require("technique", "deployment")
        variant = variant or self.node_variant
        if variant is None:
            raise ConfigError("configuration key 'node_variant' is required here")
        return PlanRequest(
            technique=self.technique,
            deployment=self.deployment,
            node_variant=variant,
            sert_multiplier=self.sert_multiplier,
            target_nines=self.target_nines,
            horizon_s=self.horizon_s,
            rates=self.avail_rates(),
            ratio=self.throughput_ratio,
            search_cap=self.search_cap,
            parallel_recovery=self.parallel_recovery,
        )

    def transient_split(self, variant: str | None = None) -> TransientSplit:
        variant = variant or self.node_variant
        base = TRANSIENT_SPLITS.get(variant) if variant else None
        overrides = (self.corrupt_pct, self.crash_pct, self.retry_pct)
        if base is None and any(v is None for v in overrides):
            raise ConfigError(
                "configuration key 'node_variant' must name a known variant, "
                "or corrupt_pct/crash_pct/retry_pct must all be set")
        if base is None:
            base = TransientSplit(0.0, 0.0, 0.0)
        return TransientSplit(
            corrupt=base.corrupt if self.corrupt_pct is None else self.corrupt_pct / 100.0,
            crash=base.crash if self.crash_pct is None else self.crash_pct / 100.0,
            retried=base.retried if self.retry_pct is None else self.retry_pct / 100.0,
        )

    def integrity_rates(self, variant: str | None = None) -> IntegrityRates:
        self.require("transient_rate_per_month")
        # Crashed nodes are only replaced automatically in the cloud.
        crash_recovery = (
            self.crash_recovery_seconds if self.deployment != ON_PREMISES else None)
        return derive_integrity_rates(
            self.transient_rate_per_month / MONTH,
            self.transient_split(variant),
            crash_recovery,
            sdc_recovery_s=self.sdc_recovery_hours * HOUR,
            retry_s=self.retry_tx_us * 1e-6,
            retry_crash_per_s=self.retry_crash_per_hour / HOUR,
        )


_STRING_CHOICES = {
    "technique": (PF, ARA),
    "deployment": (CLOUD, ON_PREMISES),
    "node_variant": tuple(THROUGHPUT_RATIOS),
}
_BOOL_WORDS = {"true": True, "yes": True, "on": True, "1": True,
               "false": False, "no": False, "off": False, "0": False}
_FIELD_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}


def _parse_value(key: str, text: str):
    declared = _FIELD_TYPES[key]
    if key in _STRING_CHOICES:
        if text not in _STRING_CHOICES[key]:
            raise ConfigError(
                f"configuration key {key!r}: expected one of "
                f"{', '.join(_STRING_CHOICES[key])}, got {text!r}")
        return text
    if declared.startswith("bool"):
        word = text.lower()
        if word not in _BOOL_WORDS:
            raise ConfigError(f"configuration key {key!r}: expected a boolean, got {text!r}")
        return _BOOL_WORDS[word]
    if declared.startswith("int"):
        try:
            return int(text)
        except ValueError:
            raise ConfigError(
                f"configuration key {key!r}: expected an integer, got {text!r}") from None
    try:
        return float(text)
    except ValueError:
        raise ConfigError(
            f"configuration key {key!r}: expected a number, got {text!r}") from None


def parse_config(text: str) -> ScenarioConfig:
    config = ScenarioConfig()
    seen: set[str] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {line_no}: unknown configuration key {key!r}")
        if key in seen:
            raise ConfigError(f"line {line_no}: duplicate configuration key {key!r}")
        seen.add(key)
        setattr(config, key, _parse_value(key, value))
    return config


def load_config(path: str | Path) -> ScenarioConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))
