"""Cluster sizing: smallest node counts meeting throughput and availability.

Planning runs in two steps.  Throughput first: fault-tolerant node
variants run slower than native builds, so serving the same load takes
``ceil(multiplier / ratio)`` base nodes, where the ratio is the
variant's relative node throughput.  Availability second: extra nodes
(standby pool for passive failover, over-provisioned active nodes for
active redundancy) are added until the interval availability over the
planning horizon reaches the target number of nines.

Availability is monotone in the number of extras, so the search is an
exponential probe followed by bisection.  Two structural shortcuts keep
large searches cheap without changing any answer:

* On-premises chains without pool repair never revisit higher pool
  levels, so the chain built for the largest pool contains every
  smaller pool's chain as a sub-lattice.  One accumulated-occupancy
  solve of the big chain therefore yields the availability of every
  pool size at once.
* A finite standby pool can never beat the unbounded (cloud) pool, so
  when the unbounded-pool availability already misses the target the
  on-premises search is declared infeasible without climbing to the cap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, fields, replace
from typing import Any, Callable, Mapping, Sequence

from .availability import (
    ARA,
    CLOUD,
    ON_PREMISES,
    PF,
    AvailRates,
    ClusterSpec,
    availability,
    build_availability_model,
    nines,
)
from .ctmc import indicator_reward, occupancy_from_each_start

__all__ = [
    "THROUGHPUT_RATIOS",
    "PlanRequest",
    "PlanResult",
    "SweepCell",
    "plan_capacity",
    "required_base_nodes",
    "sweep",
]

# Node throughput relative to a native build, by variant.
THROUGHPUT_RATIOS: dict[str, float] = {
    "native": 1.00,
    "ft_ilr": 0.92,
    "ft_tx": 0.71,
}

# Guards against float quotients landing epsilon above an exact integer.
_CEIL_GUARD = 1e-9


def required_base_nodes(sert_multiplier: float, ratio: float) -> int:
    """Base nodes needed to serve ``sert_multiplier`` units of load."""
    if not math.isfinite(sert_multiplier) or sert_multiplier <= 0:
        raise ValueError(f"sert_multiplier must be positive, got {sert_multiplier!r}")
    if not math.isfinite(ratio) or ratio <= 0:
        raise ValueError(f"throughput ratio must be positive, got {ratio!r}")
    return max(math.ceil(sert_multiplier / ratio - _CEIL_GUARD), 1)


@dataclass(frozen=True)
class PlanRequest:
    """One sizing question: cluster style, load, rates, and the target."""

    technique: str
    deployment: str
    node_variant: str
    sert_multiplier: float
    target_nines: float
    horizon_s: float
    rates: AvailRates
    ratio: float | None = None
    search_cap: int = 1000
    parallel_recovery: bool = True
    tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.ratio is None and self.node_variant not in THROUGHPUT_RATIOS:
            raise ValueError(
                f"unknown node variant {self.node_variant!r}; "
                f"known: {sorted(THROUGHPUT_RATIOS)} (or pass an explicit ratio)")
        if not math.isfinite(self.target_nines) or self.target_nines <= 0:
            raise ValueError(f"target_nines must be positive, got {self.target_nines!r}")
        if not math.isfinite(self.horizon_s) or self.horizon_s <= 0:
            raise ValueError(f"horizon_s must be positive, got {self.horizon_s!r}")
        if self.search_cap < 0:
            raise ValueError(f"search_cap must be nonnegative, got {self.search_cap}")

    @property
    def effective_ratio(self) -> float:
        return self.ratio if self.ratio is not None else THROUGHPUT_RATIOS[self.node_variant]

    @property
    def target_availability(self) -> float:
        return 1.0 - 10.0 ** (-self.target_nines)


@dataclass(frozen=True)
class PlanResult:
    """Outcome of a sizing search.

    ``extra`` is the standby pool (PF) or over-provisioned node count
    (ARA).  When no extra count within the search cap reaches the
    target, ``feasible`` is False, ``extra`` reports the cap, and
    ``availability`` the best availability bound established.
    ``evaluations`` counts chain solves.
    """

    technique: str
    deployment: str
    node_variant: str
    base: int
    extra: int
    availability: float
    nines: float
    feasible: bool
    evaluations: int

    @property
    def total_nodes(self) -> int:
        return self.base + self.extra


def plan_capacity(request: PlanRequest, strategy: str = "auto") -> PlanResult:
    """Smallest extra-node count meeting the availability target.

    ``strategy`` is ``"auto"`` (exponential probe plus bisection, with
    the structural shortcuts described in the module docstring) or
    ``"linear"`` (scan every extra count with an independently built
    chain each time; slow, used to validate the fast path).
    """
    if strategy not in ("auto", "linear"):
        raise ValueError(f"unknown strategy {strategy!r}; use 'auto' or 'linear'")
    base = required_base_nodes(request.sert_multiplier, request.effective_ratio)
    target = request.target_availability

    if request.technique == PF and request.deployment == CLOUD:
        # The cloud pool is unbounded; there is nothing to size.
        evaluator = _PerExtraEvaluator(request, base)
        avail = evaluator(0)
        return _result(request, base, 0, avail, avail >= target, evaluator.evaluations)

    if strategy == "linear":
        evaluator = _PerExtraEvaluator(request, base)
        extra, avail, feasible = _linear_scan(evaluator, target, request.search_cap)
        return _result(request, base, extra, avail, feasible, evaluator.evaluations)

    evaluations = 0
    if request.technique == PF and request.deployment == ON_PREMISES:
        ceiling = _unbounded_pool_availability(request, base)
        evaluations += 1
        if ceiling < target:
            return _result(request, base, request.search_cap, ceiling, False, evaluations)

    evaluator = _make_evaluator(request, base)
    extra, avail, feasible = _doubling_search(evaluator, target, request.search_cap)
    return _result(request, base, extra, avail, feasible,
                   evaluator.evaluations + evaluations)


def _result(request: PlanRequest, base: int, extra: int, avail: float,
            feasible: bool, evaluations: int) -> PlanResult:
    return PlanResult(
        technique=request.technique,
        deployment=request.deployment,
        node_variant=request.node_variant,
        base=base,
        extra=extra,
        availability=avail,
        nines=nines(avail),
        feasible=feasible,
        evaluations=evaluations,
    )


def _spec_for(request: PlanRequest, base: int, extra: int) -> ClusterSpec:
    if request.technique == ARA:
        return ClusterSpec(ARA, request.deployment, num=base, op=extra)
    return ClusterSpec(PF, request.deployment, num=base, pool=extra)


class _PerExtraEvaluator:
    """Builds and solves an independent chain for each queried extra count."""

    def __init__(self, request: PlanRequest, base: int) -> None:
        self._request = request
        self._base = base
        self._cache: dict[int, float] = {}
        self.evaluations = 0

    def __call__(self, extra: int) -> float:
        if extra not in self._cache:
            request = self._request
            model = build_availability_model(
                _spec_for(request, self._base, extra), request.rates,
                request.parallel_recovery)
            report = availability(model, request.horizon_s, request.tol)
            self._cache[extra] = report.availability
            self.evaluations += 1
        return self._cache[extra]


class _FamilyEvaluator:
    """One accumulated-occupancy solve covers every extra count up to a cap.

    Valid only for on-premises chains without pool repair: their state
    lattices nest, so the availability for ``extra = e`` is the
    normalized accumulated up-time of the largest chain started from the
    fully-up state with ``e`` spares.
    """

    def __init__(self, request: PlanRequest, base: int) -> None:
        self._request = request
        self._base = base
        self._solved_cap = -1
        self._cache: dict[int, float] = {}
        self.evaluations = 0

    def __call__(self, extra: int) -> float:
        if extra > self._solved_cap:
            self._solve(extra)
        return self._cache[extra]

    def _solve(self, cap: int) -> None:
        request = self._request
        base = self._base
        model = build_availability_model(
            _spec_for(request, base, cap), request.rates, request.parallel_recovery)
        occupancy = occupancy_from_each_start(
            model.ctmc, model.up_reward, request.horizon_s, request.tol)
        for extra in range(cap + 1):
            start = base + extra if request.technique == ARA else (base, extra)
            self._cache[extra] = float(
                occupancy[model.ctmc.index_of(start)] / request.horizon_s)
        self._solved_cap = cap
        self.evaluations += 1


def _make_evaluator(request: PlanRequest, base: int):
    if request.deployment == ON_PREMISES:
        if request.technique == ARA:
            return _FamilyEvaluator(request, base)
        if request.rates.pool_repair_per_s is None:
            return _FamilyEvaluator(request, base)
    return _PerExtraEvaluator(request, base)


def _unbounded_pool_availability(request: PlanRequest, base: int) -> float:
    model = build_availability_model(
        ClusterSpec(PF, CLOUD, num=base), request.rates, request.parallel_recovery)
    return availability(model, request.horizon_s, request.tol).availability


def _doubling_search(evaluator, target: float, cap: int) -> tuple[int, float, bool]:
    avail = evaluator(0)
    if avail >= target:
        return 0, avail, True
    if cap == 0:
        return 0, avail, False
    lo, hi = 0, 1
    while evaluator(hi) < target:
        if hi >= cap:
            return cap, evaluator(cap), False
        lo, hi = hi, min(2 * hi, cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if evaluator(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi, evaluator(hi), True


def _linear_scan(evaluator, target: float, cap: int) -> tuple[int, float, bool]:
    for extra in range(cap + 1):
        avail = evaluator(extra)
        if avail >= target:
            return extra, avail, True
    return cap, evaluator(cap), False


@dataclass(frozen=True)
class SweepCell:
    """One grid point: the overridden parameters plus a result or an error."""

    params: dict[str, Any]
    result: Any | None
    error: str | None


_RATE_FIELDS = {f.name for f in fields(AvailRates)}
_REQUEST_FIELDS = {f.name for f in fields(PlanRequest)}


def sweep(grid: Mapping[str, Sequence[Any]], template: PlanRequest,
          evaluate: Callable[[PlanRequest], Any] = plan_capacity) -> list[SweepCell]:
    """Evaluate a request template over a parameter grid.

    Axes iterate in the order given, last axis fastest.  A failing cell
    is recorded with its error message instead of aborting the sweep.
    """
    if not grid:
        raise ValueError("sweep grid has no axes")
    for key, values in grid.items():
        if key not in _REQUEST_FIELDS and key not in _RATE_FIELDS:
            raise ValueError(f"unknown sweep axis {key!r}")
        if not values:
            raise ValueError(f"sweep axis {key!r} has no values")
    keys = list(grid)
    cells: list[SweepCell] = []
    for combo in itertools.product(*grid.values()):
        params = dict(zip(keys, combo))
        try:
            cells.append(SweepCell(params, evaluate(_override(template, params)), None))
        except Exception as exc:
            cells.append(SweepCell(params, None, f"{type(exc).__name__}: {exc}"))
    return cells


def _override(template: PlanRequest, params: Mapping[str, Any]) -> PlanRequest:
    rate_overrides = {k: v for k, v in params.items() if k in _RATE_FIELDS}
    request_overrides = {k: v for k, v in params.items() if k in _REQUEST_FIELDS}
    if rate_overrides:
        request_overrides["rates"] = replace(template.rates, **rate_overrides)
    return replace(template, **request_overrides)
