"""Capacity planning: base sizing, extras search, shortcuts, and sweeps."""

import math
from dataclasses import replace

import pytest

from pcraft import (
    ARA,
    CLOUD,
    ON_PREMISES,
    PF,
    THROUGHPUT_RATIOS,
    AvailRates,
    PlanRequest,
    plan_capacity,
    required_base_nodes,
    sweep,
)
from pcraft.units import YEAR

# Quadrature of P(Binomial(11, p(t)) >= 10) at 12 crashes/year, 30-minute
# recovery: the availability the planner must report for its one extra.
ARA_CLOUD_10_PLUS_1_12PY = 0.9999743759062438


def request(technique=ARA, deployment=CLOUD, variant="native", sert=10.0,
            target=3.0, crashes=1.0, recovery_s=15.0, repair_per_s=None,
            **kwargs):
    return PlanRequest(
        technique=technique,
        deployment=deployment,
        node_variant=variant,
        sert_multiplier=sert,
        target_nines=target,
        horizon_s=YEAR,
        rates=AvailRates(crashes, 1.0 / recovery_s, repair_per_s),
        **kwargs,
    )


class TestBaseSizing:
    def test_shipped_ratios(self):
        assert THROUGHPUT_RATIOS == {"native": 1.00, "ft_ilr": 0.92, "ft_tx": 0.71}

    @pytest.mark.parametrize("ratio,expected", [(1.00, 10), (0.92, 11), (0.71, 15)])
    def test_ten_units_of_load(self, ratio, expected):
        assert required_base_nodes(10.0, ratio) == expected

    def test_exact_quotient_is_not_rounded_up(self):
        # 9.2 / 0.92 is exactly 10 but lands a float ulp above it.
        assert required_base_nodes(9.2, 0.92) == 10

    def test_fractional_load_needs_one_node(self):
        assert required_base_nodes(0.3, 1.0) == 1

    @pytest.mark.parametrize("sert,ratio", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0),
                                            (math.inf, 1.0), (1.0, -0.5)])
    def test_rejects_bad_inputs(self, sert, ratio):
        with pytest.raises(ValueError):
            required_base_nodes(sert, ratio)


class TestRequestValidation:
    def test_unknown_variant_without_ratio(self):
        with pytest.raises(ValueError, match="node variant"):
            request(variant="exotic")

    def test_unknown_variant_with_explicit_ratio(self):
        req = request(variant="exotic", ratio=0.5)
        assert req.effective_ratio == 0.5

    def test_explicit_ratio_overrides_table(self):
        assert request(variant="ft_tx", ratio=0.9).effective_ratio == 0.9
        assert request(variant="ft_tx").effective_ratio == 0.71

    def test_target_availability(self):
        assert request(target=3.0).target_availability == pytest.approx(0.999, abs=1e-15)

    @pytest.mark.parametrize("kwargs", [
        {"target": 0.0}, {"target": -1.0}, {"search_cap": -1},
    ])
    def test_rejects_bad_fields(self, kwargs):
        with pytest.raises(ValueError):
            request(**kwargs)


class TestCloudAra:
    def test_slow_failures_need_no_extras(self):
        result = plan_capacity(request(crashes=1.0, recovery_s=15.0))
        assert result.base == 10
        assert result.extra == 0
        assert result.feasible

    def test_frequent_failures_need_one_extra(self):
        result = plan_capacity(request(crashes=12.0, recovery_s=1800.0))
        assert result.extra == 1
        assert result.feasible
        assert result.availability == pytest.approx(ARA_CLOUD_10_PLUS_1_12PY, rel=1e-12)
        assert result.nines >= 3.0

    def test_minimality_against_linear_scan(self):
        req = request(crashes=12.0, recovery_s=1800.0)
        fast = plan_capacity(req)
        slow = plan_capacity(req, strategy="linear")
        assert fast.extra == slow.extra
        assert fast.availability == pytest.approx(slow.availability, rel=1e-12)

    def test_variant_changes_base_not_much_else(self):
        result = plan_capacity(request(variant="ft_tx", crashes=1.0))
        assert result.base == 15
        assert result.node_variant == "ft_tx"
        assert result.total_nodes == result.base + result.extra


class TestOnPremFamilies:
    def test_ara_family_matches_linear(self):
        req = request(deployment=ON_PREMISES, sert=10.0, crashes=1.0,
                      target=3.0, search_cap=64)
        fast = plan_capacity(req)
        slow = plan_capacity(req, strategy="linear")
        assert fast.feasible and slow.feasible
        assert fast.extra == slow.extra == 35
        assert fast.availability == pytest.approx(slow.availability, rel=1e-12)
        # One family solve replaces the whole ladder of chain builds.
        assert fast.evaluations < slow.evaluations

    def test_pf_family_matches_linear(self):
        req = request(technique=PF, deployment=ON_PREMISES, sert=3.0,
                      crashes=20.0, recovery_s=60.0, target=3.0, search_cap=64)
        fast = plan_capacity(req)
        slow = plan_capacity(req, strategy="linear")
        assert fast.extra == slow.extra
        assert fast.availability == pytest.approx(slow.availability, rel=1e-12)

    def test_repair_takes_the_per_pool_route(self):
        req = request(technique=PF, deployment=ON_PREMISES, sert=10.0,
                      crashes=1.0, recovery_s=1800.0, repair_per_s=1.0 / 3600.0,
                      search_cap=64)
        result = plan_capacity(req)
        assert result.feasible
        assert result.extra == 1
        slow = plan_capacity(req, strategy="linear")
        assert slow.extra == 1

    def test_repair_beats_no_repair(self):
        base = dict(technique=PF, deployment=ON_PREMISES, sert=10.0,
                    crashes=1.0, recovery_s=60.0, search_cap=64)
        without = plan_capacity(request(**base))
        with_repair = plan_capacity(request(repair_per_s=1.0 / 3600.0, **base))
        assert with_repair.extra <= without.extra


class TestInfeasible:
    def test_unbounded_pool_ceiling_short_circuits(self):
        # 6 crashes/year with 30-minute failover misses 3 nines even
        # with infinite spares, so no pool chain is ever solved.
        req = request(technique=PF, deployment=ON_PREMISES, sert=10.0,
                      crashes=6.0, recovery_s=1800.0)
        result = plan_capacity(req)
        assert not result.feasible
        assert result.extra == req.search_cap
        assert result.evaluations == 1
        assert result.availability < req.target_availability

    def test_ceiling_short_circuit_with_repair(self):
        req = request(technique=PF, deployment=ON_PREMISES, sert=10.0,
                      crashes=6.0, recovery_s=1800.0, repair_per_s=1.0 / 3600.0)
        result = plan_capacity(req)
        assert not result.feasible
        assert result.evaluations == 1

    def test_cap_exhaustion_reports_best_found(self):
        req = request(deployment=ON_PREMISES, sert=2.0, crashes=100.0,
                      target=5.0, search_cap=8)
        result = plan_capacity(req)
        assert not result.feasible
        assert result.extra == 8
        assert result.availability < req.target_availability

    def test_cloud_pf_has_nothing_to_size(self):
        ok = plan_capacity(request(technique=PF, crashes=1.0, recovery_s=15.0))
        assert ok.feasible and ok.extra == 0
        hopeless = plan_capacity(request(technique=PF, crashes=2000.0,
                                         recovery_s=1800.0))
        assert not hopeless.feasible
        assert hopeless.extra == 0


class TestSearchMechanics:
    def test_strategy_name_is_checked(self):
        with pytest.raises(ValueError, match="strategy"):
            plan_capacity(request(), strategy="bisect")

    def test_solution_is_minimal(self):
        req = request(crashes=12.0, recovery_s=1800.0, target=4.0)
        result = plan_capacity(req)
        assert result.feasible
        target = req.target_availability
        below = plan_capacity(replace(req, search_cap=result.extra - 1))
        assert not below.feasible
        assert below.availability < target <= result.availability

    def test_search_cap_zero_checks_only_the_base(self):
        result = plan_capacity(request(crashes=12.0, recovery_s=1800.0,
                                       search_cap=0))
        assert not result.feasible
        assert result.extra == 0


class TestSweep:
    def test_grid_order_is_deterministic(self):
        cells = sweep(
            {"node_variant": ["native", "ft_tx"], "hw_crash_per_year": [1.0, 6.0]},
            request(crashes=1.0),
        )
        assert [c.params for c in cells] == [
            {"node_variant": "native", "hw_crash_per_year": 1.0},
            {"node_variant": "native", "hw_crash_per_year": 6.0},
            {"node_variant": "ft_tx", "hw_crash_per_year": 1.0},
            {"node_variant": "ft_tx", "hw_crash_per_year": 6.0},
        ]
        assert all(c.error is None for c in cells)
        assert cells[0].result.base == 10
        assert cells[2].result.base == 15

    def test_rate_axes_reach_the_rates(self):
        cells = sweep({"crash_recovery_per_s": [1.0 / 15.0, 1.0 / 1800.0]},
                      request(crashes=12.0))
        extras = [c.result.extra for c in cells]
        assert extras == sorted(extras)  # slower recovery never needs fewer

    def test_cell_errors_are_recorded_not_raised(self):
        cells = sweep({"node_variant": ["native", "mystery"]}, request())
        assert cells[0].error is None
        assert cells[1].result is None
        assert "ValueError" in cells[1].error

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError, match="no axes"):
            sweep({}, request())

    def test_empty_axis_rejected(self):
        with pytest.raises(ValueError, match="no values"):
            sweep({"node_variant": []}, request())

    def test_unknown_axis_rejected(self):
        with pytest.raises(ValueError, match="sweep axis"):
            sweep({"colour": ["red"]}, request())

    def test_cardinality(self):
        cells = sweep(
            {
                "node_variant": ["native", "ft_ilr", "ft_tx"],
                "hw_crash_per_year": [1.0, 12.0],
                "crash_recovery_per_s": [1.0 / 15.0, 1.0 / 60.0, 1.0 / 1800.0],
            },
            request(),
        )
        assert len(cells) == 18
