"""Simulation oracle: determinism, edge cases, and statistical behaviour."""

import math

import numpy as np
import pytest

from pcraft import build_ctmc, simulate_ctmc
from pcraft.units import YEAR

LAMBDA_PER_S = 12.0 / YEAR
RHO_PER_S = 1.0 / 1800.0
# Stationary up-probability rho / (lambda + rho) of the chain below.
PI_UP = 0.9993160054719562


def two_state():
    return build_ctmc(
        [("up", "down", LAMBDA_PER_S), ("down", "up", RHO_PER_S)],
        {"up": 1.0, "down": 0.0},
    )


def up_reward(label):
    return label == "up"


class TestDeterminism:
    def test_same_seed_bit_identical(self):
        chain = two_state()
        a = simulate_ctmc(chain, up_reward, YEAR, replications=200, seed=42)
        b = simulate_ctmc(chain, up_reward, YEAR, replications=200, seed=42)
        assert a == b

    def test_different_seeds_differ(self):
        chain = two_state()
        a = simulate_ctmc(chain, up_reward, YEAR, replications=200, seed=1)
        b = simulate_ctmc(chain, up_reward, YEAR, replications=200, seed=2)
        assert a.mean != b.mean

    def test_result_records_inputs(self):
        chain = two_state()
        est = simulate_ctmc(chain, up_reward, YEAR, replications=64, seed=9)
        assert est.replications == 64
        assert est.seed == 9


class TestEdgeCases:
    def test_absorbing_start_state_is_exact(self):
        # "sink" has no outgoing transitions, so every trajectory sits
        # there for the whole horizon and the estimate has no variance.
        chain = build_ctmc([("other", "sink", 1.0)], {"sink": 1.0, "other": 0.0})
        est = simulate_ctmc(chain, lambda s: s == "sink", 123.0, replications=16, seed=0)
        assert est.mean == 1.0
        assert est.ci_half_width == 0.0

    def test_constant_reward_has_zero_variance(self):
        chain = two_state()
        est = simulate_ctmc(chain, np.ones(2), YEAR, replications=32, seed=5)
        assert est.mean == 1.0
        assert est.ci_half_width == 0.0

    def test_interval_accessors(self):
        chain = two_state()
        est = simulate_ctmc(chain, up_reward, YEAR, replications=100, seed=3)
        assert est.low == est.mean - est.ci_half_width
        assert est.high == est.mean + est.ci_half_width
        assert est.covers(est.mean)
        assert not est.covers(est.high + 1e-6)

    def test_rejects_bad_reward_shape(self):
        with pytest.raises(ValueError, match="one entry per state"):
            simulate_ctmc(two_state(), np.ones(3), YEAR, replications=8)

    def test_rejects_single_replication(self):
        with pytest.raises(ValueError, match="at least 2 replications"):
            simulate_ctmc(two_state(), up_reward, YEAR, replications=1)

    @pytest.mark.parametrize("horizon", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_horizon(self, horizon):
        with pytest.raises(ValueError, match="horizon"):
            simulate_ctmc(two_state(), up_reward, horizon, replications=8)


class TestStatistics:
    def test_ci_covers_stationary_availability(self):
        chain = two_state()
        est = simulate_ctmc(chain, up_reward, YEAR, replications=3000, seed=2026)
        assert est.covers(PI_UP)

    def test_coverage_rate_across_seeds(self):
        # 99% intervals should cover the truth nearly always; allow a
        # couple of misses out of twenty at modest replication counts.
        chain = two_state()
        hits = sum(
            simulate_ctmc(chain, up_reward, YEAR, replications=400, seed=s).covers(PI_UP)
            for s in range(20)
        )
        assert hits >= 17

    def test_ci_shrinks_with_replications(self):
        chain = two_state()
        small = simulate_ctmc(chain, up_reward, YEAR, replications=1000, seed=11)
        large = simulate_ctmc(chain, up_reward, YEAR, replications=4000, seed=11)
        ratio = large.ci_half_width / small.ci_half_width
        assert 0.35 <= ratio <= 0.65

    def test_initial_distribution_is_sampled(self):
        # Start in "down" with probability one: early downtime must
        # drag the estimate visibly below the up-start value.
        chain = build_ctmc(
            [("up", "down", LAMBDA_PER_S), ("down", "up", RHO_PER_S)],
            {"up": 0.0, "down": 1.0},
        )
        horizon = 4 * 1800.0
        est = simulate_ctmc(chain, up_reward, horizon, replications=600, seed=7)
        assert est.mean < 0.9
