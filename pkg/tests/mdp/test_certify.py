"""Tests for interval-cost policy certification."""

from __future__ import annotations

import numpy as np
import pytest

from setbellman.common.exceptions import IntervalInversionError, InvalidParameterError
from setbellman.common.rng import make_rng
from setbellman.mdp.bellman import (
    greedy_policy,
    policy_evaluation,
    q_values,
    value_iteration,
)
from setbellman.mdp.certify import certify_interval_optimality, endpoint_values
from setbellman.mdp.model import Mdp, Policy
from tests.factories import make_random_interval_mdp

KERNEL = [[1.0, 1.0]]
ACTION_0 = Policy.deterministic([0], 2)


class TestCertifyIntervalOptimality:
    def test_dominant_action_certified(self):
        cert = certify_interval_optimality(KERNEL, 0.9, ACTION_0, [[0.0, 1.0]], [[0.0, 2.0]])
        assert cert.certified
        assert bool(cert)
        assert cert.worst_margin == pytest.approx(1.0)

    def test_beaten_at_upper_endpoint(self):
        cert = certify_interval_optimality(KERNEL, 0.9, ACTION_0, [[0.0, 1.0]], [[2.0, 1.0]])
        assert not cert.certified
        assert not cert.upper.optimal
        assert cert.lower.optimal

    def test_optimal_at_both_endpoints_but_not_inside(self):
        """At C = [1.9, 1.1] action 1 is strictly better even though both endpoints favour 0."""
        cert = certify_interval_optimality(KERNEL, 0.9, ACTION_0, [[0.0, 1.0]], [[2.0, 3.0]])
        assert cert.endpoints_optimal
        assert not cert.certified
        assert cert.worst_state_action == (0, 1)
        assert cert.worst_margin == pytest.approx(-1.0)

        inside = Mdp(KERNEL, [[1.9, 1.1]], 0.9)
        assert greedy_policy(inside, policy_evaluation(inside, ACTION_0)).actions[0] == 1

    def test_witness_values(self):
        lower, upper = endpoint_values(KERNEL, 0.9, ACTION_0, [[1.0, 1.0]], [[2.0, 3.0]])
        np.testing.assert_allclose(lower.values, [10.0])
        np.testing.assert_allclose(upper.values, [20.0])
        assert lower.residual <= 1e-12

    def test_single_action_always_certified(self):
        policy = Policy.deterministic([0], 1)
        cert = certify_interval_optimality([[1.0]], 0.5, policy, [[0.0]], [[5.0]])
        assert cert.certified
        assert cert.worst_state_action is None

    def test_inverted_interval_rejected(self):
        with pytest.raises(IntervalInversionError):
            certify_interval_optimality(KERNEL, 0.9, ACTION_0, [[1.0, 1.0]], [[0.0, 2.0]])

    def test_mixed_policy_rejected(self):
        with pytest.raises(InvalidParameterError):
            certify_interval_optimality(
                KERNEL, 0.9, Policy.uniform(1, 2), [[0.0, 1.0]], [[0.0, 2.0]]
            )

    @pytest.mark.acceptance
    @pytest.mark.slow
    def test_certified_policies_stay_vi_optimal_on_samples(self):
        """Certified policies are the VI-greedy choice at 100 sampled costs each."""
        rng = make_rng(8)
        widths = [1e-3, 0.05, 0.3, 1.0]
        certified = rejected = 0
        for i in range(100):
            s, a = int(rng.integers(1, 5)), int(rng.integers(2, 4))
            imdp = make_random_interval_mdp(rng, s, a, discount=0.8, max_width=widths[i % 4])
            mid = imdp.mdp_at((imdp.cost_box.lo + imdp.cost_box.hi) / 2)
            policy = greedy_policy(mid, value_iteration(mid, np.zeros(s), epsilon=1e-10).values)
            cert = certify_interval_optimality(
                imdp.kernel, imdp.discount, policy, imdp.cost_box.lo, imdp.cost_box.hi
            )
            if not cert:
                rejected += 1
                continue
            certified += 1
            rows = np.arange(s)
            for _ in range(100):
                sampled = imdp.mdp_at(imdp.cost_box.sample(rng))
                v = value_iteration(sampled, np.zeros(s), epsilon=1e-10).values
                chosen = greedy_policy(sampled, v).actions
                q = q_values(sampled, v)
                # a different greedy choice is only allowed on an exact tie
                gap = q[rows, policy.actions] - q[rows, chosen]
                assert np.all((chosen == policy.actions) | (gap <= 1e-8))
        assert certified >= 20
        assert rejected >= 1