import math

import numpy as np
import pytest
from scipy import stats as scipy_stats

from gravkick.montecarlo import (
    RunConfig,
    expected_bin_masses,
    required_trials,
    reproducibility_check,
    run_ensemble,
    stats_equal,
)
from gravkick.protocol import Scenario, SourceState, paper_postselection, run
from gravkick.wavepacket import gaussian

from .refvals import (
    FIG2_ALPHA,
    FIG2_BETA,
    FIG2_DELTA_A,
    FIG2_DELTA_B,
    FIG2_MEAN,
    FIG2_PROBABILITY,
)


def fig2_scenario(**overrides):
    kwargs = dict(
        pre=SourceState(complex(FIG2_ALPHA), complex(FIG2_BETA)),
        post=paper_postselection(),
        probe=gaussian(0.0, 1.0, 1.0),
        delta_a=FIG2_DELTA_A,
        delta_b=FIG2_DELTA_B,
    )
    kwargs.update(overrides)
    return Scenario(**kwargs)


def fig2_config(trials=100000, seed=42, **kw):
    return RunConfig(scenario=fig2_scenario(), trials=trials, seed=seed, **kw)


class TestDeterminism:
    def test_same_seed_reproduces(self):
        assert reproducibility_check(fig2_config(trials=20000))

    def test_different_seeds_differ(self):
        a = run_ensemble(fig2_config(trials=5000, seed=1))
        b = run_ensemble(fig2_config(trials=5000, seed=2))
        assert not np.array_equal(a.histogram_counts, b.histogram_counts)

    def test_worker_count_invariance(self):
        cfg = fig2_config(trials=50000)
        assert stats_equal(run_ensemble(cfg, workers=1), run_ensemble(cfg, workers=8))


class TestStatistics:
    def test_acceptance_rate_matches_probability(self):
        cfg = fig2_config(trials=200000)
        stats = run_ensemble(cfg)
        margin = 4 * math.sqrt(FIG2_PROBABILITY * (1 - FIG2_PROBABILITY) / cfg.trials)
        assert abs(stats.acceptance_rate - FIG2_PROBABILITY) < margin

    def test_mean_estimate_converges_to_exact(self):
        stats = run_ensemble(fig2_config(trials=1000000))
        assert stats.std_error is not None
        assert abs(stats.mean_kick_estimate - FIG2_MEAN) < 4 * stats.std_error

    def test_negative_mean_witness_at_5_sigma(self):
        stats = run_ensemble(fig2_config(trials=1000000))
        assert stats.mean_kick_estimate + 5 * stats.std_error < 0

    def test_unkicked_scenario_centered_at_zero(self):
        scenario = fig2_scenario(delta_a=0.0, delta_b=0.0)
        stats = run_ensemble(RunConfig(scenario=scenario, trials=400000, seed=9))
        assert abs(stats.mean_kick_estimate) < 4 * stats.std_error

    def test_single_trial_edge_case(self):
        stats = run_ensemble(fig2_config(trials=1))
        assert stats.accepted in (0, 1)
        assert stats.std_error is None
        assert stats.trials == 1

    def test_histogram_totals(self):
        stats = run_ensemble(fig2_config(trials=30000))
        assert stats.histogram_counts.sum() == stats.accepted
        assert stats.histogram_edges.size == stats.histogram_counts.size + 1

    def test_sampled_histogram_chi_squared(self):
        # fixed seed; 1e6 trials gives ~1.25e5 accepted samples
        cfg = fig2_config(trials=1000000, seed=1234, bins=64)
        stats = run_ensemble(cfg)
        assert stats.accepted > 100000
        _, masses = expected_bin_masses(cfg)
        expected = masses * stats.accepted
        keep = expected >= 5.0
        observed = np.append(stats.histogram_counts[keep], stats.histogram_counts[~keep].sum())
        predicted = np.append(expected[keep], expected[~keep].sum())
        observed = observed * predicted.sum() / observed.sum()
        chi2, p_value = scipy_stats.chisquare(observed, predicted)
        assert p_value > 0.001

    def test_error_scaling_one_over_sqrt_accepted(self):
        sizes = [1000, 10000, 100000, 1000000]
        rms_errors, inv_sqrt_accepted = [], []
        for trials in sizes:
            errs, accepted = [], []
            for seed in range(8):
                stats = run_ensemble(fig2_config(trials=trials, seed=100 + seed))
                errs.append((stats.mean_kick_estimate - FIG2_MEAN) ** 2)
                accepted.append(stats.accepted)
            rms_errors.append(math.sqrt(np.mean(errs)))
            inv_sqrt_accepted.append(1.0 / math.sqrt(np.mean(accepted)))
        slope = np.polyfit(np.log(inv_sqrt_accepted), np.log(rms_errors), 1)[0]
        assert 0.7 < slope < 1.3  # |error| ~ 1/sqrt(accepted)


class TestRequiredTrials:
    def test_worked_example(self):
        assert required_trials(1e-3, 1.0, 1.0, 5.0) == 25000000

    def test_inverse_in_acceptance(self):
        assert required_trials(1e-3, 1.0, 0.5, 5.0) == 2 * required_trials(1e-3, 1.0, 1.0, 5.0)

    def test_quadratic_in_significance(self):
        assert required_trials(1e-3, 1.0, 1.0, 10.0) == 4 * required_trials(1e-3, 1.0, 1.0, 5.0)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            required_trials(0.0, 1.0, 1.0, 5.0)
        with pytest.raises(ValueError):
            required_trials(1e-3, 1.0, 0.0, 5.0)
        with pytest.raises(ValueError):
            required_trials(1e-3, 1.0, 1.0, -1.0)


class TestRunConfig:
    def test_trials_must_be_positive(self):
        with pytest.raises(ValueError, match="trials"):
            RunConfig(scenario=fig2_scenario(), trials=0, seed=1)

    def test_impossible_scenario_propagates(self):
        from gravkick.protocol import PostselectionImpossible

        scenario = Scenario(
            pre=SourceState.from_amplitudes(1.0, 1.0),
            post=SourceState.from_amplitudes(-1.0, 1.0),
            probe=gaussian(0.0, 1.0, 1.0),
            delta_a=0.0,
            delta_b=0.0,
        )
        with pytest.raises(PostselectionImpossible):
            run_ensemble(RunConfig(scenario=scenario, trials=100, seed=1))


def test_amplified_scenario_rare_acceptance():
    # acceptance expectation ~2.3 counts in 1e7 trials at probability 2.3e-7
    from .refvals import AMP_ALPHA, AMP_BETA

    scenario = fig2_scenario(
        pre=SourceState(complex(AMP_ALPHA), complex(AMP_BETA)),
        delta_a=1e-5,
        delta_b=1e-6,
    )
    exact = run(scenario).probability
    stats = run_ensemble(RunConfig(scenario=scenario, trials=10000000, seed=3))
    lam = exact * stats.trials
    assert stats.accepted <= lam + 4 * math.sqrt(lam) + 1
