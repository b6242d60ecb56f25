"""Stochastic simulation of repeated postselected runs.

Each trial is a Bernoulli acceptance at the exact postselection probability
followed, when accepted, by one momentum draw from the conditional
distribution (inverse CDF on the grid).  Randomness is counter-based: trials
are grouped into fixed blocks and block b draws from Philox(key=seed,
counter=b << 64), so serial and data-parallel executions are bit-identical.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import protocol
from .wavepacket import GridPacket

BLOCK_TRIALS = 8192
DEFAULT_HISTOGRAM_BINS = 64


@dataclass(frozen=True)
class RunConfig:
    scenario: protocol.Scenario
    trials: int
    seed: int
    bins: int = DEFAULT_HISTOGRAM_BINS
    grid_points: int = 2048

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.bins < 1:
            raise ValueError("bins must be >= 1")


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    trials: int
    accepted: int
    acceptance_rate: float
    mean_kick_estimate: float | None
    std_error: float | None  # sample std / sqrt(accepted); None below 2 samples
    histogram_edges: np.ndarray
    histogram_counts: np.ndarray

    def summary_rows(self) -> list[tuple[str, object]]:
        return [
            ("trials", self.trials),
            ("accepted", self.accepted),
            ("acceptance_rate", self.acceptance_rate),
            ("mean_kick_estimate", self.mean_kick_estimate),
            ("std_error", self.std_error),
        ]

    def histogram_csv(self) -> str:
        lines = ["bin_left,bin_right,count"]
        for left, right, count in zip(
            self.histogram_edges[:-1], self.histogram_edges[1:], self.histogram_counts
        ):
            lines.append(f"{left:.8e},{right:.8e},{int(count)}")
        return "\n".join(lines) + "\n"


def stats_equal(a: EnsembleStats, b: EnsembleStats) -> bool:
    return (
        a.trials == b.trials
        and a.accepted == b.accepted
        and a.acceptance_rate == b.acceptance_rate
        and a.mean_kick_estimate == b.mean_kick_estimate
        and a.std_error == b.std_error
        and np.array_equal(a.histogram_edges, b.histogram_edges)
        and np.array_equal(a.histogram_counts, b.histogram_counts)
    )


@dataclass(frozen=True, eq=False)
class _Sampler:
    """Piecewise-linear inverse CDF over the conditional grid."""

    p: np.ndarray
    cdf: np.ndarray

    @classmethod
    def from_conditional(cls, conditional: GridPacket) -> "_Sampler":
        w = np.abs(conditional.amps) ** 2
        masses = 0.5 * (w[:-1] + w[1:]) * conditional.dp
        cdf = np.concatenate(([0.0], np.cumsum(masses)))
        cdf /= cdf[-1]
        return cls(p=conditional.p, cdf=cdf)

    def draw(self, uniforms: np.ndarray) -> np.ndarray:
        return np.interp(uniforms, self.cdf, self.p)

    def bin_masses(self, edges: np.ndarray) -> np.ndarray:
        """Probability mass between histogram edges, per the sampler's own CDF."""
        return np.diff(np.interp(edges, self.p, self.cdf))


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=block << 64))


def run_ensemble(cfg: RunConfig, workers: int = 1) -> EnsembleStats:
    """Simulate cfg.trials runs; deterministic given cfg.seed for any worker count."""
    result = protocol.run(cfg.scenario, n=cfg.grid_points)
    probability = result.probability
    sampler = _Sampler.from_conditional(result.conditional)
    edges = np.linspace(sampler.p[0], sampler.p[-1], cfg.bins + 1)

    n_blocks = (cfg.trials + BLOCK_TRIALS - 1) // BLOCK_TRIALS

    def run_block(block: int) -> tuple[int, float, float, np.ndarray]:
        nb = min(BLOCK_TRIALS, cfg.trials - block * BLOCK_TRIALS)
        u = _block_rng(cfg.seed, block).random(2 * nb)
        accepted_mask = u[:nb] < probability
        samples = sampler.draw(u[nb:][accepted_mask])
        counts, _ = np.histogram(samples, bins=edges)
        return int(accepted_mask.sum()), float(samples.sum()), float(np.sum(samples**2)), counts

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run_block, range(n_blocks)))
    else:
        partials = [run_block(b) for b in range(n_blocks)]

    accepted = 0
    total = 0.0
    total_sq = 0.0
    counts = np.zeros(cfg.bins, dtype=np.int64)
    for n_acc, s1, s2, c in partials:
        accepted += n_acc
        total += s1
        total_sq += s2
        counts += c

    mean = total / accepted if accepted >= 1 else None
    std_error = None
    if accepted >= 2:
        var = max(total_sq - total * total / accepted, 0.0) / (accepted - 1)
        std_error = math.sqrt(var / accepted)
    return EnsembleStats(
        trials=cfg.trials,
        accepted=accepted,
        acceptance_rate=accepted / cfg.trials,
        mean_kick_estimate=mean,
        std_error=std_error,
        histogram_edges=edges,
        histogram_counts=counts,
    )


def expected_bin_masses(cfg: RunConfig) -> tuple[np.ndarray, np.ndarray]:
    """Histogram edges and the exact per-bin masses the sampler targets."""
    result = protocol.run(cfg.scenario, n=cfg.grid_points)
    sampler = _Sampler.from_conditional(result.conditional)
    edges = np.linspace(sampler.p[0], sampler.p[-1], cfg.bins + 1)
    return edges, sampler.bin_masses(edges)


def required_trials(delta_ef: float, delta_p: float, p_ps: float, k_sigma: float) -> int:
    """Total trials so the accepted-sample standard error resolves delta_ef.

    ceil(k^2 (delta_p / delta_ef)^2 / p_ps): the pre-kick uncertainty delta_p
    stands in for the conditional spread, which differs at second order.
    """
    if delta_ef == 0.0:
        raise ValueError("cannot size an experiment for a zero effect")
    if not 0.0 < p_ps <= 1.0:
        raise ValueError("postselection probability must be in (0, 1]")
    if k_sigma <= 0.0:
        raise ValueError("significance multiple must be positive")
    return math.ceil(k_sigma**2 * (delta_p / delta_ef) ** 2 / p_ps)


def reproducibility_check(cfg: RunConfig) -> bool:
    """Two executions of the same config must produce bit-identical stats."""
    return stats_equal(run_ensemble(cfg), run_ensemble(cfg))
