"""Interferometer protocol: prepare, kick, postselect.

A two-branch source (locations A and B) imprints branch-conditioned momentum
kicks and phases on a probe pointer state; conditioning on a final source
state leaves the probe in a superposition of displaced pointers whose exact
statistics this module computes.  A classical stochastic-mixture baseline is
included for the repulsion witness comparison.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .wavepacket import (
    DEFAULT_GRID_POINTS,
    Moments,
    Wavepacket,
    displace,
    moments,
    normalize,
    superpose,
)

NORM_TOL = 1e-10
MIN_POSTSELECT_PROBABILITY = 1e-30


class PostselectionImpossible(ValueError):
    """The requested postselection has numerically zero probability."""


@dataclass(frozen=True)
class SourceState:
    """Two complex amplitudes over the branch basis {A, B}; normalized."""

    amp_a: complex
    amp_b: complex

    def __post_init__(self) -> None:
        n = abs(self.amp_a) ** 2 + abs(self.amp_b) ** 2
        if abs(n - 1.0) > NORM_TOL:
            raise ValueError(f"source amplitudes must be normalized, |a|^2+|b|^2 = {n!r}")

    @classmethod
    def from_amplitudes(cls, amp_a: complex, amp_b: complex) -> "SourceState":
        """Build a normalized state from arbitrary (not both zero) amplitudes."""
        n = math.sqrt(abs(amp_a) ** 2 + abs(amp_b) ** 2)
        if n == 0.0:
            raise ValueError("amplitudes cannot both be zero")
        return cls(amp_a / n, amp_b / n)


def paper_postselection(phi_a: float = 0.0, phi_b: float = 0.0) -> SourceState:
    """Final source state [-e^{i phi_A}|A> + e^{i phi_B}|B>]/sqrt(2).

    With the phases matched to the ones picked up during the interaction,
    they cancel from the conditional probe state.
    """
    return SourceState(
        amp_a=-cmath.exp(1j * phi_a) / math.sqrt(2.0),
        amp_b=cmath.exp(1j * phi_b) / math.sqrt(2.0),
    )


def source_overlap(final: SourceState, initial: SourceState) -> complex:
    """<final|initial> in the branch basis."""
    return (
        complex(final.amp_a).conjugate() * complex(initial.amp_a)
        + complex(final.amp_b).conjugate() * complex(initial.amp_b)
    )


@dataclass(frozen=True)
class JointState:
    """Source-probe entangled state as two branch-labeled pointers.

    Pointers stay normalized; branch weights and phases live in the complex
    coefficients, so total norm is |amp_a|^2 + |amp_b|^2 = 1.
    """

    amp_a: complex
    pointer_a: Wavepacket
    amp_b: complex
    pointer_b: Wavepacket

    def total_norm(self) -> float:
        na = moments(self.pointer_a).norm if abs(self.amp_a) else 1.0
        nb = moments(self.pointer_b).norm if abs(self.amp_b) else 1.0
        return abs(self.amp_a) ** 2 * na**2 + abs(self.amp_b) ** 2 * nb**2


@dataclass(frozen=True)
class PostselectedResult:
    conditional: Wavepacket  # normalized
    probability: float
    mean_kick: float
    std: float

    def csv_rows(self) -> list[tuple[str, float]]:
        return [
            ("probability", self.probability),
            ("mean_kick", self.mean_kick),
            ("std", self.std),
        ]


def prepare_initial(source: SourceState, probe: Wavepacket) -> JointState:
    """Product state of the superposed source and the probe pointer."""
    return JointState(amp_a=source.amp_a, pointer_a=probe, amp_b=source.amp_b, pointer_b=probe)


def evolve(
    joint: JointState,
    delta_a: float,
    delta_b: float,
    phi_a: float = 0.0,
    phi_b: float = 0.0,
) -> JointState:
    """Apply branch-conditioned momentum kicks and interaction phases."""
    return JointState(
        amp_a=joint.amp_a * cmath.exp(1j * phi_a),
        pointer_a=displace(joint.pointer_a, delta_a),
        amp_b=joint.amp_b * cmath.exp(1j * phi_b),
        pointer_b=displace(joint.pointer_b, delta_b),
    )


def postselect(
    joint: JointState,
    final: SourceState,
    n: int = DEFAULT_GRID_POINTS,
) -> PostselectedResult:
    """Condition the probe on measuring the source in `final`.

    The unnormalized conditional pointer is
        conj(final_A) amp_A psi_A + conj(final_B) amp_B psi_B;
    its squared norm is the postselection probability.  Probabilities below
    1e-30 raise PostselectionImpossible instead of returning a garbage state.
    """
    w_a = complex(final.amp_a).conjugate() * complex(joint.amp_a)
    w_b = complex(final.amp_b).conjugate() * complex(joint.amp_b)
    unnorm = superpose([(w_a, joint.pointer_a), (w_b, joint.pointer_b)], n=n)
    probability = float(np.trapezoid(np.abs(unnorm.amps) ** 2, unnorm.p))
    if probability < MIN_POSTSELECT_PROBABILITY:
        raise PostselectionImpossible(
            f"postselection numerically impossible (probability {probability!r})"
        )
    conditional = normalize(unnorm)
    mom: Moments = moments(conditional)
    return PostselectedResult(
        conditional=conditional,
        probability=probability,
        mean_kick=mom.mean,
        std=mom.std,
    )


@dataclass(frozen=True)
class Scenario:
    """One full protocol run: prepare -> kick -> postselect."""

    pre: SourceState
    post: SourceState
    probe: Wavepacket
    delta_a: float
    delta_b: float
    phi_a: float = 0.0
    phi_b: float = 0.0


def run(scenario: Scenario, n: int = DEFAULT_GRID_POINTS) -> PostselectedResult:
    joint = prepare_initial(scenario.pre, scenario.probe)
    joint = evolve(joint, scenario.delta_a, scenario.delta_b, scenario.phi_a, scenario.phi_b)
    return postselect(joint, scenario.post, n=n)


# --- classical baseline ---


@dataclass(frozen=True)
class ClassicalModel:
    """Stochastic mixture of the two attractive kicks (no interference)."""

    weight_a: float
    weight_b: float
    delta_a: float
    delta_b: float

    def __post_init__(self) -> None:
        if self.weight_a < 0 or self.weight_b < 0:
            raise ValueError("classical weights must be non-negative")
        if abs(self.weight_a + self.weight_b - 1.0) > NORM_TOL:
            raise ValueError("classical weights must sum to 1")


def classical_mean_kick(model: ClassicalModel, subensemble: tuple[float, float]) -> float:
    """Mean kick after reweighting by a postselection subensemble.

    Always a convex combination of the branch kicks, hence inside
    [min(delta_a, delta_b), max(delta_a, delta_b)] no matter the weights:
    a classical mixture cannot flip the sign of the momentum transfer.
    """
    w_a, w_b = subensemble
    if w_a < 0 or w_b < 0:
        raise ValueError("subensemble weights must be non-negative")
    mass_a = w_a * model.weight_a
    mass_b = w_b * model.weight_b
    if mass_a + mass_b <= 0.0:
        raise ValueError("subensemble has zero probability mass")
    if mass_a == 0.0:
        return model.delta_b
    if mass_b == 0.0:
        return model.delta_a
    return (mass_a * model.delta_a + mass_b * model.delta_b) / (mass_a + mass_b)
