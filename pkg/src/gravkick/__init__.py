"""gravkick: momentum statistics of a probe coupled to a superposed source mass.

Exact and first-order (weak-value) postselected momentum transfer, physical
feasibility estimates, and reproducible Monte Carlo experiment statistics.
"""

from .analysis import (
    KickOperator,
    Regime,
    ValidityReport,
    WeakValueReport,
    effective_kick,
    validity_check,
    weak_value_kick,
    weak_value_projector,
    weak_value_report,
)
from .feasibility import (
    FeasibilityCase,
    ProtocolParams,
    amplitudes_for_gain,
    delta_kick,
    evaluate_case,
    feasibility_ratio,
    solve_parameter,
    spreading_time,
    sweep,
)
from .montecarlo import EnsembleStats, RunConfig, required_trials, run_ensemble
from .protocol import (
    ClassicalModel,
    JointState,
    PostselectedResult,
    PostselectionImpossible,
    Scenario,
    SourceState,
    classical_mean_kick,
    evolve,
    paper_postselection,
    postselect,
    prepare_initial,
)
from .units import G, HBAR, UnitSystem, convert
from .wavepacket import (
    GaussianPacket,
    GridPacket,
    Moments,
    Wavepacket,
    displace,
    gaussian,
    moments,
    normalize,
    overlap,
    superpose,
    to_grid,
)

__version__ = "0.1.0"
