"""Phase-exact four-qubit simulator for period finding with phase bookkeeping.

Simulates factoring 4 with base 3 on a 2+2 qubit register, tracking every
amplitude's phase exactly: the free-evolution pipeline shows how idle delays
between transformations destroy the final interference pattern, and the
natural-phase pipeline shows the clean pattern a coherent resonant-pulse
implementation recovers. The pulses module covers the underlying two-level
dynamics for coherent, non-coherent, phase-corrected, and sudden pulses.
"""

from .config import ConfigError, DelaySchedule, ExperimentConfig, PipelineMode
from .pulses import (
    PulseMode,
    PulseSpec,
    TwoLevelState,
    TwoLevelSystem,
    evolve_coherent,
    evolve_noncoherent,
    evolve_phase_corrected,
    evolve_sudden,
    integrate_ode,
    natural_init,
)
from .shor import (
    ConditionResidual,
    PeriodExtractionError,
    RunReport,
    check_condition,
    extract_period,
    factor_from_period,
    run_experiment,
    sweep,
)
from .statevec import (
    DEFAULT_OMEGAS,
    additive_spectrum,
    basis_index,
    equal_up_to_global_phase,
    free_evolve,
    init_ground,
    make_spectrum,
    measure_x_distribution,
    norm,
    sample_x,
    wrap_phase,
)
from .transforms import (
    amplitude_of,
    apply_mod_exp,
    dft_x,
    mod_exp_classical,
    run_history_chain,
    run_pipeline,
    superpose_x,
)

__version__ = "0.1.0"
