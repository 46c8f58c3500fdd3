"""Quantum Otto heat-engine simulator on a truncated oscillator ladder.

Populations of the oscillator levels evolve under a detailed-balance
birth-death rate equation during bath contact and are frozen during
frequency ramps; cycles are booked with the first-law ledger (heat in/out,
work in/out, net work), including a single-bath pump-driven variant.
"""

__version__ = "0.1.0"

from .exceptions import (
    ConfigError,
    IntegrationError,
    OttoKilnError,
    RefrigeratorRegimeError,
    UnderTruncationError,
    UndefinedEfficiencyError,
)
from .fock import (
    BathSpec,
    FockDistribution,
    InitialStateSpec,
    OscillatorSpec,
    entropy,
    internal_energy,
    make_distribution,
    mean_occupation,
    total_variation,
)
from .bath import (
    RateParams,
    Trajectory,
    bose_einstein,
    default_time_step,
    evolve_isochoric,
    rate_derivative,
    stationary_distribution,
)
from .cycle import (
    AdiabaticStroke,
    CycleRecord,
    EngineTrace,
    IsochoricStroke,
    PumpStroke,
    StrokeSchedule,
    otto_schedule,
    pump_populations,
    pump_schedule,
    run_adiabatic,
    run_engine,
    run_otto_cycle,
    run_pump_cycle,
)
from .analysis import (
    SweepPoint,
    carnot_limit,
    cycle_efficiency,
    cycle_power,
    otto_limit,
    sweep_efficiency_power,
)
from .oracle import (
    AnalyticCycleLedger,
    analytic_cycle_thermal_balance,
    analytic_equilibrium_energy,
    analytic_equilibrium_entropy,
    propagate_matrix_exponential,
    rate_generator,
)
from .config import EngineConfig, load_config, parse_config
