"""Time evolution of ladder populations in contact with a thermal bath.

The birth-death rate equation for the populations reads

    dP_n/dt = -2 n Gamma P_n + 2 (n+1) Gamma P_{n+1}
              - 2 Gamma exp(-omega/T) [ -n P_{n-1} + (n+1) P_n ]

with Gamma = gamma0 * (n_BE + 1).  The exp(-omega/T) factor enforces
detailed balance, so the thermal (geometric) distribution is stationary.
Integration uses a fixed-step fourth-order scheme (see _kernels) with
per-step conservation and positivity guards.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import IntegrationError, OttoKilnError
from .fock import BathSpec, FockDistribution, OscillatorSpec, TAIL_TOLERANCE


def bose_einstein(omega, temperature):
    """Equilibrium mean occupation 1 / (exp(omega/T) - 1).

    Evaluated as exp(-x) / (1 - exp(-x)), which is accurate for small x and
    underflows cleanly to 0 in the frozen-bath limit x -> infinity.
    """
    if not (omega > 0 and temperature > 0):
        raise OttoKilnError("bose_einstein requires positive frequency and temperature")
    x = omega / temperature
    return math.exp(-x) / -math.expm1(-x)


@dataclass(frozen=True)
class RateParams:
    """Frozen per-stroke coupling: oscillator at fixed omega against one bath.

    gamma = gamma0 * (n_BE + 1) and boltz_factor = exp(-omega/T) are derived
    once so every consumer of the stroke uses identical coefficients.
    """

    osc: OscillatorSpec
    bath: BathSpec
    gamma: float = 0.0
    boltz_factor: float = 0.0

    def __post_init__(self):
        n_be = bose_einstein(self.osc.omega, self.bath.temperature)
        object.__setattr__(self, "gamma", self.bath.gamma0 * (n_be + 1.0))
        object.__setattr__(self, "boltz_factor", math.exp(-self.osc.omega / self.bath.temperature))
        if not self.gamma > self.bath.gamma0:
            raise OttoKilnError("derived gamma must exceed gamma0")
        if not 0.0 < self.boltz_factor < 1.0:
            raise OttoKilnError("detailed-balance factor must lie in (0, 1)")


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution: times[k] pairs with probs[k] (row per sample).

    max_drift is the largest per-step |sum - 1| the integrator saw before
    renormalizing (0 for analytic ramps).
    """

    times: np.ndarray
    probs: np.ndarray
    sample_stride: int
    max_drift: float = 0.0

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise OttoKilnError("trajectory times must be strictly increasing")

    def __len__(self):
        return self.times.shape[0]

    def distribution(self, index):
        return FockDistribution(self.probs[index])

    @property
    def final(self):
        return self.distribution(-1)


def rate_derivative(dist, params):
    """dP_n/dt vector for the current populations under the given coupling."""
    probs = dist.probs if isinstance(dist, FockDistribution) else np.asarray(dist, dtype=float)
    down, up = _kernels.rate_coefficients(params.gamma, params.boltz_factor, probs.shape[0])
    return _kernels.derivative(probs, down, up)


def default_time_step(duration, gamma, n_max):
    """Default integrator step: resolves both the stroke and the fastest rate."""
    return min(duration / 1000.0, 1.0 / (40.0 * gamma * (n_max + 1)))


def evolve_isochoric(dist, params, duration, dt=None, sample_stride=None,
                     tail_tolerance=TAIL_TOLERANCE, backend=None):
    """Evolve populations at fixed frequency for the given duration.

    dt is an upper bound on the step; the actual step divides the duration
    exactly.  Returns a Trajectory whose first/last samples are the initial
    and final distributions.
    """
    if not duration > 0:
        raise OttoKilnError(f"duration must be positive, got {duration}")
    n_max = dist.n_max
    if dt is None:
        dt = default_time_step(duration, params.gamma, n_max)
    if dt > duration:
        raise OttoKilnError(f"dt={dt} exceeds duration={duration}")
    n_steps = max(1, math.ceil(duration / dt - 1e-12))
    step = duration / n_steps
    if sample_stride is None:
        sample_stride = max(1, n_steps // 64)

    status, bad_step, max_drift, samples = _kernels.evolve_populations(
        dist.probs, params.gamma, params.boltz_factor, step, n_steps, sample_stride,
        backend=backend,
    )
    if status == _kernels.STATUS_DRIFT:
        raise IntegrationError(
            f"probability sum drifted beyond {_kernels.DRIFT_TOL:.0e} at step {bad_step} "
            f"(dt={step:.3e}); reduce the time step"
        )
    if status == _kernels.STATUS_NEGATIVE:
        raise IntegrationError(
            f"probability below -{_kernels.NEG_FLOOR:.0e} at step {bad_step} "
            f"(dt={step:.3e}); the step size is unstable"
        )

    times = _kernels.sample_steps(n_steps, sample_stride) * step
    traj = Trajectory(times=times, probs=samples, sample_stride=sample_stride,
                      max_drift=max_drift)
    traj.final.require_tail(tail_tolerance)
    return traj


def stationary_distribution(omega, temperature, n_max):
    """Thermal fixed point: geometric distribution with ratio exp(-omega/T)."""
    if not (omega > 0 and temperature > 0):
        raise OttoKilnError("stationary distribution requires positive frequency and temperature")
    probs = np.exp(-(omega / temperature) * np.arange(n_max + 1))
    probs /= probs.sum()
    return FockDistribution(probs, n_max)
