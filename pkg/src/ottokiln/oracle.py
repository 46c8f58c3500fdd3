"""Independent ground truth: closed-form thermal ledgers and a dense propagator.

Everything here is derivable with pencil and paper (geometric sums) or with
a textbook matrix exponential, deliberately sharing no code path with the
stepped integrator it validates.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import generator_matrix, rate_coefficients
from .exceptions import OttoKilnError, RefrigeratorRegimeError
from .bath import bose_einstein
from .fock import FockDistribution

MAX_DENSE_LEVELS = 64


def analytic_equilibrium_energy(omega, temperature):
    """U = omega / (exp(omega/T) - 1) for the untruncated thermal ladder."""
    return omega * bose_einstein(omega, temperature)


def analytic_equilibrium_entropy(omega, temperature):
    """S = -ln(1-q) - q ln(q) / (1-q) with q = exp(-omega/T)."""
    q = math.exp(-omega / temperature)
    if q == 0.0:  # zero-temperature limit: pure ground level
        return 0.0
    return -math.log1p(-q) - q * math.log(q) / (1.0 - q)


@dataclass(frozen=True)
class AnalyticCycleLedger:
    """Per-cycle energy account of the fully thermalized four-stroke cycle.

    Endpoint (U, S) pairs: start of hot contact, end of hot contact, after
    expansion, end of cold contact.  Efficiency is the frequency-ratio form,
    obtained from w_eff / q_in by cancelling the shared occupation change.
    """

    omega_c: float
    omega_h: float
    t_c: float
    t_h: float
    q_in: float
    q_out: float
    w_out: float
    w_in: float
    w_eff: float
    efficiency: float
    u_a: float
    s_a: float
    u_b: float
    s_b: float
    u_c: float
    s_c: float
    u_d: float
    s_d: float


def analytic_cycle_thermal_balance(omega_c, omega_h, t_c, t_h):
    """Closed-form ledger when both isochores reach their bath equilibrium."""
    if not (0 < omega_c < omega_h):
        raise OttoKilnError(f"need 0 < omega_c < omega_h, got {omega_c}, {omega_h}")
    if not (0 < t_c < t_h):
        raise OttoKilnError(f"need 0 < t_c < t_h, got {t_c}, {t_h}")
    n_h = bose_einstein(omega_h, t_h)
    n_c = bose_einstein(omega_c, t_c)
    if n_h < n_c:
        raise RefrigeratorRegimeError(
            f"hot-contact occupation {n_h:.6g} below cold-contact {n_c:.6g}; "
            "the cycle would run as a refrigerator"
        )
    s_hot = analytic_equilibrium_entropy(omega_h, t_h)
    s_cold = analytic_equilibrium_entropy(omega_c, t_c)
    return AnalyticCycleLedger(
        omega_c=omega_c,
        omega_h=omega_h,
        t_c=t_c,
        t_h=t_h,
        q_in=omega_h * (n_h - n_c),
        q_out=omega_c * (n_h - n_c),
        w_out=(omega_h - omega_c) * n_h,
        w_in=(omega_h - omega_c) * n_c,
        w_eff=(omega_h - omega_c) * (n_h - n_c),
        efficiency=1.0 - omega_c / omega_h,
        u_a=omega_h * n_c,
        s_a=s_cold,
        u_b=omega_h * n_h,
        s_b=s_hot,
        u_c=omega_c * n_h,
        s_c=s_hot,
        u_d=omega_c * n_c,
        s_d=s_cold,
    )


def rate_generator(params, n_max):
    """Dense generator of the rate equation on levels 0..n_max."""
    down, up = rate_coefficients(params.gamma, params.boltz_factor, n_max + 1)
    return generator_matrix(down, up)


def _expm(matrix):
    """Scaling-and-squaring matrix exponential with a Taylor-series kernel.

    Adequate for the small generator matrices used here: after scaling the
    1-norm below 1/2 the series converges to machine precision in ~20 terms,
    and squaring a nonnegative propagator involves no cancellation.
    """
    norm = np.linalg.norm(matrix, 1)
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    scaled = matrix / (2.0 ** squarings)
    n = matrix.shape[0]
    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, 40):
        term = term @ scaled / k
        result += term
        if np.linalg.norm(term, 1) < 1e-18 * np.linalg.norm(result, 1):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def propagate_matrix_exponential(dist, params, duration):
    """Exact finite-ladder propagation: expm(G * duration) applied to P(0)."""
    n_max = dist.n_max
    if n_max > MAX_DENSE_LEVELS:
        raise OttoKilnError(
            f"dense propagation supports n_max <= {MAX_DENSE_LEVELS}, got {n_max}"
        )
    if duration < 0:
        raise OttoKilnError(f"duration must be non-negative, got {duration}")
    if duration == 0:
        return dist
    propagator = _expm(rate_generator(params, n_max) * duration)
    probs = propagator @ dist.probs
    total = probs.sum()
    if abs(total - 1.0) > 1e-12:
        raise OttoKilnError(f"propagator lost probability: sum {total!r}")
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    return FockDistribution(probs, n_max)
