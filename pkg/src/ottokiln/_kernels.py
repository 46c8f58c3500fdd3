"""Hot inner loops for ladder-population time stepping.

Two interchangeable backends compute the same fixed-step scheme:

* a numba ``@njit`` kernel stepping the tridiagonal birth-death generator
  level by level (default when numba is importable), and
* a pure-numpy fallback that applies the one-step update matrix
  ``R = I + A + A^2/2 + A^3/6 + A^4/24`` with ``A = dt * G`` (for a linear
  generator this is algebraically the same fourth-order step).

Selection is controlled by the environment variable ``OTTO_KILN_NUMBA``:
``0/off/false`` forces the numpy path, ``1/on/true`` requires numba, anything
else (or unset) auto-detects.  Both paths apply identical per-step guards:
probability-sum drift, a negativity floor, clamping and renormalization.
"""

import os

import numpy as np

try:
    import numba
except ImportError:
    numba = None

NUMBA_AVAILABLE = numba is not None

# Per-step guards; values are contractual for the integrator.
DRIFT_TOL = 1e-10
NEG_FLOOR = 1e-12

# Kernel status codes.
STATUS_OK = 0
STATUS_DRIFT = 1
STATUS_NEGATIVE = 2


def _select_backend():
    raw = os.environ.get("OTTO_KILN_NUMBA", "auto").strip().lower()
    if raw in ("0", "off", "false", "no"):
        return False
    if raw in ("1", "on", "true", "yes"):
        if not NUMBA_AVAILABLE:
            raise ImportError("OTTO_KILN_NUMBA requested numba, but numba is not installed")
        return True
    return NUMBA_AVAILABLE


USE_NUMBA = _select_backend()


def rate_coefficients(gamma, boltz_factor, n_levels):
    """Downward/upward jump coefficients of the ladder generator.

    down[n] = 2*Gamma*n is the emission rate out of level n, up[n] =
    2*Gamma*boltz*(n+1) the absorption rate out of level n.  The top level's
    upward rate is zeroed (reflecting truncation), which keeps the generator
    exactly probability conserving.
    """
    levels = np.arange(n_levels, dtype=np.float64)
    down = 2.0 * gamma * levels
    up = 2.0 * gamma * boltz_factor * (levels + 1.0)
    up[-1] = 0.0
    return down, up


def derivative(probs, down, up):
    """dP/dt of the birth-death generator, written flux-wise so that the
    components cancel pairwise (vector sum is zero up to rounding)."""
    d = -(down + up) * probs
    d[:-1] += down[1:] * probs[1:]
    d[1:] += up[:-1] * probs[:-1]
    return d


def generator_matrix(down, up):
    """Dense generator G with columns summing to zero (G[m, n] = rate n->m)."""
    n = down.shape[0]
    g = np.zeros((n, n))
    idx = np.arange(n - 1)
    g[idx, idx + 1] = down[1:]
    g[idx + 1, idx] = up[:-1]
    g[idx + 1, idx + 1] -= down[1:]
    g[idx, idx] -= up[:-1]
    return g


def rk4_step_matrix(down, up, dt):
    """One-step update matrix of the classical fourth-order scheme."""
    a = generator_matrix(down, up) * dt
    n = a.shape[0]
    r = np.eye(n) + a
    term = a
    for k in (2.0, 3.0, 4.0):
        term = term @ a / k
        r += term
    return r


def _evolve_numpy(p, down, up, dt, n_steps, stride, out):
    r = rk4_step_matrix(down, up, dt)
    out[0] = p
    idx = 1
    max_drift = 0.0
    for k in range(1, n_steps + 1):
        p = r @ p
        s = p.sum()
        drift = abs(s - 1.0)
        if drift > max_drift:
            max_drift = drift
        if drift > DRIFT_TOL:
            return STATUS_DRIFT, k, max_drift
        if p.min() < -NEG_FLOOR:
            return STATUS_NEGATIVE, k, max_drift
        np.clip(p, 0.0, None, out=p)
        p /= p.sum()
        if k % stride == 0 or k == n_steps:
            out[idx] = p
            idx += 1
    return STATUS_OK, n_steps, max_drift


if NUMBA_AVAILABLE:

    @numba.njit(cache=True, nogil=True)
    def _evolve_njit(p0, down, up, dt, n_steps, stride, out):
        n = p0.shape[0]
        p = p0.copy()
        k1 = np.empty(n)
        k2 = np.empty(n)
        k3 = np.empty(n)
        k4 = np.empty(n)
        y = np.empty(n)
        out[0] = p
        idx = 1
        max_drift = 0.0
        for step in range(1, n_steps + 1):
            _deriv_inplace(p, down, up, k1)
            for i in range(n):
                y[i] = p[i] + 0.5 * dt * k1[i]
            _deriv_inplace(y, down, up, k2)
            for i in range(n):
                y[i] = p[i] + 0.5 * dt * k2[i]
            _deriv_inplace(y, down, up, k3)
            for i in range(n):
                y[i] = p[i] + dt * k3[i]
            _deriv_inplace(y, down, up, k4)
            for i in range(n):
                p[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            s = 0.0
            lo = p[0]
            for i in range(n):
                s += p[i]
                if p[i] < lo:
                    lo = p[i]
            drift = abs(s - 1.0)
            if drift > max_drift:
                max_drift = drift
            if drift > DRIFT_TOL:
                return STATUS_DRIFT, step, max_drift
            if lo < -NEG_FLOOR:
                return STATUS_NEGATIVE, step, max_drift
            s = 0.0
            for i in range(n):
                if p[i] < 0.0:
                    p[i] = 0.0
                s += p[i]
            for i in range(n):
                p[i] /= s
            if step % stride == 0 or step == n_steps:
                for i in range(n):
                    out[idx, i] = p[i]
                idx += 1
        return STATUS_OK, n_steps, max_drift

    @numba.njit(cache=True, nogil=True, inline="always")
    def _deriv_inplace(p, down, up, d):
        n = p.shape[0]
        for i in range(n):
            acc = -(down[i] + up[i]) * p[i]
            if i + 1 < n:
                acc += down[i + 1] * p[i + 1]
            if i > 0:
                acc += up[i - 1] * p[i - 1]
            d[i] = acc

else:
    _evolve_njit = None


def sample_count(n_steps, stride):
    """Number of rows recorded by evolve_populations (endpoints always kept)."""
    n_rec = n_steps // stride + 1
    if n_steps % stride != 0:
        n_rec += 1
    return n_rec


def sample_steps(n_steps, stride):
    """Step indices recorded by evolve_populations."""
    steps = list(range(0, n_steps + 1, stride))
    if steps[-1] != n_steps:
        steps.append(n_steps)
    return np.asarray(steps, dtype=np.int64)


def evolve_populations(p0, gamma, boltz_factor, dt, n_steps, stride, backend=None):
    """Step the population vector n_steps times, recording every stride-th state.

    Returns (status, bad_step, max_drift, samples): samples has sample_count
    rows (initial state first, final state last) and max_drift is the largest
    |sum - 1| seen before any renormalization.  backend overrides the module
    default: "numba" or "numpy".
    """
    if backend is None:
        use_numba = USE_NUMBA
    elif backend == "numba":
        if not NUMBA_AVAILABLE:
            raise ImportError("numba backend requested but numba is not installed")
        use_numba = True
    elif backend == "numpy":
        use_numba = False
    else:
        raise ValueError(f"unknown backend {backend!r}")

    p0 = np.ascontiguousarray(p0, dtype=np.float64)
    down, up = rate_coefficients(gamma, boltz_factor, p0.shape[0])
    out = np.empty((sample_count(n_steps, stride), p0.shape[0]))
    kernel = _evolve_njit if use_numba else _evolve_numpy
    status, bad_step, max_drift = kernel(p0, down, up, float(dt), int(n_steps), int(stride), out)
    return status, bad_step, max_drift, out
