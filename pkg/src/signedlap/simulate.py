"""Fixed-step integration of the consensus dynamics x' = -L x."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import matrix_scale
from .spectral import ZERO_TOL, eigenvalues

#: states beyond this magnitude terminate the trace as diverged
OVERFLOW_LIMIT = 1e150


@dataclass(frozen=True)
class SimulationTrace:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), n)
    dt: float
    method: str = "rk4"
    diverged: bool = False


def default_dt(L: np.ndarray) -> float:
    return 0.01 / max(1.0, matrix_scale(L))


def default_horizon(L: np.ndarray) -> float:
    """50 time constants of the slowest stable mode, else 100."""
    values = eigenvalues(L)
    thr = ZERO_TOL * max(matrix_scale(L), 1.0)
    positive = values.real[values.real > thr]
    if positive.size:
        return float(50.0 / positive.min())
    return 100.0


def simulate(L: np.ndarray, x0: np.ndarray, dt: float, horizon: float) -> SimulationTrace:
    """Classical fixed-step RK4 for x' = -L x starting from x0.

    The field is linear, so the four stage evaluations collapse into the
    one-step matrix I - hL + (hL)^2/2 - (hL)^3/6 + (hL)^4/24 applied per
    step.  dt must respect the stability guard dt <= 0.1 / ||L||; a state
    overflow truncates the trace and sets the diverged flag.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    scale = matrix_scale(L)
    if scale > 0 and dt > 0.1 / scale:
        raise ValueError(f"dt={dt} violates the stability guard 0.1/||L|| = {0.1 / scale}")
    if horizon < dt:
        raise ValueError("horizon must be at least one step")
    x0 = np.asarray(x0, dtype=float)
    n = L.shape[0]
    if x0.shape != (n,):
        raise ValueError(f"x0 shape {x0.shape} does not match L ({n} nodes)")

    hL = dt * L
    step = np.eye(n) - hL + hL @ hL / 2.0 - hL @ hL @ hL / 6.0 + hL @ hL @ hL @ hL / 24.0
    steps = int(round(horizon / dt))
    states = np.empty((steps + 1, n))
    states[0] = x0
    x = x0.copy()
    diverged = False
    last = steps
    for k in range(1, steps + 1):
        x = step @ x
        if not np.all(np.isfinite(x)) or np.abs(x).max() > OVERFLOW_LIMIT:
            diverged = True
            last = k - 1
            break
        states[k] = x
    states = states[: last + 1]
    times = dt * np.arange(last + 1)
    return SimulationTrace(times=times, states=states, dt=dt, diverged=diverged)


def spread(states: np.ndarray) -> np.ndarray:
    """Max pairwise disagreement per sample."""
    return states.max(axis=1) - states.min(axis=1)


def consensus_reached(trace: SimulationTrace, rel_tol: float = 1e-6) -> bool:
    """True iff the last 5% of samples dissolve the initial disagreement.

    The final-window spread is compared against rel_tol times the initial
    spread; a trace that starts in exact agreement compares against rel_tol
    itself.  A diverged trace never reaches consensus.
    """
    if trace.states.size == 0:
        raise ValueError("empty trace")
    if trace.diverged:
        return False
    window = max(1, int(np.ceil(0.05 * trace.states.shape[0])))
    final = spread(trace.states[-window:]).max()
    initial = float(spread(trace.states[:1])[0])
    reference = initial if initial > 0.0 else 1.0
    return bool(final < rel_tol * reference)
