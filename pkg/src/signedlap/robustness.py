"""Critical negative-weight bounds via frequency-domain crossings.

For a base graph whose Laplacian has a single zero eigenvalue and all other
eigenvalues in the open right half plane, perturbing the pair (u, v) with
weights ``-delta q_uv`` and ``-delta q_vu`` keeps that property for all
``delta`` below a critical magnitude ``delta*``.  The bound is read off the
transfer map

    G(j w) = (e_u - e_v)^T Q^T (Lbar1 - j w I)^(-1) Q (q_uv e_u - q_vu e_v):

``delta* = 1 / max{Re G(j w_i)}`` over the frequencies ``w_i`` where the
curve crosses the real axis.  When the maximizing crossing sits at w = 0 the
bound is necessary and sufficient; otherwise it is sufficient only, and
``1 / Re G(0)`` (when positive) is a separate necessary bound.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericsError, PremiseError
from .graph import EdgePerturbation, SignedDigraph, laplacian, matrix_scale
from .spectral import ZERO_TOL, eigenvalues, helmert_basis, reduced_laplacian

logger = logging.getLogger(__name__)

#: real-axis crossings need Re G above this to yield a finite positive delta
CROSSING_RE_TOL = 1e-12
#: |Im G| target when refining a crossing frequency
CROSSING_IM_TOL = 1e-12
#: relative slack when collecting the crossings that attain the maximum
ACHIEVER_RTOL = 1e-9
#: |w*| below 1e-8 * max(scale, 1) classifies the bound as necessary-and-sufficient
OMEGA_ZERO_FACTOR = 1e-8

REGIME_NECESSARY_AND_SUFFICIENT = "NecessaryAndSufficient"
REGIME_SUFFICIENT_ONLY = "SufficientOnly"


@dataclass(frozen=True)
class FrequencyGrid:
    """Logarithmic frequency grid, with w = 0 prepended exactly."""

    lo: float
    hi: float
    points: int = 2000

    @classmethod
    def for_system(cls, lbar1: np.ndarray, points: int = 2000,
                   lo_factor: float = 1e-6, hi_factor: float = 1e4) -> "FrequencyGrid":
        s = float(np.abs(eigenvalues(lbar1)).max())
        s = max(s, 1e-30)
        return cls(lo=lo_factor * s, hi=hi_factor * s, points=points)

    def omegas(self) -> np.ndarray:
        if not (0 < self.lo < self.hi) or self.points < 2:
            raise ValueError("grid needs 0 < lo < hi and at least 2 points")
        return np.concatenate(
            [[0.0], np.logspace(math.log10(self.lo), math.log10(self.hi), self.points)]
        )

    def widened(self, factor: float) -> "FrequencyGrid":
        return FrequencyGrid(lo=self.lo, hi=self.hi * factor, points=self.points)


@dataclass(frozen=True)
class TransferSample:
    """One sample of the transfer map; omega may be math.inf for the asymptote."""

    omega: float
    value: complex


@dataclass(frozen=True)
class DeltaStarResult:
    """Critical perturbation magnitude and its supporting crossings."""

    delta_star: float
    crossings: tuple[tuple[float, float], ...]  # (omega, Re G) pairs, finite only
    omega_star: float | None
    regime: str | None
    necessary_bound: float
    diagnostic: str | None = None


def _input_vectors(Q: np.ndarray, u: int, v: int,
                   q_uv: float, q_vu: float) -> tuple[np.ndarray, np.ndarray]:
    n = Q.shape[1]
    if not (1 <= u <= n and 1 <= v <= n):
        raise ValueError(f"pair ({u}, {v}) out of range 1..{n}")
    if u == v:
        raise ValueError("pair endpoints must differ")
    eu = np.zeros(n)
    ev = np.zeros(n)
    eu[u - 1] = 1.0
    ev[v - 1] = 1.0
    return Q @ (q_uv * eu - q_vu * ev), Q @ (eu - ev)


def r_value(lbar1: np.ndarray, Q: np.ndarray, u: int, v: int,
            q_uv: float, q_vu: float, omega: float) -> complex:
    """(e_u - e_v)^T Q^T (Lbar1 - j w I)^(-1) Q (q_uv e_u - q_vu e_v).

    Evaluated through one linear solve.  At w = 0 the result is real and is
    returned with zero imaginary part.
    """
    b, c = _input_vectors(Q, u, v, q_uv, q_vu)
    m = lbar1.shape[0]
    try:
        if omega == 0.0:
            return complex(c @ np.linalg.solve(lbar1, b))
        x = np.linalg.solve(lbar1 - 1j * omega * np.eye(m), b)
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"system singular at omega={omega}") from exc
    return complex(c @ x)


def nyquist_sweep(lbar1: np.ndarray, Q: np.ndarray, u: int, v: int,
                  q_uv: float, q_vu: float,
                  grid: FrequencyGrid | None = None) -> list[TransferSample]:
    """Sample the transfer map over the grid, ending with the w -> inf limit 0."""
    if grid is None:
        grid = FrequencyGrid.for_system(lbar1)
    samples: list[TransferSample] = []
    for omega in grid.omegas():
        try:
            samples.append(TransferSample(float(omega), r_value(lbar1, Q, u, v, q_uv, q_vu, omega)))
        except NumericsError:
            logger.warning("skipping singular sample at omega=%g", omega)
    samples.append(TransferSample(math.inf, 0j))
    return samples


def check_spectrum_condition(g: SignedDigraph) -> bool:
    """True iff L has exactly one zero eigenvalue and the rest lie in Re > 0."""
    L = laplacian(g)
    values = eigenvalues(L)
    thr = ZERO_TOL * max(matrix_scale(L), 1.0)
    near_zero = np.abs(values) < thr
    return int(near_zero.sum()) == 1 and bool(np.all(near_zero | (values.real > thr)))


def _refine_crossing(G, lo: float, hi: float, f_lo: float) -> float:
    """Bisect a sign change of Im G down to CROSSING_IM_TOL (or interval exhaustion)."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = G(mid).imag
        if abs(fm) < CROSSING_IM_TOL or (hi - lo) <= np.finfo(float).eps * max(hi, 1e-300):
            return mid
        if f_lo * fm < 0:
            hi = mid
        else:
            lo, f_lo = mid, fm
    return 0.5 * (lo + hi)


def _find_crossings(lbar1: np.ndarray, Q: np.ndarray, u: int, v: int,
                    q_uv: float, q_vu: float,
                    grid: FrequencyGrid) -> list[tuple[float, float]]:
    def G(omega: float) -> complex:
        return r_value(lbar1, Q, u, v, q_uv, q_vu, omega)

    samples = [(omega, G(omega)) for omega in grid.omegas()]
    crossings = [(0.0, samples[0][1].real)]  # G(j0) is real by construction
    for (w0, g0), (w1, g1) in zip(samples[1:], samples[2:]):
        if g0.imag == 0.0 and w0 > 0.0:
            crossings.append((w0, g0.real))
        elif g0.imag * g1.imag < 0:
            wc = _refine_crossing(G, w0, w1, g0.imag)
            crossings.append((wc, G(wc).real))
    return crossings


def delta_star(g1: SignedDigraph, pert: EdgePerturbation,
               grid: FrequencyGrid | None = None) -> DeltaStarResult:
    """Critical magnitude for the perturbation of pair (u, v) on base graph g1.

    Requires the base Laplacian to satisfy the one-zero/right-half-plane
    spectrum condition.  Crossings of the real axis are located by sign
    changes of Im G over the grid plus bisection refinement; w = 0 is always
    evaluated directly.  If no crossing with positive real part is found, the
    grid is widened once (x100 upper bound) before reporting an infinite
    bound with a diagnostic.
    """
    if not check_spectrum_condition(g1):
        raise PremiseError(
            "base Laplacian must have one zero eigenvalue and all other "
            "eigenvalues with positive real part"
        )
    L1 = laplacian(g1)
    Q = helmert_basis(g1.n)
    lbar1 = reduced_laplacian(L1, Q)
    if grid is None:
        grid = FrequencyGrid.for_system(lbar1)
    scale = float(np.abs(eigenvalues(lbar1)).max())

    crossings = _find_crossings(lbar1, Q, pert.u, pert.v, pert.q_uv, pert.q_vu, grid)
    positive = [(w, re) for w, re in crossings if re > CROSSING_RE_TOL]
    diagnostic = None
    if not positive:
        grid = grid.widened(100.0)
        crossings = _find_crossings(lbar1, Q, pert.u, pert.v, pert.q_uv, pert.q_vu, grid)
        positive = [(w, re) for w, re in crossings if re > CROSSING_RE_TOL]
        if not positive:
            diagnostic = (
                "no real-axis crossing with positive real part found, even on a "
                "100x widened grid; for nonzero gains a crossing must exist, so "
                "this signals numerical escape"
            )

    g0 = r_value(lbar1, Q, pert.u, pert.v, pert.q_uv, pert.q_vu, 0.0).real
    necessary = 1.0 / g0 if g0 > CROSSING_RE_TOL else math.inf

    if not positive:
        return DeltaStarResult(
            delta_star=math.inf,
            crossings=tuple(crossings),
            omega_star=None,
            regime=None,
            necessary_bound=necessary,
            diagnostic=diagnostic,
        )

    re_max = max(re for _, re in positive)
    achievers = [w for w, re in positive if re >= re_max * (1.0 - ACHIEVER_RTOL)]
    omega_zero = OMEGA_ZERO_FACTOR * max(scale, 1.0)
    if any(abs(w) <= omega_zero for w in achievers):
        regime = REGIME_NECESSARY_AND_SUFFICIENT
        omega_star = 0.0
    else:
        regime = REGIME_SUFFICIENT_ONLY
        omega_star = min(achievers, key=abs)
    return DeltaStarResult(
        delta_star=1.0 / re_max,
        crossings=tuple(crossings),
        omega_star=omega_star,
        regime=regime,
        necessary_bound=necessary,
    )


def rank_one_spectrum_check(lbar1: np.ndarray, lbar: np.ndarray, Q: np.ndarray,
                            u: int, v: int, pert: EdgePerturbation,
                            tol: float = 1e-8) -> float:
    """Consistency diagnostic: the spectrum of Lbar1^-1 Lbar must be {1 x (N-2), 1 - r}.

    Also exercises the rank-one determinant identity.  Returns ``1 - r`` with
    ``r`` the static response to the perturbation gains scaled by its delta.
    A failure indicates a construction or numerical bug, not a property of
    the input graph.
    """
    d_uv = pert.delta * pert.q_uv
    d_vu = pert.delta * pert.q_vu
    r = r_value(lbar1, Q, u, v, d_uv, d_vu, 0.0).real
    try:
        M = np.linalg.solve(lbar1, lbar)
    except np.linalg.LinAlgError as exc:
        raise PremiseError("reduced base Laplacian is singular") from exc
    values = eigenvalues(M)
    expected = 1.0 - r
    dist_one = np.abs(values - 1.0)
    keep = np.argsort(dist_one)[:-1] if values.size > 1 else np.array([], dtype=int)
    outlier = np.argsort(dist_one)[-1]
    if values.size > 1 and dist_one[keep].max() > tol:
        raise NumericsError("rank-one spectrum check failed: repeated eigenvalue is not 1")
    if abs(values[outlier] - expected) > tol * max(1.0, abs(expected)):
        raise NumericsError(
            f"rank-one spectrum check failed: {values[outlier]:.12g} != {expected:.12g}"
        )
    sign1, logdet1 = np.linalg.slogdet(lbar1)
    sign2, logdet2 = np.linalg.slogdet(lbar)
    if abs(expected) > 1e-10:
        lhs = sign2, logdet2
        rhs = sign1 * math.copysign(1.0, expected), logdet1 + math.log(abs(expected))
        if lhs[0] != rhs[0] or abs(lhs[1] - rhs[1]) > 1e-6 * max(1.0, abs(rhs[1])):
            raise NumericsError("rank-one determinant identity violated")
    return expected


@dataclass(frozen=True)
class EffectiveResistance:
    """Pairwise resistance value with the method that produced it."""

    value: float
    method: str

    UNDIRECTED = "UndirectedClosedForm"
    DIRECTED = "DirectedLyapunov"


def effective_resistance_undirected(g_plus: SignedDigraph, u: int, v: int) -> EffectiveResistance:
    """(e_u - e_v)^T Q^T (Lbar+)^(-1) Q (e_u - e_v) for a connected undirected graph."""
    for (i, j), w in g_plus.edges.items():
        if w <= 0:
            raise PremiseError("undirected resistance requires positive weights")
        if abs(w - g_plus.weight(j, i)) > 1e-12:
            raise PremiseError(f"asymmetric weights on pair ({i}, {j})")
    L = laplacian(g_plus)
    Q = helmert_basis(g_plus.n)
    lbar = reduced_laplacian(L, Q)
    sym = 0.5 * (lbar + lbar.T)
    eigs = np.linalg.eigvalsh(sym)
    if eigs.min() < ZERO_TOL * max(matrix_scale(L), 1.0):
        raise PremiseError("graph is disconnected (reduced Laplacian singular)")
    _, c = _input_vectors(Q, u, v, 1.0, 1.0)
    value = float(c @ np.linalg.solve(lbar, c))
    return EffectiveResistance(value=value, method=EffectiveResistance.UNDIRECTED)


def solve_lyapunov(lbar: np.ndarray) -> np.ndarray:
    """Solve Lbar S + S Lbar^T = I by the dense Schur (Bartels-Stewart) method.

    Solvable iff no two eigenvalues of Lbar sum to zero; violation raises.
    """
    values = eigenvalues(lbar)
    scale = max(matrix_scale(lbar), 1.0)
    sums = np.abs(values[:, None] + values[None, :].conj())
    if sums.min() < ZERO_TOL * scale:
        raise PremiseError("Lyapunov equation unsolvable: eigenvalues sum to zero")
    m = lbar.shape[0]
    sigma = scipy.linalg.solve_continuous_lyapunov(lbar, np.eye(m))
    residual = np.abs(lbar @ sigma + sigma @ lbar.T - np.eye(m)).max()
    if residual > 1e-8 * scale:
        raise NumericsError(f"Lyapunov residual too large: {residual:.3e}")
    return sigma


def effective_resistance_directed(g: SignedDigraph, u: int, v: int) -> EffectiveResistance:
    """2 (e_u - e_v)^T Q^T Sigma Q (e_u - e_v) with Sigma the Lyapunov solution."""
    L = laplacian(g)
    Q = helmert_basis(g.n)
    lbar = reduced_laplacian(L, Q)
    sigma = solve_lyapunov(lbar)
    _, c = _input_vectors(Q, u, v, 1.0, 1.0)
    return EffectiveResistance(value=float(2.0 * c @ sigma @ c), method=EffectiveResistance.DIRECTED)
