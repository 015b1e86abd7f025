"""First-order behavior of the zero eigenvalue group under negative coupling.

For a nonnegative base graph with ``d >= 2`` reaches, adding edges with
infinitesimal negative weights moves the ``d`` zero eigenvalues of the
Laplacian along the eigenvalues of the small matrix ``Theta = M L2 G`` built
from the left/right zero-eigenvector bases and the perturbation Laplacian.
The sign of the diagonal of Theta is decided purely by set membership of the
perturbed pair, which is what makes "sensitive pairs" a combinatorial notion.

The bases use the sum-normalized vectors (mus sum to 1 over their reaching
set, gammas as constructed), for which ``M G = I_d`` holds exactly; diagonal
signs are invariant under any positive rescaling of the bases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .errors import PremiseError
from .graph import SignedDigraph, laplacian, matrix_scale, superpose
from .reach import ReachDecomposition, reach_decomposition
from .spectral import ZERO_TOL, NullBasis, eigenvalues

CLASS_COND1 = "Cond1"
CLASS_COND2 = "Cond2"
CLASS_REMARK4A = "Remark4a"
CLASS_REMARK4B = "Remark4b"
CLASS_OTHER = "Other"

SIGN_NEGATIVE = "Negative"
SIGN_ZERO = "Zero"


@dataclass(frozen=True)
class ThetaMatrix:
    """d x d first-order coupling matrix with the bases that produced it."""

    d: int
    theta: np.ndarray  # shape (d, d)
    upsilon_rows: np.ndarray  # shape (d, n): left vectors
    gamma_cols: np.ndarray  # shape (n, d): right vectors


@dataclass(frozen=True)
class PairClassification:
    """Membership class of an ordered node pair and the implied Theta sign."""

    u: int
    v: int
    kind: str
    theta_sign: str


def theta_matrix(g1: SignedDigraph, decomp: ReachDecomposition,
                 basis: NullBasis, g2: SignedDigraph) -> ThetaMatrix:
    """Theta[i, j] = mu_i^T L2 gamma_j for the perturbation graph g2.

    g1 must be nonnegative with d >= 2 reaches; g2 must consist of new edges
    (disjoint from g1's) with strictly negative weights.
    """
    if not g1.nonnegative:
        raise PremiseError("base graph must have nonnegative weights")
    if decomp.d < 2:
        raise PremiseError(f"need at least two reaches, got d={decomp.d}")
    if g2.n != g1.n:
        raise PremiseError("perturbation graph must share the node set")
    for key, w in g2.edges.items():
        if key in g1.edges:
            raise PremiseError(f"perturbation edge {key} already exists in the base graph")
        if w >= 0:
            raise PremiseError(f"perturbation edge {key} must have negative weight")
    L2 = laplacian(g2)
    theta = basis.mus @ L2 @ basis.gammas.T
    return ThetaMatrix(
        d=decomp.d,
        theta=theta,
        upsilon_rows=basis.mus,
        gamma_cols=basis.gammas.T,
    )


def first_order_zero_eigenvalues(theta: ThetaMatrix, eps: float) -> np.ndarray:
    """Predicted zero-group eigenvalues of L1 + eps * L2, i.e. eps * eig(Theta)."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return eigenvalues(theta.theta) * eps


def classify_pair(decomp: ReachDecomposition, u: int, v: int) -> PairClassification:
    """Deterministic membership class, checked in a fixed order.

    Cond1 (u reaching in some reach, v exclusive elsewhere) and Cond2
    (u reaching, v common anywhere) force a negative Theta diagonal entry;
    the Remark4 classes and every pair with a non-reaching source leave the
    diagonal at zero, so first-order analysis is inconclusive for them.
    """
    if u == v:
        raise ValueError("pair endpoints must differ")
    u_home = [k for k in range(decomp.d) if u in decomp.reaching[k]]
    if u_home:
        i = u_home[0]
        for j in range(decomp.d):
            if v in decomp.exclusive[j]:
                if j != i:
                    return PairClassification(u, v, CLASS_COND1, SIGN_NEGATIVE)
                return PairClassification(u, v, CLASS_REMARK4A, SIGN_ZERO)
        if any(v in decomp.common[j] for j in range(decomp.d)):
            return PairClassification(u, v, CLASS_COND2, SIGN_NEGATIVE)
        return PairClassification(u, v, CLASS_OTHER, SIGN_ZERO)
    for i in range(decomp.d):
        if u in decomp.reaches[i] and u not in decomp.reaching[i]:
            for j in range(decomp.d):
                if j != i and v in decomp.reaches[j]:
                    return PairClassification(u, v, CLASS_REMARK4B, SIGN_ZERO)
    return PairClassification(u, v, CLASS_OTHER, SIGN_ZERO)


def sensitive_pairs(g1: SignedDigraph,
                    decomp: ReachDecomposition | None = None) -> list[PairClassification]:
    """All ordered non-edges whose class forces an eigenvalue into Re <= 0.

    Only pairs outside the base edge set qualify (the first-order statement
    perturbs new edges).  Raises when the graph has a single reach.
    """
    if not g1.nonnegative:
        raise PremiseError("sensitive pairs are defined for nonnegative base graphs")
    if decomp is None:
        decomp = reach_decomposition(g1)
    if decomp.d < 2:
        raise PremiseError("sensitivity analysis needs at least two reaches")
    out = []
    for u in range(1, g1.n + 1):
        for v in range(1, g1.n + 1):
            if u == v or (u, v) in g1.edges:
                continue
            cls = classify_pair(decomp, u, v)
            if cls.kind in (CLASS_COND1, CLASS_COND2):
                out.append(cls)
    return out


def verify_sensitivity(g1: SignedDigraph, pair: tuple[int, int], eps: float = 1e-4) -> bool:
    """Empirical check: does weight -eps on the pair produce Re(lambda) < 0?

    Real parts within the zero threshold are not counted, so a borderline
    outcome reports False.
    """
    u, v = pair
    g2 = SignedDigraph(g1.n, {(u, v): -eps})
    L = laplacian(superpose(g1, g2))
    values = eigenvalues(L)
    thr = ZERO_TOL * max(matrix_scale(L), 1.0)
    return bool(np.any(values.real < -thr))


def match_predictions(predicted: np.ndarray, exact: np.ndarray) -> float:
    """Max pairing distance between two eigenvalue groups (min-weight matching)."""
    cost = np.abs(predicted[:, None] - exact[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def zero_group(values: np.ndarray, d: int) -> np.ndarray:
    """The d eigenvalues of smallest modulus (the perturbed zero group)."""
    idx = np.argsort(np.abs(values))[:d]
    return values[idx]
