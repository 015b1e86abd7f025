"""Projection bases, reduced Laplacians, spectra, and zero-eigenvalue bases.

The reduced Laplacian ``Lbar = Q L Q^T`` acts on the subspace orthogonal to
the all-ones vector; its spectrum equals the spectrum of ``L`` with one zero
removed.  ``Q`` is fixed to the Helmert construction for reproducibility; a
Householder-based alternative exists for basis-invariance checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericsError, PremiseError
from .graph import SignedDigraph, laplacian, matrix_scale
from .reach import ReachDecomposition

#: relative threshold under which an eigenvalue counts as zero
ZERO_TOL = 1e-9


def helmert_basis(n: int) -> np.ndarray:
    """(n-1) x n matrix with orthonormal rows spanning the complement of 1.

    Row i (1-indexed) is ``(e_1 + ... + e_i - i e_{i+1}) / sqrt(i (i+1))``.
    """
    if n < 2:
        raise ValueError(f"projection basis needs n >= 2, got {n}")
    Q = np.zeros((n - 1, n))
    for i in range(1, n):
        Q[i - 1, :i] = 1.0
        Q[i - 1, i] = -float(i)
        Q[i - 1] /= np.sqrt(i * (i + 1))
    return Q


def householder_basis(n: int) -> np.ndarray:
    """Alternative orthonormal basis of span{1}^perp via a Householder reflector.

    Used only to check that reduced-spectrum results do not depend on the
    particular choice of Q.
    """
    if n < 2:
        raise ValueError(f"projection basis needs n >= 2, got {n}")
    w = np.ones(n) / np.sqrt(n)
    w[0] -= 1.0
    H = np.eye(n) - 2.0 * np.outer(w, w) / (w @ w)
    return H[1:, :]


def reduced_laplacian(L: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Lbar = Q L Q^T."""
    if L.shape[0] != L.shape[1]:
        raise ValueError(f"L must be square, got {L.shape}")
    if Q.shape != (L.shape[0] - 1, L.shape[0]):
        raise ValueError(f"Q shape {Q.shape} incompatible with L shape {L.shape}")
    return Q @ L @ Q.T


def eigenvalues(M: np.ndarray) -> np.ndarray:
    """Full complex spectrum, sorted by real part then imaginary part."""
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got {M.shape}")
    try:
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"eigenvalue iteration failed: {exc}") from exc
    return vals[np.lexsort((vals.imag, vals.real))]


def zero_multiplicity(values: np.ndarray, scale: float) -> int:
    """Number of eigenvalues within ``ZERO_TOL * max(scale, 1)`` of zero."""
    return int(np.sum(np.abs(values) < ZERO_TOL * max(scale, 1.0)))


@dataclass(frozen=True)
class NullBasis:
    """Right vectors (gammas) and left vectors (mus) of the zero eigenvalue.

    Row k of each array is the vector attached to reach k.  Gammas are 1 on
    the exclusive set, 0 outside the reach, and solve the grounded system on
    the common nodes; mus are supported on the reaching nodes and sum to 1.
    With this normalization ``mus @ gammas.T == I_d``.
    """

    d: int
    gammas: np.ndarray  # shape (d, n)
    mus: np.ndarray  # shape (d, n)


def null_right_vectors(g: SignedDigraph, decomp: ReachDecomposition) -> np.ndarray:
    """Right zero-eigenvectors, one per reach.

    Exclusive entries are set to 1, entries outside the reach to 0, and the
    common entries solve ``L_CC x = -L_{C,X} 1`` (LU with partial pivoting).
    """
    if not g.nonnegative:
        raise PremiseError("right null vectors require nonnegative weights")
    L = laplacian(g)
    out = np.zeros((decomp.d, g.n))
    for k in range(decomp.d):
        gamma = out[k]
        for i in decomp.exclusive[k]:
            gamma[i - 1] = 1.0
        c_idx = [i - 1 for i in sorted(decomp.common[k])]
        if c_idx:
            x_idx = [i - 1 for i in sorted(decomp.exclusive[k])]
            rhs = -L[np.ix_(c_idx, x_idx)] @ np.ones(len(x_idx))
            try:
                gamma[c_idx] = np.linalg.solve(L[np.ix_(c_idx, c_idx)], rhs)
            except np.linalg.LinAlgError as exc:
                raise NumericsError(
                    f"common block of reach {k + 1} is singular"
                ) from exc
    return out


def null_left_vectors(g: SignedDigraph, decomp: ReachDecomposition) -> np.ndarray:
    """Left zero-eigenvectors, one per reach, each summing to 1 on its U_k.

    The U_k diagonal block of L is the Laplacian of a strongly connected
    subgraph, so its left kernel is one-dimensional; it is computed by LU on
    the transposed block with the last row replaced by the normalization row.
    """
    if not g.nonnegative:
        raise PremiseError("left null vectors require nonnegative weights")
    L = laplacian(g)
    scale = matrix_scale(L)
    out = np.zeros((decomp.d, g.n))
    for k in range(decomp.d):
        u_idx = [i - 1 for i in sorted(decomp.reaching[k])]
        block = L[np.ix_(u_idx, u_idx)]
        system = block.T.copy()
        system[-1, :] = 1.0
        rhs = np.zeros(len(u_idx))
        rhs[-1] = 1.0
        try:
            nu = np.linalg.solve(system, rhs)
        except np.linalg.LinAlgError as exc:
            raise NumericsError(
                f"reaching block of reach {k + 1} has a degenerate kernel"
            ) from exc
        residual = np.abs(nu @ block).max()
        if residual > ZERO_TOL * max(scale, 1.0):
            raise NumericsError(
                f"reaching block of reach {k + 1} has kernel dimension != 1 "
                f"(residual {residual:.3e})"
            )
        out[k, u_idx] = nu
    return out


def null_basis(g: SignedDigraph, decomp: ReachDecomposition) -> NullBasis:
    """Convenience wrapper bundling both zero-eigenvalue bases."""
    return NullBasis(
        d=decomp.d,
        gammas=null_right_vectors(g, decomp),
        mus=null_left_vectors(g, decomp),
    )
