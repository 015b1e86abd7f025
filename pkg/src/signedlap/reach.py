"""Reach sets, reaching/exclusive/common sets, and the canonical block order.

The reachable set of node ``i`` collects every node ``j`` that has a directed
path ``j -> ... -> i`` along the stored (sensing) orientation, plus ``i``
itself.  Equivalently, it is the set of nodes that node ``i`` influences,
directly or through intermediaries; it is computed by a breadth-first walk
from ``i`` over the reversed stored edges.

A reach set is a maximal reachable set.  For each reach ``R_k``:

* reaching nodes ``U_k``: nodes whose reachable set is exactly ``R_k``;
* exclusive set ``X_k``: nodes of ``R_k`` that lie in no other reach;
* common set ``C_k``: the remainder ``R_k \\ X_k``.

These sets drive the block-triangular form of the adjacency (and Laplacian):
ordering nodes as ``U_1, X_1\\U_1, U_2, ..., X_d\\U_d, C`` places all
``X``-block couplings on the block diagonal with the common rows last.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import NumericsError
from .graph import SignedDigraph, induced_subgraph


@dataclass(frozen=True)
class ReachDecomposition:
    """Reach/reaching/exclusive/common sets plus the canonical node order."""

    d: int
    reaches: tuple[frozenset[int], ...]
    reaching: tuple[frozenset[int], ...]
    exclusive: tuple[frozenset[int], ...]
    common: tuple[frozenset[int], ...]
    order: tuple[int, ...]  # node placed at block position k+1, 1-indexed ids

    def reach_index_of(self, node: int) -> list[int]:
        """Indices k (0-based) of the reaches containing ``node``."""
        return [k for k, r in enumerate(self.reaches) if node in r]


def _reverse_adjacency(g: SignedDigraph, positive_only: bool) -> dict[int, list[int]]:
    rev: dict[int, list[int]] = {i: [] for i in range(1, g.n + 1)}
    for (i, j), w in g.edges.items():
        if positive_only and w <= 0:
            continue
        rev[j].append(i)
    return rev


def _closure(rev: dict[int, list[int]], i: int) -> frozenset[int]:
    seen = {i}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        for p in rev[u]:
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return frozenset(seen)


def reachable_set(g: SignedDigraph, i: int, positive_only: bool = False) -> frozenset[int]:
    """Nodes with a stored-orientation path into ``i`` (the nodes ``i`` influences).

    Edge existence is sign-agnostic by default; ``positive_only=True`` walks
    positive edges only.
    """
    if not (1 <= i <= g.n):
        raise ValueError(f"node {i} out of range 1..{g.n}")
    return _closure(_reverse_adjacency(g, positive_only), i)


def reach_decomposition(g: SignedDigraph, positive_only: bool = False) -> ReachDecomposition:
    """Compute all reach sets and the derived U/X/C partition.

    Reaches are ordered by their smallest member; the canonical order lists
    each exclusive block with its reaching nodes first, then the union of the
    common sets, ascending ids inside every group.
    """
    rev = _reverse_adjacency(g, positive_only)
    sets = {i: _closure(rev, i) for i in range(1, g.n + 1)}

    distinct = set(sets.values())
    reaches = sorted(
        (r for r in distinct if not any(r < other for other in distinct)),
        key=min,
    )
    d = len(reaches)
    reaching = [frozenset(i for i in range(1, g.n + 1) if sets[i] == r) for r in reaches]
    exclusive = []
    common = []
    for k, r in enumerate(reaches):
        others: set[int] = set()
        for l, other in enumerate(reaches):
            if l != k:
                others |= other
        x = frozenset(r - others)
        exclusive.append(x)
        common.append(frozenset(r - x))

    order: list[int] = []
    for k in range(d):
        order.extend(sorted(reaching[k]))
        order.extend(sorted(exclusive[k] - reaching[k]))
    all_common: set[int] = set()
    for c in common:
        all_common |= c
    order.extend(sorted(all_common))

    decomp = ReachDecomposition(
        d=d,
        reaches=tuple(reaches),
        reaching=tuple(reaching),
        exclusive=tuple(exclusive),
        common=tuple(common),
        order=tuple(order),
    )
    _validate(g, decomp, positive_only)
    return decomp


def canonical_permutation(decomp: ReachDecomposition) -> tuple[int, ...]:
    """Node order realizing the block-lower-triangular adjacency form."""
    return decomp.order


def permutation_matrix(decomp: ReachDecomposition) -> np.ndarray:
    """P such that P A P^T is the block form (position k reads node order[k])."""
    n = len(decomp.order)
    P = np.zeros((n, n))
    for pos, node in enumerate(decomp.order):
        P[pos, node - 1] = 1.0
    return P


def is_strongly_connected(g: SignedDigraph) -> bool:
    """Every node reachable from every other along stored edges (sign-agnostic)."""
    if g.n == 1:
        return True
    fwd: dict[int, list[int]] = {i: [] for i in range(1, g.n + 1)}
    rev: dict[int, list[int]] = {i: [] for i in range(1, g.n + 1)}
    for (i, j) in g.edges:
        fwd[i].append(j)
        rev[j].append(i)

    def closure(adj: dict[int, list[int]]) -> set[int]:
        seen = {1}
        queue = deque([1])
        while queue:
            u = queue.popleft()
            for p in adj[u]:
                if p not in seen:
                    seen.add(p)
                    queue.append(p)
        return seen

    full = set(range(1, g.n + 1))
    return closure(fwd) == full and closure(rev) == full


def _validate(g: SignedDigraph, decomp: ReachDecomposition, positive_only: bool) -> None:
    """Structural sanity checks applied to every computed decomposition."""
    n = g.n
    edges = (
        {k for k, w in g.edges.items() if w > 0} if positive_only else set(g.edges)
    )
    covered: set[int] = set()
    for k in range(decomp.d):
        u_k, x_k, c_k = decomp.reaching[k], decomp.exclusive[k], decomp.common[k]
        if not u_k <= x_k:
            raise NumericsError(f"reach {k + 1}: reaching nodes escape the exclusive set")
        if x_k & c_k:
            raise NumericsError(f"reach {k + 1}: exclusive and common sets overlap")
        for i in u_k:
            for j in x_k - u_k:
                if (i, j) in edges:
                    raise NumericsError(f"edge ({i}, {j}) violates the reaching-block zero pattern")
        for p in x_k:
            for m in c_k:
                if (p, m) in edges:
                    raise NumericsError(f"edge ({p}, {m}) violates the exclusive/common zero pattern")
        sub = induced_subgraph(g, sorted(u_k))
        if positive_only:
            pos = {kk: w for kk, w in sub.edges.items() if w > 0}
            sub = SignedDigraph(sub.n, pos)
        if not is_strongly_connected(sub):
            raise NumericsError(f"reaching set {k + 1} is not strongly connected")
        covered |= x_k | c_k
    if covered != set(range(1, n + 1)) or len(decomp.order) != n:
        raise NumericsError("decomposition does not cover the node set")
