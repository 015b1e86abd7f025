"""Shared fixtures: canonical graphs, random generators, and the bisection oracle."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from signedlap import (
    EdgePerturbation,
    SignedDigraph,
    check_spectrum_condition,
    laplacian,
    parse_edge_list,
    superpose,
)

DATA = Path(__file__).parent / "data"


def load_graph(name: str) -> SignedDigraph:
    return parse_edge_list((DATA / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def reach12() -> SignedDigraph:
    """12-node graph with three reaches and a five-node common cluster."""
    return load_graph("reach12.txt")


@pytest.fixture(scope="session")
def reach12_uniform(reach12: SignedDigraph) -> SignedDigraph:
    """Same topology with every weight set to 2."""
    return SignedDigraph(reach12.n, {k: 2.0 for k in reach12.edges})


@pytest.fixture(scope="session")
def mixed5() -> SignedDigraph:
    """Dense 5-node signed graph satisfying the one-zero spectrum condition."""
    return load_graph("mixed5.txt")


@pytest.fixture(scope="session")
def spoked8() -> SignedDigraph:
    """8-node connected digraph with an antagonistic pair; delta* fixture."""
    return load_graph("spoked8.txt")


@pytest.fixture(scope="session")
def triangle() -> SignedDigraph:
    return load_graph("triangle.txt")


def random_premise_graph(rng: np.random.Generator, n: int) -> SignedDigraph:
    """Random connected nonnegative digraph: one zero eigenvalue, rest in Re > 0.

    A spanning in-tree toward a random root guarantees a globally reachable
    node; extra random edges densify the graph.
    """
    order = list(rng.permutation(np.arange(1, n + 1)))
    edges: dict[tuple[int, int], float] = {}
    for pos in range(1, n):
        child = int(order[pos])
        parent = int(order[rng.integers(0, pos)])
        edges[(child, parent)] = float(rng.uniform(0.5, 2.5))
    extra = rng.integers(0, 2 * n)
    for _ in range(int(extra)):
        i, j = rng.integers(1, n + 1, size=2)
        if i != j:
            edges[(int(i), int(j))] = float(rng.uniform(0.5, 2.5))
    g = SignedDigraph(n, edges)
    assert check_spectrum_condition(g), "generator must produce premise graphs"
    return g


def random_multi_reach_graph(rng: np.random.Generator,
                             blocks: int = 2,
                             block_size: int = 3,
                             commons: int = 2) -> SignedDigraph:
    """Nonnegative graph with `blocks` reaches and a shared common cluster.

    Each block is a directed cycle (strongly connected reaching set) with an
    optional tail node; common nodes sense at least two different blocks.
    """
    edges: dict[tuple[int, int], float] = {}
    next_id = 1
    block_nodes: list[list[int]] = []
    for _ in range(blocks):
        nodes = list(range(next_id, next_id + block_size))
        next_id += block_size
        block_nodes.append(nodes)
        if len(nodes) > 1:
            for a, b in zip(nodes, nodes[1:] + nodes[:1]):
                edges[(a, b)] = float(rng.uniform(0.5, 2.5))
    common_ids = list(range(next_id, next_id + commons))
    next_id += commons
    for c in common_ids:
        picked = rng.choice(blocks, size=2, replace=False)
        for b in picked:
            src = int(rng.choice(block_nodes[int(b)]))
            edges[(c, src)] = float(rng.uniform(0.5, 2.5))
    for i, c in enumerate(common_ids[1:], start=1):
        if rng.uniform() < 0.5:
            edges[(c, common_ids[i - 1])] = float(rng.uniform(0.5, 2.5))
    n = next_id - 1
    return SignedDigraph(n, edges)


def random_undirected_connected(rng: np.random.Generator, n: int) -> SignedDigraph:
    """Random connected graph with symmetric positive weights."""
    edges: dict[tuple[int, int], float] = {}
    order = list(rng.permutation(np.arange(1, n + 1)))
    for pos in range(1, n):
        a = int(order[pos])
        b = int(order[rng.integers(0, pos)])
        w = float(rng.uniform(0.5, 2.5))
        edges[(a, b)] = w
        edges[(b, a)] = w
    for _ in range(int(rng.integers(0, n))):
        i, j = rng.integers(1, n + 1, size=2)
        if i != j and (int(i), int(j)) not in edges:
            w = float(rng.uniform(0.5, 2.5))
            edges[(int(i), int(j))] = w
            edges[(int(j), int(i))] = w
    return SignedDigraph(n, edges)


def random_signed_digraph(rng: np.random.Generator, n: int) -> SignedDigraph:
    edges: dict[tuple[int, int], float] = {}
    m = int(rng.integers(n, 3 * n))
    for _ in range(m):
        i, j = rng.integers(1, n + 1, size=2)
        if i != j:
            w = float(rng.uniform(-2.0, 2.5))
            if abs(w) > 1e-6:
                edges[(int(i), int(j))] = w
    return SignedDigraph(n, edges)


def bisection_delta_star(g1: SignedDigraph, pert: EdgePerturbation,
                         iters: int = 60) -> float:
    """Independent oracle: bisect delta on the perturbed spectrum condition.

    Bracket [0, trace(L1) + 1]; valid whenever q_uv + q_vu >= 1, since the
    Laplacian trace turns negative before the bracket top.
    """
    hi = float(np.trace(laplacian(g1))) + 1.0
    lo = 0.0

    def cond(delta: float) -> bool:
        moved = EdgePerturbation(pert.u, pert.v, pert.q_uv, pert.q_vu, delta)
        return check_spectrum_condition(superpose(g1, moved.graph(g1.n)))

    assert cond(0.0) and not cond(hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if cond(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
