import numpy as np
import pytest
from numpy.testing import assert_allclose

from signedlap import (
    PremiseError,
    SignedDigraph,
    classify_pair,
    eigenvalues,
    first_order_zero_eigenvalues,
    laplacian,
    matrix_scale,
    null_basis,
    reach_decomposition,
    sensitive_pairs,
    superpose,
    theta_matrix,
    verify_sensitivity,
)
from signedlap.perturb import (
    CLASS_COND1,
    CLASS_COND2,
    CLASS_OTHER,
    CLASS_REMARK4A,
    CLASS_REMARK4B,
    SIGN_NEGATIVE,
    SIGN_ZERO,
    match_predictions,
    zero_group,
)
from signedlap.spectral import ZERO_TOL

from conftest import random_multi_reach_graph


@pytest.fixture(scope="module")
def uniform_decomp(reach12_uniform):
    return reach_decomposition(reach12_uniform)


@pytest.fixture(scope="module")
def uniform_basis(reach12_uniform, uniform_decomp):
    return null_basis(reach12_uniform, uniform_decomp)


def test_classify_reference_pairs(uniform_decomp):
    cases = {
        (1, 4): (CLASS_COND1, SIGN_NEGATIVE),
        (7, 9): (CLASS_COND2, SIGN_NEGATIVE),
        (3, 4): (CLASS_REMARK4A, SIGN_ZERO),
        (7, 6): (CLASS_REMARK4A, SIGN_ZERO),
        (6, 5): (CLASS_REMARK4B, SIGN_ZERO),
        (4, 8): (CLASS_REMARK4B, SIGN_ZERO),
        (8, 9): (CLASS_REMARK4B, SIGN_ZERO),  # common-to-common straddles reaches
        (6, 7): (CLASS_OTHER, SIGN_ZERO),  # non-reaching source, own reach only
    }
    for (u, v), (kind, sign) in cases.items():
        got = classify_pair(uniform_decomp, u, v)
        assert (got.kind, got.theta_sign) == (kind, sign), (u, v)
    with pytest.raises(ValueError):
        classify_pair(uniform_decomp, 3, 3)


def test_theta_reference_signs(reach12_uniform, uniform_decomp, uniform_basis):
    # reaching -> other exclusive: strictly negative diagonal entry
    g2 = SignedDigraph(12, {(7, 4): -1.0})
    theta = theta_matrix(reach12_uniform, uniform_decomp, uniform_basis, g2)
    assert theta.theta[2, 2] < -1e-12
    # reaching -> own exclusive: exact zero
    g2 = SignedDigraph(12, {(3, 4): -1.0})
    theta = theta_matrix(reach12_uniform, uniform_decomp, uniform_basis, g2)
    assert theta.theta[1, 1] == pytest.approx(0.0, abs=1e-12)
    # source off every reaching set: whole diagonal vanishes
    g2 = SignedDigraph(12, {(4, 8): -1.0, (6, 5): -1.0})
    theta = theta_matrix(reach12_uniform, uniform_decomp, uniform_basis, g2)
    assert_allclose(np.diag(theta.theta), 0.0, atol=1e-12)


def test_theta_premise_checks(reach12_uniform, uniform_decomp, uniform_basis, mixed5):
    with pytest.raises(PremiseError):
        theta_matrix(reach12_uniform, uniform_decomp, uniform_basis,
                     SignedDigraph(12, {(1, 2): -1.0}))  # existing edge
    with pytest.raises(PremiseError):
        theta_matrix(reach12_uniform, uniform_decomp, uniform_basis,
                     SignedDigraph(12, {(1, 4): 1.0}))  # positive weight
    d5 = reach_decomposition(mixed5)
    with pytest.raises(PremiseError):
        theta_matrix(mixed5, d5, uniform_basis, SignedDigraph(5, {(1, 3): -1.0}))


def test_theta_basis_biorthogonal(uniform_basis):
    assert_allclose(
        uniform_basis.mus @ uniform_basis.gammas.T, np.eye(3), atol=1e-9
    )


def test_theta_sign_table_random():
    """Single-edge perturbations across random graphs follow the sign table."""
    rng = np.random.default_rng(37)
    done = 0
    while done < 30:
        g1 = random_multi_reach_graph(
            rng, blocks=int(rng.integers(2, 4)), block_size=int(rng.integers(1, 4))
        )
        decomp = reach_decomposition(g1)
        basis = null_basis(g1, decomp)
        u, v = rng.integers(1, g1.n + 1, size=2)
        u, v = int(u), int(v)
        if u == v or (u, v) in g1.edges:
            continue
        g2 = SignedDigraph(g1.n, {(u, v): -float(rng.uniform(0.1, 2.0))})
        theta = theta_matrix(g1, decomp, basis, g2).theta
        for i in range(decomp.d):
            if u not in decomp.reaching[i]:
                assert theta[i, i] == pytest.approx(0.0, abs=1e-12)
            elif v in decomp.exclusive[i]:
                assert theta[i, i] == pytest.approx(0.0, abs=1e-12)
            else:
                assert theta[i, i] < -1e-12
        done += 1


def test_theta_trace_nonpositive_strict_iff_sensitive():
    rng = np.random.default_rng(41)
    done = 0
    while done < 20:
        g1 = random_multi_reach_graph(rng, blocks=2, block_size=int(rng.integers(1, 4)))
        decomp = reach_decomposition(g1)
        basis = null_basis(g1, decomp)
        edges = {}
        for _ in range(int(rng.integers(1, 4))):
            u, v = rng.integers(1, g1.n + 1, size=2)
            u, v = int(u), int(v)
            if u != v and (u, v) not in g1.edges:
                edges[(u, v)] = -float(rng.uniform(0.1, 1.0))
        if not edges:
            continue
        g2 = SignedDigraph(g1.n, edges)
        theta = theta_matrix(g1, decomp, basis, g2).theta
        trace = float(np.trace(theta))
        assert trace <= 1e-12
        sensitive = any(
            classify_pair(decomp, u, v).kind in (CLASS_COND1, CLASS_COND2)
            for (u, v) in edges
        )
        if sensitive:
            assert trace < -1e-12
        else:
            assert trace == pytest.approx(0.0, abs=1e-12)
        done += 1


def test_first_order_prediction_reference(reach12_uniform, uniform_decomp, uniform_basis):
    g2 = SignedDigraph(12, {(7, 9): -1.0, (1, 4): -1.0})
    theta = theta_matrix(reach12_uniform, uniform_decomp, uniform_basis, g2)
    assert first_order_zero_eigenvalues(theta, 0.0) == pytest.approx([0.0, 0.0, 0.0])
    eps = 1e-4
    predicted = first_order_zero_eigenvalues(theta, eps)
    scaled = SignedDigraph(12, {k: eps * w for k, w in g2.edges.items()})
    exact = eigenvalues(laplacian(superpose(reach12_uniform, scaled)))
    err = match_predictions(predicted, zero_group(exact, 3))
    assert err < 1e-9 + 100 * eps**2
    assert np.sum(predicted.real < -1e-12) == 2


def test_first_order_error_shrinks_linearly():
    rng = np.random.default_rng(43)
    done = 0
    while done < 6:
        g1 = random_multi_reach_graph(rng, blocks=2, block_size=int(rng.integers(2, 4)))
        decomp = reach_decomposition(g1)
        basis = null_basis(g1, decomp)
        u, v = rng.integers(1, g1.n + 1, size=2)
        u, v = int(u), int(v)
        if u == v or (u, v) in g1.edges:
            continue
        g2 = SignedDigraph(g1.n, {(u, v): -1.0})
        theta = theta_matrix(g1, decomp, basis, g2)
        errors = []
        for eps in (1e-4, 1e-5, 1e-6):
            predicted = first_order_zero_eigenvalues(theta, eps)
            scaled = SignedDigraph(g1.n, {k: eps * w for k, w in g2.edges.items()})
            exact = eigenvalues(laplacian(superpose(g1, scaled)))
            errors.append(match_predictions(predicted, zero_group(exact, decomp.d)))
        for bigger, smaller in zip(errors, errors[1:]):
            if bigger > 1e-12:
                assert smaller <= bigger / 5.0
        done += 1


def test_sensitive_pairs_reference(reach12_uniform):
    pairs = {(p.u, p.v): p.kind for p in sensitive_pairs(reach12_uniform)}
    assert pairs[(1, 4)] == CLASS_COND1
    assert pairs[(7, 9)] == CLASS_COND2
    for absent in ((3, 4), (7, 6), (6, 5), (4, 8)):
        assert absent not in pairs
    for existing in reach12_uniform.edges:
        assert existing not in pairs


def test_sensitive_pairs_two_cycles():
    g = SignedDigraph(4, {(1, 2): 1.0, (2, 1): 1.0, (3, 4): 1.0, (4, 3): 1.0})
    pairs = sensitive_pairs(g)
    got = {(p.u, p.v) for p in pairs}
    expected = {(u, v) for u in (1, 2) for v in (3, 4)} | {
        (u, v) for u in (3, 4) for v in (1, 2)
    }
    assert got == expected
    for p in pairs:
        assert p.kind == CLASS_COND1
        assert verify_sensitivity(g, (p.u, p.v), eps=1e-6)


def test_sensitive_pairs_single_reach_errors():
    g = SignedDigraph(3, {(1, 2): 1.0, (2, 3): 1.0, (3, 1): 1.0})
    with pytest.raises(PremiseError):
        sensitive_pairs(g)


def test_verify_sensitivity_reference(reach12_uniform):
    assert verify_sensitivity(reach12_uniform, (1, 4), eps=1e-4)
    assert verify_sensitivity(reach12_uniform, (7, 9), eps=1e-4)
    for pair in ((3, 4), (7, 6), (6, 5), (4, 8)):
        assert not verify_sensitivity(reach12_uniform, pair, eps=1e-4)


def test_large_negative_weights_flip_insensitive_pairs(reach12_uniform):
    """First-order-silent pairs can still destabilize at finite magnitude."""
    edges = {(u, v): -2.0 for (u, v) in ((3, 4), (7, 6), (6, 5), (4, 8))}
    g = superpose(reach12_uniform, SignedDigraph(12, edges))
    values = eigenvalues(laplacian(g))
    thr = ZERO_TOL * max(matrix_scale(laplacian(g)), 1.0)
    assert np.sum(values.real < -thr) == 4
