import itertools
from fractions import Fraction

import numpy as np
import pytest

from conftest import CORPUS, fixture_graph
from drgkit import errors
from drgkit.drg import IntersectionArray
from drgkit.spectral import (
    adjacency_dense,
    dual_eigenvalues,
    dual_eigenvalues_dense,
    eigen_from_array,
    find_qpoly_orderings,
    gram_residual,
    idempotent_identities,
    krein_dense,
    krein_fast,
    krein_parameters,
    primitive_idempotents_dense,
    qpoly_orderings_exhaustive,
    qpoly_pattern_ok,
    sample_representation_residuals,
    standard_sequence,
    verify_representation_identity,
)

_SPEC_CACHE = {}


def spectral_of(spec):
    if spec not in _SPEC_CACHE:
        fx = fixture_graph(spec)
        sd = eigen_from_array(fx.cert.array, fx.g.n)
        _SPEC_CACHE[spec] = (fx, sd, primitive_idempotents_dense(fx.g, sd))
    return _SPEC_CACHE[spec]


def test_petersen_spectrum():
    _, sd, _ = spectral_of("petersen")
    assert np.allclose(sd.theta, [3, 1, -2])
    assert sd.mult.tolist() == [1, 5, 4]


def test_her32_spectrum():
    _, sd, _ = spectral_of("hermitian:3,2")
    assert np.allclose(sd.theta, [21, 5, -3, -11])
    assert sd.mult.tolist() == [1, 210, 280, 21]


def test_spectrum_matches_dense_eigvalsh():
    for spec in ("hypercube:4", "johnson:6,3", "hermitian:2,3"):
        fx, sd, _ = spectral_of(spec)
        vals = np.round(np.linalg.eigvalsh(adjacency_dense(fx.g)), 6)
        uniq, counts = np.unique(vals, return_counts=True)
        got = sorted(zip(np.round(sd.theta, 6).tolist(), sd.mult.tolist()))
        assert got == sorted(zip(uniq.tolist(), counts.tolist()))


def test_standard_sequence_exact_recurrence():
    arr = IntersectionArray([3, 2], [1, 1])
    u = standard_sequence(arr, 1.0)
    # exact values for theta = 1: 1, 1/3, -1/3
    assert [Fraction(x).limit_denominator(100) for x in u] == [1, Fraction(1, 3), Fraction(-1, 3)]


def test_nonintegral_multiplicity():
    # an array passing the basic checks whose multiplicities are not integers
    with pytest.raises(errors.NonIntegerMultiplicity):
        eigen_from_array(IntersectionArray([3, 2], [1, 2]))


def test_PQ_inverse():
    for spec in CORPUS:
        _, sd, _ = spectral_of(spec)
        assert np.allclose(sd.P @ sd.Q, sd.n * np.eye(sd.D + 1))


@pytest.mark.parametrize("spec", CORPUS)
def test_idempotent_identities(spec):
    fx, sd, E = spectral_of(spec)
    res = idempotent_identities(E, sd.theta, adjacency_dense(fx.g))
    assert set(res) >= {"E0_is_J_over_n", "idempotent", "orthogonal", "resolution", "symmetric"}
    assert max(res.values()) < 1e-9, res


@pytest.mark.parametrize("spec", CORPUS)
def test_dual_eigenvalue_expansion_and_gram(spec):
    fx, sd, E = spectral_of(spec)
    d = fx.dmat
    for l in range(sd.D + 1):
        ts = dual_eigenvalues(sd, l).theta_star
        assert np.allclose(dual_eigenvalues_dense(E[l], d), ts, atol=1e-9)
        # E = n^-1 sum theta*_i A_i, equivalently <E x, E y> = theta*_d(x,y) / n
        assert np.abs(E[l] - ts[d] / sd.n).max() < 1e-9
        assert gram_residual(E[l], ts, d) < 1e-9


@pytest.mark.parametrize("spec", CORPUS)
def test_krein_fast_vs_dense(spec):
    _, sd, E = spectral_of(spec)
    qf, qd = krein_fast(sd), krein_dense(E, sd.mult)
    assert np.abs(qf - qd).max() < 1e-7
    assert qf.min() >= -1e-8
    krein_parameters(sd, dense=E)


@pytest.mark.parametrize("spec", CORPUS)
def test_krein_sum_rule(spec):
    _, sd, _ = spectral_of(spec)
    q = krein_fast(sd)
    m = sd.mult.astype(float)
    # sum_k m_k q^k_ij = m_i m_j  (trace of E_i o E_j times n)
    assert np.allclose(np.einsum("k,kij->ij", m, q), np.outer(m, m))
    # q^0_ij = delta_ij m_i
    assert np.allclose(q[0], np.diag(m))


def test_krein_mismatch_detected():
    _, sd, E = spectral_of("petersen")
    with pytest.raises(errors.OracleMismatch):
        krein_parameters(sd, dense=[E[0], E[2], E[1]])


@pytest.mark.parametrize("spec", CORPUS)
def test_qpoly_search_matches_exhaustive(spec):
    _, sd, _ = spectral_of(spec)
    fast = sorted(o.order for o in find_qpoly_orderings(sd))
    assert fast == sorted(qpoly_orderings_exhaustive(sd))


def test_qpoly_known_cases():
    _, sd, _ = spectral_of("petersen")
    assert sorted(o.order for o in find_qpoly_orderings(sd)) == [(0, 1, 2), (0, 2, 1)]
    _, sd, _ = spectral_of("hypercube:3")
    assert [o.order for o in find_qpoly_orderings(sd)] == [(0, 1, 2, 3)]
    _, sd, _ = spectral_of("hermitian:3,2")
    orders = find_qpoly_orderings(sd)
    assert [o.order for o in orders] == [(0, 3, 1, 2)]
    assert np.allclose(orders[0].dual.theta_star, [21, -11, 5, -3])


def test_qpoly_pattern_rejects_perturbed():
    _, sd, _ = spectral_of("hypercube:3")
    q = krein_fast(sd).copy()
    assert qpoly_pattern_ok(q)
    q[3, 1, 1] = 1.0
    assert not qpoly_pattern_ok(q)


def test_petersen_dual_eigenvalues():
    _, sd, _ = spectral_of("petersen")
    ts = dual_eigenvalues(sd, 1).theta_star
    assert np.allclose(ts, [5, 5 / 3, -5 / 3])


@pytest.mark.parametrize("spec", ["petersen", "hypercube:3", "hermitian:3,2"])
def test_representation_identity(spec):
    fx, sd, E = spectral_of(spec)
    orders = find_qpoly_orderings(sd)
    assert orders
    for idx, o in enumerate(orders):
        r = sample_representation_residuals(fx.g, E[o.order[1]], o.dual.theta_star, 200,
                                            np.random.default_rng(idx), fx.dmat)
        assert r["max_residual"] < 1e-8


def test_representation_identity_exhaustive_petersen():
    fx, sd, E = spectral_of("petersen")
    o = find_qpoly_orderings(sd)[0]
    d = fx.dmat
    worst = 0.0
    for x, y in itertools.product(range(10), repeat=2):
        h = d[x, y]
        if h == 0:
            continue
        for i, j in itertools.product(range(3), repeat=2):
            worst = max(worst, verify_representation_identity(
                fx.g, E[o.order[1]], o.dual.theta_star, h, i, j, x, y, d))
    assert worst < 1e-10


def test_representation_identity_fails_off_qpoly():
    # the natural order of Her(3,2) is not Q-polynomial; the identity breaks on E_1
    fx, sd, E = spectral_of("hermitian:3,2")
    r = sample_representation_residuals(fx.g, E[1], sd.Q[:, 1], 200,
                                        np.random.default_rng(0), fx.dmat)
    assert r["max_residual"] > 1e-3


def test_representation_degenerate_denominator():
    fx, sd, E = spectral_of("petersen")
    d = fx.dmat
    y = int(np.flatnonzero(d[0] == 1)[0])
    with pytest.raises(errors.DegenerateDenominator):
        verify_representation_identity(fx.g, E[0], sd.Q[:, 0], 1, 0, 1, 0, y, d)


def test_dense_limit():
    fx, sd, _ = spectral_of("hermitian:3,2")
    with pytest.raises(errors.DenseLimitExceeded):
        primitive_idempotents_dense(fx.g, sd, dense_limit=100)
