import itertools

import numpy as np
import pytest

from drgkit import errors
from drgkit.classical import ClassicalParameters, classical_intersection_array
from drgkit.drg import certify_distance_regular
from drgkit.families import (
    HermitianCoordinates,
    gen_family,
    galois_field,
    gf_matrix_rank,
    hermitian_forms_graph,
    parse_family_spec,
    rank_one_hermitian,
)
from drgkit.graph import write_graph6


@pytest.mark.parametrize("r", [2, 3])
def test_field_axioms(r):
    F = galois_field(r)
    q = F.order
    els = range(q)
    for a, b, c in itertools.product(els, repeat=3):
        assert F.add[a, F.add[b, c]] == F.add[F.add[a, b], c]
        assert F.mul[a, F.mul[b, c]] == F.mul[F.mul[a, b], c]
        assert F.mul[a, F.add[b, c]] == F.add[F.mul[a, b], F.mul[a, c]]
    for a, b in itertools.product(els, repeat=2):
        assert F.add[a, b] == F.add[b, a] and F.mul[a, b] == F.mul[b, a]
    for a in els:
        assert F.add[a, 0] == a and F.mul[a, 1] == a
        assert F.add[a, F.neg[a]] == 0
        if a:
            assert F.mul[a, F.inv[a]] == 1
    # no zero divisors: the quadratic is irreducible
    assert all(F.mul[a, b] != 0 for a in range(1, q) for b in range(1, q))


@pytest.mark.parametrize("r", [2, 3])
def test_frobenius(r):
    F = galois_field(r)
    q = F.order
    for a, b in itertools.product(range(q), repeat=2):
        assert F.conj[F.mul[a, b]] == F.mul[F.conj[a], F.conj[b]]
        assert F.conj[F.add[a, b]] == F.add[F.conj[a], F.conj[b]]
    assert all(F.conj[F.conj[a]] == a for a in range(q))
    fixed = [a for a in range(q) if F.conj[a] == a]
    assert fixed == F.subfield().tolist()


def test_unsupported_field():
    with pytest.raises(errors.UnsupportedParameters):
        galois_field(5)


def brute_rank(m, F):
    """d - log_q |kernel| by enumerating all vectors."""
    m = np.asarray(m)
    rows, cols = m.shape
    q = F.order
    kernel = 0
    for v in itertools.product(range(q), repeat=cols):
        acc = np.zeros(rows, dtype=np.int64)
        for j, x in enumerate(v):
            acc = F.add[acc, F.mul[m[:, j], x]]
        kernel += not acc.any()
    return cols - int(round(np.log(kernel) / np.log(q)))


@pytest.mark.parametrize("r", [2, 3])
def test_rank_against_kernel_count(r):
    F = galois_field(r)
    rng = np.random.default_rng(r)
    for _ in range(40):
        shape = tuple(int(t) for t in rng.integers(1, 4, size=2))
        m = rng.integers(0, F.order, size=shape)
        if rng.random() < 0.3 and shape[0] > 1:
            m[-1] = F.add[m[0], m[-2]]
        assert gf_matrix_rank(m, F) == brute_rank(m, F)


@pytest.mark.parametrize("d, r", [(2, 2), (2, 3), (3, 2)])
def test_rank_one_count(d, r):
    F = galois_field(r)
    mats = rank_one_hermitian(d, F)
    assert len(mats) == (r ** (2 * d) - 1) // (r + 1)
    for m in mats:
        assert np.array_equal(m.T, F.conj[m])


def test_coordinates_roundtrip():
    F = galois_field(3)
    hc = HermitianCoordinates(2, F)
    assert hc.size == 81
    for idx in range(hc.size):
        m = hc.matrix_of(idx)
        assert np.array_equal(m.T, F.conj[m])
        assert int(hc.digits_of(m) @ hc.weights) == idx


@pytest.mark.parametrize("d, r", [(2, 2), (2, 3)])
def test_hermitian_constructions_agree(d, r):
    assert hermitian_forms_graph(d, r, "pairwise") == hermitian_forms_graph(d, r)


@pytest.mark.parametrize("d, r", [(2, 2), (2, 3), (3, 2)])
def test_hermitian_array_matches_classical(d, r):
    fam = gen_family(f"hermitian:{d},{r}")
    assert fam.graph.n == r ** (d * d)
    cert = certify_distance_regular(fam.graph)
    want = classical_intersection_array(ClassicalParameters(*fam.metadata["classical_parameters"]))
    assert cert.array == want


def test_generators_are_deterministic():
    for spec in ("hermitian:3,2", "johnson:6,3", "hamming:3,3", "petersen"):
        assert write_graph6(gen_family(spec).graph) == write_graph6(gen_family(spec).graph)


@pytest.mark.parametrize("spec, n, m", [
    ("hypercube:3", 8, 12), ("hamming:3,3", 27, 81), ("johnson:6,3", 20, 90),
    ("kneser:7,3", 35, 70), ("petersen", 10, 15), ("cycle:6", 6, 6), ("path:4", 4, 3),
])
def test_family_sizes(spec, n, m):
    g = gen_family(spec).graph
    assert (g.n, g.edge_count) == (n, m)


def test_parse_family_spec():
    assert parse_family_spec("hermitian:3,2") == ("hermitian", (3, 2))
    assert parse_family_spec(" Hamming 3 3 ") == ("hamming", (3, 3))
    assert parse_family_spec("petersen") == ("petersen", ())


@pytest.mark.parametrize("spec", ["nosuch:1", "hermitian:3", "hermitian:4,3", "hermitian:3,5",
                                  "hypercube:x", "cycle:2"])
def test_unsupported_specs(spec):
    with pytest.raises(errors.UnsupportedParameters):
        gen_family(spec)
