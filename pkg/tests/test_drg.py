import itertools

import numpy as np
import pytest

from conftest import CORPUS, fixture_graph
from drgkit import errors
from drgkit.drg import (
    DRGCertificate,
    IntersectionArray,
    NonDRGWitness,
    certify_distance_regular,
    hypothesis_gate,
    intersection_tensor,
    local_sets,
    tensor_from_array,
)
from drgkit.families import cycle_graph, hypercube, path_graph, petersen_graph
from drgkit.graph import Graph, all_distances, bfs_distances
from oracles import brute_tensor


SMALL = ["petersen", "hypercube:3", "cycle:6", "cycle:7", "johnson:5,2", "kneser:7,3",
         "hermitian:2,2"]


@pytest.mark.parametrize("spec", SMALL)
def test_counting_matches_brute_force(spec):
    fx = fixture_graph(spec)
    assert isinstance(fx.cert, DRGCertificate)
    assert np.array_equal(fx.cert.tensor, brute_tensor(fx.g))


@pytest.mark.parametrize("spec", CORPUS)
def test_counted_tensor_equals_recurrence(spec):
    fx = fixture_graph(spec)
    assert fx.cert.mode == "counted"
    assert np.array_equal(intersection_tensor(fx.cert), tensor_from_array(fx.cert.array))


@pytest.mark.parametrize("spec", CORPUS)
def test_tensor_identities(spec):
    p = fixture_graph(spec).cert.tensor
    arr = fixture_graph(spec).cert.array
    D = arr.D
    ks = np.array(arr.ks)
    assert np.array_equal(p, p.transpose(0, 2, 1))
    for h in range(D + 1):
        # row sums: each z lies at some distance j from y
        assert np.array_equal(p[h].sum(axis=1), ks)
    # k_h p^h_ij = k_i p^i_hj
    for h, i, j in itertools.product(range(D + 1), repeat=3):
        assert ks[h] * p[h, i, j] == ks[i] * p[i, h, j]
    for i in range(D + 1):
        assert p[0, i, i] == ks[i]


@pytest.mark.parametrize("spec", CORPUS)
def test_array_matches_family_metadata(spec):
    fx = fixture_graph(spec)
    if "intersection_array" in fx.meta:
        b, c = fx.meta["intersection_array"]
        assert list(fx.cert.array.b) == b and list(fx.cert.array.c) == c


def test_array_and_spot_modes_agree():
    fx = fixture_graph("hermitian:3,2")
    full = certify_distance_regular(fx.g, sources=range(fx.g.n))
    spot = certify_distance_regular(fx.g, sources=[0, 17, 300])
    assert full.mode == "array-verified" and spot.mode == "spot-verified"
    assert full.array == spot.array == fx.cert.array
    assert np.array_equal(full.tensor, fx.cert.tensor)
    assert spot.sources_checked == 3


def test_known_arrays():
    assert str(certify_distance_regular(petersen_graph()).array) == "{3,2;1,1}"
    assert str(certify_distance_regular(hypercube(3)).array) == "{3,2,1;1,2,3}"
    assert str(fixture_graph("hermitian:3,2").cert.array) == "{21,20,16;1,2,12}"


def test_path_gives_not_regular_witness():
    w = certify_distance_regular(path_graph(4))
    assert isinstance(w, NonDRGWitness)
    assert w.reason == "not-regular"
    js = w.to_json()
    assert js["distance_regular"] is False and len(js["pairs"]) == 2


def test_regular_non_drg_witness_is_valid():
    # triangular prism: edges inside a triangle have a common neighbour, rungs do not
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]
    g = Graph.from_edges(6, edges)
    w = certify_distance_regular(g)
    assert isinstance(w, NonDRGWitness)
    d = all_distances(g)
    counts = []
    for x, y in w.pairs:
        assert d[x, y] == w.h
        counts.append(int(np.sum((d[x] == w.i) & (d[y] == w.j))))
    assert tuple(counts) == w.counts and counts[0] != counts[1]


def test_spot_witness_on_non_drg():
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]
    w = certify_distance_regular(Graph.from_edges(6, edges), sources=range(6))
    assert isinstance(w, NonDRGWitness)


def test_disconnected_raises():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    with pytest.raises(errors.Disconnected):
        certify_distance_regular(g)


def test_intersection_array_validation():
    with pytest.raises(ValueError):
        IntersectionArray([3, 2], [1])
    with pytest.raises(ValueError):
        IntersectionArray([3, 0], [1, 1])
    arr = IntersectionArray([21, 20, 16], [1, 2, 12])
    assert arr.a == (0, 0, 3, 9)
    assert arr.ks == (1, 21, 210, 280) and arr.n == 512


def test_local_sets():
    g = cycle_graph(6)
    B, C, A = local_sets(g, bfs_distances(g, 3), 1)
    assert B.members.tolist() == [0] and C.members.tolist() == [2] and len(A) == 0
    fx = fixture_graph("hermitian:3,2")
    arr = fx.cert.array
    d = fx.dmat
    for x in range(0, 512, 97):
        for y in (int(np.flatnonzero(d[x] == i)[0]) for i in range(1, 4)):
            i = d[x, y]
            B, C, A = local_sets(fx.g, bfs_distances(fx.g, y), x)
            assert (len(B), len(C), len(A)) == (arr.bs[i], arr.cs[i], arr.a[i])


def test_hypothesis_gate():
    g = hypothesis_gate(fixture_graph("hermitian:3,2").cert)
    assert g.admissible and g.a1 == 0 and g.a2 == 3 and g.D == 3
    q = hypothesis_gate(fixture_graph("hypercube:3").cert)
    assert not q.admissible and not q.a2_nonzero
    p = hypothesis_gate(fixture_graph("petersen").cert)
    assert not p.diameter_ok
    j = hypothesis_gate(fixture_graph("johnson:6,3").cert)
    assert not j.a1_zero
