import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drgcert.corpus import random_regular
from drgcert.criteria import oracle_drg
from drgcert.graph import (
    complete,
    complete_bipartite,
    cycle,
    distance_data,
    hypercube,
    odd_graph,
    tensor_with_ones2,
)
from drgcert.metrics import (
    level_profiles,
    matrix_norm_identity,
    pairwise_intersection,
    pm_of_A,
    predistance_matrices,
    walk_quantities,
)
from drgcert.prepoly import predistance_system
from drgcert.spectral import spectrum_of

from test_graph import graphs, to_nx


def profiles_of(G):
    DD = distance_data(G)
    return DD, level_profiles(pairwise_intersection(G, DD), DD)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=10))
def test_pair_counts_brute_force(G):
    DD = distance_data(G)
    if not DD.connected:
        return
    T = pairwise_intersection(G, DD)
    dist = DD.dist
    for u, v in itertools.product(range(G.n), repeat=2):
        i = dist[u, v]
        nbrs = G.neighbors(v)
        assert T.c[u, v] == np.sum(dist[u, nbrs] == i - 1)
        assert T.a[u, v] == np.sum(dist[u, nbrs] == i)
        assert T.b[u, v] == np.sum(dist[u, nbrs] == i + 1)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=12))
def test_norm_identity(G):
    DD = distance_data(G)
    if not DD.connected:
        return
    _, prof = profiles_of(G)
    for i in range(DD.D + 1):
        lhs, rhs = matrix_norm_identity(G, DD, i, prof)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("H", [
    nx.petersen_graph(), nx.hypercube_graph(4), nx.cycle_graph(9), nx.complete_graph(6),
    nx.heawood_graph(), nx.dodecahedral_graph(), nx.icosahedral_graph(), nx.complete_bipartite_graph(4, 4),
], ids=lambda H: f"nx-{H.number_of_nodes()}-{H.number_of_edges()}")
def test_intersection_array_matches_networkx(H):
    from drgcert.corpus import from_networkx
    G = from_networkx(H, "nx")
    b, c = nx.intersection_array(H)
    o = oracle_drg(G, distance_data(G))
    assert o.is_drg
    assert o.intersection_array == (tuple(b), tuple(c))


def test_non_drg_networkx_agrees(q3k2, hoffman):
    for G in (q3k2, hoffman, tensor_with_ones2(cycle(8))):
        assert not nx.is_distance_regular(to_nx(G))
        assert not oracle_drg(G, distance_data(G)).is_drg


def test_strong_product_profiles(q3k2):
    _, prof = profiles_of(q3k2)
    assert [p.c_val for p in prof[1:]] == [1, 4, 6]
    assert [p.k_val for p in prof[1:]] == [7, 6, 2]
    assert not prof[1].a_defined and not prof[1].b_defined
    assert all(p.a_defined and p.b_defined for p in prof[2:])
    assert prof[2].c_bar == 4.0


def test_hoffman_levels(hoffman):
    _, prof = profiles_of(hoffman)
    assert all(p.a_val == 0 for p in prof)
    assert not prof[2].c_defined
    assert [p.k_bar_i for p in prof] == [1, 4, 6.5, 4, 0.5]


@pytest.mark.parametrize("G", [cycle(8), hypercube(4), odd_graph(4), complete(5), complete_bipartite(3, 3)],
                         ids=lambda G: G.label)
def test_distance_matrices_are_predistance_polynomials_of_A(G):
    DD = distance_data(G)
    P = predistance_system(spectrum_of(G))
    mats = predistance_matrices(G, P, P.d)
    for m in range(P.d + 1):
        assert np.allclose(mats[m], DD.distance_matrix(m), atol=1e-9)
        assert pm_of_A(G, P, m, DD)[1] < 1e-16


def test_hoffman_is_not_two_partially_distance_regular(hoffman):
    DD = distance_data(hoffman)
    P = predistance_system(spectrum_of(hoffman))
    assert pm_of_A(hoffman, P, 1, DD)[1] < 1e-20
    assert pm_of_A(hoffman, P, 2, DD)[1] > 0.1


def test_predistance_matrices_range(petersen):
    P = predistance_system(spectrum_of(petersen))
    with pytest.raises(ValueError):
        predistance_matrices(petersen, P, 3)


def test_walk_quantities_perkel(perkel):
    DD = distance_data(perkel)
    P = predistance_system(spectrum_of(perkel))
    W = walk_quantities(perkel, DD, P)
    assert W.level == 2 and W.girth_ok
    assert W.ac_avg == 3.0 and W.walk_avg == 3.0
    assert np.all(W.walks == 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_walk_average_equals_ac_average_under_girth_condition(seed):
    G = random_regular(1, np.random.default_rng(seed), max_n=40)[0]
    DD = distance_data(G)
    P = predistance_system(spectrum_of(G))
    W = walk_quantities(G, DD, P)
    if W.girth_ok and W.ac_avg is not None:
        assert W.walk_avg == pytest.approx(W.ac_avg, abs=1e-9)
