import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drgcert.graph import (
    GRAPH6_MAX_N,
    Graph,
    GraphFormatError,
    build_named,
    circulant,
    complete,
    complete_bipartite,
    cycle,
    distance_data,
    encode_graph6,
    format_edge_list,
    hypercube,
    odd_graph,
    parse_edge_list,
    parse_graph6,
    strong_product,
    tensor_with_ones2,
)


@st.composite
def graphs(draw, max_n=14):
    n = draw(st.integers(1, max_n))
    iu = np.triu_indices(n, 1)
    bits = draw(st.lists(st.booleans(), min_size=len(iu[0]), max_size=len(iu[0])))
    adj = np.zeros((n, n), dtype=bool)
    adj[iu] = bits
    return Graph(adj | adj.T)


def to_nx(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges.tolist())
    return H


# --- graph6 ------------------------------------------------------------------

@pytest.mark.parametrize("G, code", [
    (complete(2), "A_"),
    (complete(4), "C~"),
    (cycle(5), "Dhc"),
    (Graph(np.zeros((1, 1), dtype=bool)), "@"),
])
def test_graph6_known_codes(G, code):
    assert encode_graph6(G) == code
    assert parse_graph6(code) == G


def test_graph6_matches_networkx_encoder():
    for G in (build_named("petersen"), hypercube(3), circulant(11, [1, 3])):
        assert encode_graph6(G) == nx.to_graph6_bytes(to_nx(G), header=False).decode().strip()


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_graph6_round_trip(G):
    assert parse_graph6(encode_graph6(G)) == G


def test_graph6_long_form_round_trip():
    G = circulant(70, [1, 5, 17])
    code = encode_graph6(G)
    assert code[0] == "~"
    assert parse_graph6(code) == G
    assert parse_graph6(">>graph6<<" + code + "\n") == G


@pytest.mark.parametrize("bad, offset", [
    ("A`", 1),            # padding bit set
    ("Dhcc", 1),          # one byte too many
    ("Dh", 1),            # one byte too few
    ("D h", 1),           # invalid character
    ("", 0),
    ("~??~", 0),          # long header for n < 63
])
def test_graph6_rejects_malformed(bad, offset):
    with pytest.raises(GraphFormatError) as info:
        parse_graph6(bad)
    assert info.value.offset is not None


def test_graph6_size_limit():
    with pytest.raises(GraphFormatError, match="not supported"):
        parse_graph6("~~??????")
    assert GRAPH6_MAX_N == 258047


# --- edge lists -------------------------------------------------------------

def test_edge_list_round_trip(petersen):
    assert parse_edge_list(format_edge_list(petersen)) == petersen


def test_edge_list_comments_and_duplicates():
    G = parse_edge_list("# a triangle\n3\n0 1\n\n1 2  # edge\n2 0\n1 0\n")
    assert G == complete(3)


@pytest.mark.parametrize("text, line", [
    ("3\n0 1\n0 3\n", 3),
    ("3\n0 0\n", 2),
    ("3\n0 1 2\n", 2),
    ("x\n", 1),
    ("3\n0 a\n", 2),
])
def test_edge_list_errors_carry_line_numbers(text, line):
    with pytest.raises(GraphFormatError) as info:
        parse_edge_list(text)
    assert info.value.offset == line


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(np.array([[0, 1], [0, 0]], dtype=bool))
    with pytest.raises(ValueError):
        Graph(np.eye(2, dtype=bool))
    G = complete(3)
    with pytest.raises(ValueError):
        G.adjacency[0, 1] = False


# --- families ---------------------------------------------------------------

@pytest.mark.parametrize("G, n, e", [
    (cycle(7), 7, 7),
    (complete(6), 6, 15),
    (complete_bipartite(2, 5), 7, 10),
    (hypercube(4), 16, 32),
    (odd_graph(4), 35, 70),
    (build_named("petersen"), 10, 15),
    (strong_product(hypercube(3), complete(2)), 16, 56),
    (tensor_with_ones2(cycle(8)), 16, 32),
])
def test_family_sizes(G, n, e):
    assert (G.n, G.e) == (n, e)


def test_petersen_is_the_petersen_graph(petersen):
    assert nx.is_isomorphic(to_nx(petersen), nx.petersen_graph())


def test_hypercube_matches_networkx():
    assert nx.is_isomorphic(to_nx(hypercube(4)), nx.hypercube_graph(4))


@pytest.mark.parametrize("family, params", [
    ("cycle", (2,)), ("hypercube", (0,)), ("odd_graph", (1,)), ("nope", ()), ("petersen", (3,)),
    ("circulant", (5, 0)),
])
def test_build_named_rejects(family, params):
    with pytest.raises(ValueError):
        build_named(family, *params)


# --- distances --------------------------------------------------------------

@settings(max_examples=120, deadline=None)
@given(graphs(max_n=12))
def test_bfs_agrees_with_matrix_powers(G):
    DD = distance_data(G)
    A = G.matrix(np.int64)
    reach = np.eye(G.n, dtype=bool)
    power = np.eye(G.n, dtype=np.int64)
    expected = np.where(reach, 0, -1)
    for i in range(1, G.n):
        power = np.minimum(power @ A, 1)
        new = (power > 0) & ~reach
        expected[new] = i
        reach |= new
    assert np.array_equal(DD.dist, expected)
    assert DD.connected == bool(reach.all())


@settings(max_examples=120, deadline=None)
@given(graphs(max_n=12))
def test_girth_and_bipartite_agree_with_networkx(G):
    DD = distance_data(G)
    H = to_nx(G)
    g = nx.girth(H)
    assert DD.girth == (None if g == float("inf") else g)
    assert DD.bipartite == nx.is_bipartite(H)
    if DD.connected:
        assert DD.D == nx.diameter(H)


def test_odd_girth_examples(petersen):
    assert distance_data(petersen).odd_girth == 5
    assert distance_data(odd_graph(4)).odd_girth == 7
    assert distance_data(hypercube(3)).odd_girth is None
    assert distance_data(cycle(9)).odd_girth == 9


def test_spheres_and_kbar(petersen):
    DD = distance_data(petersen)
    assert DD.k_bar.tolist() == [1, 3, 6]
    assert sorted(DD.sphere(0, 1).tolist()) == sorted(petersen.neighbors(0).tolist())
    assert np.array_equal(DD.distance_matrix(1), petersen.matrix())
