"""Deterministic test corpus: named families, random circulants, random
regular graphs and product constructions."""

from __future__ import annotations

import math
from typing import Iterator

import networkx as nx
import numpy as np

from .graph import (
    Graph,
    build_named,
    circulant,
    complete,
    complete_bipartite,
    cycle,
    hypercube,
    odd_graph,
    strong_product,
    tensor_with_ones2,
)

DEFAULT_SEED = 20240601


def from_networkx(H: nx.Graph, label: str) -> Graph:
    H = nx.convert_node_labels_to_integers(H)
    return Graph.from_edges(H.number_of_nodes(), H.edges(), label)


def named_graphs() -> list[Graph]:
    out = [cycle(n) for n in range(3, 21)]
    out += [complete(n) for n in range(2, 13)]
    out += [complete_bipartite(a, b) for a in range(1, 7) for b in range(a, 7) if a + b > 2]
    out += [hypercube(q) for q in range(1, 5)]
    out += [build_named("petersen"), odd_graph(4), build_named("fixture", "perkel"),
            build_named("fixture", "hoffman")]
    return out


def random_circulants(count: int, rng: np.random.Generator) -> list[Graph]:
    out: list[Graph] = []
    seen = set()
    while len(out) < count:
        n = int(rng.integers(5, 31))
        half = n // 2
        k = int(rng.integers(1, min(4, half) + 1))
        jumps = tuple(sorted(int(j) for j in rng.choice(np.arange(1, half + 1), size=k, replace=False)))
        if math.gcd(n, *jumps) != 1 or (n, jumps) in seen:
            continue
        seen.add((n, jumps))
        out.append(circulant(n, jumps))
    return out


def random_regular(count: int, rng: np.random.Generator, max_n: int = 48) -> list[Graph]:
    out = []
    while len(out) < count:
        k = int(rng.choice([3, 4]))
        n = int(rng.integers(k + 1, max_n + 1))
        if (n * k) % 2:
            continue
        seed = int(rng.integers(2**31))
        H = nx.random_regular_graph(k, n, seed=seed)
        if not nx.is_connected(H):
            continue
        out.append(from_networkx(H, f"rr{k}-n{n}-s{seed}"))
    return out


def kronecker_graphs() -> list[Graph]:
    bases = [cycle(4), cycle(6), cycle(8), cycle(10), cycle(12), hypercube(2), hypercube(3), hypercube(4),
             complete_bipartite(3, 3), complete_bipartite(4, 4)]
    return [tensor_with_ones2(G) for G in bases]


def strong_products() -> list[Graph]:
    small = [complete(2), complete(3), cycle(4), cycle(5), hypercube(3), build_named("petersen")]
    out = [strong_product(hypercube(3), complete(2))]
    for i, G in enumerate(small):
        for H in small[i:]:
            if G.n * H.n <= 100:
                out.append(strong_product(G, H))
    return out


def build_corpus(seed: int = DEFAULT_SEED, n_circulants: int = 150, n_regular: int = 300) -> list[Graph]:
    """At least 500 connected graphs with distinct labels, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    graphs = named_graphs() + kronecker_graphs() + strong_products()
    graphs += random_circulants(n_circulants, rng)
    graphs += random_regular(n_regular, rng)
    return graphs


def iter_corpus(seed: int = DEFAULT_SEED) -> Iterator[Graph]:
    yield from build_corpus(seed)
