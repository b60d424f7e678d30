"""Graph representation, input formats, named families and distance structure.

Vertices are always ``0..n-1``. A :class:`Graph` is immutable once built; the
adjacency matrix is stored as a read-only boolean array so it can be shared
freely between threads and processes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

# Distance recorded for pairs in different components.
UNREACHABLE = -1

GRAPH6_MAX_N = 258047

FAMILIES = (
    "cycle",
    "complete",
    "complete_bipartite",
    "hypercube",
    "odd_graph",
    "petersen",
    "circulant",
    "fixture",
)


class GraphFormatError(ValueError):
    """Raised when graph input text cannot be decoded.

    ``offset`` is the byte offset (graph6) or 1-based line number
    (edge list) at which the problem was detected, when known.
    """

    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message} (at {offset})"
        super().__init__(message)
        self.offset = offset


@dataclass(frozen=True, eq=False)
class Graph:
    adjacency: np.ndarray
    label: str = ""

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be a square matrix")
        if adj.shape[0] < 1:
            raise ValueError("a graph needs at least one vertex")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], label: str = "") -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u, v] = adj[v, u] = True
        return cls(adj, label)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @cached_property
    def e(self) -> int:
        return int(self.adjacency.sum()) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1).astype(np.int64)

    @cached_property
    def edges(self) -> np.ndarray:
        """``(e, 2)`` array of edges ``u < v`` in lexicographic order."""
        u, v = np.nonzero(np.triu(self.adjacency, 1))
        return np.column_stack([u, v])

    def neighbors(self, u: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[u])

    def matrix(self, dtype=np.float64) -> np.ndarray:
        return self.adjacency.astype(dtype)

    def is_connected(self) -> bool:
        ncomp, _ = connected_components(csr_matrix(self.adjacency), directed=False)
        return ncomp == 1

    def relabel(self, label: str) -> "Graph":
        return Graph(self.adjacency, label)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash(self.adjacency.tobytes())

    def __repr__(self):
        name = f" {self.label!r}" if self.label else ""
        return f"<Graph{name} n={self.n} e={self.e}>"


# ----------------------------------------------------------------------------
# graph6


def _graph6_size(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= GRAPH6_MAX_N:
        return bytes([126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)])
    raise ValueError(f"graph6 output limited to n <= {GRAPH6_MAX_N}")


def encode_graph6(G: Graph) -> str:
    n = G.n
    iu, ju = np.triu_indices(n, 1)
    # graph6 walks the upper triangle column by column
    order = np.lexsort((iu, ju))
    bits = G.adjacency[iu[order], ju[order]].astype(np.uint8)
    pad = (-len(bits)) % 6
    bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)]).reshape(-1, 6)
    chunks = bits @ (1 << np.arange(5, -1, -1))
    return (_graph6_size(n) + bytes((chunks + 63).tolist())).decode("ascii")


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line.

    The optional ``>>graph6<<`` header and surrounding whitespace are
    ignored. Padding bits in the final byte must be zero.
    """
    s = text.strip()
    start = 0
    if s.startswith(">>graph6<<"):
        start = len(">>graph6<<")
    data = s.encode("ascii", errors="replace")
    for pos in range(start, len(data)):
        if not 63 <= data[pos] <= 126:
            raise GraphFormatError(f"invalid graph6 character {s[pos]!r}", pos)
    if len(data) <= start:
        raise GraphFormatError("empty graph6 string", start)

    pos = start
    if data[pos] != 126:
        n = data[pos] - 63
        pos += 1
    else:
        if pos + 1 < len(data) and data[pos + 1] == 126:
            raise GraphFormatError(f"graph6 sizes above {GRAPH6_MAX_N} are not supported", pos)
        if len(data) < pos + 4:
            raise GraphFormatError("truncated graph6 size header", pos)
        n = 0
        for b in data[pos + 1:pos + 4]:
            n = (n << 6) | (b - 63)
        if n < 63:
            raise GraphFormatError("non-canonical long-form size header", pos)
        pos += 4
    if n < 1:
        raise GraphFormatError("graph6 graph with no vertices", start)

    nbits = n * (n - 1) // 2
    nbytes = math.ceil(nbits / 6)
    body = data[pos:]
    if len(body) != nbytes:
        raise GraphFormatError(
            f"expected {nbytes} data bytes for n={n}, found {len(body)}", pos + min(len(body), nbytes)
        )
    vals = np.frombuffer(body, dtype=np.uint8).astype(np.int64) - 63
    bits = ((vals[:, None] >> np.arange(5, -1, -1)) & 1).ravel()
    if bits[nbits:].any():
        raise GraphFormatError("nonzero padding bits", pos + nbytes - 1)

    iu, ju = np.triu_indices(n, 1)
    order = np.lexsort((iu, ju))
    adj = np.zeros((n, n), dtype=bool)
    on = bits[:nbits].astype(bool)
    adj[iu[order][on], ju[order][on]] = True
    return Graph(adj | adj.T)


# ----------------------------------------------------------------------------
# edge lists


def parse_edge_list(text: str, label: str = "") -> Graph:
    """Parse ``n`` on the first line followed by ``u v`` lines (0-indexed).

    Blank lines and ``#`` comments are skipped; repeated edges collapse.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise GraphFormatError("empty edge list")
    lineno, head = rows[0]
    if len(head) != 1 or not head[0].isdigit():
        raise GraphFormatError("first line must be the vertex count", lineno)
    n = int(head[0])
    if n < 1:
        raise GraphFormatError("vertex count must be positive", lineno)
    adj = np.zeros((n, n), dtype=bool)
    for lineno, parts in rows[1:]:
        if len(parts) != 2:
            raise GraphFormatError("expected 'u v'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError("vertex indices must be integers", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex index out of range 0..{n - 1}", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        adj[u, v] = adj[v, u] = True
    return Graph(adj, label)


def format_edge_list(G: Graph) -> str:
    return f"{G.n}\n" + "".join(f"{u} {v}\n" for u, v in G.edges.tolist())


# ----------------------------------------------------------------------------
# families and products


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)), f"C{n}")


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph(~np.eye(n, dtype=bool), f"K{n}")


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise ValueError("complete bipartite graph needs a, b >= 1")
    adj = np.zeros((a + b, a + b), dtype=bool)
    adj[:a, a:] = adj[a:, :a] = True
    return Graph(adj, f"K{a},{b}")


def hypercube(q: int) -> Graph:
    if q < 1:
        raise ValueError("hypercube needs q >= 1")
    n = 1 << q
    x = np.arange(n)
    diff = x[:, None] ^ x[None, :]
    adj = (diff != 0) & ((diff & (diff - 1)) == 0)
    return Graph(adj, f"Q{q}")


def odd_graph(k: int) -> Graph:
    """Odd graph O_k: (k-1)-subsets of a (2k-1)-set, adjacent when disjoint."""
    if k < 2:
        raise ValueError("odd graph needs k >= 2")
    subsets = [frozenset(c) for c in itertools.combinations(range(2 * k - 1), k - 1)]
    masks = np.array([sum(1 << i for i in s) for s in subsets], dtype=np.int64)
    adj = (masks[:, None] & masks[None, :]) == 0
    np.fill_diagonal(adj, False)
    return Graph(adj, f"O{k}")


def circulant(n: int, jumps: Sequence[int]) -> Graph:
    if n < 2:
        raise ValueError("circulant needs n >= 2")
    offsets = {j % n for j in jumps} | {-j % n for j in jumps}
    offsets.discard(0)
    if not offsets:
        raise ValueError("circulant needs at least one nonzero jump")
    x = np.arange(n)
    diff = (x[None, :] - x[:, None]) % n
    adj = np.isin(diff, sorted(offsets))
    return Graph(adj, f"Circ({n};{','.join(map(str, sorted(set(j % n for j in jumps))))})")


def strong_product(G: Graph, H: Graph) -> Graph:
    """(u,a)~(v,b) iff u~v or u=v, and a~b or a=b, excluding equal pairs."""
    AG = G.adjacency | np.eye(G.n, dtype=bool)
    AH = H.adjacency | np.eye(H.n, dtype=bool)
    adj = np.kron(AG, AH).astype(bool)
    np.fill_diagonal(adj, False)
    return Graph(adj, f"{G.label or 'G'}[x]{H.label or 'H'}")


def tensor_with_ones2(G: Graph) -> Graph:
    """Graph with adjacency ``A (x) J_2``: (u,a)~(v,b) iff u~v."""
    adj = np.kron(G.adjacency, np.ones((2, 2), dtype=bool)).astype(bool)
    return Graph(adj, f"{G.label or 'G'}(x)J2")


def build_named(family: str, *params) -> Graph:
    """Build a graph of a named family.

    ``fixture`` takes either a path to an edge-list file or the stem of a
    bundled fixture (``hoffman``, ``perkel``); it is validated on load.
    """
    family = family.lower().replace("-", "_")
    try:
        if family == "cycle":
            (n,) = params
            return cycle(int(n))
        if family == "complete":
            (n,) = params
            return complete(int(n))
        if family == "complete_bipartite":
            a, b = params
            return complete_bipartite(int(a), int(b))
        if family == "hypercube":
            (q,) = params
            return hypercube(int(q))
        if family == "odd_graph":
            (k,) = params
            return odd_graph(int(k))
        if family == "petersen":
            if params:
                raise ValueError("petersen takes no parameters")
            return odd_graph(3).relabel("Petersen")
        if family == "circulant":
            n, *jumps = params
            return circulant(int(n), [int(j) for j in jumps])
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad parameters for {family}: {params!r} ({exc})") from None
    if family == "fixture":
        from .fixtures import load_fixture

        (path,) = params
        return load_fixture(path)
    raise ValueError(f"unknown graph family {family!r}; expected one of {', '.join(FAMILIES)}")


# ----------------------------------------------------------------------------
# distance structure


@dataclass(frozen=True, eq=False)
class DistanceData:
    dist: np.ndarray
    connected: bool
    D: int
    k_of: np.ndarray
    girth: Optional[int]
    odd_girth: Optional[int]
    bipartite: bool
    regular: bool
    valency: Optional[int]
    k_bar: np.ndarray = field(repr=False)

    def sphere(self, u: int, i: int) -> np.ndarray:
        return np.flatnonzero(self.dist[u] == i)

    def distance_matrix(self, i: int) -> np.ndarray:
        """0/1 matrix of the distance-i graph."""
        return (self.dist == i).astype(np.float64)

    @property
    def k_defined(self) -> np.ndarray:
        return (self.k_of == self.k_of[0]).all(axis=0)


def _cycle_lengths(dist: np.ndarray, edges: np.ndarray, n: int) -> tuple[Optional[int], Optional[int]]:
    """Girth and odd-girth from BFS layers.

    From each root r: an edge inside one layer closes an odd walk of length
    2 dist + 1; a vertex with two parents closes an even cycle of length
    2 dist. The minima over all roots are exact.
    """
    girth = odd = math.inf
    if len(edges) == 0:
        return None, None
    eu, ev = edges[:, 0], edges[:, 1]
    for r in range(n):
        dr = dist[r]
        du, dv = dr[eu], dr[ev]
        ok = (du >= 0) & (dv >= 0)
        same = ok & (du == dv)
        if same.any():
            odd = min(odd, 2 * int(du[same].min()) + 1)
        down = ok & (dv == du + 1)
        up = ok & (du == dv + 1)
        children = np.concatenate([ev[down], eu[up]])
        if len(children):
            parents = np.bincount(children, minlength=n)
            multi = parents >= 2
            if multi.any():
                girth = min(girth, 2 * int(dr[multi].min()))
    girth = min(girth, odd)
    as_opt = lambda x: None if x == math.inf else int(x)
    return as_opt(girth), as_opt(odd)


def distance_data(G: Graph) -> DistanceData:
    n = G.n
    raw = shortest_path(csr_matrix(G.adjacency.astype(np.int8)), method="D", unweighted=True)
    finite = np.isfinite(raw)
    dist = np.where(finite, raw, UNREACHABLE).astype(np.int64)
    dist.setflags(write=False)
    connected = bool(finite.all())
    D = int(dist.max())
    k_of = np.stack([(dist == i).sum(axis=1) for i in range(D + 1)], axis=1).astype(np.int64)
    k_of.setflags(write=False)
    k_bar = k_of.sum(axis=0) / n
    girth, odd = _cycle_lengths(dist, G.edges, n)
    deg = G.degrees
    regular = bool((deg == deg[0]).all())
    return DistanceData(
        dist=dist,
        connected=connected,
        D=D,
        k_of=k_of,
        girth=girth,
        odd_girth=odd,
        bipartite=odd is None,
        regular=regular,
        valency=int(deg[0]) if regular else None,
        k_bar=k_bar,
    )
