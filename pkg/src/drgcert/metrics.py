"""Combinatorial intersection statistics.

For an ordered pair (u, v) at distance i:

    c_i(u,v) = |S_{i-1}(u) & S_1(v)|,  a_i(u,v) = |S_i(u) & S_1(v)|,
    b_i(u,v) = |S_{i+1}(u) & S_1(v)|.

They are counted exactly as integers; averages run over ordered pairs, so
both orientations of a pair contribute.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import DistanceData, Graph
from .prepoly import PredistanceSystem
from .spectral import DisconnectedGraphError


@dataclass(frozen=True, eq=False)
class PairTables:
    """Per-pair counts indexed ``[u, v]``; entry refers to level dist(u, v)."""

    dist: np.ndarray
    c: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def at_level(self, i: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        mask = self.dist == i
        return self.c[mask], self.a[mask], self.b[mask]


def pairwise_intersection(G: Graph, DD: DistanceData) -> PairTables:
    if not DD.connected:
        raise DisconnectedGraphError("pairwise intersection numbers need a connected graph")
    n, D = G.n, DD.D
    A = G.adjacency.astype(np.int64)
    dist = DD.dist
    c = np.zeros((n, n), dtype=np.int64)
    a = np.zeros((n, n), dtype=np.int64)
    b = np.zeros((n, n), dtype=np.int64)
    cols = np.arange(n)
    for u in range(n):
        du = dist[u]
        # level counts of every vertex's neighbourhood, seen from u;
        # column 0 stands for level -1 and column D+2 for level D+1
        onehot = np.zeros((n, D + 3), dtype=np.int64)
        onehot[cols, du + 1] = 1
        counts = A @ onehot
        c[u] = counts[cols, du]
        a[u] = counts[cols, du + 1]
        b[u] = counts[cols, du + 2]
    for arr in (c, a, b):
        arr.setflags(write=False)
    return PairTables(dist, c, a, b)


@dataclass(frozen=True)
class LevelProfile:
    i: int
    pairs: int
    c_bar: float
    a_bar: float
    b_bar: float
    c_sq: float
    a_sq: float
    b_sq: float
    k_bar_i: float
    c_val: Optional[int]
    a_val: Optional[int]
    b_val: Optional[int]
    k_val: Optional[int]
    c_max: int

    @property
    def c_defined(self) -> bool:
        return self.c_val is not None

    @property
    def a_defined(self) -> bool:
        return self.a_val is not None

    @property
    def b_defined(self) -> bool:
        return self.b_val is not None

    @property
    def k_defined(self) -> bool:
        return self.k_val is not None

    def to_dict(self) -> dict:
        return {
            "i": self.i, "pairs": self.pairs,
            "c_bar": self.c_bar, "a_bar": self.a_bar, "b_bar": self.b_bar,
            "c_sq": self.c_sq, "a_sq": self.a_sq, "b_sq": self.b_sq,
            "k_bar": self.k_bar_i,
            "c": self.c_val, "a": self.a_val, "b": self.b_val, "k": self.k_val,
        }


def _common(values: np.ndarray) -> Optional[int]:
    if values.size and values.min() == values.max():
        return int(values[0])
    return None


def level_profiles(tables: PairTables, DD: DistanceData) -> list[LevelProfile]:
    out = []
    n = tables.dist.shape[0]
    for i in range(DD.D + 1):
        c, a, b = tables.at_level(i)
        cnt = c.size
        out.append(LevelProfile(
            i=i,
            pairs=cnt,
            c_bar=int(c.sum()) / cnt,
            a_bar=int(a.sum()) / cnt,
            b_bar=int(b.sum()) / cnt,
            c_sq=int((c * c).sum()) / cnt,
            a_sq=int((a * a).sum()) / cnt,
            b_sq=int((b * b).sum()) / cnt,
            k_bar_i=cnt / n,
            c_val=_common(c),
            a_val=_common(a),
            b_val=_common(b),
            k_val=_common(DD.k_of[:, i]),
            c_max=int(c.max()),
        ))
    return out


def matrix_norm_identity(G: Graph, DD: DistanceData, i: int,
                         profiles: Optional[list[LevelProfile]] = None) -> tuple[float, float]:
    """Both sides of ||A A_i||^2 = kbar_{i-1} b2_{i-1} + kbar_i a2_i + kbar_{i+1} c2_{i+1}.

    The left side is a matrix product, the right side comes from the
    combinatorial level profiles; ||M||^2 = sum(M o M) / n.
    """
    if not 0 <= i <= DD.D:
        raise ValueError(f"level {i} outside 0..{DD.D}")
    if profiles is None:
        profiles = level_profiles(pairwise_intersection(G, DD), DD)
    AAi = G.matrix() @ DD.distance_matrix(i)
    lhs = float((AAi * AAi).sum()) / G.n
    rhs = profiles[i].k_bar_i * profiles[i].a_sq
    if i > 0:
        rhs += profiles[i - 1].k_bar_i * profiles[i - 1].b_sq
    if i < DD.D:
        rhs += profiles[i + 1].k_bar_i * profiles[i + 1].c_sq
    return lhs, rhs


def predistance_matrices(G: Graph, P: PredistanceSystem, m: int) -> list[np.ndarray]:
    """p_0(A), ..., p_m(A) by the matrix form of the three-term recurrence."""
    if not 0 <= m <= P.d:
        raise ValueError(f"m = {m} outside 0..{P.d}")
    A = G.matrix()
    mats = [np.eye(G.n)]
    for i in range(m):
        nxt = A @ mats[i] - P.alpha[i] * mats[i]
        if i > 0:
            nxt -= P.beta[i - 1] * mats[i - 1]
        mats.append(nxt / P.gamma[i + 1])
    return mats


def pm_of_A(G: Graph, P: PredistanceSystem, m: int, DD: DistanceData) -> tuple[np.ndarray, float]:
    """p_m(A) and the residual (1/n) sum (p_m(A) - A_m)^2."""
    Pm = predistance_matrices(G, P, m)[-1]
    diff = Pm - DD.distance_matrix(m)
    return Pm, float((diff * diff).sum()) / G.n


@dataclass(frozen=True)
class WalkQuantities:
    level: int
    walk_avg: Optional[float]
    ac_avg: Optional[float]
    girth_ok: bool
    walks: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        return {"level": self.level, "walk_avg": self.walk_avg, "ac_avg": self.ac_avg,
                "girth_condition": self.girth_ok}


def walk_quantities(G: Graph, DD: DistanceData, P: PredistanceSystem,
                    tables: Optional[PairTables] = None) -> WalkQuantities:
    """Average number of d-walks between vertices at distance d-1, and the
    average of a_{d-1}(u,v) c_{d-1}(u,v) over the same pairs.

    The two coincide when girth >= 2d-2. ``walks`` holds (A^d)_{uv} for the
    distance-(d-1) pairs, in row-major order.
    """
    d = P.d
    level = d - 1
    girth_ok = DD.girth is None or DD.girth >= 2 * d - 2
    mask = DD.dist == level
    if not mask.any():
        return WalkQuantities(level, None, None, girth_ok)
    if tables is None:
        tables = pairwise_intersection(G, DD)
    Ad = np.linalg.matrix_power(G.matrix(), d)
    walks = Ad[mask]
    ac = (tables.a[mask] * tables.c[mask]).astype(np.float64)
    return WalkQuantities(level, float(walks.mean()), float(ac.mean()), girth_ok, walks)
