"""Adjacency spectra: dense eigensolve, clustering into distinct eigenvalues,
and trace-moment sanity checks."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .graph import Graph


class DisconnectedGraphError(ValueError):
    pass


class SpectrumError(RuntimeError):
    """The computed spectrum failed a consistency check."""


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances.

    ``eig_cluster`` and ``residual`` default to values scaled by the graph
    (see :meth:`eig_threshold` and :meth:`residual_bound`); set them to fix
    an absolute value instead.
    """

    eig_cluster: Optional[float] = None
    eq_band: float = 1e-6
    residual: Optional[float] = None
    strict_marginal: bool = False

    def __post_init__(self):
        for name in ("eig_cluster", "eq_band", "residual"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ValueError(f"{name} must be strictly positive, got {val!r}")

    def eig_threshold(self, n: int, lam0: float) -> float:
        if self.eig_cluster is not None:
            return self.eig_cluster
        return 1e-8 * max(1.0, abs(lam0)) * n

    def residual_bound(self, n: int) -> float:
        if self.residual is not None:
            return self.residual
        return 1e-7 * n

    def resolved(self, n: int, lam0: float) -> dict:
        return {
            "eig_cluster": self.eig_threshold(n, lam0),
            "eq_band": self.eq_band,
            "residual": self.residual_bound(n),
        }

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "ToleranceConfig":
        """Read ``DRGCERT_TOL_EIG``, ``DRGCERT_TOL_EQ``, ``DRGCERT_TOL_RESIDUAL``;
        explicit non-None ``overrides`` win."""
        env = os.environ if environ is None else environ
        values = {}
        for key, var in (("eig_cluster", "DRGCERT_TOL_EIG"), ("eq_band", "DRGCERT_TOL_EQ"),
                         ("residual", "DRGCERT_TOL_RESIDUAL")):
            if env.get(var):
                values[key] = float(env[var])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_(self, **changes) -> "ToleranceConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class Spectrum:
    distinct: tuple[float, ...]
    mult: tuple[int, ...]
    marginal: bool = False
    threshold: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.distinct) != len(self.mult) or not self.distinct:
            raise ValueError("distinct eigenvalues and multiplicities must be nonempty and aligned")
        if any(m < 1 for m in self.mult):
            raise ValueError("multiplicities must be positive")
        if any(a <= b for a, b in zip(self.distinct, self.distinct[1:])):
            raise ValueError("distinct eigenvalues must be strictly decreasing")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, int]]) -> "Spectrum":
        pairs = sorted(pairs, key=lambda p: -p[0])
        return cls(tuple(float(l) for l, _ in pairs), tuple(int(m) for _, m in pairs))

    @property
    def n(self) -> int:
        return sum(self.mult)

    @property
    def d(self) -> int:
        return len(self.distinct) - 1

    @property
    def lambda0(self) -> float:
        return self.distinct[0]

    @property
    def x(self) -> np.ndarray:
        return np.asarray(self.distinct, dtype=np.float64)

    @property
    def weights(self) -> np.ndarray:
        """m_j / n, the weights of the spectral inner product."""
        return np.asarray(self.mult, dtype=np.float64) / self.n

    def expanded(self) -> np.ndarray:
        return np.repeat(self.x, self.mult)

    def moment(self, k: int) -> float:
        return float(np.dot(self.mult, self.x ** k))

    def same_as(self, other: "Spectrum", tol: float) -> bool:
        return self.mult == other.mult and bool(
            np.all(np.abs(self.x - other.x) <= tol))

    def to_dict(self) -> dict:
        return {"distinct": list(self.distinct), "mult": list(self.mult)}


def eigen_decompose(G: Graph) -> np.ndarray:
    """All n adjacency eigenvalues in descending order."""
    if G.n == 0:
        raise ValueError("empty graph")
    if not G.is_connected():
        raise DisconnectedGraphError(f"graph {G.label!r} is disconnected")
    return np.linalg.eigvalsh(G.matrix())[::-1].copy()


def cluster_spectrum(raw: Sequence[float], tol: ToleranceConfig = ToleranceConfig()) -> Spectrum:
    """Merge neighbouring eigenvalues closer than the clustering threshold.

    Each cluster is represented by its mean. The spectrum is flagged
    ``marginal`` when any raw gap lies within a factor 10 of the threshold
    on either side, since then the clustering could plausibly go either way.
    """
    raw = np.sort(np.asarray(raw, dtype=np.float64))[::-1]
    if raw.size == 0:
        raise ValueError("no eigenvalues to cluster")
    thresh = tol.eig_threshold(raw.size, raw[0])
    gaps = raw[:-1] - raw[1:]
    cuts = np.flatnonzero(gaps > thresh) + 1
    groups = np.split(raw, cuts)
    marginal = bool(np.any((gaps > thresh / 10) & (gaps < thresh * 10)))
    return Spectrum(
        distinct=tuple(float(g.mean()) for g in groups),
        mult=tuple(len(g) for g in groups),
        marginal=marginal,
        threshold=thresh,
    )


def count_triangles(G: Graph) -> int:
    eu, ev = G.edges[:, 0], G.edges[:, 1]
    common = (G.adjacency[eu] & G.adjacency[ev]).sum()
    return int(common) // 3


@dataclass(frozen=True)
class MomentReport:
    moments: tuple[float, float, float]
    expected: tuple[int, int, int]
    within: tuple[bool, bool, bool]
    bounds: tuple[float, float, float]

    @property
    def ok(self) -> bool:
        return all(self.within)

    def to_dict(self) -> dict:
        return {"moments": list(self.moments), "expected": list(self.expected),
                "within": list(self.within)}


def moment_sanity(S: Spectrum, G: Graph, tol: ToleranceConfig = ToleranceConfig()) -> MomentReport:
    """Compare sum m_i lambda_i^k, k = 1..3, with 0, 2e and 6 * #triangles."""
    expected = (0, 2 * G.e, 6 * count_triangles(G))
    moments, within, bounds = [], [], []
    res = tol.residual_bound(S.n)
    for k, exp in zip((1, 2, 3), expected):
        got = S.moment(k)
        # scale by the absolute moment so large spectra are not held to absolute error
        bound = res * max(1.0, float(np.dot(S.mult, np.abs(S.x) ** k)))
        moments.append(got)
        bounds.append(bound)
        within.append(abs(got - exp) <= bound)
    return MomentReport(tuple(moments), expected, tuple(within), tuple(bounds))


def spectrum_of(G: Graph, tol: ToleranceConfig = ToleranceConfig()) -> Spectrum:
    return cluster_spectrum(eigen_decompose(G), tol)
