"""Predistance polynomials and preintersection numbers.

Polynomials of degree <= d are stored by their values at the d+1 distinct
eigenvalues; a degree-d polynomial is determined by them, every quantity we
need is an evaluation or an inner product, and pointwise arithmetic keeps
the recurrence well conditioned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .spectral import Spectrum, SpectrumError, ToleranceConfig


class DegenerateSpectrumError(SpectrumError):
    pass


class NotApplicableError(ValueError):
    pass


def spectral_inner_product(p, q, S: Spectrum) -> float:
    """<p, q> = (1/n) sum_j m_j p(lambda_j) q(lambda_j)."""
    return float(np.dot(S.weights, np.asarray(p, dtype=np.float64) * np.asarray(q, dtype=np.float64)))


@dataclass(frozen=True, eq=False)
class PredistanceSystem:
    """Predistance polynomials p_0..p_d and their recurrence coefficients.

    ``values[i, j]`` is p_i(lambda_j). The recurrence is
    ``x p_i = beta[i-1] p_{i-1} + alpha[i] p_i + gamma[i+1] p_{i+1}`` with
    ``gamma[0] = beta[d] = 0``.
    """

    spectrum: Spectrum
    values: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    @property
    def d(self) -> int:
        return self.spectrum.d

    @property
    def p_at_lambda0(self) -> np.ndarray:
        return self.values[:, 0]

    @property
    def norms(self) -> np.ndarray:
        return self.values ** 2 @ self.spectrum.weights

    @property
    def leading(self) -> np.ndarray:
        """omega_i = 1 / (gamma_1 ... gamma_i)."""
        return 1.0 / np.concatenate([[1.0], np.cumprod(self.gamma[1:])])

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha.tolist(),
            "beta": self.beta.tolist(),
            "gamma": self.gamma.tolist(),
            "p_lambda0": self.p_at_lambda0.tolist(),
            "leading": self.leading.tolist(),
            "values": self.values.tolist(),
        }


def _jacobi(x: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthonormal recurrence for the discrete measure sum_j w_j delta(lambda_j).

    Lanczos on diag(x) started from sqrt(w), with full re-orthogonalisation.
    Returns diagonal ``a`` (d+1), off-diagonal ``b`` (d; b[i] couples i and
    i+1) and the orthonormal basis ``Q`` whose row i holds
    sqrt(w_j) P_i(lambda_j).
    """
    size = x.size
    Q = np.zeros((size, size))
    a = np.zeros(size)
    b = np.zeros(size - 1)
    Q[0] = np.sqrt(w)
    for i in range(size):
        v = x * Q[i]
        a[i] = np.dot(Q[i], v)
        if i == size - 1:
            break
        v -= a[i] * Q[i]
        if i > 0:
            v -= b[i - 1] * Q[i - 1]
        for _ in range(2):
            v -= (Q[:i + 1] @ v) @ Q[:i + 1]
        nv = np.linalg.norm(v)
        if nv <= 1e-13 * max(1.0, float(np.max(np.abs(x)))):
            raise DegenerateSpectrumError(f"recurrence broke down at step {i + 1}")
        b[i] = nv
        Q[i + 1] = v / nv
    return a, b, Q


def _values_at_top(a: np.ndarray, b: np.ndarray, lam0: float) -> np.ndarray:
    """P_i(lambda_0) for the orthonormal polynomials, i = 0..d.

    lambda_0 is a zero of P_{d+1}, so (P_0(lambda_0), ..., P_d(lambda_0))
    is the decaying solution of the recurrence; running it downwards from
    P_{d+1} = 0 keeps full relative accuracy even for entries far below
    machine epsilon. Logs avoid overflow.
    """
    d = a.size - 1
    logt = np.zeros(d + 1)
    t_next, t_cur = 0.0, 1.0
    shift = 0.0
    for i in range(d, 0, -1):
        t_prev = ((lam0 - a[i]) * t_cur - (b[i] * t_next if i < d else 0.0)) / b[i - 1]
        if not t_prev > 0:
            raise DegenerateSpectrumError(f"non-positive predistance value at lambda_0 (step {i - 1})")
        t_next, t_cur = t_cur, t_prev
        if t_cur > 1e100:
            t_next /= t_cur
            shift += np.log(t_cur)
            t_cur = 1.0
        logt[i - 1] = shift + np.log(t_cur)
    return np.exp(logt - logt[0])


def predistance_system(S: Spectrum) -> PredistanceSystem:
    """Predistance polynomials of a spectrum.

    The orthonormal recurrence (a_i, b_i) comes from a re-orthogonalised
    Lanczos sweep; the normalisation ||p_i||^2 = p_i(lambda_0) then fixes
    p_i = s_i P_i with s_i = P_i(lambda_0), giving

        alpha_i = a_i,  gamma_{i+1} = b_i s_i / s_{i+1},  beta_i = b_i s_{i+1} / s_i.

    This is the same system the plain value recurrence produces, but the
    plain version loses p_i(lambda_0) to cancellation once it falls below
    ~1e-16 relative to the rest of the table, which happens routinely for
    spectra with many distinct eigenvalues.
    """
    d = S.d
    if d < 1:
        raise DegenerateSpectrumError("need at least two distinct eigenvalues (d >= 1)")
    if S.mult[0] != 1:
        raise DegenerateSpectrumError(
            f"largest eigenvalue has multiplicity {S.mult[0]}; not the spectrum of a connected graph")
    x, w = S.x, S.weights
    a, b, Q = _jacobi(x, w)
    s = _values_at_top(a, b, S.lambda0)

    alpha = a.copy()
    gamma = np.zeros(d + 1)
    beta = np.zeros(d + 1)
    gamma[1:] = b * s[:-1] / s[1:]
    beta[:-1] = b * s[1:] / s[:-1]
    V = s[:, None] * Q / np.sqrt(w)[None, :]
    V[:, 0] = s * s
    V[0] = 1.0

    V.setflags(write=False)
    for arr in (alpha, beta, gamma):
        arr.setflags(write=False)
    return PredistanceSystem(S, V, alpha, beta, gamma)


@dataclass(frozen=True)
class HoffmanData:
    values: np.ndarray
    pi0: float
    leading: float


def hoffman_values(S: Spectrum) -> HoffmanData:
    """Hoffman polynomial H = n prod_{j>=1}(x - lambda_j) / pi_0 at the eigenvalues."""
    x = S.x
    pi0 = float(np.prod(x[0] - x[1:]))
    vals = np.zeros(S.d + 1)
    vals[0] = S.n
    return HoffmanData(vals, pi0, S.n / pi0)


def recurrence_matrix(P: PredistanceSystem, verify: bool = False,
                      tol: ToleranceConfig = ToleranceConfig()) -> np.ndarray:
    """Tridiagonal R with diagonal alpha, superdiagonal gamma_1..gamma_d and
    subdiagonal beta_0..beta_{d-1}.

    With ``verify`` the eigenvalues of R are compared to the distinct
    eigenvalues of the spectrum and a mismatch raises :class:`SpectrumError`.
    """
    d = P.d
    R = np.diag(P.alpha) + np.diag(P.gamma[1:], 1) + np.diag(P.beta[:d], -1)
    if verify:
        err = recurrence_eigen_error(P)
        bound = tol.residual_bound(P.spectrum.n) * max(1.0, abs(P.spectrum.lambda0))
        if err > bound:
            raise SpectrumError(f"recurrence matrix eigenvalues off by {err:.3e} (> {bound:.3e})")
    return R


def recurrence_eigenvalues(P: PredistanceSystem) -> np.ndarray:
    # beta_i * gamma_{i+1} > 0, so R is similar to a symmetric Jacobi matrix
    off = np.sqrt(P.beta[:P.d] * P.gamma[1:])
    return eigvalsh_tridiagonal(np.asarray(P.alpha), off)[::-1]


def recurrence_eigen_error(P: PredistanceSystem) -> float:
    return float(np.max(np.abs(recurrence_eigenvalues(P) - P.spectrum.x)))


def divided_difference(x: np.ndarray, y: np.ndarray) -> float:
    """Highest-order Newton divided difference of the points (x_k, y_k)."""
    table = np.array(y, dtype=np.float64)
    for k in range(1, len(x)):
        table = (table[1:] - table[:-1]) / (x[k:] - x[:-k])
    return float(table[0])


def leading_terms(P: PredistanceSystem, i: int) -> tuple[float, float]:
    """Coefficients of x^i and x^{i-1} in p_i, recovered by interpolation.

    For a polynomial of degree <= i with top coefficients (c_i, c_{i-1}),
    the divided difference over x_0..x_i is c_i and over x_0..x_{i-1} it is
    c_{i-1} + c_i (x_0 + ... + x_{i-1}).
    """
    x, vals = P.spectrum.x, P.values[i]
    lead = divided_difference(x[:i + 1], vals[:i + 1])
    if i == 0:
        return lead, 0.0
    lower = divided_difference(x[:i], vals[:i])
    return lead, lower - lead * float(np.sum(x[:i]))


def _close(a: float, b: float, band: float) -> bool:
    return abs(a - b) <= band


def girth_from_preintersection(P: PredistanceSystem, eq_band: float = 1e-6) -> Optional[int]:
    """Girth of a regular graph read off the preintersection numbers.

    Girth 2m+1 when alpha_0..alpha_{m-1} = 0, alpha_m != 0 and
    gamma_1..gamma_m = 1; girth 2m when alpha_0..alpha_{m-1} = 0,
    gamma_1..gamma_{m-1} = 1 and gamma_m > 1. ``None`` means acyclic.
    """
    a, g = P.alpha, P.gamma
    if not _close(g[1], 1.0, eq_band):
        raise NotApplicableError(f"gamma_1 = {g[1]!r} != 1: the graph is not regular")
    for m in range(1, P.d + 1):
        # invariant here: alpha_0..alpha_{m-1} = 0 and gamma_1..gamma_{m-1} = 1
        if g[m] > 1.0 + eq_band:
            return 2 * m
        if g[m] < 1.0 - eq_band:
            raise SpectrumError(f"gamma_{m} = {g[m]!r} < 1 after a tree-like prefix")
        if not _close(a[m], 0.0, eq_band):
            return 2 * m + 1
    return None


def odd_girth_from_preintersection(P: PredistanceSystem, eq_band: float = 1e-6) -> Optional[int]:
    """2m+1 for the least m with alpha_m != 0; ``None`` when bipartite."""
    nonzero = np.flatnonzero(np.abs(P.alpha) > eq_band)
    if nonzero.size == 0:
        return None
    return 2 * int(nonzero[0]) + 1


def is_bipartite_spectrum(P: PredistanceSystem, eq_band: float = 1e-6) -> bool:
    return odd_girth_from_preintersection(P, eq_band) is None


@dataclass(frozen=True)
class InvariantCheck:
    name: str
    error: float
    bound: float

    @property
    def ok(self) -> bool:
        return bool(self.error <= self.bound)


def verify_system(P: PredistanceSystem, tol: ToleranceConfig = ToleranceConfig(),
                  leading_max_d: int = 12) -> list[InvariantCheck]:
    """Evaluate every structural identity of a predistance system.

    Errors are compared against ``tol.residual_bound(n)`` scaled by the
    magnitude of the quantities involved. Returns all checks; callers filter
    on ``ok``. The two-highest-terms identity is only checked for
    ``d <= leading_max_d`` since interpolation loses accuracy beyond that.
    """
    S = P.spectrum
    d, n = P.d, S.n
    r = tol.residual_bound(n)
    x, w = S.x, S.weights
    V, a, b, g = P.values, P.alpha, P.beta, P.gamma
    pl0 = P.p_at_lambda0
    norms = P.norms
    out: list[InvariantCheck] = []

    def add(name, lhs, rhs, scale):
        out.append(InvariantCheck(name, float(abs(lhs - rhs)), r * max(float(scale), 1e-300)))

    add("p0-is-one", float(np.max(np.abs(V[0] - 1.0))), 0.0, 1.0)
    kbar = S.moment(2) / n
    add("p1-is-scaled-x", float(np.max(np.abs(V[1] - x * S.lambda0 / kbar))), 0.0,
        max(1.0, float(np.max(np.abs(V[1])))))
    for i in range(d + 1):
        add(f"normalisation[{i}]", norms[i], pl0[i], max(norms[i], pl0[i]))
    gram = (V * w) @ V.T
    scale = np.sqrt(np.outer(norms, norms))
    off = np.abs(gram - np.diag(np.diag(gram)))
    add("orthogonality", float(np.max(off / scale)), 0.0, 1.0)
    for i in range(d + 1):
        add(f"row-sum[{i}]", a[i] + b[i] + g[i], S.lambda0, max(1.0, abs(a[i]) + b[i] + g[i]))
    for i in range(1, d + 1):
        lhs, rhs = pl0[i - 1] * b[i - 1], pl0[i] * g[i]
        add(f"beta-gamma-balance[{i}]", lhs, rhs, max(abs(lhs), abs(rhs)))
    for i in range(1, d + 1):
        out.append(InvariantCheck(f"gamma-positive[{i}]", 0.0 if g[i] > 0 else 1.0, 0.0))
    for i in range(d):
        out.append(InvariantCheck(f"beta-positive[{i}]", 0.0 if b[i] > 0 else 1.0, 0.0))
    add("alpha-trace", float(np.sum(a)), float(np.sum(x)),
        max(1.0, float(np.sum(np.abs(a)) + np.sum(np.abs(x)))))
    H = hoffman_values(S)
    colsum = V.sum(axis=0)
    hscale = np.abs(V).sum(axis=0)
    add("hoffman-sum", float(np.max(np.abs(colsum - H.values) / np.maximum(hscale, 1.0))), 0.0, 1.0)
    add("hoffman-leading", P.leading[d], H.leading, max(P.leading[d], H.leading))
    for i in range(d + 1):
        lhs = float(np.dot(w, (x * V[i]) ** 2))
        rhs = a[i] ** 2 * pl0[i]
        if i > 0:
            rhs += b[i - 1] ** 2 * pl0[i - 1]
        if i < d:
            rhs += g[i + 1] ** 2 * pl0[i + 1]
        add(f"norm-of-xp[{i}]", lhs, rhs, max(abs(lhs), abs(rhs)))
    add("recurrence-eigenvalues", recurrence_eigen_error(P), 0.0, max(1.0, abs(S.lambda0)))
    if d <= leading_max_d:
        for i in range(1, d + 1):
            lead, nxt = leading_terms(P, i)
            omega = P.leading[i]
            add(f"leading-coefficient[{i}]", lead, omega, omega)
            expect_next = -omega * float(np.sum(a[:i]))
            add(f"second-coefficient[{i}]", nxt, expect_next, max(omega * (1.0 + np.sum(np.abs(a[:i]))), 1e-300))
    return out
