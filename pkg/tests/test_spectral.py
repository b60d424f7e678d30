import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drgcert.graph import Graph, circulant, complete, complete_bipartite, cycle, hypercube, odd_graph
from drgcert.spectral import (
    DisconnectedGraphError,
    Spectrum,
    ToleranceConfig,
    cluster_spectrum,
    count_triangles,
    eigen_decompose,
    moment_sanity,
    spectrum_of,
)


def test_petersen_spectrum(petersen):
    S = spectrum_of(petersen)
    assert S.mult == (1, 5, 4)
    assert np.allclose(S.distinct, (3, 1, -2), atol=1e-12)
    assert S.d == 2 and S.n == 10 and S.lambda0 == pytest.approx(3)


@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_hypercube_spectrum_is_binomial(q):
    S = spectrum_of(hypercube(q))
    assert S.mult == tuple(math.comb(q, j) for j in range(q + 1))
    assert np.allclose(S.distinct, [q - 2 * j for j in range(q + 1)], atol=1e-10)


@pytest.mark.parametrize("n", range(3, 21))
def test_cycle_spectrum_closed_form(n):
    S = spectrum_of(cycle(n))
    want = sorted({round(2 * math.cos(2 * math.pi * j / n), 12) for j in range(n)}, reverse=True)
    assert np.allclose(S.distinct, want, atol=1e-9)
    assert S.mult[0] == 1 and sum(S.mult) == n


def test_odd_graph_spectrum():
    S = spectrum_of(odd_graph(4))
    assert S.mult == (1, 14, 14, 6)
    assert np.allclose(S.distinct, (4, 2, -1, -3), atol=1e-10)


def test_strong_product_spectrum(q3k2):
    S = spectrum_of(q3k2)
    assert S.mult == (1, 3, 11, 1)
    assert np.allclose(S.distinct, (7, 3, -1, -5), atol=1e-10)


def test_cospectral_pair(hoffman):
    tol = ToleranceConfig()
    assert spectrum_of(hoffman).same_as(spectrum_of(hypercube(4)), tol.eq_band)


def test_disconnected_rejected():
    G = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedGraphError):
        eigen_decompose(G)


def test_clustering_threshold_and_marginal_flag():
    S = cluster_spectrum([2.0, 1.0 + 1e-12, 1.0, -1.0], ToleranceConfig(eig_cluster=1e-9))
    assert S.mult == (1, 2, 1) and not S.marginal
    S = cluster_spectrum([2.0, 1.0 + 5e-9, 1.0, -1.0], ToleranceConfig(eig_cluster=1e-9))
    assert S.mult == (1, 1, 1, 1) and S.marginal


def test_spectrum_record_validation():
    with pytest.raises(ValueError):
        Spectrum((1.0, 2.0), (1, 1))
    with pytest.raises(ValueError):
        Spectrum((1.0,), (0,))
    S = Spectrum.from_pairs([(-1, 2), (2, 1)])
    assert S.distinct == (2.0, -1.0)
    assert S.moment(2) == pytest.approx(6.0)


@settings(max_examples=60, deadline=None)
@given(st.integers(5, 30), st.sets(st.integers(1, 15), min_size=1, max_size=4))
def test_moments_match_counts(n, jumps):
    jumps = sorted(j for j in jumps if j <= n // 2)
    if not jumps or math.gcd(n, *jumps) != 1:
        return
    G = circulant(n, jumps)
    S = spectrum_of(G)
    report = moment_sanity(S, G)
    assert report.ok, report
    assert S.moment(2) == pytest.approx(2 * G.e)


def test_triangle_count():
    assert count_triangles(complete(5)) == 10
    assert count_triangles(complete_bipartite(3, 3)) == 0


def test_tolerance_defaults_scale_with_graph():
    tol = ToleranceConfig()
    assert tol.eig_threshold(100, 5.0) == pytest.approx(1e-8 * 5 * 100)
    assert tol.residual_bound(10) == pytest.approx(1e-6)
    assert ToleranceConfig(residual=0.5).residual_bound(10) == 0.5


def test_tolerance_from_env():
    env = {"DRGCERT_TOL_EQ": "1e-4", "DRGCERT_TOL_EIG": "1e-7"}
    tol = ToleranceConfig.from_env(env)
    assert tol.eq_band == 1e-4 and tol.eig_cluster == 1e-7
    assert ToleranceConfig.from_env(env, eq_band=1e-3).eq_band == 1e-3


@pytest.mark.parametrize("field", ["eq_band", "eig_cluster", "residual"])
def test_tolerance_must_be_positive(field):
    with pytest.raises(ValueError):
        ToleranceConfig(**{field: 0.0})
