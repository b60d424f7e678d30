"""Acceptance suite shared by ``drgcert selftest`` and the test-suite.

Each check returns an :class:`AcceptanceResult`; a check never raises, a
crash is reported as a failure with the exception text.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .corpus import build_corpus
from .criteria import CERTIFIED, CriterionReport, InternalConsistencyError, full_report
from .fixtures import load_fixture
from .graph import Graph, complete, cycle, distance_data, hypercube, odd_graph, build_named, strong_product, tensor_with_ones2
from .prepoly import girth_from_preintersection, odd_girth_from_preintersection, predistance_system
from .spectral import Spectrum, ToleranceConfig, spectrum_of


@dataclass
class AcceptanceResult:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: Optional[float]
    failures: list[str] = field(default_factory=list)
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        msg = f"[{status}] {self.number}. {self.title}: {self.seconds:.3f}s{lim}"
        if self.detail:
            msg += f"; {self.detail}"
        if self.failures:
            msg += "; failed: " + "; ".join(self.failures)
        return msg


class _Checker:
    def __init__(self):
        self.failures: list[str] = []

    def that(self, ok: bool, what: str) -> bool:
        if not ok:
            self.failures.append(what)
        return ok

    def close(self, got: float, want: float, tol: float, what: str) -> bool:
        return self.that(abs(got - want) <= tol, f"{what} = {got!r}, expected {want!r} within {tol:g}")


@dataclass
class AcceptanceContext:
    tol: ToleranceConfig = field(default_factory=ToleranceConfig)
    fixtures_dir: Optional[Path] = None
    _corpus: Optional[list] = None

    def fixture(self, name: str) -> Graph:
        return load_fixture(name, directory=self.fixtures_dir)

    def corpus_run(self) -> list[tuple[Graph, Optional[CriterionReport], Optional[str]]]:
        """Reports for every corpus graph, computed once; the gate is not
        enforced here so that disagreements can be counted."""
        if self._corpus is None:
            runs = []
            for G in build_corpus():
                try:
                    runs.append((G, full_report(G, self.tol, enforce_gate=False), None))
                except Exception as exc:  # recorded as a failure by the checks
                    runs.append((G, getattr(exc, "report", None), f"{type(exc).__name__}: {exc}"))
            self._corpus = runs
        return self._corpus


def _tail(P) -> float:
    return float(np.sum(P.spectrum.x[1:]))


def check_strong_product(ctx: AcceptanceContext, ck: _Checker) -> str:
    G = strong_product(hypercube(3), complete(2))
    r = full_report(G, ctx.tol, enforce_gate=False)
    S, P, prof, o = r.spectrum, r.presystem, r.profiles, r.oracle
    ck.that(S.mult == (1, 3, 11, 1), f"multiplicities {S.mult}")
    ck.that(np.allclose(S.distinct, (7, 3, -1, -5), atol=1e-9, rtol=0), f"eigenvalues {S.distinct}")
    ck.that([p.c_val for p in prof[1:]] == [1, 4, 6], f"c = {[p.c_val for p in prof[1:]]}")
    ck.that([p.k_val for p in prof[1:]] == [7, 6, 2], f"k = {[p.k_val for p in prof[1:]]}")
    ck.close(P.gamma[1], 1.0, 1e-9, "gamma_1")
    ck.close(P.gamma[2], 4.571, 1e-3, "gamma_2")
    ck.close(P.gamma[3], 4.816, 1e-3, "gamma_3")
    ck.that(not o.is_drg, "oracle says DRG")
    ck.that(not prof[1].a_defined and not prof[1].b_defined, "a_1 or b_1 well-defined")
    return f"gamma = {[round(float(g), 6) for g in P.gamma]}"


def check_putative(ctx: AcceptanceContext, ck: _Checker) -> str:
    r = math.sqrt(45)
    S = Spectrum.from_pairs([(10, 1), (1, 20), ((-1 + r) / 2, 30), ((-1 - r) / 2, 30)])
    predistance_system(S)  # warm-up, so the timing below excludes first-call overhead
    t = time.perf_counter()
    P = predistance_system(S)
    dt = time.perf_counter() - t
    ck.close(P.alpha[1], 0.0, 1e-9, "alpha_1")
    ck.close(P.gamma[2], 13 / 9, 1e-9, "gamma_2")
    ck.close(P.alpha[2], 99 / 13, 1e-9, "alpha_2")
    ck.close(P.gamma[3], 99 / 13, 1e-9, "gamma_3")
    ck.close(P.alpha[2] * P.gamma[2], 11.0, 1e-8, "alpha_2 gamma_2")
    ck.that(dt < 0.010, f"predistance_system took {dt * 1e3:.2f} ms")
    return f"predistance_system {dt * 1e3:.2f} ms"


def check_perkel(ctx: AcceptanceContext, ck: _Checker) -> str:
    G = ctx.fixture("perkel")
    r = full_report(G, ctx.tol, enforce_gate=False)
    o, P, S = r.oracle, r.presystem, r.spectrum
    ck.that(o.is_drg and o.intersection_array == ((6, 5, 2), (1, 1, 3)), f"oracle {o.intersection_array}")
    s5 = math.sqrt(5)
    ck.that(S.mult == (1, 18, 18, 20), f"multiplicities {S.mult}")
    ck.that(np.allclose(S.distinct, (6, (3 + s5) / 2, (3 - s5) / 2, -3), atol=1e-6, rtol=0),
            f"eigenvalues {S.distinct}")
    ck.close(P.alpha[2], 3.0, 1e-6, "alpha_2")
    ck.close(P.gamma[3], 3.0, 1e-6, "gamma_3")
    ck.that(r.criterion("girth-theorem").verdict == CERTIFIED, "girth theorem does not certify")
    gpp = r.criterion("girth-plusplus")
    dev = gpp.margins.get("max_walk_dev")
    ck.that(gpp.reason == "branch iii" and dev is not None and dev <= 1e-9,
            f"girth-plusplus {gpp.reason}, walk deviation {dev}")
    ck.that(not r.inconsistent, f"inconsistent criteria {r.inconsistent}")
    return f"(A^3)_uv deviation {dev}"


def check_hoffman(ctx: AcceptanceContext, ck: _Checker) -> str:
    G = ctx.fixture("hoffman")
    r = full_report(G, ctx.tol, enforce_gate=False)
    P = r.presystem
    ref = spectrum_of(hypercube(4), ctx.tol)
    ck.that(r.spectrum.same_as(ref, ctx.tol.eq_band), "spectrum differs from hypercube(4)")
    ck.that(float(np.max(np.abs(P.alpha))) <= 1e-9, f"max |alpha_i| = {np.max(np.abs(P.alpha))}")
    ck.close(P.gamma[4], 4.0, 1e-6, "gamma_4")
    ck.close(P.gamma[4], -_tail(P), 1e-6, "gamma_4 vs -(lambda_1 + ... + lambda_4)")
    ck.that(not r.oracle.is_drg, "oracle says DRG")
    ck.that(not r.certified_by(), f"certified by {r.certified_by()}")
    return ""


def check_generalized_odd(ctx: AcceptanceContext, ck: _Checker) -> str:
    for G in (build_named("petersen"), odd_graph(4)):
        r = full_report(G, ctx.tol, enforce_gate=False)
        P = r.presystem
        ck.close(P.gamma[P.d], -_tail(P), 1e-6, f"{G.label} gamma_d")
        ck.that(r.criterion("odd-girth-theorem").verdict == CERTIFIED, f"{G.label} odd-girth theorem silent")
    for q in (2, 3, 4):
        P = predistance_system(spectrum_of(hypercube(q), ctx.tol))
        ck.close(P.gamma[P.d], -_tail(P), 1e-6, f"Q{q} gamma_d")
    return ""


def check_soundness(ctx: AcceptanceContext, ck: _Checker) -> str:
    runs = ctx.corpus_run()
    ck.that(len(runs) >= 500, f"corpus has {len(runs)} graphs")
    unsound = 0
    for G, r, err in runs:
        if err is not None:
            ck.that(False, f"{G.label}: {err}")
            continue
        for c in r.criteria:
            if not c.consistent:
                unsound += 1
                ck.that(False, f"{G.label}: {c.id} {c.verdict} {c.conclusion}")
    return f"{len(runs)} graphs, {unsound} disagreements"


def check_girth_equivalence(ctx: AcceptanceContext, ck: _Checker) -> str:
    count = 0
    for G, r, err in ctx.corpus_run():
        if r is None or r.presystem is None or not r.graph["regular"]:
            continue
        count += 1
        P = r.presystem
        g = girth_from_preintersection(P, ctx.tol.eq_band)
        og = odd_girth_from_preintersection(P, ctx.tol.eq_band)
        ck.that(g == r.graph["girth"], f"{G.label}: girth {g} vs {r.graph['girth']}")
        ck.that(og == r.graph["odd_girth"], f"{G.label}: odd-girth {og} vs {r.graph['odd_girth']}")
    return f"{count} regular graphs"


def check_spectral_excess(ctx: AcceptanceContext, ck: _Checker) -> str:
    count = 0
    for G, r, err in ctx.corpus_run():
        if r is None or r.presystem is None or not r.graph["regular"]:
            continue
        band = 1e-6 * G.n
        P, prof, m_star = r.presystem, r.profiles, r.oracle.max_pdr
        for m in range(1, min(m_star + 1, r.graph["diameter"], P.d) + 1):
            count += 1
            slack = prof[m].k_bar_i - float(P.p_at_lambda0[m])
            ck.that(slack >= -band, f"{G.label} m={m}: kbar - p(lambda0) = {slack}")
            ck.that((abs(slack) <= band) == (m <= m_star),
                    f"{G.label} m={m}: equality {abs(slack) <= band} but m*={m_star}")
    return f"{count} (graph, m) pairs"


def check_kronecker(ctx: AcceptanceContext, ck: _Checker) -> str:
    for base in (cycle(4), cycle(8), hypercube(2)):
        G = tensor_with_ones2(base)
        r = full_report(G, ctx.tol, enforce_gate=False)
        prof = r.profiles
        ck.that(all(p.k_defined and p.a_defined for p in prof), f"{G.label}: some k_i or a_i not well-defined")
        ck.that(len(prof) > 2 and not prof[2].c_defined, f"{G.label}: c_2 well-defined")
        ck.that(not r.oracle.is_drg, f"{G.label}: oracle says DRG")
    return ""


CRITERIA: list[tuple[int, str, Optional[float], Callable]] = [
    (1, "strong product Q3 x K2", 1.0, check_strong_product),
    (2, "putative-scheme spectrum", None, check_putative),
    (3, "Perkel fixture", 2.0, check_perkel),
    (4, "Hoffman fixture", 1.0, check_hoffman),
    (5, "generalized Odd equality and bipartite identity", None, check_generalized_odd),
    (6, "soundness sweep", 300.0, check_soundness),
    (7, "girth and odd-girth from preintersection numbers", None, check_girth_equivalence),
    (8, "spectral-excess inequality", None, check_spectral_excess),
    (9, "Kronecker counterexample", None, check_kronecker),
]


def run_one(number: int, ctx: AcceptanceContext) -> AcceptanceResult:
    _, title, limit, fn = next(c for c in CRITERIA if c[0] == number)
    ck = _Checker()
    t = time.perf_counter()
    detail = ""
    try:
        detail = fn(ctx, ck)
    except InternalConsistencyError as exc:
        ck.that(False, f"{type(exc).__name__}: {exc}")
    except Exception as exc:
        ck.that(False, f"{type(exc).__name__}: {exc}")
    dt = time.perf_counter() - t
    if limit is not None:
        ck.that(dt < limit, f"runtime {dt:.3f}s exceeds {limit:g}s")
    return AcceptanceResult(number, title, not ck.failures, dt, limit, ck.failures, detail)


def run_acceptance(tol: Optional[ToleranceConfig] = None, fixtures_dir: Optional[Path] = None,
                   only: Optional[list[int]] = None) -> list[AcceptanceResult]:
    ctx = AcceptanceContext(tol or ToleranceConfig(), Path(fixtures_dir) if fixtures_dir else None)
    numbers = only or [c[0] for c in CRITERIA]
    return [run_one(n, ctx) for n in numbers]
