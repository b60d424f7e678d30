"""Characterisation theorems for distance-regularity, evaluated on one graph.

Every criterion yields a :class:`CriterionResult` whose verdict is one of

* ``certified``: the premises hold and the theorem concludes something
  (usually "distance-regular"; see ``conclusion``),
* ``refuted``: an inequality the theorem guarantees failed beyond tolerance,
  which can only mean a numerical or implementation defect,
* ``inconclusive``: premises fail or the theorem says nothing here,
* ``inapplicable``: a structural precondition (regularity, girth, ...) fails.

Conclusions are cross-checked against :func:`oracle_drg`, an exhaustive
combinatorial test. Any disagreement trips the consistency gate in
:func:`full_report`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import DistanceData, Graph, distance_data
from .metrics import (
    LevelProfile,
    PairTables,
    WalkQuantities,
    level_profiles,
    matrix_norm_identity,
    pairwise_intersection,
    pm_of_A,
    walk_quantities,
)
from .prepoly import (
    NotApplicableError,
    PredistanceSystem,
    girth_from_preintersection,
    odd_girth_from_preintersection,
    predistance_system,
    verify_system,
)
from .spectral import (
    DisconnectedGraphError,
    MomentReport,
    Spectrum,
    SpectrumError,
    ToleranceConfig,
    cluster_spectrum,
    eigen_decompose,
    moment_sanity,
)

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"
INAPPLICABLE = "inapplicable"

DRG_CONCLUSIONS = ("drg", "generalized-odd", "bipartite-drg")


class InternalConsistencyError(RuntimeError):
    """Numerical or logical self-check failure; carries the partial report."""

    def __init__(self, message: str, report: "Optional[CriterionReport]" = None):
        super().__init__(message)
        self.report = report


class OracleGateError(InternalConsistencyError):
    pass


# ----------------------------------------------------------------------------
# oracle


@dataclass(frozen=True)
class OracleVerdict:
    is_drg: bool
    max_pdr: int
    witness: Optional[dict]
    intersection_array: Optional[tuple[tuple[int, ...], tuple[int, ...]]]

    def to_dict(self) -> dict:
        arr = None
        if self.intersection_array is not None:
            arr = {"b": list(self.intersection_array[0]), "c": list(self.intersection_array[1])}
        return {"is_drg": self.is_drg, "max_pdr": self.max_pdr, "witness": self.witness,
                "intersection_array": arr}


def _witness(tables: PairTables, level: int, name: str) -> dict:
    mask = tables.dist == level
    vals = getattr(tables, name)
    idx = np.argwhere(mask)
    sub = vals[mask]
    lo, hi = int(np.argmin(sub)), int(np.argmax(sub))
    return {
        "level": level,
        "number": name,
        "pairs": [idx[lo].tolist(), idx[hi].tolist()],
        "values": [int(sub[lo]), int(sub[hi])],
    }


def oracle_drg(G: Graph, DD: DistanceData, tables: Optional[PairTables] = None,
               profiles: Optional[list[LevelProfile]] = None) -> OracleVerdict:
    """Decide distance-regularity by exhaustive comparison of pair counts.

    ``max_pdr`` is the largest m with c_i (i <= m) and a_i, b_i (i <= m-1)
    well-defined; it is 0 for non-regular graphs.
    """
    if tables is None:
        tables = pairwise_intersection(G, DD)
    if profiles is None:
        profiles = level_profiles(tables, DD)
    D = DD.D
    witness = None
    for p in profiles:
        for name in ("c", "a", "b"):
            if getattr(p, f"{name}_val") is None:
                witness = _witness(tables, p.i, name)
                break
        if witness:
            break
    is_drg = witness is None

    m_star = 0
    if DD.regular:
        m_star = 1
        while (m_star + 1 <= D and profiles[m_star + 1].c_defined
               and profiles[m_star].a_defined and profiles[m_star].b_defined):
            m_star += 1
    array = None
    if is_drg:
        array = (tuple(p.b_val for p in profiles[:D]), tuple(p.c_val for p in profiles[1:]))
    return OracleVerdict(is_drg, m_star, witness, array)


# ----------------------------------------------------------------------------
# criterion records


@dataclass
class CriterionResult:
    id: str
    applicable: bool
    verdict: str
    reason: str = ""
    margins: dict = field(default_factory=dict)
    conclusion: Optional[str] = None
    consistent: bool = True
    marginal: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "applicable": self.applicable,
            "reason": self.reason,
            "verdict": self.verdict,
            "conclusion": self.conclusion,
            "margins": {k: _num(v) for k, v in self.margins.items()},
            "consistent": self.consistent,
            "marginal": self.marginal,
            "note": self.note,
        }


def _num(v):
    if v is None or isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return v if math.isfinite(v) else None


def _inapplicable(cid: str, reason: str) -> CriterionResult:
    return CriterionResult(cid, False, INAPPLICABLE, reason)


def _near_band(margin: float, eq: float) -> bool:
    # neither clearly zero nor clearly nonzero
    return eq / 10 < abs(margin) < 10 * eq


def _tail_sum(P: PredistanceSystem) -> float:
    return float(np.sum(P.spectrum.x[1:]))


def _girth_at_least(DD: DistanceData, bound: int) -> bool:
    return DD.girth is None or DD.girth >= bound


def check_consistency(res: CriterionResult, oracle: OracleVerdict, DD: DistanceData) -> bool:
    """Does the criterion's conclusion agree with the exhaustive oracle?"""
    if res.verdict == REFUTED:
        return False
    c = res.conclusion
    if c is None:
        return True
    gen_odd = oracle.is_drg and DD.odd_girth is not None and DD.odd_girth == 2 * DD.D + 1
    if c == "drg":
        return oracle.is_drg
    if c == "generalized-odd":
        return gen_odd
    if c == "bipartite-drg":
        return oracle.is_drg and DD.bipartite
    if c == "not-drg":
        return not oracle.is_drg
    if c == "not-generalized-odd":
        return not gen_odd
    if c == "not-drg-bipartite-or-odd":
        return not (oracle.is_drg and (DD.bipartite or gen_odd))
    if c.startswith("pdr:"):
        return oracle.max_pdr >= int(c[4:])
    if c.startswith("not-pdr:"):
        return oracle.max_pdr < int(c[8:])
    raise ValueError(f"unknown conclusion {c!r}")


# ----------------------------------------------------------------------------
# individual criteria


def check_spectral_excess_step(G: Graph, P: PredistanceSystem, profiles: list[LevelProfile], m: int,
                               DD: DistanceData, oracle: OracleVerdict,
                               tol: ToleranceConfig = ToleranceConfig()) -> CriterionResult:
    """kbar_m >= p_m(lambda_0) for (m-1)-partially distance-regular regular
    graphs, with equality exactly when the graph is m-partially
    distance-regular."""
    cid = f"spectral-excess[{m}]"
    if not DD.regular:
        return _inapplicable(cid, "graph is not regular")
    if not 1 <= m <= min(DD.D, P.d):
        return _inapplicable(cid, f"m={m} outside 1..min(D, d)")
    if oracle.max_pdr < m - 1:
        return _inapplicable(cid, f"graph is not {m - 1}-partially distance-regular")
    eq = tol.eq_band
    res = tol.residual_bound(G.n)
    kbar = profiles[m].k_bar_i
    pm = float(P.p_at_lambda0[m])
    slack = kbar - pm
    out = CriterionResult(cid, True, INCONCLUSIVE, margins={"k_bar": kbar, "p_lambda0": pm, "slack": slack},
                          marginal=_near_band(slack, eq))
    if slack < -res:
        out.verdict = REFUTED
        out.note = "spectral excess exceeds mean excess"
    elif abs(slack) <= eq:
        out.verdict = CERTIFIED
        out.conclusion = f"pdr:{m}"
        _, resid = pm_of_A(G, P, m, DD)
        out.margins["pm_residual"] = resid
        if resid > res:
            out.verdict = REFUTED
            out.note = f"equality holds but p_{m}(A) != A_{m}"
    else:
        out.conclusion = f"not-pdr:{m}"
    return out


def check_basic_conditions(G: Graph, P: PredistanceSystem, profiles: list[LevelProfile], m: int,
                           DD: DistanceData, oracle: OracleVerdict,
                           tol: ToleranceConfig = ToleranceConfig()) -> CriterionResult:
    """Five sufficient conditions for an (m-1)-pdr regular graph to be m-pdr."""
    cid = f"basic-conditions[{m}]"
    if not DD.regular:
        return _inapplicable(cid, "graph is not regular")
    if not 1 <= m <= min(DD.D, P.d):
        return _inapplicable(cid, f"m={m} outside 1..min(D, d)")
    if oracle.max_pdr < m - 1:
        return _inapplicable(cid, f"graph is not {m - 1}-partially distance-regular")
    eq = tol.eq_band
    prev, cur = profiles[m - 1], profiles[m]
    g_m, a_prev = float(P.gamma[m]), float(P.alpha[m - 1])
    k_prev = prev.k_val if prev.k_val is not None else prev.k_bar_i
    margins = {
        "i": cur.c_bar - g_m,
        "ii": (prev.c_val - g_m) if prev.c_val is not None else None,
        "iii": k_prev * (prev.a_sq - a_prev ** 2) + cur.k_bar_i * (cur.c_sq - g_m ** 2),
        "iv": cur.c_sq - g_m ** 2,
        "v": (g_m - cur.c_max) if prev.a_defined else None,
    }
    holds = [k for k, v in margins.items() if v is not None and v >= -eq]
    out = CriterionResult(cid, True, INCONCLUSIVE, margins=margins,
                          marginal=any(v is not None and _near_band(v, eq) for v in margins.values()))
    out.margins["holds"] = ",".join(holds) or None
    if holds:
        out.verdict = CERTIFIED
        out.conclusion = f"pdr:{m}"
    return out


def check_girth_theorem(G: Graph, P: PredistanceSystem, DD: DistanceData,
                        tol: ToleranceConfig = ToleranceConfig()) -> CriterionResult:
    """Regular with girth >= 2d-1, or bipartite with girth >= 2d-2, implies DRG."""
    cid = "girth-theorem"
    if not DD.regular:
        return _inapplicable(cid, "graph is not regular")
    d = P.d
    predicted = girth_from_preintersection(P, tol.eq_band)
    out = CriterionResult(cid, True, INCONCLUSIVE,
                          margins={"girth": DD.girth, "predicted_girth": predicted, "bound_i": 2 * d - 1,
                                   "bound_ii": 2 * d - 2})
    if predicted != DD.girth:
        out.verdict = REFUTED
        out.note = f"girth from preintersection numbers {predicted} != combinatorial {DD.girth}"
        return out
    if _girth_at_least(DD, 2 * d - 1):
        out.verdict, out.conclusion, out.reason = CERTIFIED, "drg", "girth >= 2d-1"
    elif DD.bipartite and _girth_at_least(DD, 2 * d - 2):
        out.verdict, out.conclusion, out.reason = CERTIFIED, "drg", "bipartite and girth >= 2d-2"
    else:
        out.reason = "girth too small"
    return out


def check_odd_girth(G: Graph, P: PredistanceSystem, DD: DistanceData,
                    tol: ToleranceConfig = ToleranceConfig()) -> list[CriterionResult]:
    """Odd-girth theorem and its two preintersection-number variants."""
    eq = tol.eq_band
    d = P.d
    og = odd_girth_from_preintersection(P, eq)
    results = []

    plain = CriterionResult("odd-girth-theorem", True, INCONCLUSIVE,
                            margins={"odd_girth": og, "target": 2 * d + 1})
    if og != DD.odd_girth:
        plain.verdict = REFUTED
        plain.note = f"odd-girth from preintersection numbers {og} != combinatorial {DD.odd_girth}"
    elif og == 2 * d + 1:
        plain.verdict, plain.conclusion, plain.reason = CERTIFIED, "drg", "odd-girth 2d+1"
    else:
        plain.reason = "bipartite" if og is None else "odd-girth below 2d+1"
    results.append(plain)

    margin = float(P.gamma[d]) + _tail_sum(P)
    if og is None:
        results.append(_inapplicable("odd-girth-variant-i", "graph is bipartite"))
        results.append(_inapplicable("odd-girth-variant-ii", "graph is bipartite"))
        return results

    min_alpha = float(np.min(P.alpha[:d]))
    if min_alpha < -eq:
        results.append(_inapplicable("odd-girth-variant-i", "some alpha_i < 0 for i < d"))
    else:
        r = CriterionResult("odd-girth-variant-i", True, INCONCLUSIVE,
                            margins={"gamma_d_plus_tail": margin, "min_alpha": min_alpha},
                            marginal=_near_band(margin, eq))
        if margin < -eq:
            r.verdict = REFUTED
            r.note = "gamma_d < -(lambda_1 + ... + lambda_d)"
        elif abs(margin) <= eq:
            r.verdict, r.conclusion = CERTIFIED, "generalized-odd"
        else:
            r.conclusion = "not-generalized-odd"
        results.append(r)

    if og < 2 * d - 1:
        results.append(_inapplicable("odd-girth-variant-ii", "odd-girth below 2d-1"))
    else:
        r = CriterionResult("odd-girth-variant-ii", True, INCONCLUSIVE,
                            margins={"gamma_d_plus_tail": margin}, marginal=_near_band(margin, eq))
        if abs(margin) <= eq:
            r.verdict, r.conclusion = CERTIFIED, "generalized-odd"
        results.append(r)
    return results


def check_gamma_one(G: Graph, P: PredistanceSystem,
                    tol: ToleranceConfig = ToleranceConfig()) -> CriterionResult:
    """gamma_1 = ... = gamma_{d-1} = 1 (d >= 2), or for bipartite graphs
    gamma_1 = ... = gamma_{d-2} = 1 (d >= 3), implies DRG."""
    cid = "gamma-one"
    d, eq = P.d, tol.eq_band
    if d < 2:
        return _inapplicable(cid, "d < 2")
    dev = np.abs(P.gamma[1:] - 1.0)
    part_i = float(dev[:d - 1].max())
    margins = {"max_dev_i": part_i}
    out = CriterionResult(cid, True, INCONCLUSIVE, margins=margins)
    bip = odd_girth_from_preintersection(P, eq) is None
    part_ii = None
    if d >= 3 and bip:
        part_ii = float(dev[:d - 2].max())
        margins["max_dev_ii"] = part_ii
    out.marginal = _near_band(part_i, eq) or (part_ii is not None and _near_band(part_ii, eq))
    if part_i <= eq:
        out.verdict, out.conclusion, out.reason = CERTIFIED, "drg", "gamma_1..gamma_{d-1} = 1"
    elif part_ii is not None and part_ii <= eq:
        out.verdict, out.conclusion, out.reason = CERTIFIED, "drg", "bipartite, gamma_1..gamma_{d-2} = 1"
    else:
        out.reason = "gamma pattern fails"
    return out


def check_c_ge_gamma(G: Graph, P: PredistanceSystem, profiles: list[LevelProfile], DD: DistanceData,
                     tol: ToleranceConfig = ToleranceConfig()) -> CriterionResult:
    """Regular, D >= d-1 and cbar_i >= gamma_i for i = 2..d-1 implies DRG
    (bipartite: D >= d-2 and i = 2..d-2)."""
    cid = "c-bar-ge-gamma"
    if not DD.regular:
        return _inapplicable(cid, "graph is not regular")
    d, D, eq = P.d, DD.D, tol.eq_band

    def worst(upto):
        vals = [profiles[i].c_bar - float(P.gamma[i]) for i in range(2, upto + 1)]
        return min(vals) if vals else None

    part_i = worst(d - 1) if D >= d - 1 else None
    part_ii = worst(d - 2) if DD.bipartite and D >= d - 2 else None
    ok_i = D >= d - 1 and (part_i is None or part_i >= -eq)
    ok_ii = DD.bipartite and D >= d - 2 and (part_ii is None or part_ii >= -eq)
    if D < d - 1 and not (DD.bipartite and D >= d - 2):
        return _inapplicable(cid, "diameter too small")
    out = CriterionResult(cid, True, INCONCLUSIVE, margins={"min_slack_i": part_i, "min_slack_ii": part_ii},
                          marginal=any(v is not None and _near_band(v, eq) for v in (part_i, part_ii)))
    if ok_i or ok_ii:
        out.verdict, out.conclusion = CERTIFIED, "drg"
        out.reason = "part (i)" if ok_i else "part (ii), bipartite"
    else:
        out.reason = "some cbar_i < gamma_i"
    return out


def check_pdr_upgrades(G: Graph, P: PredistanceSystem, profiles: list[LevelProfile], DD: DistanceData,
                       oracle: OracleVerdict, tol: ToleranceConfig = ToleranceConfig()) -> CriterionResult:
    """Upgrade partial distance-regularity to distance-regularity."""
    cid = "pdr-upgrade"
    if not DD.regular:
        return _inapplicable(cid, "graph is not regular")
    d, m, eq = P.d, oracle.max_pdr, tol.eq_band
    bip = DD.bipartite
    facts = {
        "plain_i": m >= d - 1,
        "plain_ii": bip and m >= d - 2,
        "refined_i": False,
        "refined_ii": False,
    }
    margins = {"max_pdr": m}
    if d >= 3 and m >= d - 2:
        c = profiles[d - 2].c_val
        margins["refined_i"] = c - float(P.gamma[d - 1])
        facts["refined_i"] = margins["refined_i"] >= -eq
    if d >= 4 and bip and m >= d - 3:
        c = profiles[d - 3].c_val
        margins["refined_ii"] = c - float(P.gamma[d - 2])
        facts["refined_ii"] = margins["refined_ii"] >= -eq
    out = CriterionResult(cid, True, INCONCLUSIVE, margins=margins)
    fired = [k for k, v in facts.items() if v]
    if fired:
        out.verdict, out.conclusion, out.reason = CERTIFIED, "drg", ",".join(fired)
    else:
        out.reason = "partial distance-regularity too low"
    return out


def check_girth_plus(G: Graph, P: PredistanceSystem, DD: DistanceData,
                     tol: ToleranceConfig = ToleranceConfig()) -> CriterionResult:
    """Regular with girth >= 2d-2: gamma_d >= -(lambda_1 + ... + lambda_d),
    with equality iff DRG and bipartite or a generalized Odd graph."""
    cid = "girth-plus"
    d, eq = P.d, tol.eq_band
    if not DD.regular:
        return _inapplicable(cid, "graph is not regular")
    if not _girth_at_least(DD, 2 * d - 2):
        return _inapplicable(cid, "girth < 2d-2")
    margin = float(P.gamma[d]) + _tail_sum(P)
    out = CriterionResult(cid, True, INCONCLUSIVE, margins={"gamma_d_plus_tail": margin},
                          marginal=_near_band(margin, eq))
    if margin < -eq:
        out.verdict = REFUTED
        out.note = "gamma_d < -(lambda_1 + ... + lambda_d)"
    elif abs(margin) <= eq:
        out.verdict = CERTIFIED
        if DD.bipartite:
            out.conclusion, out.reason = "bipartite-drg", "equality; bipartite"
        else:
            out.conclusion, out.reason = "generalized-odd", "equality; generalized Odd graph"
    else:
        out.conclusion = "not-drg-bipartite-or-odd"
        out.reason = "strict inequality"
    return out


def check_girth_plusplus(G: Graph, P: PredistanceSystem, DD: DistanceData, walks: Optional[WalkQuantities],
                         tol: ToleranceConfig = ToleranceConfig()) -> CriterionResult:
    """Compare the average of a_{d-1} c_{d-1} with alpha_{d-1} gamma_{d-1},
    branching on the sign of alpha_{d-1} - gamma_d."""
    cid = "girth-plusplus"
    d, eq = P.d, tol.eq_band
    res = tol.residual_bound(G.n)
    if not DD.regular:
        return _inapplicable(cid, "graph is not regular")
    if not _girth_at_least(DD, 2 * d - 2):
        return _inapplicable(cid, "girth < 2d-2")
    if walks is None or walks.ac_avg is None:
        return _inapplicable(cid, "no pairs at distance d-1")
    a_prev, g_prev, g_d = float(P.alpha[d - 1]), float(P.gamma[d - 1]), float(P.gamma[d])
    target = a_prev * g_prev
    delta = a_prev - g_d
    diff = walks.ac_avg - target
    walk_gap = walks.walk_avg - walks.ac_avg
    out = CriterionResult(cid, True, INCONCLUSIVE,
                          margins={"alpha_minus_gamma": delta, "ac_avg": walks.ac_avg, "target": target,
                                   "diff": diff, "walk_avg": walks.walk_avg},
                          marginal=_near_band(delta, eq) or _near_band(diff, eq))
    if abs(walk_gap) > res * max(1.0, abs(walks.walk_avg)):
        out.verdict = REFUTED
        out.note = "walk average differs from average of a*c"
        return out
    if abs(delta) <= eq:
        dev = float(np.max(np.abs(walks.walks - target)))
        out.margins["max_walk_dev"] = dev
        out.reason = "branch iii"
        if dev > res * max(1.0, abs(target)):
            out.verdict = REFUTED
            out.note = "(A^d)_uv is not constant alpha_{d-1} gamma_{d-1} on distance-(d-1) pairs"
        else:
            out.note = "open case: (A^d)_uv = alpha_{d-1} gamma_{d-1} verified; distance-regularity undecided"
        return out
    out.reason = "branch i" if delta < 0 else "branch ii"
    wrong_side = diff < -eq if delta < 0 else diff > eq
    if wrong_side:
        out.verdict = REFUTED
        out.note = "average of a*c on the wrong side of alpha_{d-1} gamma_{d-1}"
    elif abs(diff) <= eq:
        out.verdict, out.conclusion = CERTIFIED, "drg"
    else:
        out.conclusion = "not-drg"
    return out


# ----------------------------------------------------------------------------
# full pipeline


def graph_summary(G: Graph, DD: DistanceData) -> dict:
    return {
        "name": G.label,
        "n": int(G.n),
        "e": int(G.e),
        "regular": bool(DD.regular),
        "valency": _num(DD.valency),
        "bipartite": bool(DD.bipartite),
        "girth": _num(DD.girth),
        "odd_girth": _num(DD.odd_girth),
        "diameter": int(DD.D),
    }


@dataclass
class CriterionReport:
    graph: dict
    spectrum: Spectrum
    presystem: Optional[PredistanceSystem]
    profiles: list[LevelProfile]
    oracle: Optional[OracleVerdict]
    criteria: list[CriterionResult]
    tolerances: dict
    flags: list[str]
    moments: Optional[MomentReport] = None
    invariant_failures: list[str] = field(default_factory=list)

    def criterion(self, cid: str) -> CriterionResult:
        for c in self.criteria:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def certified_by(self) -> list[str]:
        return [c.id for c in self.criteria if c.verdict == CERTIFIED and c.conclusion in DRG_CONCLUSIONS]

    @property
    def inconsistent(self) -> list[str]:
        return [c.id for c in self.criteria if not c.consistent]

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "spectrum": self.spectrum.to_dict(),
            "presystem": self.presystem.to_dict() if self.presystem is not None else None,
            "profiles": [p.to_dict() for p in self.profiles],
            "oracle": self.oracle.to_dict() if self.oracle is not None else None,
            "criteria": [c.to_dict() for c in self.criteria],
            "tolerances": self.tolerances,
            "flags": list(self.flags),
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)

    def to_text(self) -> str:
        from .report import render_text

        return render_text(self)


def full_report(G: Graph, tol: ToleranceConfig = ToleranceConfig(), enforce_gate: bool = True) -> CriterionReport:
    """Run the whole pipeline on one connected graph.

    Raises :class:`DisconnectedGraphError` for disconnected input,
    :class:`InternalConsistencyError` when a numerical self-check fails and
    :class:`OracleGateError` when a criterion disagrees with the oracle.
    """
    DD = distance_data(G)
    if not DD.connected:
        raise DisconnectedGraphError(f"graph {G.label!r} is disconnected")
    S = cluster_spectrum(eigen_decompose(G), tol)
    flags: list[str] = []
    tolerances = tol.resolved(G.n, S.lambda0)
    summary = graph_summary(G, DD)

    def fail(msg, **kw):
        report = CriterionReport(summary, S, kw.get("P"), [], None, [], tolerances, flags + [msg],
                                 kw.get("moments"), kw.get("inv", []))
        raise InternalConsistencyError(msg, report)

    if S.marginal:
        flags.append("numerically-marginal-clustering")
        if tol.strict_marginal:
            fail("numerically marginal eigenvalue clustering")
    moments = moment_sanity(S, G, tol)
    if not moments.ok:
        fail("trace moments do not match the graph", moments=moments)
    if DD.D > S.d:
        fail(f"diameter {DD.D} exceeds d = {S.d}; eigenvalues misclustered?", moments=moments)
    if S.d < 1:
        raise DisconnectedGraphError("a single vertex has no predistance system")
    try:
        P = predistance_system(S)
    except SpectrumError as exc:
        fail(f"predistance system: {exc}", moments=moments)
    bad = [c.name for c in verify_system(P, tol) if not c.ok]
    if bad:
        fail("predistance invariants violated: " + ", ".join(bad), P=P, moments=moments, inv=bad)
    if DD.regular != (abs(P.gamma[1] - 1.0) <= tol.eq_band):
        fail(f"regularity {DD.regular} disagrees with gamma_1 = {P.gamma[1]!r}", P=P, moments=moments)

    tables = pairwise_intersection(G, DD)
    profiles = level_profiles(tables, DD)
    res = tol.residual_bound(G.n)
    for i in range(DD.D + 1):
        lhs, rhs = matrix_norm_identity(G, DD, i, profiles)
        if abs(lhs - rhs) > res * max(1.0, lhs):
            fail(f"norm identity fails at level {i}: {lhs} vs {rhs}", P=P, moments=moments)
    oracle = oracle_drg(G, DD, tables, profiles)

    criteria: list[CriterionResult] = []
    criteria.append(check_girth_theorem(G, P, DD, tol))
    criteria.extend(check_odd_girth(G, P, DD, tol))
    criteria.append(check_gamma_one(G, P, tol))
    criteria.append(check_c_ge_gamma(G, P, profiles, DD, tol))
    criteria.append(check_pdr_upgrades(G, P, profiles, DD, oracle, tol))
    criteria.append(check_girth_plus(G, P, DD, tol))
    walks = walk_quantities(G, DD, P, tables) if DD.regular and _girth_at_least(DD, 2 * P.d - 2) else None
    criteria.append(check_girth_plusplus(G, P, DD, walks, tol))
    if DD.regular:
        for m in range(1, min(DD.D, P.d, oracle.max_pdr + 1) + 1):
            criteria.append(check_spectral_excess_step(G, P, profiles, m, DD, oracle, tol))
            criteria.append(check_basic_conditions(G, P, profiles, m, DD, oracle, tol))

    for c in criteria:
        c.consistent = check_consistency(c, oracle, DD)
        if c.marginal:
            flags.append(f"marginal:{c.id}")
    if DD.bipartite and not oracle.is_drg:
        margin = float(P.gamma[P.d]) + _tail_sum(P)
        if abs(margin) <= tol.eq_band:
            flags.append("bipartite-equality-without-drg")

    report = CriterionReport(summary, S, P, profiles, oracle, criteria, tolerances, flags, moments)
    if report.inconsistent:
        report.flags.append("oracle-gate-failed:" + ",".join(report.inconsistent))
        if enforce_gate:
            raise OracleGateError("criteria disagree with the oracle: " + ", ".join(report.inconsistent), report)
    return report
