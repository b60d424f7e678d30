"""Fixed-layout plain-text rendering of a :class:`CriterionReport`."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .criteria import CriterionReport


def _f(x, digits: int = 6) -> str:
    if x is None:
        return "-"
    if not isinstance(x, bool) and abs(float(x)) < 1e-12:
        return "0"
    if isinstance(x, (int, bool)) or float(x).is_integer():
        return str(int(x)) if not isinstance(x, bool) else str(x).lower()
    return f"{float(x):.{digits}g}"


def _vec(xs) -> str:
    return "[" + ", ".join(_f(x) for x in xs) + "]"


def render_text(report: "CriterionReport") -> str:
    g = report.graph
    lines = []
    reg = f"regular(k={g['valency']})" if g["regular"] else "non-regular"
    lines.append(f"graph      {g['name']}  n={g['n']} e={g['e']} {reg} "
                 f"bipartite={'yes' if g['bipartite'] else 'no'} girth={_f(g['girth'])} "
                 f"odd-girth={_f(g['odd_girth'])} D={g['diameter']}")
    S = report.spectrum
    lines.append("spectrum   " + " ".join(f"{_f(l)}^{m}" for l, m in zip(S.distinct, S.mult)) + f"  (d={S.d})")
    P = report.presystem
    if P is not None:
        lines.append(f"alpha      {_vec(P.alpha)}")
        lines.append(f"beta       {_vec(P.beta)}")
        lines.append(f"gamma      {_vec(P.gamma)}")
        lines.append(f"p_i(l0)    {_vec(P.p_at_lambda0)}")
    if report.profiles:
        lines.append("profiles   i   c_bar      a_bar      b_bar      k_bar      c   a   b   k")
        for p in report.profiles:
            lines.append(f"           {p.i:<3d} {_f(p.c_bar):<10} {_f(p.a_bar):<10} {_f(p.b_bar):<10} "
                         f"{_f(p.k_bar_i):<10} {_f(p.c_val):<3} {_f(p.a_val):<3} {_f(p.b_val):<3} {_f(p.k_val)}")
    o = report.oracle
    if o is not None:
        if o.is_drg:
            b, c = o.intersection_array
            lines.append(f"oracle     distance-regular, array {{{','.join(map(str, b))};{','.join(map(str, c))}}}, "
                         f"m*={o.max_pdr}")
        else:
            w = o.witness
            lines.append(f"oracle     not distance-regular, m*={o.max_pdr}; {w['number']}_{w['level']} takes "
                         f"{w['values'][0]} at {tuple(w['pairs'][0])} and {w['values'][1]} at {tuple(w['pairs'][1])}")
    if report.criteria:
        lines.append("criteria")
        width = max(len(c.id) for c in report.criteria)
        for c in report.criteria:
            extra = c.conclusion or c.reason
            if c.note:
                extra = f"{extra}; {c.note}" if extra else c.note
            mark = "" if c.consistent else "  !! INCONSISTENT"
            lines.append(f"  {c.id:<{width}}  {c.verdict:<12}  {extra}{mark}")
    if report.flags:
        lines.append("flags      " + ", ".join(report.flags))
    certs = report.certified_by()
    by = ", ".join(certs) if certs else "none"
    if o is None:
        lines.append("UNDECIDED (pipeline aborted)")
    elif o.is_drg:
        lines.append(f"DISTANCE-REGULAR (oracle) - certified by: {by}")
    else:
        lines.append(f"NOT DISTANCE-REGULAR (oracle) - certified by: {by}")
    return "\n".join(lines) + "\n"
