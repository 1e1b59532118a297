"""Plain-text rendering of tableaux, series tables, divisors and tables.

Series tables follow the two-row-per-component convention: the vanishing at
P_i is printed in increasing order, the vanishing at Q_i in decreasing order,
so matching columns pair the orders of one section across the two points.
"""

from __future__ import annotations

from fractions import Fraction

from .effective import ConcentrationDescription, EffectiveSeries
from .elliptic import BundleClass, EHSeries
from .tableaux import Tableau
from .tropical import (
    ChainGeometry,
    ChainPoint,
    Interior,
    Node,
    ReducedChain,
    TropicalDivisor,
    TropVanishingTable,
    chain_point_key,
)


def render_tableau(t: Tableau) -> str:
    if not t.rows:
        return f"(empty tableau; free indices {list(t.free_indices)})"
    width = max(len(str(v)) for row in t.rows for v in row)
    lines = [" ".join(f"{v:>{width}}" for v in row) for row in t.rows]
    if t.free_indices:
        lines.append(f"free: {list(t.free_indices)}")
    return "\n".join(lines)


def bundle_label(bundle: BundleClass) -> str:
    if not bundle.is_special:
        return f"generic[{bundle.tag}]"
    i = bundle.component
    terms = []
    if bundle.a:
        terms.append(f"{bundle.a if bundle.a != 1 else ''}P_{i}")
    if bundle.b:
        terms.append(f"{bundle.b if bundle.b != 1 else ''}Q_{i}")
    if not terms:
        return "O"
    return "O(" + "+".join(terms) + ")"


def _series_table(params, bundles, left_seqs, right_seqs, left_pt, right_pt) -> str:
    rows = []
    for i in range(1, params.g + 1):
        label = bundle_label(bundles[i - 1])
        asc = " ".join(str(v) for v in reversed(left_seqs[i - 1].orders))
        desc = " ".join(str(v) for v in right_seqs[i - 1].orders)
        rows.append((f"C_{i}", label, f"{left_pt}_{i}", asc, f"{right_pt}_{i}", desc))
    widths = [max(len(row[j]) for row in rows) for j in range(6)]
    lines = []
    for row in rows:
        lines.append(
            f"{row[0]:<{widths[0]}}  {row[1]:<{widths[1]}}  "
            f"{row[2]:>{widths[2]}}: {row[3]:<{widths[3]}}  "
            f"{row[4]:>{widths[4]}}: {row[5]:<{widths[5]}}".rstrip()
        )
    return "\n".join(lines)


def render_eh_series(series: EHSeries) -> str:
    return _series_table(
        series.params, series.bundles, series.vanish_p, series.vanish_q, "P", "Q"
    )


def render_effective_series(series: EffectiveSeries) -> str:
    table = _series_table(
        series.params, series.bundles, series.w_p, series.w_q, "P", "Q"
    )
    if series.node_degrees:
        nodes = "  ".join(
            f"Q_{alpha}: {a}" for alpha, a in enumerate(series.node_degrees, start=1)
        )
        return f"{table}\nnode degrees a: {nodes}"
    return table


def render_concentration(desc: ConcentrationDescription) -> str:
    lines = [f"C_1  concentration, degree {desc.head_degree}"]
    for e in desc.entries:
        i = e.component
        if e.kind == "trivial":
            lines.append(f"C_{i}  O")
        elif e.kind == "generic":
            lines.append(f"C_{i}  O(x_{i}), x_{i} generic")
        else:
            p_part = f"{e.c_p if e.c_p != 1 else ''}P_{i}" if e.c_p else ""
            label = f"O({e.c_q if e.c_q != 1 else ''}Q_{i}" + (f"-{p_part})" if p_part else ")")
            lines.append(f"C_{i}  {label}, x_{i} + {e.c_p}P_{i} = {e.c_q}Q_{i} in Pic")
    return "\n".join(lines)


def _frac_label(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def point_label(pt: ChainPoint) -> str:
    if isinstance(pt, Node):
        return f"Q_{pt.index}"
    return f"x(loop {pt.loop} @ {_frac_label(pt.coord)})"


def _term(mult: int, label: str) -> str:
    return label if mult == 1 else f"{mult}·{label}"


def render_divisor(
    divisor: TropicalDivisor, geom: ChainGeometry | None = None
) -> str:
    """Term-by-term rendering, with speciality annotations when ``geom`` given.

    An interior point of loop k at coordinate (u+1)*l_k mod c_k for some
    0 <= u <= deg is annotated with its node congruence; others are marked
    generic.
    """
    if not divisor.points:
        return "0"
    parts = []
    legend = []
    for pt, mult in sorted(divisor.points, key=lambda it: chain_point_key(it[0])):
        if isinstance(pt, Node):
            parts.append(_term(mult, point_label(pt)))
        else:
            parts.append(_term(mult, f"x_{pt.loop}"))
            if geom is not None:
                note = _speciality(geom, pt, divisor.degree)
                legend.append(f"  x_{pt.loop} @ {_frac_label(pt.coord)}{note}")
    head = " + ".join(parts)
    if legend:
        return head + "\n" + "\n".join(legend)
    return head


def _speciality(geom: ChainGeometry, pt: Interior, degree: int) -> str:
    k = pt.loop
    c = geom.circumference(k)
    l = geom.ell(k)
    for u in range(max(degree, 0) + 1):
        x = (u + 1) * l
        if x - (x // c) * c == pt.coord:
            return f"  ({u}·Q_{k - 1} + x_{k} = {u + 1}·Q_{k} in Pic)"
    return "  (generic)"


def render_reduced(reduced: ReducedChain) -> str:
    terms = [_term(reduced.u, "Q_0")]
    for k, (eps, pt) in enumerate(zip(reduced.epsilon, reduced.x), start=1):
        if eps:
            terms.append(point_label(pt))
    return " + ".join(terms)


def render_trop_table(table: TropVanishingTable) -> str:
    lines = []
    for i, row in enumerate(table.u):
        lines.append(f"Q_{i}  u = " + " ".join(str(v) for v in row.orders))
        if i < len(table.case_tags):
            eps = table.epsilon[i]
            tag = table.case_tags[i]
            extra = ""
            if table.x[i] is not None:
                extra = f", x = {point_label(table.x[i])}"
            lines.append(f"  loop {i + 1}: epsilon={eps}, case ({tag}){extra}")
    return "\n".join(lines)
