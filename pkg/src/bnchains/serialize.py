"""JSON object (de)serialization for every value the CLI reads or writes.

Rationals travel as "p/q" strings (always with the denominator, "13/1");
vanishing sequences as decreasing integer lists; tableaux as row lists.  Every
``*_to_obj`` output re-parses to an equal value through the matching
``*_from_obj``.
"""

from __future__ import annotations

from fractions import Fraction

from .effective import ConcentrationDescription, ConcentrationEntry, EffectiveSeries
from .elliptic import BundleClass, EHSeries, VanishingSequence
from .tableaux import BNParams, Tableau
from .tropical import (
    ChainGeometry,
    ChainPoint,
    Interior,
    Node,
    ReducedChain,
    TropicalDivisor,
    TropVanishingTable,
    point_on_loop,
)


def frac_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def frac_from_str(s) -> Fraction:
    return Fraction(s)


# -- tableaux ----------------------------------------------------------------

def tableau_to_obj(t: Tableau) -> dict:
    return {
        "g": t.params.g,
        "d": t.params.d,
        "r": t.params.r,
        "rows": [list(row) for row in t.rows],
    }


def tableau_from_obj(obj: dict) -> Tableau:
    params = BNParams(int(obj["g"]), int(obj["d"]), int(obj["r"]))
    rows = tuple(tuple(int(v) for v in row) for row in obj["rows"])
    return Tableau(params, rows)


# -- series ------------------------------------------------------------------

def _bundle_to_obj(bundle: BundleClass) -> dict:
    if bundle.is_special:
        return {"aP": bundle.a, "bQ": bundle.b}
    return {"generic": bundle.tag}


def _bundle_from_obj(obj: dict, component: int, degree: int) -> BundleClass:
    if "generic" in obj:
        return BundleClass.generic(component, degree, tag=str(obj["generic"]))
    a = int(obj["aP"])
    if a + int(obj["bQ"]) != degree:
        raise ValueError(
            f"component {component}: aP + bQ != degree {degree}"
        )
    return BundleClass.special(component, degree, a)


def _seq_to_list(seq: VanishingSequence) -> list[int]:
    return list(seq.orders)


def _seq_from_list(values) -> VanishingSequence:
    return VanishingSequence(tuple(int(v) for v in values))


def eh_series_to_obj(series: EHSeries) -> dict:
    return {
        "g": series.params.g,
        "d": series.params.d,
        "r": series.params.r,
        "components": [
            {
                "bundle": _bundle_to_obj(b),
                "vanish_P": _seq_to_list(vp),
                "vanish_Q": _seq_to_list(vq),
            }
            for b, vp, vq in zip(series.bundles, series.vanish_p, series.vanish_q)
        ],
    }


def eh_series_from_obj(obj: dict) -> EHSeries:
    params = BNParams(int(obj["g"]), int(obj["d"]), int(obj["r"]))
    comps = obj["components"]
    if len(comps) != params.g:
        raise ValueError(f"expected {params.g} components, got {len(comps)}")
    bundles = tuple(
        _bundle_from_obj(c["bundle"], i, params.d) for i, c in enumerate(comps, 1)
    )
    vanish_p = tuple(_seq_from_list(c["vanish_P"]) for c in comps)
    vanish_q = tuple(_seq_from_list(c["vanish_Q"]) for c in comps)
    return EHSeries(params, bundles, vanish_p, vanish_q)


def effective_series_to_obj(series: EffectiveSeries) -> dict:
    return {
        "g": series.params.g,
        "d": series.params.d,
        "r": series.params.r,
        "components": [
            {
                "degree": d_i,
                "bundle": _bundle_to_obj(b),
                "vanish_P": _seq_to_list(wp),
                "vanish_Q": _seq_to_list(wq),
            }
            for d_i, b, wp, wq in zip(
                series.degrees, series.bundles, series.w_p, series.w_q
            )
        ],
        "a": list(series.node_degrees),
    }


def effective_series_from_obj(obj: dict) -> EffectiveSeries:
    params = BNParams(int(obj["g"]), int(obj["d"]), int(obj["r"]))
    comps = obj["components"]
    if len(comps) != params.g:
        raise ValueError(f"expected {params.g} components, got {len(comps)}")
    degrees = tuple(int(c["degree"]) for c in comps)
    bundles = tuple(
        _bundle_from_obj(c["bundle"], i, d_i)
        for i, (c, d_i) in enumerate(zip(comps, degrees), 1)
    )
    w_p = tuple(_seq_from_list(c["vanish_P"]) for c in comps)
    w_q = tuple(_seq_from_list(c["vanish_Q"]) for c in comps)
    node_degrees = tuple(int(a) for a in obj["a"])
    return EffectiveSeries(params, degrees, bundles, w_p, w_q, node_degrees)


# -- tropical ----------------------------------------------------------------

def geometry_to_obj(geom: ChainGeometry) -> dict:
    return {
        "g": geom.g,
        "loops": [
            {"l": frac_to_str(l), "m": frac_to_str(m)} for l, m in geom.lengths
        ],
    }


def geometry_from_obj(obj: dict) -> ChainGeometry:
    loops = obj["loops"]
    if int(obj["g"]) != len(loops):
        raise ValueError(f"g = {obj['g']} but {len(loops)} loops given")
    return ChainGeometry(
        tuple((frac_from_str(lp["l"]), frac_from_str(lp["m"])) for lp in loops)
    )


def point_to_obj(pt: ChainPoint) -> dict:
    if isinstance(pt, Node):
        return {"node": pt.index}
    return {"loop": pt.loop, "coord": frac_to_str(pt.coord)}


def point_from_obj(obj: dict, geom: ChainGeometry | None = None) -> ChainPoint:
    if "node" in obj:
        return Node(int(obj["node"]))
    loop = int(obj["loop"])
    coord = frac_from_str(obj["coord"])
    if geom is not None:
        return point_on_loop(geom, loop, coord)
    return Interior(loop, coord)


def divisor_to_obj(divisor: TropicalDivisor) -> dict:
    return {
        "points": [
            {**point_to_obj(pt), "mult": mult} for pt, mult in divisor.points
        ]
    }


def divisor_from_obj(obj: dict, geom: ChainGeometry | None = None) -> TropicalDivisor:
    pairs = []
    for entry in obj["points"]:
        pt = point_from_obj(entry, geom)
        pairs.append((pt, int(entry["mult"])))
    return TropicalDivisor(tuple(pairs))


def reduced_to_obj(reduced: ReducedChain) -> dict:
    return {
        "u": reduced.u,
        "epsilon": list(reduced.epsilon),
        "x": [None if pt is None else point_to_obj(pt) for pt in reduced.x],
    }


def table_to_obj(table: TropVanishingTable) -> dict:
    return {
        "u": [_seq_to_list(row) for row in table.u],
        "epsilon": list(table.epsilon),
        "x": [None if pt is None else point_to_obj(pt) for pt in table.x],
        "cases": list(table.case_tags),
    }


def concentration_to_obj(desc: ConcentrationDescription) -> dict:
    entries = []
    for e in desc.entries:
        entry: dict = {"component": e.component, "kind": e.kind}
        if e.kind == "point":
            entry["cP"] = e.c_p
            entry["cQ"] = e.c_q
        entries.append(entry)
    return {
        "g": desc.params.g,
        "d": desc.params.d,
        "r": desc.params.r,
        "head_degree": desc.head_degree,
        "entries": entries,
    }


def concentration_from_obj(obj: dict) -> ConcentrationDescription:
    params = BNParams(int(obj["g"]), int(obj["d"]), int(obj["r"]))
    entries = []
    for e in obj["entries"]:
        kind = e["kind"]
        if kind == "point":
            entries.append(
                ConcentrationEntry(int(e["component"]), kind, int(e["cP"]), int(e["cQ"]))
            )
        else:
            entries.append(ConcentrationEntry(int(e["component"]), kind))
    return ConcentrationDescription(params, int(obj["head_degree"]), tuple(entries))
