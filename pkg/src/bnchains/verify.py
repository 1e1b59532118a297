"""Built-in agreement suite: every model checked against every other.

The suite sweeps all parameter triples up to a genus bound and, for each
tableau, checks the combinatorial counts, the node identities of the
concentrated series, the effective round trip, and the agreement of the three
vanishing tables (closed form, effective, dynamic tropical) on randomized
generic geometries.  A budgeted slice of randomized divisors is additionally
cross-checked against the chip-firing oracle.  Failures carry a JSON
reproducer so any disagreement can be replayed in isolation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import serialize
from .effective import (
    check_effective,
    effective_to_eh,
    effective_vanishing_from_tableau,
    eh_to_effective,
)
from .elliptic import check_eh_series, eh_series_from_tableau
from .oracle import bn_rank, chips_from_divisor, is_winnable, subdivide_chain
from .tableaux import BNParams, Tableau, count_components, enumerate_tableaux, validate_tableau
from .tropical import (
    ChainGeometry,
    Node,
    TropicalDivisor,
    check_genericity,
    divisor_from_tableau,
    is_equivalent_to_effective,
    rank_at_least,
    reduce_to_q0,
    tropical_rank,
    tropical_vanishing_table,
)


@dataclass
class VerifyFailure:
    check: str
    detail: str
    reproducer: dict


@dataclass
class SuiteResult:
    checks_run: int = 0
    failures: list[VerifyFailure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def sweep_params(g_max: int) -> list[BNParams]:
    """All (g, d, r) with g <= g_max, rho >= 0 and a non-trivial tableau shape."""
    out = []
    for g in range(1, g_max + 1):
        for r in range(0, g + 1):
            for d in range(0, 2 * g + 1):
                p = BNParams(g, d, r)
                if p.rho >= 0 and p.kbar >= 0:
                    out.append(p)
    return out


def random_generic_geometry(g: int, rng: random.Random) -> ChainGeometry:
    """Generic loop lengths with small denominators, rejection-sampled."""
    bound = max(2 * g - 2, 1)
    while True:
        lengths = []
        for _ in range(g):
            num = rng.randrange(bound, 3 * bound + 1)
            den = rng.randrange(1, 4)
            lengths.append((Fraction(num, den), Fraction(1, rng.randrange(1, 3))))
        geom = ChainGeometry(tuple(lengths))
        if check_genericity(geom).generic:
            return geom


def _tableau_repro(t: Tableau, geom: ChainGeometry | None = None, seed: int | None = None) -> dict:
    repro: dict = {"tableau": serialize.tableau_to_obj(t)}
    if geom is not None:
        repro["geometry"] = serialize.geometry_to_obj(geom)
    if seed is not None:
        repro["seed"] = seed
    return repro


def run_suite(
    g_max: int,
    seed: int = 0,
    geometries_per_param: int = 3,
    oracle_winnability_trials: int = 60,
    oracle_rank_trials: int = 15,
    subdiv_cap: int = 100_000,
    rank_certification_g_max: int = 5,
) -> SuiteResult:
    result = SuiteResult()
    rng = random.Random(seed)
    params_list = sweep_params(g_max)

    for params in params_list:
        expected = count_components(params)
        tableaux = list(enumerate_tableaux(params))
        result.checks_run += 1
        if len(tableaux) != expected:
            result.failures.append(
                VerifyFailure(
                    "component count",
                    f"{params}: enumerated {len(tableaux)}, closed form {expected}",
                    {"params": [params.g, params.d, params.r]},
                )
            )
            continue
        geoms = [random_generic_geometry(params.g, rng) for _ in range(geometries_per_param)]
        for t in tableaux:
            failure = _check_tableau(t, geoms, seed, result, rank_certification_g_max)
            if failure is not None:
                result.failures.append(failure)

    _oracle_slice(
        result,
        rng,
        g_max,
        oracle_winnability_trials,
        oracle_rank_trials,
        subdiv_cap,
    )
    return result


def _check_tableau(
    t: Tableau,
    geoms: list[ChainGeometry],
    seed: int,
    result: SuiteResult,
    rank_certification_g_max: int,
) -> VerifyFailure | None:
    params = t.params
    result.checks_run += 1
    if not validate_tableau(t).ok:
        return VerifyFailure("tableau validity", f"{t}", _tableau_repro(t))

    series = eh_series_from_tableau(t)
    verdict = check_eh_series(series)
    if not (verdict.valid and verdict.refined):
        return VerifyFailure(
            "series validity", verdict.problem or "not refined", _tableau_repro(t)
        )

    effective = eh_to_effective(series)
    everdict = check_effective(effective)
    if not (everdict.valid and everdict.refined):
        return VerifyFailure(
            "effective validity", everdict.problem or "not refined", _tableau_repro(t)
        )
    if effective_to_eh(effective) != series:
        return VerifyFailure("round trip", "effective_to_eh changed the series", _tableau_repro(t))
    for i in range(params.g + 1):
        closed = effective_vanishing_from_tableau(t, i)
        if closed[params.r] != 0:
            return VerifyFailure(
                "effective table", f"w_r({i}) != 0", _tableau_repro(t)
            )

    for geom in geoms:
        divisor = divisor_from_tableau(t, geom, seed=seed)
        if divisor.degree != params.d:
            return VerifyFailure(
                "divisor degree",
                f"degree {divisor.degree} != {params.d}",
                _tableau_repro(t, geom, seed),
            )
        reduced = reduce_to_q0(geom, divisor)
        rebuilt: dict = {Node(0): reduced.u}
        for k, (eps, x) in enumerate(zip(reduced.epsilon, reduced.x), start=1):
            if eps:
                rebuilt[x] = rebuilt.get(x, 0) + 1
        residue = reduce_to_q0(
            geom, divisor - TropicalDivisor.from_dict(rebuilt)
        )
        if residue.u != 0 or any(residue.epsilon):
            return VerifyFailure(
                "reduction soundness",
                "reduced representative not equivalent to the divisor",
                _tableau_repro(t, geom, seed),
            )
        try:
            table = tropical_vanishing_table(geom, divisor, params.r)
        except Exception as exc:  # rank deficiency or ambiguity is a failure here
            return VerifyFailure(
                "dynamic table", repr(exc), _tableau_repro(t, geom, seed)
            )
        for i in range(params.g + 1):
            closed = effective_vanishing_from_tableau(t, i)
            for s in range(params.k):
                if table.u[i][s] != closed[s]:
                    return VerifyFailure(
                        "table agreement",
                        f"(i={i}, s={s}): dynamic {table.u[i][s]} vs closed {closed[s]}",
                        _tableau_repro(t, geom, seed),
                    )
        if params.g <= rank_certification_g_max:
            if not rank_at_least(geom, divisor, params.r):
                return VerifyFailure(
                    "rank certification",
                    f"rank < {params.r}",
                    _tableau_repro(t, geom, seed),
                )
            if rank_at_least(geom, divisor, params.r + 1):
                return VerifyFailure(
                    "rank certification",
                    f"rank > {params.r}",
                    _tableau_repro(t, geom, seed),
                )
    return None


def random_rational_divisor(
    geom: ChainGeometry,
    rng: random.Random,
    effective: bool = False,
    max_points: int = 4,
    coord_denominator: int = 12,
) -> TropicalDivisor:
    """Small random divisor with coordinates on a coarse rational lattice."""
    support: dict = {}
    for _ in range(rng.randrange(1, max_points + 1)):
        mult = rng.randrange(1, 4) if effective else rng.choice([-3, -2, -1, 1, 2, 3])
        if rng.random() < 0.4:
            pt = Node(rng.randrange(0, geom.g + 1))
        else:
            k = rng.randrange(1, geom.g + 1)
            c = geom.circumference(k)
            coord = c * Fraction(rng.randrange(1, coord_denominator), coord_denominator)
            from .tropical import point_on_loop

            pt = point_on_loop(geom, k, coord)
        support[pt] = support.get(pt, 0) + mult
    return TropicalDivisor.from_dict(support)


def _small_geometry(g: int, rng: random.Random, generic: bool) -> ChainGeometry:
    lengths = []
    bound = max(2 * g - 2, 1)
    for _ in range(g):
        if generic:
            lengths.append((Fraction(bound + rng.randrange(0, 3)), Fraction(1)))
        else:
            lengths.append(
                (Fraction(rng.randrange(1, 4)), Fraction(rng.randrange(1, 4), 2))
            )
    return ChainGeometry(tuple(lengths))


def _oracle_slice(
    result: SuiteResult,
    rng: random.Random,
    g_max: int,
    winnability_trials: int,
    rank_trials: int,
    subdiv_cap: int,
) -> None:
    g_cap = min(g_max, 4)
    done = 0
    while done < winnability_trials:
        g = rng.randrange(1, g_cap + 1)
        geom = _small_geometry(g, rng, generic=False)
        divisor = random_rational_divisor(geom, rng)
        if not -6 <= divisor.degree <= 6:
            continue
        done += 1
        result.checks_run += 1
        tropical_side = is_equivalent_to_effective(geom, divisor)
        graph = subdivide_chain(geom, [pt for pt, _ in divisor.points], subdiv_cap)
        oracle_side = is_winnable(graph, chips_from_divisor(graph, divisor), 0)
        if tropical_side != oracle_side:
            result.failures.append(
                VerifyFailure(
                    "winnability agreement",
                    f"tropical {tropical_side} vs oracle {oracle_side}",
                    {
                        "geometry": serialize.geometry_to_obj(geom),
                        "divisor": serialize.divisor_to_obj(divisor),
                    },
                )
            )
    done = 0
    while done < rank_trials:
        g = rng.randrange(1, g_cap + 1)
        geom = _small_geometry(g, rng, generic=True)
        # lean divisors keep the exhaustive rank sweep at desk scale
        divisor = random_rational_divisor(
            geom, rng, effective=True, max_points=2, coord_denominator=4
        )
        if divisor.degree > min(4, g + 2):
            continue
        done += 1
        result.checks_run += 1
        tr = tropical_rank(geom, divisor)
        graph = subdivide_chain(geom, [pt for pt, _ in divisor.points], subdiv_cap)
        br = bn_rank(graph, chips_from_divisor(graph, divisor))
        if tr != br:
            result.failures.append(
                VerifyFailure(
                    "rank agreement",
                    f"tropical {tr} vs oracle {br}",
                    {
                        "geometry": serialize.geometry_to_obj(geom),
                        "divisor": serialize.divisor_to_obj(divisor),
                    },
                )
            )
