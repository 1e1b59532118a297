"""Divisors on a metric chain of loops, in exact rational arithmetic.

The chain glues g circles in a path at nodes Q_0..Q_g: loop k has two arcs of
lengths l_k and m_k between Q_{k-1} and Q_k.  Coordinates on loop k run from
Q_{k-1} at 0 along the l-arc (Q_k sits at l_k) and back along the m-arc, taken
modulo the circumference c_k = l_k + m_k.

Linear equivalence on a single loop is class arithmetic in the circle group
R/(c_k Z): two divisors of equal degree are equivalent iff the weighted sums
of their coordinates agree mod c_k.  Everything here (reduction, effectivity,
special points, vanishing tables, rank) reduces to that one fact, which is why
all lengths and coordinates are Fractions and no floats appear anywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence, Union

from .elliptic import VanishingSequence
from .tableaux import Tableau


class RankDeficiencyError(ValueError):
    """The dynamic vanishing table cannot be maintained (rank too small)."""


class AmbiguousSpecialPointError(ValueError):
    """A leftover point is special for two indices (non-generic geometry)."""


class SamplingError(RuntimeError):
    """Generic-point sampling exhausted its retry budget."""


def _mod(x: Fraction, c: Fraction) -> Fraction:
    return x - (x // c) * c


@dataclass(frozen=True)
class ChainGeometry:
    """Arc lengths (l_k, m_k) of the g loops, all positive exact rationals."""

    lengths: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        lengths = tuple(
            (Fraction(l), Fraction(m)) for l, m in self.lengths
        )
        object.__setattr__(self, "lengths", lengths)
        if not lengths:
            raise ValueError("chain needs at least one loop")
        for k, (l, m) in enumerate(lengths, start=1):
            if l <= 0 or m <= 0:
                raise ValueError(f"loop {k}: lengths must be positive, got ({l}, {m})")

    @property
    def g(self) -> int:
        return len(self.lengths)

    def ell(self, k: int) -> Fraction:
        return self.lengths[k - 1][0]

    def em(self, k: int) -> Fraction:
        return self.lengths[k - 1][1]

    def circumference(self, k: int) -> Fraction:
        l, m = self.lengths[k - 1]
        return l + m


@dataclass(frozen=True)
class Node:
    """The node Q_i, i in 0..g."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"node index must be >= 0, got {self.index}")


@dataclass(frozen=True)
class Interior:
    """A non-node point on loop ``loop`` at canonical coordinate ``coord``."""

    loop: int
    coord: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coord", Fraction(self.coord))
        if self.loop < 1:
            raise ValueError(f"loop index must be >= 1, got {self.loop}")
        if self.coord <= 0:
            raise ValueError(f"interior coordinate must be positive, got {self.coord}")


ChainPoint = Union[Node, Interior]


def point_on_loop(geom: ChainGeometry, k: int, coord: Fraction) -> ChainPoint:
    """Canonical point of loop k at ``coord`` (any rational, reduced mod c_k)."""
    if not 1 <= k <= geom.g:
        raise ValueError(f"loop {k} outside 1..{geom.g}")
    x = _mod(Fraction(coord), geom.circumference(k))
    if x == 0:
        return Node(k - 1)
    if x == geom.ell(k):
        return Node(k)
    return Interior(k, x)


def chain_point_key(pt: ChainPoint) -> tuple:
    """Sort key placing points in left-to-right chain order."""
    if isinstance(pt, Node):
        return (pt.index, 0, Fraction(0))
    return (pt.loop - 1, 1, pt.coord)


@dataclass(frozen=True)
class TropicalDivisor:
    """Finite formal sum of chain points with nonzero integer multiplicities."""

    points: tuple[tuple[ChainPoint, int], ...]

    def __post_init__(self):
        merged: dict[ChainPoint, int] = {}
        for pt, mult in self.points:
            merged[pt] = merged.get(pt, 0) + int(mult)
        cleaned = tuple(
            (pt, m)
            for pt, m in sorted(merged.items(), key=lambda it: chain_point_key(it[0]))
            if m != 0
        )
        object.__setattr__(self, "points", cleaned)

    @classmethod
    def from_dict(cls, d: Mapping[ChainPoint, int]) -> "TropicalDivisor":
        return cls(tuple(d.items()))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.points)

    def multiplicity(self, pt: ChainPoint) -> int:
        for q, m in self.points:
            if q == pt:
                return m
        return 0

    def as_dict(self) -> dict[ChainPoint, int]:
        return dict(self.points)

    def __add__(self, other: "TropicalDivisor") -> "TropicalDivisor":
        return TropicalDivisor(self.points + other.points)

    def __sub__(self, other: "TropicalDivisor") -> "TropicalDivisor":
        return TropicalDivisor(
            self.points + tuple((pt, -m) for pt, m in other.points)
        )


@dataclass(frozen=True)
class GenericityReport:
    generic: bool
    failing_loops: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.generic


def check_genericity(geom: ChainGeometry) -> GenericityReport:
    """Test the length-ratio condition that makes the chain Brill-Noether general.

    Loop k fails when l_k/m_k in lowest terms p/q has both p and q below
    2g - 2, i.e. the ratio equals a quotient of two positive integers smaller
    than 2g - 2.
    """
    bound = 2 * geom.g - 2
    failing = []
    for k in range(1, geom.g + 1):
        ratio = geom.ell(k) / geom.em(k)
        if max(ratio.numerator, ratio.denominator) < bound:
            failing.append(k)
    return GenericityReport(not failing, tuple(failing))


def loop_class(
    geom: ChainGeometry, k: int, pts: Iterable[tuple[Fraction, int]]
) -> Fraction:
    """Class in R/(c_k Z) of a divisor on loop k given as (coord, mult) pairs.

    Two divisors on the loop of equal degree are linearly equivalent iff their
    classes agree.
    """
    c = geom.circumference(k)
    total = Fraction(0)
    for coord, mult in pts:
        total += Fraction(coord) * mult
    return _mod(total, c)


def loop_reduce(
    geom: ChainGeometry, k: int, pts: Sequence[tuple[Fraction, int]]
) -> tuple[int, ChainPoint | None]:
    """Concentrate a loop-k divisor at Q_{k-1}, leaving at most one point.

    Returns ``(moved, leftover)`` with the input equivalent to
    ``moved * Q_{k-1} + leftover``: the full degree moves when the class is
    zero, otherwise degree-1 moves and the leftover sits at the class
    coordinate (possibly the node Q_k, never Q_{k-1}).
    """
    degree = sum(m for _, m in pts)
    sigma = loop_class(geom, k, pts)
    if sigma == 0:
        return degree, None
    return degree - 1, point_on_loop(geom, k, sigma)


@dataclass(frozen=True)
class ReducedChain:
    """Reduced representative u * Q_0 + sum_k epsilon_k * x_k of a divisor.

    ``epsilon[k-1]`` is 0/1 and ``x[k-1]`` the leftover point on loop k (never
    Q_{k-1}, possibly Q_k); ``u`` is maximal among such representatives.
    """

    u: int
    epsilon: tuple[int, ...]
    x: tuple[ChainPoint | None, ...]


def reduce_to_q0(geom: ChainGeometry, divisor: TropicalDivisor) -> ReducedChain:
    """Sweep the chain right to left, concentrating degree at Q_0.

    Works loop by loop from loop g down to loop 1, each time moving as much
    degree as the loop class allows onto the left node.  Negative
    multiplicities are allowed; the result is the canonical representative of
    the divisor class.
    """
    g = geom.g
    node_mult = [0] * (g + 1)
    loops: dict[int, list[tuple[Fraction, int]]] = {k: [] for k in range(1, g + 1)}
    for pt, mult in divisor.points:
        if isinstance(pt, Node):
            if pt.index > g:
                raise ValueError(f"node Q_{pt.index} outside chain of genus {g}")
            node_mult[pt.index] += mult
        else:
            if pt.loop > g:
                raise ValueError(f"loop {pt.loop} outside chain of genus {g}")
            loops[pt.loop].append((pt.coord, mult))
    epsilon = [0] * g
    leftovers: list[ChainPoint | None] = [None] * g
    carry = node_mult[g]
    for k in range(g, 0, -1):
        pts = list(loops[k])
        if carry:
            pts.append((geom.ell(k), carry))
        moved, leftover = loop_reduce(geom, k, pts)
        if leftover is not None:
            epsilon[k - 1] = 1
            leftovers[k - 1] = leftover
        carry = node_mult[k - 1] + moved
    return ReducedChain(carry, tuple(epsilon), tuple(leftovers))


def is_equivalent_to_effective(geom: ChainGeometry, divisor: TropicalDivisor) -> bool:
    """True iff the divisor class contains an effective divisor.

    The reduced representative has maximal coefficient at Q_0 and one point of
    multiplicity one elsewhere, so the class is effective exactly when that
    coefficient is non-negative.
    """
    return reduce_to_q0(geom, divisor).u >= 0


def solve_special_point(geom: ChainGeometry, k: int, u: int) -> ChainPoint:
    """The unique x on loop k with u * Q_{k-1} + x equivalent to (u+1) * Q_k.

    Solving in the circle class group gives coord(x) = (u+1) * l_k mod c_k.
    """
    if u < 0:
        raise ValueError(f"multiplicity must be >= 0, got {u}")
    return point_on_loop(geom, k, (u + 1) * geom.ell(k))


def _coord_on_loop(geom: ChainGeometry, k: int, pt: ChainPoint) -> Fraction:
    if isinstance(pt, Interior):
        if pt.loop != k:
            raise ValueError(f"point on loop {pt.loop}, expected {k}")
        return pt.coord
    if pt.index == k:
        return geom.ell(k)
    if pt.index == k - 1:
        return Fraction(0)
    raise ValueError(f"node Q_{pt.index} not on loop {k}")


@dataclass(frozen=True)
class TropVanishingTable:
    """Vanishing orders u_t(i) at the nodes plus per-loop reduction data.

    ``u[i]`` is the sequence at Q_i for i = 0..g; ``case_tags[k-1]`` records
    which of the five update cases loop k took:

      a: no leftover, all orders drop by one;
      b: no leftover, bottom order already 0 stays, the rest drop;
      c: leftover special at t0 with adjacent collision, orders unchanged;
      d: leftover special at t0, that order climbs by one;
      e: leftover generic, orders unchanged.
    """

    u: tuple[VanishingSequence, ...]
    epsilon: tuple[int, ...]
    x: tuple[ChainPoint | None, ...]
    case_tags: tuple[str, ...]


def tropical_vanishing_table(
    geom: ChainGeometry, divisor: TropicalDivisor, r: int
) -> TropVanishingTable:
    """Dynamic computation of the node vanishing orders of a rank->=r divisor.

    Seeds u(0) = (u, u-1, ..., u-r) from the reduced representative and walks
    the loops left to right applying the five update cases, detecting
    speciality of each leftover point by exact class comparison.  Raises
    :class:`RankDeficiencyError` when the strictly-decreasing non-negative
    shape cannot be maintained, which certifies rank < r.
    """
    if r < 0:
        raise ValueError(f"rank must be >= 0, got {r}")
    reduced = reduce_to_q0(geom, divisor)
    if reduced.u < r:
        raise RankDeficiencyError(
            f"rank deficiency at loop 0: reduced multiplicity {reduced.u} < {r}"
        )
    u = list(range(reduced.u, reduced.u - r - 1, -1))
    rows = [VanishingSequence(tuple(u))]
    tags = []
    for i in range(1, geom.g + 1):
        if reduced.epsilon[i - 1] == 0:
            if u[r] > 0:
                u = [v - 1 for v in u]
                tags.append("a")
            else:
                u = [v - 1 for v in u[:r]] + [u[r]]
                tags.append("b")
        else:
            x = reduced.x[i - 1]
            coord = _coord_on_loop(geom, i, x)
            c = geom.circumference(i)
            l = geom.ell(i)
            specials = [
                t for t in range(r + 1) if _mod((u[t] + 1) * l, c) == coord
            ]
            if not specials:
                tags.append("e")
            elif len(specials) > 1:
                raise AmbiguousSpecialPointError(
                    f"loop {i}: leftover special for t = {specials} "
                    "(geometry not generic enough)"
                )
            else:
                t0 = specials[0]
                if t0 > 0 and u[t0] + 1 == u[t0 - 1]:
                    tags.append("c")
                else:
                    u = list(u)
                    u[t0] += 1
                    tags.append("d")
        if u[r] < 0 or any(a <= b for a, b in zip(u, u[1:])):
            raise RankDeficiencyError(
                f"rank deficiency at loop {i}: orders {tuple(u)} lose shape"
            )
        rows.append(VanishingSequence(tuple(u)))
    return TropVanishingTable(
        tuple(rows), reduced.epsilon, reduced.x, tuple(tags)
    )


_SAMPLE_DENOMINATOR = 1009
_SAMPLE_RETRIES = 64


def divisor_from_tableau(
    t: Tableau, geom: ChainGeometry, seed: int = 0
) -> TropicalDivisor:
    """The divisor r * Q_0 + sum epsilon_i x_i encoded by a tableau.

    Indices in the last column contribute nothing; an index in column
    t(i) < r contributes the special point solving
    u * Q_{i-1} + x = (u+1) * Q_i for u = r - t(i) + beta(i,t(i)) - beta(i,r) - 1;
    a free index contributes a sampled interior point validated non-special
    for every multiplicity up to d (and distinct from both nodes).  Sampling
    is deterministic given ``seed``.
    """
    p = t.params
    if p.g != geom.g:
        raise ValueError(f"tableau genus {p.g} != geometry genus {geom.g}")
    rng = random.Random(seed)
    support: dict[ChainPoint, int] = {}
    if p.r > 0:
        support[Node(0)] = p.r
    for i in range(1, p.g + 1):
        if t.is_placed(i):
            s = t.column_of(i)
            if s == p.r:
                continue
            u = p.r - s + t.column_fill(i, s) - t.column_fill(i, p.r) - 1
            x = solve_special_point(geom, i, u)
        else:
            x = _sample_generic_point(geom, i, p.d, rng)
        support[x] = support.get(x, 0) + 1
    return TropicalDivisor.from_dict(support)


def _sample_generic_point(
    geom: ChainGeometry, k: int, d: int, rng: random.Random
) -> Interior:
    c = geom.circumference(k)
    l = geom.ell(k)
    avoid = {_mod((u + 1) * l, c) for u in range(d + 1)}
    avoid.update({Fraction(0), l})
    for _ in range(_SAMPLE_RETRIES):
        j = rng.randrange(1, _SAMPLE_DENOMINATOR)
        coord = c * j / _SAMPLE_DENOMINATOR
        if coord not in avoid:
            return Interior(k, coord)
    raise SamplingError(f"loop {k}: could not sample a generic point")


def rank_at_least(geom: ChainGeometry, divisor: TropicalDivisor, r: int) -> bool:
    """Rank test against node-supported witnesses.

    True iff D - D' is equivalent to an effective divisor for every effective
    D' of degree r supported on the nodes Q_0..Q_g; the nodes are a
    rank-determining set on the chain, so this computes the true rank bound.
    """
    if r <= 0:
        return is_equivalent_to_effective(geom, divisor) if r == 0 else True
    base = divisor.as_dict()
    for combo in combinations_with_replacement(range(geom.g + 1), r):
        test = dict(base)
        for j in combo:
            node = Node(j)
            test[node] = test.get(node, 0) - 1
        if not is_equivalent_to_effective(geom, TropicalDivisor.from_dict(test)):
            return False
    return True


def tropical_rank(geom: ChainGeometry, divisor: TropicalDivisor) -> int:
    """Exact rank: -1 when not effective-equivalent, else the largest passing r."""
    if not is_equivalent_to_effective(geom, divisor):
        return -1
    r = 0
    while r + 1 <= divisor.degree and rank_at_least(geom, divisor, r + 1):
        r += 1
    return r
