"""Limit linear series on a general chain of elliptic curves.

The chain glues elliptic components C_1..C_g in a path: Q_i on C_i meets
P_{i+1} on C_{i+1}.  A series of degree d and dimension r assigns each
component a degree-d bundle class and the r+1 distinct vanishing orders of its
section space at P_i and Q_i.  Section spaces themselves are never modeled;
every statement implemented here depends only on vanishing orders and on
whether the bundle class is pinned to the form O(aP + bQ) or free to move.

Bundle classes exploit the genericity of the chain (P_i - Q_i non-torsion):
two pinned classes agree exactly when their P-coefficients agree, and a free
("generic") class never equals a pinned one.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Iterator

from .tableaux import BNParams, Tableau

_TAG_LOCK = threading.Lock()
_TAG_COUNTER = itertools.count()


def fresh_generic_tag() -> str:
    """Monotone unique tag for a generic bundle class (thread-safe)."""
    with _TAG_LOCK:
        return f"gen{next(_TAG_COUNTER)}"


@dataclass(frozen=True)
class BundleClass:
    """Degree-d line bundle class on one elliptic component.

    Either pinned to O(a P_i + (degree-a) Q_i) (``a`` set, ``tag`` None) or a
    generic class identified only by an opaque tag.
    """

    component: int
    degree: int
    a: int | None = None
    tag: str | None = None

    def __post_init__(self):
        if (self.a is None) == (self.tag is None):
            raise ValueError("bundle class needs exactly one of a, tag")

    @classmethod
    def special(cls, component: int, degree: int, a: int) -> "BundleClass":
        return cls(component, degree, a=a)

    @classmethod
    def generic(cls, component: int, degree: int, tag: str | None = None) -> "BundleClass":
        return cls(component, degree, tag=tag if tag is not None else fresh_generic_tag())

    @property
    def is_special(self) -> bool:
        return self.a is not None

    @property
    def b(self) -> int:
        """Coefficient of Q in a pinned class."""
        if self.a is None:
            raise ValueError("generic class has no Q-coefficient")
        return self.degree - self.a

    def h0(self) -> int:
        """Dimension of the space of global sections.

        On an elliptic curve: 0 in negative degree, the degree in positive
        degree, and in degree zero 1 exactly for the trivial class
        (pinned with a == 0, hence b == 0).
        """
        if self.degree < 0:
            return 0
        if self.degree > 0:
            return self.degree
        return 1 if self.a == 0 else 0


def riemann_roch_h0(bundle: BundleClass) -> int:
    """Module-level alias for :meth:`BundleClass.h0`."""
    return bundle.h0()


@dataclass(frozen=True)
class VanishingSequence:
    """Strictly decreasing orders of vanishing, length r+1, last entry >= 0."""

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(v) for v in self.orders)
        object.__setattr__(self, "orders", orders)
        if not orders:
            raise ValueError("vanishing sequence must be non-empty")
        for x, y in zip(orders, orders[1:]):
            if x <= y:
                raise ValueError(f"orders not strictly decreasing: {orders}")
        if orders[-1] < 0:
            raise ValueError(f"orders must be non-negative: {orders}")

    def __getitem__(self, t: int) -> int:
        return self.orders[t]

    def __len__(self) -> int:
        return len(self.orders)

    def __iter__(self):
        return iter(self.orders)

    def shifted(self, delta: int) -> "VanishingSequence":
        return VanishingSequence(tuple(v + delta for v in self.orders))


@dataclass(frozen=True)
class VanishingPairCheck:
    ok: bool
    equality_index: int | None = None
    problem: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_vanishing_pair(d: int, vp: VanishingSequence, vq: VanishingSequence) -> VanishingPairCheck:
    """Check vp[t] + vq[r-t] <= d with equality for at most one t.

    Both bounds are forced for an (r+1)-dimensional section space of a
    degree-d bundle on an elliptic component with P - Q non-torsion: a section
    realizes every opposite pairing, and two exact pairings would pin the
    bundle in two incompatible ways.
    """
    if len(vp) != len(vq):
        return VanishingPairCheck(False, problem="sequences have different lengths")
    r = len(vp) - 1
    equalities = []
    for t in range(r + 1):
        total = vp[t] + vq[r - t]
        if total > d:
            return VanishingPairCheck(
                False, problem=f"vp[{t}] + vq[{r - t}] = {total} exceeds degree {d}"
            )
        if total == d:
            equalities.append(t)
    if len(equalities) > 1:
        return VanishingPairCheck(
            False,
            problem=f"two equalities, at t = {equalities[0]} and t = {equalities[1]}",
        )
    return VanishingPairCheck(True, equality_index=equalities[0] if equalities else None)


@dataclass(frozen=True)
class SeriesFamily:
    """One-parameter family of bundle classes carrying the prescribed vanishing."""

    vanish_p: VanishingSequence
    vanish_q: VanishingSequence


@dataclass(frozen=True)
class UniqueSeries:
    """The single pinned class O(aP + (d-a)Q) carrying the prescribed vanishing."""

    a: int
    vanish_p: VanishingSequence
    vanish_q: VanishingSequence


def propagate_vanishing(
    d: int, u: VanishingSequence, t0: int | None = None
) -> SeriesFamily | UniqueSeries | None:
    """Series on one component whose left vanishing descends from ``u``.

    ``u`` ("d >= u_0 > ... > u_r >= 0") is the vanishing at the previous node.
    With ``t0`` absent: a one-dimensional family exists with vanishing
    (d-u_r, ..., d-u_0) at P and (u_0-1, ..., u_r-1) at Q, iff u_r > 0.
    With ``t0`` given: the unique class O((d-u_{t0})P + u_{t0}Q) carries
    vanishing (d-u_r, ..., d-u_0) at P and (u_0-1, ..., u_{t0}, ..., u_r-1)
    at Q (only index t0 survives undropped), iff u_{t0}+1 < u_{t0-1} (no
    adjacent collision; vacuous at t0 = 0) and u_r > 0 (vacuous at t0 = r).

    Returns None when the existence condition fails.
    """
    r = len(u) - 1
    if u[0] > d:
        raise ValueError(f"top vanishing order {u[0]} exceeds degree {d}")
    vanish_p = VanishingSequence(tuple(d - u[r - j] for j in range(r + 1)))
    if t0 is None:
        if u[r] <= 0:
            return None
        vanish_q = VanishingSequence(tuple(v - 1 for v in u))
        return SeriesFamily(vanish_p, vanish_q)
    if not 0 <= t0 <= r:
        raise ValueError(f"column {t0} outside 0..{r}")
    if t0 != 0 and u[t0] + 1 >= u[t0 - 1]:
        return None
    if t0 != r and u[r] <= 0:
        return None
    orders = tuple(u[t] if t == t0 else u[t] - 1 for t in range(r + 1))
    return UniqueSeries(d - u[t0], vanish_p, VanishingSequence(orders))


def vanishing_from_tableau(t: Tableau, i: int) -> VanishingSequence:
    """Vanishing orders at Q_i of the series encoded by a tableau.

    Closed form u_s(i) = d - s - i + beta(i, s); at i = 0 this is
    (d, d-1, ..., d-r).
    """
    p = t.params
    if not 0 <= i <= p.g:
        raise ValueError(f"component index {i} outside 0..{p.g}")
    return VanishingSequence(
        tuple(p.d - s - i + t.column_fill(i, s) for s in range(p.k))
    )


def bundle_from_tableau(t: Tableau, i: int) -> BundleClass:
    """Bundle class on component i under the tableau's series.

    Placed index: the pinned class with a = t(i) + i - beta(i, t(i)); free
    index: a generic class with a fresh tag.
    """
    p = t.params
    if not 1 <= i <= p.g:
        raise ValueError(f"component index {i} outside 1..{p.g}")
    if not t.is_placed(i):
        return BundleClass.generic(i, p.d)
    s = t.column_of(i)
    a = s + i - t.column_fill(i, s)
    return BundleClass.special(i, p.d, a)


@dataclass(frozen=True)
class EHSeries:
    """Limit linear series data: per-component bundle plus node vanishing.

    ``vanish_p[i-1]`` / ``vanish_q[i-1]`` are the orders at P_i / Q_i, both
    stored strictly decreasing.  Construction checks shapes and degrees only;
    node compatibility is the job of :func:`check_eh_series`.
    """

    params: BNParams
    bundles: tuple[BundleClass, ...]
    vanish_p: tuple[VanishingSequence, ...]
    vanish_q: tuple[VanishingSequence, ...]

    def __post_init__(self):
        p = self.params
        if not (len(self.bundles) == len(self.vanish_p) == len(self.vanish_q) == p.g):
            raise ValueError(f"series needs {p.g} components")
        for i, bundle in enumerate(self.bundles, start=1):
            if bundle.degree != p.d:
                raise ValueError(f"component {i}: bundle degree {bundle.degree} != {p.d}")
            if bundle.component != i:
                raise ValueError(f"component {i}: bundle labeled {bundle.component}")
        for seq in (*self.vanish_p, *self.vanish_q):
            if len(seq) != p.k:
                raise ValueError(f"vanishing sequences must have length {p.k}")

    def component(self, i: int) -> tuple[BundleClass, VanishingSequence, VanishingSequence]:
        return self.bundles[i - 1], self.vanish_p[i - 1], self.vanish_q[i - 1]


@dataclass(frozen=True)
class SeriesCheck:
    valid: bool
    refined: bool
    problem: str | None = None

    def __bool__(self) -> bool:
        return self.valid


def check_eh_series(series: EHSeries) -> SeriesCheck:
    """Node condition: vanish_q(i)[t] + vanish_p(i+1)[r-t] >= d at every node.

    Refined when equality holds for every node and every t.  Reports the first
    failing (node, t).
    """
    p = series.params
    r = p.r
    refined = True
    for i in range(1, p.g):
        vq = series.vanish_q[i - 1]
        vp_next = series.vanish_p[i]
        for t in range(r + 1):
            total = vq[t] + vp_next[r - t]
            if total < p.d:
                return SeriesCheck(
                    False,
                    False,
                    f"node Q_{i}: vanish_q[{t}] + vanish_p[{r - t}] = {total} < {p.d}",
                )
            if total > p.d:
                refined = False
    return SeriesCheck(True, refined)


def eh_series_from_tableau(t: Tableau) -> EHSeries:
    """Assemble the full series encoded by a tableau.

    Q-side vanishing comes from the closed form; the P-side at component i is
    forced by refinedness to (d - u_r(i-1), ..., d - u_0(i-1)).  The result is
    always valid and refined.
    """
    p = t.params
    bundles = []
    vanish_p = []
    vanish_q = []
    prev = vanishing_from_tableau(t, 0)
    for i in range(1, p.g + 1):
        here = vanishing_from_tableau(t, i)
        r = p.r
        vanish_p.append(VanishingSequence(tuple(p.d - prev[r - j] for j in range(r + 1))))
        vanish_q.append(here)
        bundles.append(bundle_from_tableau(t, i))
        prev = here
    return EHSeries(p, tuple(bundles), tuple(vanish_p), tuple(vanish_q))


@dataclass(frozen=True)
class BNComponent:
    """One irreducible component of the Brill-Noether locus."""

    tableau: Tableau
    world: str  # "elliptic" | "tropical"

    @property
    def dimension(self) -> int:
        return len(self.tableau.free_indices)


def components_elliptic(params: BNParams) -> Iterator[BNComponent]:
    """Stream the components of the locus on the elliptic chain.

    Empty whenever rho < 0; each component's dimension equals rho.
    """
    from .tableaux import enumerate_tableaux

    for t in enumerate_tableaux(params):
        yield BNComponent(t, "elliptic")


@dataclass(frozen=True)
class IntersectionResult:
    intersects: bool
    dimension: int | None = None


def component_intersection(t1: Tableau, t2: Tableau) -> IntersectionResult:
    """Whether two components meet in the Jacobian, and the meeting dimension.

    They intersect iff every index placed in both tableaux has the same
    diagonal t - m in each (the two pinned bundle classes coincide); the
    intersection dimension is the number of indices placed in neither.
    """
    if t1.params != t2.params:
        raise ValueError("tableaux have different parameters")
    placed1 = set(t1.placed_indices)
    placed2 = set(t2.placed_indices)
    for i in sorted(placed1 & placed2):
        d1 = t1.column_of(i) - t1.row_of(i)
        d2 = t2.column_of(i) - t2.row_of(i)
        if d1 != d2:
            return IntersectionResult(False)
    outside = [
        i for i in range(1, t1.params.g + 1) if i not in placed1 and i not in placed2
    ]
    return IntersectionResult(True, len(outside))
