"""Brute-force chip-firing oracle on an integer subdivision of the chain.

This is the safety net for the exact-rational machinery: the metric chain is
scaled by the least common multiple of all denominators so that every landmark
(node or registered divisor point) is a vertex of a finite multigraph with
unit edges, and then winnability and Baker-Norine rank are computed purely
graph-side with Dhar's burning algorithm and exhaustive search.  Nothing here
shares logic with the loop-class arithmetic it cross-checks.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import combinations_with_replacement
from math import lcm
from typing import Iterable, Mapping

from .tropical import ChainGeometry, ChainPoint, Interior, Node, TropicalDivisor


class OracleTooLargeError(RuntimeError):
    """Requested model exceeds the configured subdivision or degree caps."""


class DiscreteGraph:
    """Unit-edge multigraph model of a chain of loops.

    Loop k becomes a cycle of N*(l_k + m_k) edges, consecutive loops sharing
    the node vertex between them.  ``markers`` maps every chain landmark
    (nodes Q_0..Q_g and registered interior points) to its vertex.
    """

    def __init__(
        self,
        adjacency: tuple[tuple[int, ...], ...],
        node_vertices: tuple[int, ...],
        interior_vertices: dict[tuple[int, Fraction], int],
        scale: int,
    ):
        self.adjacency = adjacency
        self.node_vertices = node_vertices
        self._interior = interior_vertices
        self.scale = scale

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    @property
    def markers(self) -> dict[ChainPoint, int]:
        out: dict[ChainPoint, int] = {
            Node(i): v for i, v in enumerate(self.node_vertices)
        }
        for (loop, coord), v in self._interior.items():
            out[Interior(loop, coord)] = v
        return out

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def vertex_of(self, pt: ChainPoint) -> int:
        if isinstance(pt, Node):
            if not 0 <= pt.index < len(self.node_vertices):
                raise ValueError(f"node Q_{pt.index} outside this chain")
            return self.node_vertices[pt.index]
        try:
            return self._interior[(pt.loop, pt.coord)]
        except KeyError:
            raise ValueError(f"point {pt} is not a registered marker") from None


def subdivide_chain(
    geom: ChainGeometry,
    extra_points: Iterable[ChainPoint] = (),
    subdiv_cap: int = 100_000,
) -> DiscreteGraph:
    """Build the unit-edge model with every landmark on a vertex.

    The scale N is the exact lcm of the denominators of all arc lengths and
    extra-point coordinates, so placement is bit-exact.  Raises
    :class:`OracleTooLargeError` when N * sum(l_k + m_k) exceeds the cap.
    """
    extras = list(extra_points)
    denominators = [1]
    for l, m in geom.lengths:
        denominators.append(l.denominator)
        denominators.append(m.denominator)
    for pt in extras:
        if isinstance(pt, Interior):
            denominators.append(pt.coord.denominator)
    scale = lcm(*denominators)
    total_units = sum(
        int(scale * (l + m)) for l, m in geom.lengths
    )
    if total_units > subdiv_cap:
        raise OracleTooLargeError(
            f"subdivision needs {total_units} unit edges, cap is {subdiv_cap}"
        )
    edges: list[tuple[int, int]] = []
    node_vertices = [0]
    loop_start = [0]  # first non-shared vertex of each loop (1-based access)
    next_vertex = 1
    for k in range(1, geom.g + 1):
        l, m = geom.lengths[k - 1]
        n_k = int(scale * (l + m))
        start = node_vertices[k - 1]
        # positions 0..n_k-1 around loop k; position 0 is Q_{k-1}
        position_to_vertex = [start] + list(range(next_vertex, next_vertex + n_k - 1))
        loop_start.append(next_vertex)
        next_vertex += n_k - 1
        for j in range(n_k):
            edges.append((position_to_vertex[j], position_to_vertex[(j + 1) % n_k]))
        node_vertices.append(position_to_vertex[int(scale * l)])
    interior_vertices: dict[tuple[int, Fraction], int] = {}
    for pt in extras:
        if isinstance(pt, Node):
            continue
        steps = scale * pt.coord
        if steps.denominator != 1:
            raise AssertionError(f"scale {scale} misses coordinate {pt.coord}")
        j = int(steps)
        if j == 0 or j == int(scale * geom.ell(pt.loop)):
            raise ValueError(f"{pt} is a node in disguise; use Node(...)")
        interior_vertices[(pt.loop, pt.coord)] = loop_start[pt.loop] + j - 1
    adjacency: list[list[int]] = [[] for _ in range(next_vertex)]
    for a, b in edges:
        adjacency[a].append(b)
        adjacency[b].append(a)
    return DiscreteGraph(
        tuple(tuple(nbrs) for nbrs in adjacency),
        tuple(node_vertices),
        interior_vertices,
        scale,
    )


class ChipConfig:
    """Integer chip counts on the vertices (finite support, zeros dropped)."""

    __slots__ = ("_chips",)

    def __init__(self, chips: Mapping[int, int]):
        self._chips = {int(v): int(c) for v, c in chips.items() if c != 0}

    @property
    def degree(self) -> int:
        return sum(self._chips.values())

    def __getitem__(self, v: int) -> int:
        return self._chips.get(v, 0)

    def items(self):
        return self._chips.items()

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._chips))

    def __eq__(self, other) -> bool:
        return isinstance(other, ChipConfig) and self._chips == other._chips

    def __repr__(self) -> str:
        inside = ", ".join(f"{v}: {c}" for v, c in sorted(self._chips.items()))
        return f"ChipConfig({{{inside}}})"


def chips_from_divisor(graph: DiscreteGraph, divisor: TropicalDivisor) -> ChipConfig:
    """Place a marker-supported divisor on the model's vertices."""
    chips: dict[int, int] = {}
    for pt, mult in divisor.points:
        v = graph.vertex_of(pt)
        chips[v] = chips.get(v, 0) + mult
    return ChipConfig(chips)


def _bfs_distances(adjacency, q: int) -> list[int]:
    n = len(adjacency)
    dist = [-1] * n
    dist[q] = 0
    queue = deque([q])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def _settle_debt(adjacency, chips: list[int], q: int, firings: list[int]) -> None:
    """Make every vertex except q non-negative by firing balls around q.

    Processing layers farthest-first, firing the ball {dist < L} sends chips
    only onto layer L, so one descending pass pushes all debt into q.
    """
    n = len(adjacency)
    if all(chips[v] >= 0 for v in range(n) if v != q):
        return
    dist = _bfs_distances(adjacency, q)
    layers: dict[int, list[int]] = {}
    for v in range(n):
        if v != q:
            layers.setdefault(dist[v], []).append(v)
    inflow = [0] * n
    for v in range(n):
        inflow[v] = sum(1 for w in adjacency[v] if dist[w] < dist[v])
    for level in sorted(layers, reverse=True):
        debtors = [v for v in layers[level] if chips[v] < 0]
        if not debtors:
            continue
        times = max(
            (-chips[v] + inflow[v] - 1) // inflow[v] for v in debtors
        )
        ball = [u for u in range(n) if dist[u] < level]
        for u in ball:
            firings[u] += times
            for w in adjacency[u]:
                if dist[w] >= level:
                    chips[u] -= times
                    chips[w] += times


def _burn(adjacency, chips: list[int], q: int) -> tuple[list[int], list[int]]:
    """One pass of Dhar's burning from q.

    Returns the unburnt vertices and, per vertex, the number of edges into the
    burnt set (the out-degree of the unburnt set along which it can fire).
    """
    n = len(adjacency)
    burnt = [False] * n
    burnt[q] = True
    count = [0] * n
    stack = [q]
    while stack:
        v = stack.pop()
        for w in adjacency[v]:
            if not burnt[w]:
                count[w] += 1
                if count[w] > chips[w]:
                    burnt[w] = True
                    stack.append(w)
    return [v for v in range(n) if not burnt[v]], count


def _reduce_in_place(adjacency, chips: list[int], q: int) -> list[int]:
    firings = [0] * len(adjacency)
    _settle_debt(adjacency, chips, q, firings)
    while True:
        unburnt, count = _burn(adjacency, chips, q)
        if not unburnt:
            return firings
        # fire the whole unburnt set as often as legality allows in one batch
        times = min(chips[v] // count[v] for v in unburnt if count[v] > 0)
        unburnt_flags = [False] * len(adjacency)
        for v in unburnt:
            unburnt_flags[v] = True
        for v in unburnt:
            firings[v] += times
            for w in adjacency[v]:
                if not unburnt_flags[w]:
                    chips[v] -= times
                    chips[w] += times


def dhar_reduce(graph: DiscreteGraph, config: ChipConfig, q: int) -> ChipConfig:
    """The unique q-reduced configuration linearly equivalent to the input.

    Non-negative away from q, and no non-empty vertex set avoiding q can fire
    without sending some vertex negative.  Computed by settling debt and then
    iterating Dhar's burning with batched set-firings.
    """
    chips = [0] * graph.vertex_count
    for v, c in config.items():
        chips[v] = c
    _reduce_in_place(graph.adjacency, chips, q)
    return ChipConfig({v: c for v, c in enumerate(chips) if c})


def dhar_reduce_with_firings(
    graph: DiscreteGraph, config: ChipConfig, q: int
) -> tuple[ChipConfig, tuple[int, ...]]:
    """Reduction plus the per-vertex firing counts realizing it."""
    chips = [0] * graph.vertex_count
    for v, c in config.items():
        chips[v] = c
    firings = _reduce_in_place(graph.adjacency, chips, q)
    return ChipConfig({v: c for v, c in enumerate(chips) if c}), tuple(firings)


def is_winnable(graph: DiscreteGraph, config: ChipConfig, q: int) -> bool:
    """True iff the configuration is equivalent to an effective one."""
    reduced = dhar_reduce(graph, config, q)
    return reduced[q] >= 0


def bn_rank(graph: DiscreteGraph, config: ChipConfig, degree_cap: int = 8) -> int:
    """Baker-Norine rank by exhaustive search over vertex-supported witnesses.

    -1 when not winnable, else the largest r such that removing any effective
    degree-r configuration leaves a winnable one.  Witness order is the
    lexicographic multiset order on vertices with early exit, so runs are
    deterministic.  Degrees above ``degree_cap`` are refused.
    """
    degree = config.degree
    if degree > degree_cap:
        raise OracleTooLargeError(
            f"degree {degree} exceeds rank-search cap {degree_cap}"
        )
    adjacency = graph.adjacency
    n = graph.vertex_count
    base = [0] * n
    for v, c in config.items():
        base[v] = c
    q = 0

    def winnable(chips: list[int]) -> bool:
        work = list(chips)
        _reduce_in_place(adjacency, work, q)
        return work[q] >= 0

    if not winnable(base):
        return -1
    r = 0
    while r + 1 <= degree:
        passed = True
        for combo in combinations_with_replacement(range(n), r + 1):
            test = list(base)
            for v in combo:
                test[v] -= 1
            if not winnable(test):
                passed = False
                break
        if not passed:
            break
        r += 1
    return r
