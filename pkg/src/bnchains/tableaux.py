"""Rectangular standard Young tableaux indexing Brill-Noether components.

A component of the Brill-Noether locus of degree ``d`` and dimension ``r`` on a
genus-``g`` chain is indexed by a filling of a ``k x kbar`` rectangle
(``k = r+1`` columns, ``kbar = g-d+r`` rows) with ``k*kbar`` distinct indices
drawn from ``{1..g}``, strictly increasing along rows and down columns.  The
``rho = g - k*kbar`` indices left out are "free": the series is unconstrained
on those components.

Everything downstream (vanishing orders, bundle classes, tropical divisors) is
driven by the column statistics ``beta(i, s)``: the number of placed indices
``<= i`` sitting in column ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Iterator


@dataclass(frozen=True)
class BNParams:
    """Genus / degree / dimension triple with its derived quantities."""

    g: int
    d: int
    r: int

    def __post_init__(self):
        if self.g < 1:
            raise ValueError(f"genus must be positive, got {self.g}")
        if self.d < 0:
            raise ValueError(f"degree must be non-negative, got {self.d}")
        if self.r < 0:
            raise ValueError(f"dimension must be non-negative, got {self.r}")

    @property
    def k(self) -> int:
        return self.r + 1

    @property
    def kbar(self) -> int:
        # May be <= 0; callers treat that as a trivial/empty regime.
        return self.g - self.d + self.r

    @property
    def rho(self) -> int:
        return self.g - self.k * self.kbar


def brill_noether_number(g: int, d: int, r: int) -> int:
    """Expected dimension ``g - (r+1)(g-d+r)`` of the Brill-Noether locus."""
    return BNParams(g, d, r).rho


def hook_count(k: int, kbar: int) -> int:
    """Number of standard fillings of a rectangle with ``k`` columns and ``kbar`` rows.

    Hook length product, evaluated in exact integer arithmetic: the hook of
    value ``v`` appears ``min(v, k, kbar, k+kbar-v)`` times in a rectangle.
    """
    if k < 1 or kbar < 1:
        raise ValueError(f"rectangle sides must be positive, got {k}x{kbar}")
    numerator = factorial(k * kbar)
    denominator = 1
    for v in range(1, k + kbar):
        denominator *= v ** min(v, k, kbar, k + kbar - v)
    count, rem = divmod(numerator, denominator)
    if rem:
        raise AssertionError(f"hook product does not divide ({k},{kbar})")
    return count


def count_components(params: BNParams) -> int:
    """Closed-form component count ``binomial(g, rho) * hook_count(k, kbar)``.

    Matches the cardinality of :func:`enumerate_tableaux` in every regime:
    zero when ``rho < 0`` or ``kbar < 0``, one when ``kbar == 0``.
    """
    if params.rho < 0 or params.kbar < 0:
        return 0
    shapes = 1 if params.kbar == 0 else hook_count(params.k, params.kbar)
    return comb(params.g, params.rho) * shapes


@dataclass(frozen=True)
class Tableau:
    """A filling of the ``k x kbar`` rectangle with indices from ``{1..g}``.

    ``rows`` lists the rows top to bottom; row ``m`` (1-indexed) and column
    ``t`` (0-indexed) locate a cell.  Construction enforces the structural
    shape (kbar rows of width k, distinct entries in range); monotonicity
    along rows and columns is the job of :func:`validate_tableau`.
    """

    params: BNParams
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        p = self.params
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        expected_rows = max(p.kbar, 0)
        if len(rows) != expected_rows:
            raise ValueError(f"expected {expected_rows} rows, got {len(rows)}")
        for row in rows:
            if len(row) != p.k:
                raise ValueError(f"expected rows of width {p.k}, got {len(row)}")
        entries = [v for row in rows for v in row]
        if len(set(entries)) != len(entries):
            raise ValueError("tableau entries must be distinct")
        for v in entries:
            if not 1 <= v <= p.g:
                raise ValueError(f"entry {v} outside 1..{p.g}")

    @cached_property
    def _positions(self) -> dict[int, tuple[int, int]]:
        # index -> (column t in 0..k-1, row m in 1..kbar)
        pos = {}
        for m, row in enumerate(self.rows, start=1):
            for t, v in enumerate(row):
                pos[v] = (t, m)
        return pos

    @cached_property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(self.rows[m][t] for m in range(len(self.rows)))
            for t in range(self.params.k)
        )

    @property
    def placed_indices(self) -> tuple[int, ...]:
        return tuple(sorted(self._positions))

    @property
    def free_indices(self) -> tuple[int, ...]:
        placed = self._positions
        return tuple(i for i in range(1, self.params.g + 1) if i not in placed)

    def is_placed(self, i: int) -> bool:
        return i in self._positions

    def column_of(self, i: int) -> int:
        """Column ``t(i)`` of a placed index."""
        return self._positions[i][0]

    def row_of(self, i: int) -> int:
        """Row (1-indexed) of a placed index."""
        return self._positions[i][1]

    def column_fill(self, i: int, s: int) -> int:
        """Number of placed indices ``j <= i`` lying in column ``s``.

        This is the prefix column count beta(i, s); ``column_fill(0, s) == 0``.
        """
        if not 0 <= s < self.params.k:
            raise ValueError(f"column {s} outside 0..{self.params.k - 1}")
        return sum(1 for v in self.columns[s] if v <= i)

    def row_word(self) -> tuple[int, ...]:
        return tuple(v for row in self.rows for v in row)


@dataclass(frozen=True)
class TableauCheck:
    ok: bool
    problem: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_tableau(t: Tableau) -> TableauCheck:
    """Check strict increase along rows and down columns.

    Reports the first offending pair of cells.  Structural shape problems are
    already rejected by the :class:`Tableau` constructor.
    """
    for m, row in enumerate(t.rows, start=1):
        for s in range(1, len(row)):
            if row[s - 1] >= row[s]:
                return TableauCheck(
                    False,
                    f"row {m} not increasing: {row[s - 1]} at column {s - 1} "
                    f"vs {row[s]} at column {s}",
                )
    for s, col in enumerate(t.columns):
        for m in range(1, len(col)):
            if col[m - 1] >= col[m]:
                return TableauCheck(
                    False,
                    f"column {s} not increasing: {col[m - 1]} in row {m} "
                    f"vs {col[m]} in row {m + 1}",
                )
    return TableauCheck(True)


@lru_cache(maxsize=None)
def _standard_fillings(k: int, kbar: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All standard fillings of the kbar x k rectangle with 1..k*kbar.

    Backtracking over the values in increasing order: value v may extend
    column s only when the column is not full and the cell to its left is
    already occupied (next free row of column s-1 strictly below that of s).
    Results are sorted by row-reading word for a reproducible stream order.
    """
    n = k * kbar
    heights = [0] * k
    cols = [[0] * kbar for _ in range(k)]
    out: list[tuple[tuple[int, ...], ...]] = []

    def place(v: int) -> None:
        if v > n:
            out.append(tuple(tuple(cols[s][m] for s in range(k)) for m in range(kbar)))
            return
        for s in range(k):
            h = heights[s]
            if h >= kbar:
                continue
            if s > 0 and heights[s - 1] <= h:
                continue
            cols[s][h] = v
            heights[s] = h + 1
            place(v + 1)
            heights[s] = h
        return

    place(1)
    out.sort(key=lambda rows: tuple(v for row in rows for v in row))
    return tuple(out)


def enumerate_tableaux(params: BNParams) -> Iterator[Tableau]:
    """Yield every tableau for ``params`` in a fixed, reproducible order.

    Order: lexicographic in the free-index subset, then lexicographic in the
    row-reading word.  Count equals :func:`count_components`; an empty stream
    signals an empty locus (``rho < 0`` or ``kbar < 0``).
    """
    rho = params.rho
    if rho < 0 or params.kbar < 0:
        return
    if params.kbar == 0:
        yield Tableau(params, ())
        return
    fillings = _standard_fillings(params.k, params.kbar)
    universe = range(1, params.g + 1)
    for free in combinations(universe, rho):
        free_set = set(free)
        placed = [i for i in universe if i not in free_set]
        for shape in fillings:
            rows = tuple(tuple(placed[v - 1] for v in row) for row in shape)
            yield Tableau(params, rows)
