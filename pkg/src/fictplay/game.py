"""Exact-arithmetic primitives for two-player bimatrix games.

Actions are 1-based everywhere in the public API. Payoffs are Python ints and
simplex points are ``fractions.Fraction``; nothing here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import DesyncError, DimensionError, EmptyHistoryError

CountVector = tuple[int, ...]


class Profile(NamedTuple):
    """A pure action pair, 1-based."""

    row: int
    col: int

    def __str__(self) -> str:
        return f"({self.row},{self.col})"


@dataclass(frozen=True)
class PayoffMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]
    meta: dict | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise DimensionError(f"matrix must be at least 1x1, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        for v in self.entries:
            # bool is an int subclass but never a payoff
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"payoff entries must be int, got {type(v).__name__}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], meta: dict | None = None) -> PayoffMatrix:
        if not rows or not rows[0]:
            raise DimensionError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), width, tuple(int(v) for r in rows for v in r), meta)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> PayoffMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @cached_property
    def row_tuples(self) -> tuple[tuple[int, ...], ...]:
        c = self.cols
        return tuple(self.entries[r * c:(r + 1) * c] for r in range(self.rows))

    @cached_property
    def col_tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.row_tuples))

    def entry(self, i: int, j: int) -> int:
        """Payoff at 1-based cell (i, j)."""
        self._check_cell(i, j)
        return self.entries[(i - 1) * self.cols + (j - 1)]

    def row(self, i: int) -> tuple[int, ...]:
        self._check_cell(i, 1)
        return self.row_tuples[i - 1]

    def column(self, j: int) -> tuple[int, ...]:
        self._check_cell(1, j)
        return self.col_tuples[j - 1]

    def to_rows(self) -> list[list[int]]:
        return [list(r) for r in self.row_tuples]

    def max_abs(self) -> int:
        return max(abs(v) for v in self.entries)

    def _check_cell(self, i: int, j: int) -> None:
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise DimensionError(f"cell ({i},{j}) outside a {self.rows}x{self.cols} matrix")


@dataclass(frozen=True)
class MixedProfile:
    """Exact mixed strategies for both players."""

    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        for name, vec in (("x", self.x), ("y", self.y)):
            if not vec:
                raise DimensionError(f"{name} is empty")
            if any(not isinstance(v, Fraction) for v in vec):
                object.__setattr__(self, name, tuple(Fraction(v) for v in vec))
                vec = getattr(self, name)
            if any(v < 0 for v in vec):
                raise ValueError(f"{name} has a negative coordinate")
            if sum(vec) != 1:
                raise ValueError(f"{name} sums to {sum(vec)}, not 1")

    @classmethod
    def pure(cls, profile: Profile, rows: int, cols: int) -> MixedProfile:
        if not (1 <= profile.row <= rows and 1 <= profile.col <= cols):
            raise DimensionError(f"profile {profile} outside a {rows}x{cols} game")
        return cls(unit_vector(rows, profile.row), unit_vector(cols, profile.col))

    @classmethod
    def uniform(cls, rows: int, cols: int) -> MixedProfile:
        return cls((Fraction(1, rows),) * rows, (Fraction(1, cols),) * cols)


def unit_vector(size: int, index: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(k == index)) for k in range(1, size + 1))


def utility_vector_row(A: PayoffMatrix, col_counts: Sequence[int]) -> tuple[int, ...]:
    """Return ``A @ col_counts``: the row player's cumulative utility per action."""
    if len(col_counts) != A.cols:
        raise DimensionError(f"{len(col_counts)} column counts for {A.cols} columns")
    return tuple(sum(a * c for a, c in zip(row, col_counts)) for row in A.row_tuples)


def utility_vector_col(B: PayoffMatrix, row_counts: Sequence[int]) -> tuple[int, ...]:
    """Return ``row_counts @ B``: the column player's cumulative utility per action."""
    if len(row_counts) != B.rows:
        raise DimensionError(f"{len(row_counts)} row counts for {B.rows} rows")
    return tuple(sum(b * c for b, c in zip(col, row_counts)) for col in B.col_tuples)


def argmax_set(v: Sequence[int]) -> tuple[int, ...]:
    """All 1-based indices attaining max(v), ascending."""
    if len(v) == 0:
        raise DimensionError("argmax of an empty vector")
    best = max(v)
    return tuple(k for k, x in enumerate(v, start=1) if x == best)


def empirical(row_counts: Sequence[int], col_counts: Sequence[int]) -> MixedProfile:
    tr, tc = sum(row_counts), sum(col_counts)
    if tr != tc:
        raise DesyncError(f"row history covers {tr} rounds, column history {tc}")
    if tr <= 0:
        raise EmptyHistoryError("no rounds played")
    return MixedProfile(
        tuple(Fraction(c, tr) for c in row_counts),
        tuple(Fraction(c, tc) for c in col_counts),
    )


def mat_vec(A: PayoffMatrix, y: Sequence[Fraction]) -> list[Fraction]:
    if len(y) != A.cols:
        raise DimensionError(f"vector of length {len(y)} for {A.cols} columns")
    return [sum((a * w for a, w in zip(row, y) if a and w), Fraction(0)) for row in A.row_tuples]


def vec_mat(x: Sequence[Fraction], A: PayoffMatrix) -> list[Fraction]:
    if len(x) != A.rows:
        raise DimensionError(f"vector of length {len(x)} for {A.rows} rows")
    return [sum((a * w for a, w in zip(col, x) if a and w), Fraction(0)) for col in A.col_tuples]


def expected_payoff(A: PayoffMatrix, m: MixedProfile) -> Fraction:
    """Exact ``x^T A y``."""
    if len(m.x) != A.rows:
        raise DimensionError(f"x has {len(m.x)} coordinates for {A.rows} rows")
    Ay = mat_vec(A, m.y)
    return sum((xi * v for xi, v in zip(m.x, Ay)), Fraction(0))


def counts_from_actions(size: int, actions: Iterable[int]) -> CountVector:
    out = [0] * size
    for a in actions:
        out[a - 1] += 1
    return tuple(out)
