"""The recursive hard instance K^n(z) and its structural validator.

K^n(z) is built two independent ways: literally by recursion on the inner
(n-2)x(n-2) block, and directly from the per-layer placement rule. Tests
require the two to agree cell for cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections import Counter

from .errors import ConstructionError, StructureError
from .game import PayoffMatrix, Profile


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    z: int = 0

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 2 or self.n % 2:
            raise ConstructionError(f"n must be an even integer >= 2, got {self.n!r}")
        if not isinstance(self.z, int) or self.z < 0:
            raise ConstructionError(f"z must be a non-negative integer, got {self.z!r}")


def _k_rows(n: int, z: int) -> list[list[int]]:
    if n == 2:
        return [[z + 2, z + 3], [z + 1, 0]]
    m = [[0] * n for _ in range(n)]
    m[n - 1][0] = z + 1
    m[0][0] = z + 2
    m[0][n - 1] = z + 3
    m[n - 2][n - 1] = z + 4
    inner = _k_rows(n - 2, z + 4)
    for i, row in enumerate(inner, start=1):
        m[i][1:n - 1] = row
    return m


def build_k(params: ConstructionParams | int, z: int = 0) -> PayoffMatrix:
    """Build K^n(z) by literal recursion.

    Accepts either a ``ConstructionParams`` or ``n`` (with ``z``) directly.
    """
    if not isinstance(params, ConstructionParams):
        params = ConstructionParams(params, z)
    return PayoffMatrix.from_rows(
        _k_rows(params.n, params.z),
        meta={"construction": "K", "n": params.n, "z": params.z},
    )


def layer_cells(n: int, z: int = 0) -> dict[Profile, int]:
    """Nonzero cells of K^n(z) from the closed-form layer rule.

    Layer i (0-based, outermost first) owns the values z+4i+1 .. z+4i+4 at
    (n-i, i+1), (i+1, i+1), (i+1, n-i) and (n-i-1, n-i). The innermost layer
    has no fourth cell: the 2x2 core carries three nonzeros.
    """
    ConstructionParams(n, z)
    cells: dict[Profile, int] = {}
    for i in range(n // 2):
        cells[Profile(n - i, i + 1)] = z + 4 * i + 1
        cells[Profile(i + 1, i + 1)] = z + 4 * i + 2
        cells[Profile(i + 1, n - i)] = z + 4 * i + 3
        if i < n // 2 - 1:
            cells[Profile(n - i - 1, n - i)] = z + 4 * i + 4
    return cells


def build_k_closed_form(params: ConstructionParams | int, z: int = 0) -> PayoffMatrix:
    if not isinstance(params, ConstructionParams):
        params = ConstructionParams(params, z)
    n = params.n
    m = [[0] * n for _ in range(n)]
    for (i, j), v in layer_cells(n, params.z).items():
        m[i - 1][j - 1] = v
    return PayoffMatrix.from_rows(m, meta={"construction": "K", "n": n, "z": params.z})


@dataclass
class StructureReport:
    n: int
    z: int
    row_nonzeros: dict[int, list[tuple[int, int]]]
    col_nonzeros: dict[int, list[tuple[int, int]]]
    max_cell: Profile | None
    max_value: int | None
    nonzero_values: list[int]
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "z": self.z,
            "ok": self.ok,
            "max_cell": list(self.max_cell) if self.max_cell else None,
            "max_value": self.max_value,
            "nonzero_values": self.nonzero_values,
            "row_nonzeros": {str(k): [list(c) for c in v] for k, v in self.row_nonzeros.items()},
            "col_nonzeros": {str(k): [list(c) for c in v] for k, v in self.col_nonzeros.items()},
            "violations": self.violations,
        }


def validate_structure(A: PayoffMatrix, z: int | None = None) -> StructureReport:
    """Check A against every structural property K^n(z) is known to have.

    ``z`` is inferred from the (n, 1) entry when not given. Violations are
    collected, never raised.
    """
    n = A.rows
    rows_nz = {i: [(j, A.entry(i, j)) for j in range(1, A.cols + 1) if A.entry(i, j)]
               for i in range(1, A.rows + 1)}
    cols_nz = {j: [(i, A.entry(i, j)) for i in range(1, A.rows + 1) if A.entry(i, j)]
               for j in range(1, A.cols + 1)}
    values = sorted(v for v in A.entries if v)
    best = max(A.entries)
    at_best = [Profile(i, j) for i in range(1, n + 1) for j in range(1, A.cols + 1)
               if A.entry(i, j) == best]
    if z is None:
        z = max(A.entry(n, 1) - 1, 0) if A.rows == A.cols else 0
    report = StructureReport(
        n=n, z=z, row_nonzeros=rows_nz, col_nonzeros=cols_nz,
        max_cell=at_best[0] if len(at_best) == 1 else None,
        max_value=best, nonzero_values=values,
    )
    bad = report.violations
    if A.rows != A.cols:
        bad.append(f"not square: {A.rows}x{A.cols}")
        return report
    if n % 2:
        bad.append(f"odd side {n}")
        return report

    def expect(kind: str, idx: int, got: list[tuple[int, int]], want: dict[int, int]) -> None:
        if dict(got) != want:
            bad.append(f"{kind} {idx}: nonzeros {dict(got)} expected {want}")

    for i in range(n // 2):
        inner = i == n // 2 - 1
        expect("column", i + 1, cols_nz[i + 1], {i + 1: z + 4 * i + 2, n - i: z + 4 * i + 1})
        expect("row", i + 1, rows_nz[i + 1], {i + 1: z + 4 * i + 2, n - i: z + 4 * i + 3})
        col_last = {i + 1: z + 4 * i + 3}
        if not inner:
            col_last[n - i - 1] = z + 4 * i + 4
        expect("column", n - i, cols_nz[n - i], col_last)
        row_last = {i + 1: z + 4 * i + 1}
        if i > 0:
            row_last[n - i + 1] = z + 4 * i
        expect("row", n - i, rows_nz[n - i], row_last)

    for kind, table in (("row", rows_nz), ("column", cols_nz)):
        for idx, cells in table.items():
            if len(cells) > 2:
                bad.append(f"{kind} {idx} has {len(cells)} nonzeros")
    dupes = sorted(v for v, c in Counter(values).items() if c > 1)
    if dupes:
        bad.append(f"repeated nonzero values {dupes}")
    if values != list(range(z + 1, z + 2 * n)):
        bad.append(f"nonzero values are not exactly {z + 1}..{z + 2 * n - 1}")
    want_max = Profile(n // 2, n // 2 + 1)
    if report.max_cell != want_max or best != z + 2 * n - 1:
        bad.append(
            f"maximum {best} at {[tuple(c) for c in at_best]}, expected {z + 2 * n - 1} "
            f"uniquely at {tuple(want_max)}"
        )
    return report


def spiral_order(A: PayoffMatrix) -> list[tuple[Profile, int]]:
    """Nonzero cells in ascending value: the order fictitious play visits them."""
    report = validate_structure(A)
    if not report.ok:
        raise StructureError("; ".join(report.violations))
    cells = [(Profile(i, j), v) for i in range(1, A.rows + 1)
             for j in range(1, A.cols + 1) if (v := A.entry(i, j))]
    cells.sort(key=lambda c: c[1])
    return cells
