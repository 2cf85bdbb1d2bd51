"""Exact equilibrium checks: Nash gap, eps-NE tests, pure NE, sampled audits."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .construction import validate_structure
from .errors import DimensionError, LemmaViolation, PreconditionError
from .game import MixedProfile, PayoffMatrix, Profile, mat_vec, vec_mat


@dataclass(frozen=True)
class GapBreakdown:
    row_gap: Fraction
    col_gap: Fraction

    @property
    def total(self) -> Fraction:
        return self.row_gap + self.col_gap


@dataclass(frozen=True)
class NEWitness:
    player: str  # "row" or "col"
    deviation: int
    improvement: Fraction


def _check_dims(A: PayoffMatrix, m: MixedProfile) -> None:
    if len(m.x) != A.rows or len(m.y) != A.cols:
        raise DimensionError(
            f"profile of sizes ({len(m.x)},{len(m.y)}) for a {A.rows}x{A.cols} game"
        )


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def nash_gap(A: PayoffMatrix, m: MixedProfile) -> GapBreakdown:
    """Both best-response improvements in the identical-payoff game A."""
    _check_dims(A, m)
    Ay = mat_vec(A, m.y)
    value = _dot(m.x, Ay)
    xA = vec_mat(m.x, A)
    return GapBreakdown(max(Ay) - value, max(xA) - value)


def best_deviations(A: PayoffMatrix, B: PayoffMatrix, m: MixedProfile) -> tuple[NEWitness, NEWitness]:
    """Largest pure-deviation improvement for each player (smallest index on ties)."""
    _check_dims(A, m)
    _check_dims(B, m)
    Ay = mat_vec(A, m.y)
    xB = vec_mat(m.x, B)
    ua = _dot(m.x, Ay)
    ub = _dot(xB, m.y)
    i = max(range(len(Ay)), key=lambda k: (Ay[k], -k))
    j = max(range(len(xB)), key=lambda k: (xB[k], -k))
    return NEWitness("row", i + 1, Ay[i] - ua), NEWitness("col", j + 1, xB[j] - ub)


def is_eps_ne(
    A: PayoffMatrix, B: PayoffMatrix, m: MixedProfile, eps: Fraction
) -> tuple[bool, NEWitness | None]:
    """Whether no unilateral deviation gains more than ``eps``.

    Pure deviations suffice because payoffs are linear in each player's own
    mixture. On failure the witness is the larger of the two best deviations.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    row, col = best_deviations(A, B, m)
    worst = row if row.improvement >= col.improvement else col
    if worst.improvement > eps:
        return False, worst
    return True, None


def pure_ne_enumerate(A: PayoffMatrix, B: PayoffMatrix) -> list[Profile]:
    if (A.rows, A.cols) != (B.rows, B.cols):
        raise DimensionError("A and B differ in shape")
    col_max = [max(c) for c in A.col_tuples]
    row_max = [max(r) for r in B.row_tuples]
    return [
        Profile(i + 1, j + 1)
        for i in range(A.rows)
        for j in range(A.cols)
        if A.row_tuples[i][j] == col_max[j] and B.row_tuples[i][j] == row_max[i]
    ]


def band_sum_check(A: PayoffMatrix, m: MixedProfile, i: int) -> bool:
    """Band rows/columns [i+2, n-i-1] collect at least their own probability mass.

    Checks sum_k [A y]_k >= sum_k y_k and sum_k [x^T A]_k >= sum_k x_k over
    that band, exactly. ``i`` is the 0-based layer index.
    """
    n = A.rows
    if A.cols != n or not 0 <= i <= n // 2 - 2:
        raise DimensionError(f"layer {i} out of range for n={n}")
    _check_dims(A, m)
    band = range(i + 1, n - i - 1)  # 0-based rows i+2 .. n-i-1
    Ay = mat_vec(A, m.y)
    xA = vec_mat(m.x, A)
    rows_ok = sum(Ay[k] for k in band) >= sum(m.y[k] for k in band)
    cols_ok = sum(xA[k] for k in band) >= sum(m.x[k] for k in band)
    return rows_ok and cols_ok


# -- sampled audit of the unique approximate equilibrium -------------------

SAMPLE_BITS = 32
FAMILIES = ("uniform", "vertex", "band", "near_ne")


def sample_simplex(rng: random.Random, size: int, bits: int = SAMPLE_BITS) -> tuple[Fraction, ...]:
    """Uniform grid point of the simplex with denominator 2**bits (sorted spacings)."""
    top = 1 << bits
    cuts = sorted(rng.randint(0, top) for _ in range(size - 1))
    edges = [0, *cuts, top]
    return tuple(Fraction(b - a, top) for a, b in zip(edges, edges[1:]))


def _mix(weight: Fraction, point: Sequence[Fraction], rest: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(weight * p + (1 - weight) * r for p, r in zip(point, rest))


def _spread(size: int, support: Sequence[int], rng: random.Random) -> tuple[Fraction, ...]:
    """Random simplex point supported on ``support`` (0-based)."""
    local = sample_simplex(rng, len(support))
    out = [Fraction(0)] * size
    for k, w in zip(support, local):
        out[k] = w
    return tuple(out)


def _vertex(size: int, k: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(idx == k)) for idx in range(size))


def _draw(family: str, n: int, eps: Fraction, rng: random.Random) -> MixedProfile:
    half = n // 2
    if family == "uniform":
        return MixedProfile(sample_simplex(rng, n), sample_simplex(rng, n))
    if family == "vertex":
        def one():
            delta = Fraction(1, 1 << rng.randint(1, 40))
            return _mix(1 - delta, _vertex(n, rng.randrange(n)), sample_simplex(rng, n))
        return MixedProfile(one(), one())
    if family == "band":
        # outer layers below eps, layer i heavy, the rest on the inner band
        i = rng.randint(0, max(half - 2, 0))

        def one():
            outer = [k for l in range(i) for k in (l, n - 1 - l)]
            vec = [Fraction(0)] * n
            for k in outer:
                vec[k] = eps * Fraction(rng.randint(0, 1 << 16), 1 << 16)
            heavy = eps * (1 + Fraction(rng.randint(1, 1 << 20), 1 << 10))
            left = 1 - sum(vec)
            heavy = min(heavy, left)
            share = Fraction(rng.randint(0, 1 << 16), 1 << 16)
            vec[i] += heavy * share
            vec[n - 1 - i] += heavy * (1 - share)
            inner = _spread(n, list(range(i + 1, n - 1 - i)), rng)
            return tuple(v + (left - heavy) * w for v, w in zip(vec, inner))
        return MixedProfile(one(), one())
    if family == "near_ne":
        # just past the mass threshold on one side, arbitrary on the other
        def near(k):
            slack = n * eps * (1 + Fraction(rng.randint(1, 1 << 20), 1 << 24))
            others = [idx for idx in range(n) if idx != k]
            return _mix(1 - slack, _vertex(n, k), _spread(n, others, rng))
        x = near(half - 1)
        y = near(half) if rng.random() < 0.5 else _vertex(n, half)
        if rng.random() < 0.5:
            x, y = _vertex(n, half - 1), near(half)
        return MixedProfile(x, y)
    raise ValueError(f"unknown sample family {family!r}")


@dataclass
class AuditReport:
    n: int
    eps: Fraction
    samples: int
    checked: int = 0
    skipped: int = 0
    per_family: dict[str, int] = field(default_factory=dict)
    min_ratio: Fraction | None = None  # smallest (best deviation gain) / eps^2 seen
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "eps": str(self.eps),
            "samples": self.samples,
            "checked": self.checked,
            "skipped": self.skipped,
            "per_family": self.per_family,
            "min_gain_over_eps_squared": None if self.min_ratio is None else str(self.min_ratio),
            "violations": self.violations,
            "ok": self.ok,
        }


def passes_mass_filter(m: MixedProfile, n: int, eps: Fraction) -> bool:
    """True when the profile puts strictly less than 1 - n*eps on the maximum cell."""
    bound = 1 - n * eps
    return m.x[n // 2 - 1] < bound or m.y[n // 2] < bound


def concentration_audit(
    A: PayoffMatrix,
    eps: Fraction,
    samples: int,
    seed: int,
    *,
    extra: Iterable[MixedProfile] = (),
    raise_on_violation: bool = True,
) -> AuditReport:
    """Try to falsify: every profile light on the max cell is refuted at eps**2.

    Sample ``s`` comes from family ``FAMILIES[s % 4]`` with its own generator
    seeded by ``(seed, s)``, so the report does not depend on evaluation order.
    Profiles that keep at least 1 - n*eps on the maximum cell are skipped.
    """
    eps = Fraction(eps)
    n = A.rows
    report = validate_structure(A)
    if not report.ok or report.z != 0:
        raise PreconditionError("concentration audit needs K^n(0)")
    if not 0 < eps <= Fraction(1, 56 * n ** 3):
        raise PreconditionError(f"eps must lie in (0, 1/(56 n^3)] = (0, 1/{56 * n ** 3}]")
    eps2 = eps * eps
    out = AuditReport(n=n, eps=eps, samples=samples, per_family={f: 0 for f in FAMILIES})

    def check(m: MixedProfile, label: str) -> None:
        if not passes_mass_filter(m, n, eps):
            out.skipped += 1
            return
        out.checked += 1
        out.per_family[label] = out.per_family.get(label, 0) + 1
        row, col = best_deviations(A, A, m)
        gain = max(row.improvement, col.improvement)
        ratio = gain / eps2
        if out.min_ratio is None or ratio < out.min_ratio:
            out.min_ratio = ratio
        if gain <= eps2:
            out.violations.append({
                "family": label,
                "x": [str(v) for v in m.x],
                "y": [str(v) for v in m.y],
                "best_gain": str(gain),
            })

    for s in range(samples):
        family = FAMILIES[s % len(FAMILIES)]
        rng = random.Random(f"{seed}:{s}")
        check(_draw(family, n, eps, rng), family)
    for m in extra:
        check(m, "extra")

    if out.violations and raise_on_violation:
        err = LemmaViolation(f"{len(out.violations)} sampled profile(s) are eps^2-equilibria")
        err.report = out
        raise err
    return out
