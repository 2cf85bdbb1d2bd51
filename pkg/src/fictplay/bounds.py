"""Lower-bound formulas for K^n(0) and an auditor for simulated runs on it."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .construction import build_k, spiral_order, validate_structure
from .engine import Trace
from .errors import DomainError, MissingDataError, PreconditionError
from .fast_forward import run_ff
from .engine import Stop
from .game import PayoffMatrix, Profile
from .rules import TieBreakRule


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 4 or n % 2:
        raise DomainError(f"n must be an even integer >= 4, got {n!r}")


def lb_first_hit(n: int) -> int:
    """16^(n/2-1) * (prod_{l=2}^{n/2-1} (l-1))^4 * 4, the explicit first-hit chain."""
    _check_n(n)
    prod = math.factorial(n // 2 - 2)  # prod_{l=2}^{n/2-1} (l-1)
    return 16 ** (n // 2 - 1) * prod ** 4 * 4


def inverse_sqrt_term(n: int, eps: Fraction) -> tuple[Fraction, bool]:
    """1 / (n * sqrt(eps)), exact when eps is a ratio of squares, else floored.

    Returns the value and whether it is exact.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    p, q = eps.numerator, eps.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rq, n * rp), True
    x = Fraction(q, n * n * p)
    return Fraction(math.isqrt(x.numerator // x.denominator)), False


def main_bound(n: int, eps: Fraction) -> Fraction:
    """4^n ((n/2-2)!)^4 + 1/(n sqrt(eps)) with every asymptotic constant set to 1.

    For comparison only; never asserted against a run.
    """
    _check_n(n)
    term, _ = inverse_sqrt_term(n, eps)
    return 4 ** n * math.factorial(n // 2 - 2) ** 4 + term


@dataclass
class BoundReport:
    n: int
    lb_first_hit: int
    measured_first_hit: int | None
    first_hits: dict[int, int] = field(default_factory=dict)
    zero_band_ok: dict[int, bool] = field(default_factory=dict)
    base_value: int | None = None
    recursion_rows: list[dict] = field(default_factory=list)
    stepping_stones: list[dict] = field(default_factory=list)
    star: dict = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_json(self) -> dict:
        def conv(v):
            if isinstance(v, bool) or v is None:
                return v
            if isinstance(v, int):
                return str(v)
            if isinstance(v, dict):
                return {str(k): conv(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [conv(x) for x in v]
            return v
        return {
            "n": self.n,
            "ok": self.ok,
            "lb_first_hit": str(self.lb_first_hit),
            "measured_first_hit": conv(self.measured_first_hit),
            "first_hits": conv(self.first_hits),
            "zero_band_ok": conv(self.zero_band_ok),
            "base_value": conv(self.base_value),
            "recursion_rows": conv(self.recursion_rows),
            "stepping_stones": conv(self.stepping_stones),
            "star": conv(self.star),
            "checks": self.checks,
            "failed": self.failed(),
        }


def _layer_factor(l: int) -> int:
    return 4 * l * (4 * l - 1) * (4 * l - 2) * (4 * l - 3)


def audit_run(A: PayoffMatrix, trace: Trace) -> BoundReport:
    """Check a K^n(0) run from (n, 1) against every constant-explicit claim.

    Snapshots in the trace are the utilities entering each switch round,
    so R_r at first-hit round T below means "summed over rounds 1..T-1".
    Indices in the report are 1-based like the matrix.
    """
    n = A.rows
    structure = validate_structure(A)
    if not structure.ok or structure.z != 0:
        raise PreconditionError("audit_run needs K^n(0)")
    if trace.init != Profile(n, 1):
        raise PreconditionError(f"trace starts at {tuple(trace.init)}, expected ({n},1)")
    if any(e.R is None or e.C is None for e in trace.switches):
        raise MissingDataError("switch events lack R/C snapshots; replay them first")

    half = n // 2
    first: dict[Profile, tuple[int, tuple[int, ...], tuple[int, ...]]] = {}
    for e in trace.switches:
        first.setdefault(e.profile, (e.round, e.R, e.C))

    def at(p: tuple[int, int]):
        got = first.get(Profile(*p))
        if got is None:
            raise MissingDataError(f"profile {p} never played in the trace")
        return got

    nash = Profile(half, half + 1)
    measured = first[nash][0] if nash in first else None
    report = BoundReport(n=n, lb_first_hit=lb_first_hit(n) if n >= 4 else 1,
                         measured_first_hit=measured)
    checks = report.checks

    # visit order and alternation
    cells = [p for p, _ in spiral_order(A)]
    seen = trace.profiles()
    checks["spiral_order"] = seen == cells[:len(seen)] and measured is not None
    moves = []
    for a, b in zip(seen, seen[1:]):
        moves.append("row" if a.col == b.col and a.row != b.row
                     else "col" if a.row == b.row and a.col != b.col else "both")
    checks["alternation"] = "both" not in moves and all(m != m2 for m, m2 in zip(moves, moves[1:]))

    # zero bands at each T_l
    R_at: dict[int, tuple[int, ...]] = {}
    for l in range(half):
        T, R, C = at((n - l, l + 1))
        report.first_hits[l] = T
        R_at[l] = R
        ok = all(R[r - 1] == 0 for r in range(l + 1, n - l)) and \
            all(C[c - 1] == 0 for c in range(l + 2, n - l + 1))
        report.zero_band_ok[l] = ok
        checks[f"zero_band[{l}]"] = ok

    if half >= 2:
        report.base_value = R_at[1][n - 2]
        checks["base_R_n-1_at_T1>=4"] = report.base_value >= 4
    for l in range(2, half):
        lhs = R_at[l][n - l - 1]
        rhs_proof = _layer_factor(l) * R_at[l - 1][n - l]
        rhs_literal = _layer_factor(l) * R_at[l - 1][n - l - 1]
        row = {"l": l, "T": report.first_hits[l], "lhs": lhs, "factor": _layer_factor(l),
               "rhs_proof_form": rhs_proof, "proof_form_ok": lhs >= rhs_proof,
               "rhs_literal_form": rhs_literal, "literal_form_ok": lhs >= rhs_literal}
        report.recursion_rows.append(row)
        checks[f"recursion[{l}]"] = row["proof_form_ok"]

    for i in range(half - 1):
        T0, R0, C0 = at((n - i, i + 1))
        T1, R1, C1 = at((i + 1, i + 1))
        T2, R2, C2 = at((i + 1, n - i))
        T3, R3, C3 = at((n - i - 1, n - i))
        T4, R4, C4 = at((n - i - 1, i + 2))
        stone = {
            "i": i, "rounds": [T0, T1, T2, T3, T4],
            "c1": C1[i] >= (4 * i + 1) * (R0[i] + 1),
            "c1_row_n-i_reading": C1[i] >= (4 * i + 1) * (R0[n - i - 1] + 1),
            "c2": R2[i] >= (4 * i + 2) * C1[i],
            "c3": C3[n - i - 1] >= (4 * i + 3) * R2[i],
            "c4": R4[n - i - 2] >= (4 * i + 4) * C3[n - i - 1],
            "ordered": T0 < T1 < T2 < T3 < T4,
        }
        report.stepping_stones.append(stone)
        for key in ("c1", "c2", "c3", "c4", "ordered"):
            checks[f"stone[{i}].{key}"] = stone[key]

    if measured is not None and n >= 4:
        checks["first_hit>=lb"] = measured >= report.lb_first_hit
    else:
        checks["first_hit>=lb"] = n < 4 and measured is not None
    if half >= 2:
        T_star, R_star, C_star = at((half + 1, half))
        report.star = {
            "T_star": T_star,
            "R_row_n/2-1": R_star[half - 2],
            "R_row_n/2+1": R_star[half],
            "R_row_n/2": R_star[half - 1],
            "C_col_n/2+1": C_star[half],
            "first_hit>=R_row_n/2-1": measured is not None and measured >= R_star[half - 2],
            "first_hit>=R_row_n/2+1": measured is not None and measured >= R_star[half],
        }
    return report


def sweep_init(n: int, rule_factory, cap: int | None = None) -> list[dict]:
    """First hit of the pure equilibrium from every initial profile of K^n(0)."""
    A = build_k(n)
    target = Profile(n // 2, n // 2 + 1)
    cap = cap or 1 << 256
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            rule: TieBreakRule = rule_factory()
            trace = run_ff(A, A, (i, j), rule, Stop.hit(target, cap))
            hit = trace.final_state.t if trace.stop_reason == "first_hit" else None
            out.append({"row": i, "col": j, "first_hit": hit, "switches": len(trace.switches)})
    return out


def sweep_mean(rows: list[dict]) -> Fraction | None:
    hits = [r["first_hit"] for r in rows]
    if any(h is None for h in hits):
        return None
    return Fraction(sum(hits), len(hits))
