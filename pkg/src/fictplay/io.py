"""File formats: matrix JSON, trace CSV, state/checkpoint JSON, exact number parsing."""

from __future__ import annotations

import hashlib
import json
import re
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from .engine import FPState, Stop, SwitchEvent, Trace
from .errors import UsageError
from .game import PayoffMatrix, Profile

SAFE_INT = 1 << 53
_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def _num(v: int):
    return str(v) if abs(v) >= SAFE_INT else v


def matrix_to_json(A: PayoffMatrix) -> dict:
    d = {"n_rows": A.rows, "n_cols": A.cols, "entries": [_num(v) for v in A.entries]}
    if A.meta:
        d["meta"] = A.meta
    return d


def matrix_from_json(data: dict) -> PayoffMatrix:
    try:
        entries = tuple(int(v) for v in data["entries"])
        return PayoffMatrix(int(data["n_rows"]), int(data["n_cols"]), entries, data.get("meta"))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed matrix JSON: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def save_matrix(A: PayoffMatrix, path: Path) -> None:
    write_text(Path(path), dumps(matrix_to_json(A)))


def load_matrix(path: Path) -> PayoffMatrix:
    return matrix_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def matrix_hash(A: PayoffMatrix) -> str:
    canon = json.dumps({"n_rows": A.rows, "n_cols": A.cols,
                        "entries": [str(v) for v in A.entries]}, sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()


def file_hash(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# -- exact parsing -----------------------------------------------------------

def parse_rational(token: str) -> Fraction:
    """'p/q' or an integer; anything else (floats included) is rejected."""
    m = _RATIONAL.match(token)
    if not m:
        raise UsageError(f"not a rational of the form p/q: {token!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise UsageError(f"zero denominator in {token!r}")
    return Fraction(num, den)


def parse_profile(token: str) -> Profile:
    parts = token.split(",")
    if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
        raise UsageError(f"expected a 1-based profile 'i,j', got {token!r}")
    i, j = (int(p) for p in parts)
    if i < 1 or j < 1:
        raise UsageError(f"profile indices are 1-based, got {token!r}")
    return Profile(i, j)


def parse_stop(tokens: list[str]) -> Stop:
    """Combine 'first-hit:i,j', 'rounds:T' and 'gap:p/q' tokens."""
    fields: dict = {}
    for tok in tokens:
        kind, _, arg = tok.partition(":")
        if not arg:
            raise UsageError(f"stop condition needs an argument: {tok!r}")
        if kind == "first-hit":
            fields["target"] = parse_profile(arg)
        elif kind == "rounds":
            if not arg.isdigit() or int(arg) < 1:
                raise UsageError(f"round cap must be a positive integer: {tok!r}")
            fields["max_rounds"] = int(arg)
        elif kind == "gap":
            eps = parse_rational(arg)
            if eps < 0:
                raise UsageError(f"gap threshold must be non-negative: {tok!r}")
            fields["gap"] = eps
        else:
            raise UsageError(f"unknown stop condition {tok!r}")
    if not fields:
        raise UsageError("at least one --stop condition is required")
    return Stop(**fields)


def parse_vector(token: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(t) for t in token.split(","))


def decimal12(q: Fraction) -> str:
    """Correctly rounded 12-significant-digit decimal rendering of ``q``."""
    with localcontext() as ctx:
        ctx.prec = 12
        d = Decimal(q.numerator) / Decimal(q.denominator)
    return format(d, "f") if d == 0 or abs(d) >= Decimal("1e-6") else format(d, "E")


# -- traces and checkpoints --------------------------------------------------

def trace_from_csv(text: str) -> list[SwitchEvent]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "round,row_action,col_action":
        raise UsageError("trace CSV must start with the header 'round,row_action,col_action'")
    out = []
    for ln in lines[1:]:
        r, i, j = (int(x) for x in ln.split(","))
        out.append(SwitchEvent(r, Profile(i, j)))
    return out


def run_record(trace: Trace, rule_json: dict, extra: dict | None = None) -> dict:
    """Final state plus everything needed to resume the run."""
    s = trace.final_state
    rec = {
        **s.to_json(),
        "stop_reason": trace.stop_reason,
        "rule": rule_json,
        "switches": [e.to_json() for e in trace.switches],
    }
    if extra:
        rec.update(extra)
    return rec


def trace_from_record(rec: dict) -> Trace:
    switches = [SwitchEvent.from_json(e) for e in rec["switches"]]
    return Trace(switches[0].profile, switches, FPState.from_json(rec), rec.get("stop_reason", ""))
