"""Event-driven fictitious play: jump over switch-free stretches in closed form.

While both best-response sets stay fixed, playing profile (i, j) adds A's
column j to R and B's row i to C every round. A challenger i' that trails by
D and gains d > 0 per round catches up after ceil(D / d) rounds, so the next
round at which anything can change is known exactly. The engine jumps to
that round and hands it to the naive step (and the tie-break rule).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .engine import (
    FPState,
    Stop,
    SwitchEvent,
    Trace,
    _check_game,
    _check_stop,
    _limit,
    _next_multiple,
    _start,
    Checkpoint,
    choose,
    play,
    run,
    stop_reason,
)
from .errors import DivergenceNotice, NotReached, PersistentTieError, TieStateError
from .game import PayoffMatrix, Profile, argmax_set
from .rules import TieBreakRule

DEFAULT_TIE_BUDGET = 10_000


class Boundary(enum.Enum):
    ROW_CATCH = "row_catch"
    COL_CATCH = "col_catch"
    BOTH_CATCH = "both_catch"
    HORIZON = "horizon"


@dataclass(frozen=True)
class JumpOutcome:
    """``k`` rounds can be played with the current best responses unchanged."""

    k: int
    boundary: Boundary


def _catch_up(values, incs, keep: int, members: tuple[int, ...]) -> int | None:
    """Rounds for which the argmax set ``members`` (holding ``keep``) stays as is.

    Indices are 0-based. None means the set never changes.
    """
    base_v, base_d = values[keep], incs[keep]
    member_set = set(members)
    best = None
    for k, (v, inc) in enumerate(zip(values, incs)):
        if k == keep:
            continue
        d = inc - base_d
        if k in member_set:
            if d != 0:
                return 1
            continue
        if d > 0:
            need = -(-(base_v - v) // d)
            if best is None or need < best:
                best = need
    return best


def rounds_until_switch(
    state: FPState,
    A: PayoffMatrix,
    B: PayoffMatrix,
    horizon: int | None = None,
    *,
    allow_ties: bool = False,
) -> JumpOutcome:
    """How many rounds the current best-response profile is guaranteed to be replayed.

    Requires singleton argmax sets unless ``allow_ties``; in that case the
    profile held fixed is ``state.current``, which must lie in both sets, and
    the caller must know the tie-break rule re-selects it.
    """
    rows, cols = argmax_set(state.R), argmax_set(state.C)
    if not allow_ties and (len(rows) > 1 or len(cols) > 1):
        raise TieStateError(f"argmax sets rows={rows} cols={cols} are not singletons")
    if allow_ties:
        i, j = state.current
        if i not in rows or j not in cols:
            raise TieStateError(f"current profile {state.current} is not a best response")
    else:
        i, j = rows[0], cols[0]
    k_row = _catch_up(state.R, A.col_tuples[j - 1], i - 1, tuple(r - 1 for r in rows))
    k_col = _catch_up(state.C, B.row_tuples[i - 1], j - 1, tuple(c - 1 for c in cols))
    finite = [k for k in (k_row, k_col) if k is not None]
    if not finite:
        if horizon is None:
            raise DivergenceNotice(f"profile ({i},{j}) is absorbing from round {state.t}")
        return JumpOutcome(horizon, Boundary.HORIZON)
    k = min(finite)
    if horizon is not None and horizon < k:
        return JumpOutcome(horizon, Boundary.HORIZON)
    if k_row == k_col:
        return JumpOutcome(k, Boundary.BOTH_CATCH)
    return JumpOutcome(k, Boundary.ROW_CATCH if k == k_row else Boundary.COL_CATCH)


def advance(state: FPState, A: PayoffMatrix, B: PayoffMatrix, k: int) -> FPState:
    """Replay ``state.current`` for ``k`` rounds in one shot."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return state
    i, j = state.current
    rc = list(state.row_counts)
    cc = list(state.col_counts)
    rc[i - 1] += k
    cc[j - 1] += k
    return FPState(
        state.t + k,
        tuple(r + k * a for r, a in zip(state.R, A.col_tuples[j - 1])),
        tuple(c + k * b for c, b in zip(state.C, B.row_tuples[i - 1])),
        tuple(rc), tuple(cc), state.current,
    )


def _scaled_gap_fixed(state: FPState, A: PayoffMatrix, s: int) -> int:
    """t^2 * gap after ``s`` more rounds of the current profile, assuming it stays the argmax."""
    nxt = advance(state, A, A, s)
    i, j = state.current
    inner = sum(c * r for c, r in zip(nxt.row_counts, nxt.R))
    return nxt.t * (nxt.R[i - 1] + nxt.C[j - 1]) - 2 * inner


def _bisect_first(q, lo: int, hi: int) -> int:
    # q(lo) > 0 >= q(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if q(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return hi


def first_nonpositive(a: int, b: int, c: int, lo: int, hi: int | None) -> int | None:
    """Smallest integer s in [lo, hi] with a*s^2 + b*s + c <= 0 (hi=None: unbounded)."""
    def q(s):
        return (a * s + b) * s + c

    if hi is not None and hi < lo:
        return None
    if q(lo) <= 0:
        return lo
    if a > 0:
        v = (-b) // (2 * a)
        cands = []
        for s in (v, v + 1):
            s = max(s, lo)
            if hi is not None:
                s = min(s, hi)
            cands.append(s)
        m = min(cands, key=q)
        if q(m) > 0:
            return None
        return _bisect_first(q, lo, m)
    if hi is None:
        if a == 0 and b >= 0:
            return None
        hi = lo + 1
        while q(hi) > 0:
            hi = lo + 2 * (hi - lo)
    elif q(hi) > 0:
        return None
    return _bisect_first(q, lo, hi)


def _gap_hit_in_stretch(state: FPState, A: PayoffMatrix, eps: Fraction, k: int | None) -> int | None:
    """First s in [1, k] at which the gap is <= eps while replaying the current profile."""
    num, den = eps.numerator, eps.denominator
    t = state.t

    def q_exact(s):
        return den * _scaled_gap_fixed(state, A, s) - num * (t + s) ** 2

    # q is a quadratic in s; recover its coefficients from three samples
    g0, g1, g2 = q_exact(0), q_exact(1), q_exact(2)
    a2 = g2 - 2 * g1 + g0
    assert a2 % 2 == 0
    a = a2 // 2
    b = g1 - g0 - a
    c = g0
    # the formula assumes the current actions are maximal, true for s <= k - 1
    inner_hi = None if k is None else k - 1
    s = first_nonpositive(a, b, c, 1, inner_hi)
    if s is not None:
        return s
    if k is None:
        return None
    from .engine import gap_at_most
    return k if gap_at_most(advance(state, A, A, k), eps) else None


def run_ff(
    A: PayoffMatrix,
    B: PayoffMatrix,
    init: Profile | tuple[int, int],
    rule: TieBreakRule,
    stop: Stop,
    *,
    tie_budget: int = DEFAULT_TIE_BUDGET,
    resume: Trace | None = None,
    checkpoint_every: int | None = None,
    on_checkpoint: Checkpoint | None = None,
) -> Trace:
    """Same contract and same Trace as :func:`fictplay.engine.run`, in O(n) per switch.

    Rounds where a best-response set is not a singleton are naive-stepped so
    the rule sees every tie, except that a stationary rule may be jumped
    across a tie set that provably does not change.
    """
    _check_game(A, B)
    _check_stop(stop, A, B)
    state, events = _start(A, B, init, resume)
    init = events[0].profile
    next_ckpt = _next_multiple(state.t, checkpoint_every)
    naive = 0
    tie_run = 0

    while True:
        reason = stop_reason(state, stop)
        if reason:
            break
        if next_ckpt is not None and state.t >= next_ckpt:
            if on_checkpoint is not None:
                on_checkpoint(Trace(init, list(events), state, "checkpoint", naive))
            next_ckpt = _next_multiple(state.t, checkpoint_every)
        rows, cols = argmax_set(state.R), argmax_set(state.C)
        singleton = len(rows) == 1 and len(cols) == 1
        if singleton:
            pick = Profile(rows[0], cols[0])
        elif rule.stationary:
            pick = choose(state, rule)
        else:
            pick = None

        if pick is not None and pick == state.current:
            limit = _limit(state, stop, next_ckpt)
            horizon = None if limit >= 1 << 62 else limit
            try:
                k = rounds_until_switch(state, A, B, horizon, allow_ties=not singleton).k
            except DivergenceNotice:
                if stop.gap is None:
                    raise
                k = None
            if stop.gap is not None:
                s = _gap_hit_in_stretch(state, A, stop.gap, k)
                if s is not None:
                    k = s
                elif k is None:
                    raise DivergenceNotice(
                        f"profile {state.current} is absorbing and the gap never reaches {stop.gap}"
                    )
            state = advance(state, A, B, k)
            tie_run = 0
            continue

        if singleton:
            tie_run = 0
        else:
            tie_run += 1
            if tie_run > tie_budget:
                raise PersistentTieError(state.t, rows, cols)
        prev = state
        p = choose(state, rule)
        state = play(state, A, B, p)
        naive += 1
        if p != prev.current:
            events.append(SwitchEvent(state.t, p, prev.R, prev.C))
    return Trace(init, events, state, reason, naive)


def first_hit(
    A: PayoffMatrix,
    B: PayoffMatrix,
    init: Profile | tuple[int, int],
    rule: TieBreakRule,
    target: Profile | tuple[int, int],
    cap: int,
) -> int:
    """Round at which ``target`` is first played, counting the initial round as 1."""
    trace = run_ff(A, B, init, rule, Stop.hit(target, cap))
    if trace.stop_reason != "first_hit":
        raise NotReached(cap)
    return trace.final_state.t


def equivalence_check(
    A: PayoffMatrix,
    B: PayoffMatrix,
    init: Profile | tuple[int, int],
    make_rule,
    stop: Stop,
) -> tuple[Trace, Trace, str | None]:
    """Run both engines with fresh rules from ``make_rule()`` and diff the Traces.

    Returns the two traces and a description of the first divergence, or None.
    """
    slow = run(A, B, init, make_rule(), stop)
    fast = run_ff(A, B, init, make_rule(), stop)
    return slow, fast, diff_traces(slow, fast)


def diff_traces(a: Trace, b: Trace) -> str | None:
    if a.init != b.init:
        return f"initial profiles differ: {a.init} vs {b.init}"
    for k, (x, y) in enumerate(zip(a.switches, b.switches)):
        if x != y:
            return f"switch #{k} differs: {x} vs {y}"
    if len(a.switches) != len(b.switches):
        return f"switch counts differ: {len(a.switches)} vs {len(b.switches)}"
    if a.final_state != b.final_state:
        return f"final states differ: {a.final_state} vs {b.final_state}"
    if a.stop_reason != b.stop_reason:
        return f"stop reasons differ: {a.stop_reason} vs {b.stop_reason}"
    return None
