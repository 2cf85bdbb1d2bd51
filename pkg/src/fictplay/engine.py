"""Reference fictitious-play simulator, one round at a time.

Round convention: an ``FPState`` at round ``t`` stores the cumulative
utilities summed over rounds 1..t *inclusive*. The action pair for round
``t + 1`` is the argmax of those stored vectors. In the textbook notation
where R^(t) sums rounds 1..t-1, the stored state at ``t`` is R^(t+1).
Switch events snapshot the vectors that produced the switch, i.e. R^(round).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

from .errors import DimensionError, UnsupportedError
from .game import (
    PayoffMatrix,
    Profile,
    argmax_set,
    empirical,
    utility_vector_col,
    utility_vector_row,
)
from .rules import TieBreakRule


@dataclass(frozen=True)
class FPState:
    t: int
    R: tuple[int, ...]
    C: tuple[int, ...]
    row_counts: tuple[int, ...]
    col_counts: tuple[int, ...]
    current: Profile

    def check(self, A: PayoffMatrix, B: PayoffMatrix) -> None:
        """Assert the redundant representation is consistent."""
        assert sum(self.row_counts) == sum(self.col_counts) == self.t, "count totals != t"
        assert self.R == utility_vector_row(A, self.col_counts), "R drifted from A @ col_counts"
        assert self.C == utility_vector_col(B, self.row_counts), "C drifted from row_counts @ B"

    def empirical(self):
        return empirical(self.row_counts, self.col_counts)

    def to_json(self) -> dict:
        s = lambda v: [str(x) for x in v]  # noqa: E731
        return {
            "t": str(self.t),
            "current": list(self.current),
            "R": s(self.R),
            "C": s(self.C),
            "row_counts": s(self.row_counts),
            "col_counts": s(self.col_counts),
        }

    @classmethod
    def from_json(cls, data: dict) -> FPState:
        ints = lambda v: tuple(int(x) for x in v)  # noqa: E731
        return cls(int(data["t"]), ints(data["R"]), ints(data["C"]),
                   ints(data["row_counts"]), ints(data["col_counts"]),
                   Profile(*data["current"]))


@dataclass(frozen=True)
class SwitchEvent:
    """The round at which ``profile`` starts being played.

    ``R``/``C`` are the cumulative utilities that round's choice was made
    from, summed over rounds 1..round-1 (all zeros for round 1).
    """

    round: int
    profile: Profile
    R: tuple[int, ...] | None = None
    C: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        d = {"round": str(self.round), "profile": list(self.profile)}
        if self.R is not None:
            d["R"] = [str(x) for x in self.R]
            d["C"] = [str(x) for x in self.C]
        return d

    @classmethod
    def from_json(cls, d: dict) -> SwitchEvent:
        R = tuple(int(x) for x in d["R"]) if "R" in d else None
        C = tuple(int(x) for x in d["C"]) if "C" in d else None
        return cls(int(d["round"]), Profile(*d["profile"]), R, C)


@dataclass(frozen=True)
class Stop:
    """When to end a run. Any combination may be set; the first to fire wins.

    At a single round, a target hit is reported before a gap hit, and both
    before the round cap.
    """

    max_rounds: int | None = None
    target: Profile | None = None
    gap: Fraction | None = None

    def __post_init__(self) -> None:
        if self.max_rounds is None and self.target is None and self.gap is None:
            raise ValueError("a stop condition needs at least one criterion")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.gap is not None and Fraction(self.gap) < 0:
            raise ValueError("gap threshold must be >= 0")

    @classmethod
    def rounds(cls, T: int) -> Stop:
        return cls(max_rounds=T)

    @classmethod
    def hit(cls, profile: Profile | tuple[int, int], cap: int | None = None) -> Stop:
        return cls(max_rounds=cap, target=Profile(*profile))

    @classmethod
    def gap_at_most(cls, eps: Fraction, cap: int | None = None) -> Stop:
        return cls(max_rounds=cap, gap=Fraction(eps))

    def to_json(self) -> dict:
        return {
            "max_rounds": None if self.max_rounds is None else str(self.max_rounds),
            "target": None if self.target is None else list(self.target),
            "gap": None if self.gap is None else str(self.gap),
        }


@dataclass
class Trace:
    init: Profile
    switches: list[SwitchEvent]
    final_state: FPState
    stop_reason: str
    naive_steps: int = field(default=0, compare=False)

    def profiles(self) -> list[Profile]:
        return [e.profile for e in self.switches]

    def first_hit(self, profile: Profile | tuple[int, int]) -> int | None:
        profile = Profile(*profile)
        for e in self.switches:
            if e.profile == profile:
                return e.round
        return None

    def to_csv(self) -> str:
        lines = ["round,row_action,col_action"]
        lines += [f"{e.round},{e.profile.row},{e.profile.col}" for e in self.switches]
        return "\n".join(lines) + "\n"

    def same_as(self, other: Trace) -> bool:
        """Equality of everything observable: events, snapshots, final state, reason."""
        return (self.init == other.init and self.switches == other.switches
                and self.final_state == other.final_state
                and self.stop_reason == other.stop_reason)


def init_state(A: PayoffMatrix, B: PayoffMatrix, init: Profile | tuple[int, int]) -> FPState:
    _check_game(A, B)
    i, j = init
    if not (1 <= i <= A.rows and 1 <= j <= A.cols):
        raise DimensionError(f"initial profile {tuple(init)} outside a {A.rows}x{A.cols} game")
    rc = [0] * A.rows
    cc = [0] * A.cols
    rc[i - 1] = cc[j - 1] = 1
    return FPState(1, A.column(j), B.row(i), tuple(rc), tuple(cc), Profile(i, j))


def choose(state: FPState, rule: TieBreakRule) -> Profile:
    """Both players' best responses to the stored history, row resolved first."""
    i = rule.resolve(argmax_set(state.R), state.current.row)
    j = rule.resolve(argmax_set(state.C), state.current.col)
    return Profile(i, j)


def play(state: FPState, A: PayoffMatrix, B: PayoffMatrix, p: Profile) -> FPState:
    """Append one round in which ``p`` is played."""
    i, j = p
    acol, brow = A.col_tuples[j - 1], B.row_tuples[i - 1]
    rc = list(state.row_counts)
    cc = list(state.col_counts)
    rc[i - 1] += 1
    cc[j - 1] += 1
    return FPState(
        state.t + 1,
        tuple(r + a for r, a in zip(state.R, acol)),
        tuple(c + b for c, b in zip(state.C, brow)),
        tuple(rc), tuple(cc), p,
    )


def step(state: FPState, A: PayoffMatrix, B: PayoffMatrix, rule: TieBreakRule) -> FPState:
    """One simultaneous best-response round."""
    if len(state.R) != A.rows or len(state.C) != B.cols:
        raise DimensionError("state does not match the game's dimensions")
    return play(state, A, B, choose(state, rule))


def gap_scaled(state: FPState) -> int:
    """Nash gap of the empirical profile times t**2, identical-payoff games only.

    With x = row_counts/t and y = col_counts/t, the stored R equals t*A y and
    C equals t*x^T A, so the gap is (t*(max R + max C) - 2*row_counts.R) / t**2.
    """
    t = state.t
    inner = sum(c * r for c, r in zip(state.row_counts, state.R))
    return t * (max(state.R) + max(state.C)) - 2 * inner


def gap_at_most(state: FPState, eps: Fraction) -> bool:
    eps = Fraction(eps)
    return gap_scaled(state) * eps.denominator <= eps.numerator * state.t * state.t


def _check_game(A: PayoffMatrix, B: PayoffMatrix) -> None:
    if (A.rows, A.cols) != (B.rows, B.cols):
        raise DimensionError(f"A is {A.rows}x{A.cols} but B is {B.rows}x{B.cols}")


def _check_stop(stop: Stop, A: PayoffMatrix, B: PayoffMatrix) -> None:
    if stop.gap is not None and A != B:
        raise UnsupportedError("gap stopping is defined for identical-payoff games only")
    if stop.target is not None:
        i, j = stop.target
        if not (1 <= i <= A.rows and 1 <= j <= A.cols):
            raise DimensionError(f"target {tuple(stop.target)} outside the game")


def stop_reason(state: FPState, stop: Stop) -> str | None:
    if stop.target is not None and state.current == stop.target:
        return "first_hit"
    if stop.gap is not None and gap_at_most(state, stop.gap):
        return "gap"
    if stop.max_rounds is not None and state.t >= stop.max_rounds:
        return "max_rounds"
    return None


def _start(A, B, init, resume: Trace | None) -> tuple[FPState, list[SwitchEvent]]:
    if resume is not None:
        return resume.final_state, list(resume.switches)
    state = init_state(A, B, init)
    zeros_r, zeros_c = (0,) * A.rows, (0,) * A.cols
    return state, [SwitchEvent(1, state.current, zeros_r, zeros_c)]


Checkpoint = Callable[[Trace], None]


def run(
    A: PayoffMatrix,
    B: PayoffMatrix,
    init: Profile | tuple[int, int],
    rule: TieBreakRule,
    stop: Stop,
    *,
    accelerate: bool = True,
    resume: Trace | None = None,
    checkpoint_every: int | None = None,
    on_checkpoint: Checkpoint | None = None,
) -> Trace:
    """Simulate round by round until ``stop`` fires.

    With ``accelerate`` the switch-free stretches between interesting rounds
    go through a compiled int64 loop, used only while overflow is impossible;
    every switch and every tie a non-stationary rule must resolve is handled
    by :func:`step`. The result is identical either way.
    """
    _check_game(A, B)
    _check_stop(stop, A, B)
    state, events = _start(A, B, init, resume)
    init = events[0].profile
    kernel = _load_kernel() if accelerate and stop.gap is None else None
    next_ckpt = _next_multiple(state.t, checkpoint_every)
    naive = 0

    while True:
        reason = stop_reason(state, stop)
        if reason:
            break
        if next_ckpt is not None and state.t >= next_ckpt:
            if on_checkpoint is not None:
                on_checkpoint(Trace(init, list(events), state, "checkpoint", naive))
            next_ckpt = _next_multiple(state.t, checkpoint_every)
        limit = _limit(state, stop, next_ckpt)
        if kernel is not None and limit > 1:
            # leaves at least one round for the Python step below
            state = kernel.advance_no_switch(state, A, B, rule, limit - 1)
        prev = state
        p = choose(state, rule)
        state = play(state, A, B, p)
        naive += 1
        if p != prev.current:
            events.append(SwitchEvent(state.t, p, prev.R, prev.C))
    return Trace(init, events, state, reason, naive)


def _next_multiple(t: int, every: int | None) -> int | None:
    if not every:
        return None
    return (t // every + 1) * every


def _limit(state: FPState, stop: Stop, next_ckpt: int | None) -> int:
    """Rounds that may be played before a cap or checkpoint must be honoured."""
    bounds = [b - state.t for b in (stop.max_rounds, next_ckpt) if b is not None]
    return min(bounds) if bounds else 1 << 62


def _load_kernel():
    try:
        from . import _kernel
    except ImportError:  # numba missing: pure-Python path
        return None
    return _kernel


def replay_state(
    A: PayoffMatrix, B: PayoffMatrix, switches: list[SwitchEvent], t: int
) -> FPState:
    """Rebuild the stored state at round ``t`` from the switch list alone."""
    if t < 1:
        raise ValueError("round must be >= 1")
    if not switches or switches[0].round != 1:
        raise ValueError("switch list must start with the round-1 event")
    rc = [0] * A.rows
    cc = [0] * A.cols
    current = switches[0].profile
    for k, ev in enumerate(switches):
        if ev.round > t:
            break
        end = switches[k + 1].round - 1 if k + 1 < len(switches) else t
        span = min(end, t) - ev.round + 1
        rc[ev.profile.row - 1] += span
        cc[ev.profile.col - 1] += span
        current = ev.profile
    return FPState(t, utility_vector_row(A, cc), utility_vector_col(B, rc),
                   tuple(rc), tuple(cc), current)


def with_snapshots(A: PayoffMatrix, B: PayoffMatrix, trace: Trace) -> Trace:
    """Copy of ``trace`` whose switch events carry R/C snapshots."""
    events = []
    for ev in trace.switches:
        if ev.R is not None and ev.C is not None:
            events.append(ev)
        elif ev.round == 1:
            events.append(replace(ev, R=(0,) * A.rows, C=(0,) * A.cols))
        else:
            s = replay_state(A, B, trace.switches, ev.round - 1)
            events.append(replace(ev, R=s.R, C=s.C))
    return replace(trace, switches=events)
