"""Compiled int64 loop for the switch-free stretches of a naive run.

Only used when no cumulative utility can leave the int64 range during the
requested stretch, so its results are identical to the Python-int path.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .game import PayoffMatrix
from .rules import LexMax, LexMin, Stay, TieBreakRule

_SAFE = 1 << 62
_LEXMIN, _LEXMAX, _STAY, _STOP_ON_TIE = 0, 1, 2, 3


@njit(cache=True)
def _pick(v, prev, rule):
    """Resolved argmax of v (0-based), or -1 if the rule must run in Python."""
    best = v[0]
    first = 0
    last = 0
    count = 1
    for k in range(1, v.shape[0]):
        x = v[k]
        if x > best:
            best = x
            first = k
            last = k
            count = 1
        elif x == best:
            last = k
            count += 1
    if count == 1:
        return first
    if rule == _LEXMIN:
        return first
    if rule == _LEXMAX:
        return last
    if rule == _STAY:
        if v[prev] == best:
            return prev
        return first
    return -1


@njit(cache=True)
def _advance(A, B, R, C, rc, cc, i, j, max_steps, rule):
    steps = 0
    while steps < max_steps:
        ni = _pick(R, i, rule)
        nj = _pick(C, j, rule)
        if ni != i or nj != j:
            break
        for k in range(R.shape[0]):
            R[k] += A[k, j]
        for k in range(C.shape[0]):
            C[k] += B[i, k]
        steps += 1
    rc[i] += steps
    cc[j] += steps
    return steps


def _rule_code(rule: TieBreakRule) -> int:
    # exact type checks: a subclass may override choose()
    if type(rule) is LexMin:
        return _LEXMIN
    if type(rule) is LexMax:
        return _LEXMAX
    if type(rule) is Stay:
        return _STAY
    return _STOP_ON_TIE


_matrix_cache: dict[int, tuple[PayoffMatrix, np.ndarray | None]] = {}


def _as_array(M: PayoffMatrix) -> np.ndarray | None:
    hit = _matrix_cache.get(id(M))
    if hit is not None and hit[0] is M:
        return hit[1]
    arr = None
    if M.max_abs() < _SAFE:
        arr = np.array(M.row_tuples, dtype=np.int64).reshape(M.rows, M.cols)
    if len(_matrix_cache) > 64:
        _matrix_cache.clear()
    _matrix_cache[id(M)] = (M, arr)
    return arr


def advance_no_switch(state, A: PayoffMatrix, B: PayoffMatrix, rule: TieBreakRule, max_steps: int):
    """Play the current profile for as many rounds (<= max_steps) as the
    best responses keep selecting it."""
    from .engine import FPState

    a, b = _as_array(A), _as_array(B)
    if a is None or b is None:
        return state
    step_max = max(A.max_abs(), B.max_abs(), 1)
    level = max(max(map(abs, state.R)), max(map(abs, state.C)), state.t)
    budget = min(max_steps, (_SAFE - level) // step_max if level < _SAFE else 0)
    if budget <= 0:
        return state
    R = np.array(state.R, dtype=np.int64)
    C = np.array(state.C, dtype=np.int64)
    rc = np.array(state.row_counts, dtype=np.int64)
    cc = np.array(state.col_counts, dtype=np.int64)
    i, j = state.current.row - 1, state.current.col - 1
    steps = _advance(a, b, R, C, rc, cc, i, j, budget, _rule_code(rule))
    if steps == 0:
        return state
    return FPState(state.t + int(steps), tuple(R.tolist()), tuple(C.tolist()),
                   tuple(rc.tolist()), tuple(cc.tolist()), state.current)
