from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_game
from fictplay.engine import FPState, Stop, init_state, run, step
from fictplay.errors import DivergenceNotice, NotReached, PersistentTieError, TieStateError
from fictplay.fast_forward import (
    advance,
    equivalence_check,
    first_hit,
    first_nonpositive,
    rounds_until_switch,
    run_ff,
)
from fictplay.game import PayoffMatrix, Profile, argmax_set
from fictplay.rules import make_rule


def _state_at(A, t):
    s = init_state(A, A, (A.rows, 1))
    rule = make_rule("lexmin")
    while s.t < t:
        s = step(s, A, A, rule)
    return s


def test_catch_up_example(k4):
    s = _state_at(k4, 4)
    assert s.R == (9, 0, 4, 3) and s.current == Profile(1, 4)
    assert rounds_until_switch(s, k4, k4).k == 5
    assert advance(s, k4, k4, 5).R == (24, 0, 24, 3)


def test_tie_raises(k4):
    s = advance(_state_at(k4, 4), k4, k4, 5)
    with pytest.raises(TieStateError):
        rounds_until_switch(s, k4, k4)


def test_absorbing_cell_diverges(k2):
    s = FPState(3, (8, 3), (4, 6), (2, 1), (1, 2), Profile(1, 2))
    with pytest.raises(DivergenceNotice):
        rounds_until_switch(s, k2, k2)
    assert rounds_until_switch(s, k2, k2, horizon=50).k == 50


def test_advance_zero_and_one(k4):
    s = _state_at(k4, 4)
    assert advance(s, k4, k4, 0) == s
    assert advance(s, k4, k4, 1) == step(s, k4, k4, make_rule("lexmin"))


def test_run_ff_k6_matches_naive_with_few_steps(k6):
    stop = Stop.hit((3, 4))
    slow, fast, diff = equivalence_check(k6, k6, (6, 1), lambda: make_rule("lexmin"), stop)
    assert diff is None and fast.same_as(slow)
    assert fast.final_state.t >= 1024 and fast.naive_steps < 5000


def test_run_ff_k8_first_hit():
    from fictplay import build_k
    A = build_k(8)
    tr = run_ff(A, A, (8, 1), make_rule("lexmin"), Stop.hit((4, 5)))
    assert tr.final_state.t >= 262144


def test_first_hit_examples(k2, k4):
    naive = run(k2, k2, (2, 1), make_rule("lexmin"), Stop.hit((1, 2))).final_state.t
    assert first_hit(k2, k2, (2, 1), make_rule("lexmin"), (1, 2), 10**6) == naive
    for kind in ("lexmin", "lexmax", "stay", "random"):
        assert first_hit(k4, k4, (4, 1), make_rule(kind, 2), (2, 3), 10**6) >= 64
    assert first_hit(k4, k4, (3, 2), make_rule("lexmin"), (3, 2), 10) == 1
    with pytest.raises(NotReached):
        first_hit(k4, k4, (4, 1), make_rule("lexmin"), (2, 3), 100)


def test_gap_stop_matches_naive(k4):
    stop = Stop.gap_at_most(F(1, 256))
    _, fast, diff = equivalence_check(k4, k4, (4, 1), lambda: make_rule("lexmin"), stop)
    assert diff is None and fast.stop_reason == "gap"
    assert fast.final_state.t == 619199


def test_persistent_tie_budget():
    Z = PayoffMatrix.zeros(3, 3)
    with pytest.raises(PersistentTieError) as info:
        run_ff(Z, Z, (1, 1), make_rule("random", 0), Stop.rounds(10**6), tie_budget=50)
    assert info.value.row_ties == (1, 2, 3)


def test_stationary_rules_jump_over_persistent_ties():
    Z = PayoffMatrix.zeros(3, 3)
    tr = run_ff(Z, Z, (1, 1), make_rule("stay"), Stop.rounds(10**12), tie_budget=5)
    assert tr.final_state.t == 10**12 and len(tr.switches) == 1


@given(st.integers(-30, 30), st.integers(-500, 500), st.integers(-500, 500),
       st.integers(0, 20), st.one_of(st.none(), st.integers(0, 200)))
def test_first_nonpositive_against_scan(a, b, c, lo, span):
    hi = None if span is None else lo + span
    got = first_nonpositive(a, b, c, lo, hi)
    top = hi if hi is not None else lo + 5000
    want = next((s for s in range(lo, top + 1) if a * s * s + b * s + c <= 0), None)
    if hi is None and want is None:
        assert got is None or got > top
    else:
        assert got == want


@given(st.integers(0, 10_000), st.integers(1, 5), st.integers(1, 5), st.integers(2, 400))
def test_jump_is_sound(seed, i, j, warmup):
    A, B = random_game(seed)
    s = init_state(A, B, (i, j))
    rule = make_rule("lexmin")
    for _ in range(warmup):
        s = step(s, A, B, rule)
    try:
        k = rounds_until_switch(s, A, B, horizon=5000).k
    except TieStateError:
        return
    if s.current != Profile(argmax_set(s.R)[0], argmax_set(s.C)[0]):
        return  # a switch is due before any jump
    slow = s
    for _ in range(k):
        slow = step(slow, A, B, rule)
    assert advance(s, A, B, k) == slow


@given(st.integers(0, 10_000), st.sampled_from(["lexmin", "lexmax", "stay", "random"]))
def test_engines_agree_on_random_games(seed, kind):
    A, B = random_game(seed)
    _, _, diff = equivalence_check(A, B, (1 + seed % 5, 1 + seed // 5 % 5),
                                   lambda: make_rule(kind, seed), Stop.rounds(20_000))
    assert diff is None


@given(st.integers(0, 10_000), st.integers(100, 5000), st.integers(1, 800))
def test_ff_resume_is_seamless(seed, total, every):
    A, B = random_game(seed, lo=-4, hi=4)
    stop = Stop.rounds(total)
    whole = run_ff(A, B, (2, 2), make_rule("lexmax"), stop)
    saved = []
    run_ff(A, B, (2, 2), make_rule("lexmax"), stop, checkpoint_every=every, on_checkpoint=saved.append)
    for part in saved[:3]:
        assert run_ff(A, B, None, make_rule("lexmax"), stop, resume=part).same_as(whole)
