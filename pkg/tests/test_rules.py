import pytest

from fictplay.errors import DimensionError
from fictplay.rules import RandomRule, make_rule, resolve, rule_from_json


def test_resolve_examples():
    assert resolve(make_rule("lexmin"), (1, 3), 3) == 1
    assert resolve(make_rule("lexmax"), (1, 3), 1) == 3
    assert resolve(make_rule("stay"), (1, 3), 3) == 3
    assert resolve(make_rule("stay"), (2, 4), 1) == 2


def test_empty_tie_set():
    with pytest.raises(DimensionError):
        resolve(make_rule("lexmin"), (), 1)


def test_unknown_rule():
    with pytest.raises(ValueError):
        make_rule("adversarial")


def test_random_draws_only_on_real_ties():
    a, b = RandomRule(5), RandomRule(5)
    assert a.resolve((2,), 1) == 2
    assert [a.resolve((1, 2, 3), 1) for _ in range(20)] == [b.resolve((1, 2, 3), 1) for _ in range(20)]


def test_random_state_roundtrip():
    r = RandomRule(11)
    for _ in range(7):
        r.resolve((1, 2, 3, 4), 1)
    clone = rule_from_json(r.to_json())
    assert [r.resolve((1, 2, 3), 1) for _ in range(30)] == [clone.resolve((1, 2, 3), 1) for _ in range(30)]


def test_random_reset():
    r = RandomRule(3)
    first = [r.resolve((1, 2), 1) for _ in range(10)]
    r.reset()
    assert [r.resolve((1, 2), 1) for _ in range(10)] == first
