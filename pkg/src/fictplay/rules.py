"""Tie-breaking rules for choosing among several best responses."""

from __future__ import annotations

import random
from typing import Sequence

from .errors import DimensionError


class TieBreakRule:
    """Base class. Subclasses override :meth:`choose`.

    ``resolve`` only calls ``choose`` when there is a real tie, so a rule
    with internal randomness consumes draws at tie rounds only. Both engines
    rely on that to stay in lockstep.

    A rule is *stationary* when its pick depends only on the tie set and the
    previous action, and re-applying it to its own pick returns that pick.
    The fast-forward engine may jump across a persistent tie for stationary
    rules; any other rule is naive-stepped through ties.
    """

    kind: str = "custom"
    stationary: bool = False

    def resolve(self, ties: Sequence[int], prev: int) -> int:
        if not ties:
            raise DimensionError("empty tie set")
        if len(ties) == 1:
            return ties[0]
        return self.choose(ties, prev)

    def choose(self, ties: Sequence[int], prev: int) -> int:
        raise NotImplementedError

    def reset(self) -> None:
        """Restore the initial internal state (no-op for deterministic rules)."""

    def to_json(self) -> dict:
        return {"kind": self.kind}


class LexMin(TieBreakRule):
    kind = "lexmin"
    stationary = True

    def choose(self, ties, prev):
        return ties[0]


class LexMax(TieBreakRule):
    kind = "lexmax"
    stationary = True

    def choose(self, ties, prev):
        return ties[-1]


class Stay(TieBreakRule):
    """Keep the previous action if it is still a best response, else the smallest."""

    kind = "stay"
    stationary = True

    def choose(self, ties, prev):
        return prev if prev in ties else ties[0]


class RandomRule(TieBreakRule):
    """Uniform choice among ties from a seeded ``random.Random``.

    Per round the row player's tie is resolved before the column player's,
    each from the same generator.
    """

    kind = "random"

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.rng = random.Random(seed)

    def choose(self, ties, prev):
        return ties[self.rng.randrange(len(ties))]

    def reset(self) -> None:
        self.rng = random.Random(self.seed)

    def to_json(self) -> dict:
        version, internal, gauss = self.rng.getstate()
        return {"kind": self.kind, "seed": self.seed,
                "rng_state": [version, list(internal), gauss]}

    def set_state(self, state: list) -> None:
        version, internal, gauss = state
        self.rng.setstate((version, tuple(internal), gauss))


BUILTIN_RULES = ("lexmin", "lexmax", "stay", "random")


def make_rule(kind: str, seed: int = 0) -> TieBreakRule:
    if kind == "lexmin":
        return LexMin()
    if kind == "lexmax":
        return LexMax()
    if kind == "stay":
        return Stay()
    if kind == "random":
        return RandomRule(seed)
    raise ValueError(f"unknown tie-break rule {kind!r}; expected one of {BUILTIN_RULES}")


def rule_from_json(data: dict) -> TieBreakRule:
    rule = make_rule(data["kind"], data.get("seed", 0))
    if isinstance(rule, RandomRule) and "rng_state" in data:
        rule.set_state(data["rng_state"])
    return rule


def resolve(rule: TieBreakRule, ties: Sequence[int], prev: int) -> int:
    return rule.resolve(ties, prev)
