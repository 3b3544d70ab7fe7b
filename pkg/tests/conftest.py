"""Shared independent oracles for the test suite.

These deliberately avoid the library's solver machinery: plays are
evaluated by direct recursion over (state, remaining moves) so that
backward induction has something genuinely separate to be checked
against.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from fhgames.game import Game, StateKind


def play_value(g: Game, horizon: int, actions1: dict, actions2: dict) -> Fraction:
    """Probability of reaching the terminal with both players fixed.

    ``actions1``/``actions2`` map (remaining, state id) -> arc index.
    Direct memoised recursion, exact Fractions.
    """

    @lru_cache(maxsize=None)
    def value(sid: str, remaining: int) -> Fraction:
        s = g.state(sid)
        if s.kind is StateKind.TERMINAL:
            return Fraction(1)
        if remaining == 0:
            return Fraction(0)
        if s.kind is StateKind.COIN:
            return Fraction(1, 2) * (
                value(s.arcs[0], remaining - 1) + value(s.arcs[1], remaining - 1)
            )
        table = actions1 if s.kind is StateKind.MAX else actions2
        return value(s.arcs[table[(remaining, sid)]], remaining - 1)

    return value(g.start, horizon)


def count_sequences_with_run(i: int, t: int) -> int:
    """Number of length-t binary sequences containing i consecutive ones,
    by literal enumeration over all 2**t bitmasks."""
    hits = 0
    for word in range(1 << t):
        acc = word
        for _ in range(i - 1):
            acc &= acc >> 1
        if acc:
            hits += 1
    return hits
