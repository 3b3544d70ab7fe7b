import math
import random
from fractions import Fraction

import pytest

from fhgames.counter import CounterStrategy, from_markov
from fhgames.errors import GuardExceeded, StrategyError
from fhgames.game import Game, State, StateKind
from fhgames.gadgets import make_F, make_G, make_H, make_M, random_game
from fhgames.numeric import Dyadic
from fhgames.oracle import (
    MemorylessStrategy,
    min_counter_memory,
    reach_probabilities,
    simulate,
    solve_infinite,
)
from fhgames.solver import (
    backward_induction,
    evaluate_fixed_final,
    extract_markov,
    final_values,
)


def residual_ok(g, strategies, values):
    """Exact check of the defining reachability equations."""
    choice = {s.player: s for s in strategies if s is not None}
    for s in g.states:
        if s.kind is StateKind.TERMINAL:
            assert values[s.id] == 1
            continue
        if s.kind is StateKind.COIN:
            expected = Fraction(1, 2) * (values[s.arcs[0]] + values[s.arcs[1]])
        else:
            player = 1 if s.kind is StateKind.MAX else 2
            expected = values[s.arcs[choice[player].action(0, s.id)]]
        assert values[s.id] == expected


class TestReachProbabilities:
    def test_shortcut_gadget(self):
        strat = MemorylessStrategy(1, {"x": 0})
        values = reach_probabilities(make_M(), strat)
        assert values["h"] == Fraction(1, 2)
        assert values["top"] == 0
        assert values["start"] == 1
        assert values["x"] == 1
        residual_ok(make_M(), [strat], values)

    def test_shortcut_with_coin_arc(self):
        strat = MemorylessStrategy(1, {"x": 1})
        values = reach_probabilities(make_M(), strat)
        assert values["x"] == Fraction(1, 2)
        residual_ok(make_M(), [strat], values)

    def test_requires_strategy(self):
        with pytest.raises(StrategyError):
            reach_probabilities(make_M())

    def test_cycle_gadget_loops_forever(self):
        # committing to the cycle always drains into the terminal
        strat = MemorylessStrategy(1, {"max": 1})
        values = reach_probabilities(make_G(3), strat)
        for sid in ("max", "1", "2", "3", "1s", "2s"):
            assert values[sid] == 1

    def test_values_in_unit_interval_on_random_games(self):
        rng = random.Random(7)
        for _ in range(40):
            g = random_game(rng.randint(2, 6), rng)
            s1 = MemorylessStrategy(
                1, {sid: rng.randint(0, 1) for sid in g.controlled_ids(1)}
            )
            s2 = MemorylessStrategy(
                2, {sid: rng.randint(0, 1) for sid in g.controlled_ids(2)}
            )
            values = reach_probabilities(g, s1, s2)
            for v in values.values():
                assert 0 <= v <= 1
            residual_ok(g, [s1, s2], values)


class TestSolveInfinite:
    def test_shortcut_gadget(self):
        solution = solve_infinite(make_M())
        assert solution.values["start"] == 1
        assert solution.values["h"] == Fraction(1, 2)
        assert solution.values["top"] == 0
        assert solution.strategy.choices == {"x": 0}

    def test_approach_chain(self):
        solution = solve_infinite(make_H(4))
        assert solution.values["x"] == 1
        assert solution.values["4s"] == 1
        assert solution.strategy.choices == {"x": 0}

    def test_min_player_can_block(self):
        g = Game(
            states=(
                State("m", StateKind.MIN, ("bot", "top")),
                State("top", StateKind.COIN, ("top", "top")),
                State("bot", StateKind.TERMINAL),
            ),
            start="m",
        )
        assert solve_infinite(g).values["m"] == 0

    def test_cap(self):
        with pytest.raises(GuardExceeded):
            solve_infinite(make_F(4), cap=3)

    def test_dominates_finite_horizons(self):
        rng = random.Random(123)
        for _ in range(15):
            g = random_game(rng.randint(2, 5), rng)
            if len(g.controlled_ids(1)) + len(g.controlled_ids(2)) > 4:
                continue
            infinite = solve_infinite(g).values
            table = backward_induction(g, 24)
            for sid in g.ids():
                for t in (0, 3, 11, 24):
                    assert table.value(t, sid).as_fraction() <= infinite[sid]

    def test_finite_values_converge(self):
        g = make_M()
        infinite = solve_infinite(g).values["start"]
        gaps = [
            infinite - final_values(g, t)["start"].as_fraction()
            for t in (4, 8, 16, 32)
        ]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < Fraction(1, 2**25)


class TestMinCounterMemory:
    def test_trivial_epsilon(self):
        result = min_counter_memory(make_M(), 5, Dyadic(1), max_mem=3)
        assert result.memory == 1

    def test_shortcut_gadget_exact_minimum(self):
        # at horizon c-1 with eps = 2^-c the exact minimum is c-3: the
        # elapsed times 1..c-3 force their actions, and a pure cycle of
        # length c-3 can wrap the forced "h" step onto the unused slot 0
        for c in (5, 6):
            result = min_counter_memory(
                make_M(), c - 1, Dyadic(1, c), max_mem=c
            )
            assert result.memory == c - 3
            again = from_markov(extract_markov(make_M(), c - 1))
            assert result.memory <= again.initial + again.period

    def test_single_decision_game_needs_one_memory(self):
        # the parallel gadget's chooser acts only at elapsed time 0, so
        # one memory state suffices even for exact optimality
        result = min_counter_memory(make_F(1), 9, Dyadic(0), max_mem=3)
        assert result.memory == 1

    def test_unique_strategy_matches_from_markov(self):
        g = Game(
            states=(
                State("x", StateKind.MAX, ("bot", "top")),
                State("top", StateKind.COIN, ("top", "top")),
                State("bot", StateKind.TERMINAL),
            ),
            start="x",
        )
        result = min_counter_memory(g, 6, Dyadic(0), max_mem=3)
        compressed = from_markov(extract_markov(g, 6))
        assert result.memory == compressed.initial + compressed.period == 1

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            min_counter_memory(make_M(), 4, Dyadic(1, 5), max_mem=20, guard=1000)

    def test_witness_meets_target(self):
        from fhgames.solver import evaluate_counter

        result = min_counter_memory(make_M(), 5, Dyadic(1, 6), max_mem=6)
        value = evaluate_counter(make_M(), 5, result.witness).value
        assert value >= result.target


class TestSimulate:
    def test_absorbing_trap_never_hits(self):
        g = Game(
            states=(
                State("top", StateKind.COIN, ("top", "top")),
                State("bot", StateKind.TERMINAL),
            ),
            start="top",
        )
        report = simulate(g, 20, None, trials=200, seed=1)
        assert report.hits == 0

    def test_deterministic_given_seed(self):
        g = make_M()
        strat = extract_markov(g, 5)
        a = simulate(g, 5, strat, trials=500, seed=77)
        b = simulate(g, 5, strat, trials=500, seed=77)
        assert a == b
        c = simulate(g, 5, strat, trials=500, seed=78)
        assert a != c

    def test_agrees_with_exact_value(self):
        g = make_M()
        horizon = 5
        strat = extract_markov(g, horizon)
        exact = evaluate_fixed_final(g, horizon, strat)[g.start].as_fraction()
        trials = 4000
        sigma = math.sqrt(float(exact * (1 - exact)) / trials)
        for seed in range(30):
            report = simulate(g, horizon, strat, trials=trials, seed=seed)
            assert abs(float(report.frequency - exact)) <= 4 * sigma

    def test_counter_strategy_playable(self):
        cs = CounterStrategy(0, 2, {(0, "x"): 1, (1, "x"): 0})
        report = simulate(make_M(), 4, cs, trials=300, seed=3)
        assert 0 <= report.frequency <= 1

    def test_min_player_needs_opponent(self):
        g = Game(
            states=(
                State("a", StateKind.MAX, ("m", "bot")),
                State("m", StateKind.MIN, ("bot", "top")),
                State("top", StateKind.COIN, ("top", "top")),
                State("bot", StateKind.TERMINAL),
            ),
            start="a",
        )
        strat = extract_markov(g, 3, player=1)
        with pytest.raises(StrategyError):
            simulate(g, 3, strat, trials=10, seed=0)
        opponent = extract_markov(g, 3, player=2)
        report = simulate(g, 3, strat, trials=50, seed=0, opponent=opponent)
        assert 0 <= report.frequency <= 1
