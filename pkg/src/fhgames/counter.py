"""Counter strategies: rho-shaped memory automata over elapsed time.

A counter strategy has N "initial" memories used exactly once and p
"periodic" memories reused cyclically; the memory trajectory from 0 is

    0, 1, ..., N+p-1, N, N+1, ..., N+p-1, N, ...

and advances on every pebble move regardless of the observed state.
Strategies over elapsed time and the solver's remaining-time tables are
interconverted here (elapsed t corresponds to remaining T - t).

Two minimisation problems are solved:

* from_markov — the smallest automaton whose unrolled action sequence
  reproduces one given Markov strategy exactly;
* minimal_period — the smallest automaton able to pick, at every
  elapsed step, SOME action from a given non-empty set of optimal arcs.

Minimality is measured by the total memory-state count N + p (the
reported space in bits is ceil(log2(N + p))), with ties broken towards
the smaller period.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass, field
from typing import Mapping

from .game import Game
from .solver import MarkovStrategy, OptimalActionSets

__all__ = [
    "CounterStrategy",
    "ActionSetSequence",
    "PeriodResult",
    "MemoryReport",
    "from_markov",
    "to_markov",
    "unroll",
    "memory_report",
    "minimal_period",
    "least_initial_for_period",
]


@dataclass(frozen=True)
class CounterStrategy:
    """Action map of a rho-shaped counter automaton.

    ``actions[(m, sid)]`` is the arc chosen at state ``sid`` while the
    memory is ``m``; the update function is state-independent.
    """

    initial: int
    period: int
    actions: Mapping[tuple[int, str], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.initial < 0:
            raise ValueError("initial memory count must be non-negative")
        if self.period < 1:
            raise ValueError("period must be at least 1")
        size = self.initial + self.period
        for (m, sid), arc in self.actions.items():
            if not 0 <= m < size:
                raise ValueError(f"memory index {m} out of range 0..{size - 1}")
            if arc not in (0, 1):
                raise ValueError(f"arc index must be 0 or 1, got {arc!r}")

    @property
    def size(self) -> int:
        return self.initial + self.period

    def next_memory(self, m: int) -> int:
        return m + 1 if m < self.size - 1 else self.initial

    def memory_at(self, t: int) -> int:
        """Memory after t traversals (the rho trajectory)."""
        if t < self.size:
            return t
        return self.initial + (t - self.initial) % self.period

    def action_at(self, t: int, sid: str) -> int:
        return self.actions[(self.memory_at(t), sid)]

    def to_json_obj(self) -> dict:
        return {
            "N": self.initial,
            "p": self.period,
            "actions": [
                {"memory": m, "state": sid, "arc": arc}
                for (m, sid), arc in sorted(self.actions.items())
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "CounterStrategy":
        actions = {
            (entry["memory"], entry["state"]): entry["arc"]
            for entry in obj["actions"]
        }
        return cls(initial=obj["N"], period=obj["p"], actions=actions)


MemoryReport = namedtuple("MemoryReport", "states bits initial period")


def memory_report(cs: CounterStrategy) -> MemoryReport:
    """Memory-state count and its size in bits, alongside N and p."""
    states = cs.size
    return MemoryReport(states, (states - 1).bit_length(), cs.initial, cs.period)


def unroll(cs: CounterStrategy, t_max: int, ids=None) -> list[dict[str, int]]:
    """Per-state actions for elapsed steps 0..t_max-1 along the rho walk."""
    if ids is None:
        ids = sorted({sid for _, sid in cs.actions})
    return [
        {sid: cs.actions[(cs.memory_at(t), sid)] for sid in ids}
        for t in range(t_max)
    ]


def to_markov(cs: CounterStrategy, horizon: int, player: int = 1) -> MarkovStrategy:
    """Unrolled view of a counter strategy as a remaining-time strategy."""
    ids = sorted({sid for _, sid in cs.actions})
    choices = {
        (horizon - t, sid): cs.action_at(t, sid)
        for t in range(horizon)
        for sid in ids
    }
    return MarkovStrategy(player=player, horizon=horizon, choices=choices)


def _minimal_replication(seq: list) -> tuple[int, int]:
    """Smallest (N, p) by N+p, ties to smaller p, with seq[t] == seq[t+p]
    for all N <= t <= len(seq)-1-p.  Always solvable: N = len-1, p = 1."""
    length = len(seq)
    if length == 0:
        return 0, 1
    for total in range(1, length + 1):
        for p in range(1, total + 1):
            n = total - p
            if all(seq[t] == seq[t + p] for t in range(n, length - p)):
                return n, p
    return length - 1, 1  # unreachable; the total == length case always fits


def from_markov(strategy: MarkovStrategy) -> CounterStrategy:
    """Minimal counter strategy replaying a Markov strategy exactly.

    The strategy's remaining-time table is reversed to elapsed time
    first; the result's unrolled sequence over 0..T-1 equals it.
    """
    horizon = strategy.horizon
    ids = sorted({sid for _, sid in strategy.choices})
    seq = [
        tuple(strategy.action(horizon - t, sid) for sid in ids)
        for t in range(horizon)
    ]
    n, p = _minimal_replication(seq)
    actions = {}
    for m in range(n + p):
        row = seq[m] if m < horizon else tuple(0 for _ in ids)
        for k, sid in enumerate(ids):
            actions[(m, sid)] = row[k]
    return CounterStrategy(initial=n, period=p, actions=actions)


@dataclass(frozen=True)
class ActionSetSequence:
    """Elapsed-time reindexing of optimal-action sets.

    ``masks[(t, sid)]`` is a bitmask over arcs (bit 0 = arc 0, bit 1 =
    arc 1), non-empty for every elapsed step t in 0..length-1.
    """

    length: int
    states: tuple[str, ...]
    masks: dict[tuple[int, str], int]

    def __post_init__(self):
        for t in range(self.length):
            for sid in self.states:
                mask = self.masks.get((t, sid), 0)
                if mask not in (1, 2, 3):
                    raise ValueError(f"empty or invalid action set at t={t}, {sid!r}")

    @classmethod
    def from_optimal(
        cls, g: Game, sets: OptimalActionSets, player: int = 1
    ) -> "ActionSetSequence":
        ids = tuple(sorted(g.controlled_ids(player)))
        horizon = sets.horizon
        masks = {}
        for t in range(horizon):  # elapsed t, remaining horizon - t >= 1
            for sid in ids:
                mask = 0
                for arc in sets.at(horizon - t, sid):
                    mask |= 1 << arc
                masks[(t, sid)] = mask
        return cls(length=horizon, states=ids, masks=masks)


@dataclass(frozen=True)
class PeriodResult:
    initial: int
    period: int
    witness: CounterStrategy


def least_initial_for_period(seq: ActionSetSequence, period: int) -> int:
    """Smallest N such that, for every state and residue class mod the
    period, the sets at elapsed steps >= N in that class intersect."""
    if period < 1:
        raise ValueError("period must be at least 1")
    need = 0
    length = seq.length
    for sid in seq.states:
        for r in range(min(period, length)):
            acc = 3
            start = r + period * ((length - 1 - r) // period)
            for t in range(start, -1, -period):
                mask = seq.masks[(t, sid)]
                if acc & mask == 0:
                    # everything at or below t in this class must sit in
                    # the once-used prefix
                    if t + 1 > need:
                        need = t + 1
                    break
                acc &= mask
    return need


def _pick(mask: int) -> int:
    return 0 if mask & 1 else 1


def _witness(seq: ActionSetSequence, n: int, p: int) -> CounterStrategy:
    actions = {}
    for sid in seq.states:
        for m in range(n):
            actions[(m, sid)] = _pick(seq.masks[(m, sid)])
        for j in range(p):
            acc = 3
            t = n + j
            while t < seq.length:
                acc &= seq.masks[(t, sid)]
                t += p
            actions[(n + j, sid)] = _pick(acc)
    return CounterStrategy(initial=n, period=p, actions=actions)


def minimal_period(seq: ActionSetSequence) -> PeriodResult:
    """Smallest counter automaton compatible with every given set.

    Feasibility of (N, p): for each controlled state and each residue
    class mod p, the sets at elapsed steps >= N in the class have a
    common arc; steps below N take any in-set arc.  Among feasible
    pairs, N + p is minimised and ties go to the smaller period.  The
    degenerate solution p = 1, N = length - 1 is always feasible, so a
    result exists; small periods win only when the cyclic part truly
    repeats.
    """
    if seq.length == 0 or not seq.states:
        return PeriodResult(0, 1, CounterStrategy(0, 1, {}))
    best: tuple[int, int, int] | None = None  # (total, period, initial)
    for p in range(1, seq.length + 1):
        if best is not None and p >= best[0]:
            break  # total >= period, so larger periods cannot win
        n = least_initial_for_period(seq, p)
        if best is None or n + p < best[0]:
            best = (n + p, p, n)
    _, p, n = best
    return PeriodResult(initial=n, period=p, witness=_witness(seq, n, p))
