"""Query-selection strategies and the exact worst-case tree solver."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .core import (
    Code,
    ContradictoryHistoryError,
    Feedback,
    GameConfig,
    InvalidInputError,
    ResourceLimitError,
    code_space,
    feedback,
    partition_sizes,
    validate_code,
)

FIXED_PAIRS = "fixed-pairs"
RANDOM_START = "random"
CONSISTENT_ONLY = "consistent-only"
FULL_UNIVERSE = "full-universe"

#: Largest c**p accepted by ``optimal_worst_case``.
TREE_CAP = 100


@dataclass(frozen=True)
class SolverParams:
    alpha: float = 2.0
    # None lets each strategy use its own opening: paired colors for
    # knuth/merc, a random code for sa.
    initial_guess_mode: str | None = None
    candidate_pool: str = CONSISTENT_ONLY

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidInputError(f"alpha must be positive, got {self.alpha}")
        if self.initial_guess_mode not in (None, FIXED_PAIRS, RANDOM_START):
            raise InvalidInputError(f"unknown initial_guess_mode {self.initial_guess_mode!r}")
        if self.candidate_pool not in (CONSISTENT_ONLY, FULL_UNIVERSE):
            raise InvalidInputError(f"unknown candidate_pool {self.candidate_pool!r}")


class SolverState:
    """History of one game plus the derived consistency set.

    The candidate set is refreshed on access, filtering only the turns
    recorded since the last refresh.  Candidates are held as ascending
    indices into :func:`code_space`, which is also lexicographic order.
    """

    def __init__(
        self,
        config: GameConfig,
        seed: int = 0,
        params: SolverParams | None = None,
        history: Sequence[tuple[Sequence[int], Feedback]] = (),
    ):
        self.config = config
        self.space = code_space(config.colors, config.pegs)
        self.params = params or SolverParams()
        self.rng = random.Random(seed)
        self.history: list[tuple[Code, Feedback]] = []
        self.query_ids: list[int] = []
        self.class_ids: list[int] = []
        self._candidates: np.ndarray | None = None
        self._filtered_upto = 0
        self._unguessed: list[int] | None = None
        self._asked: set[int] = set()
        for query, reply in history:
            self.record(query, reply)

    @property
    def turn(self) -> int:
        return len(self.history)

    @property
    def last_query(self) -> Code | None:
        return self.history[-1][0] if self.history else None

    def record(self, query: Sequence[int], reply: Feedback | tuple[int, int]) -> None:
        query = validate_code(query, self.config)
        reply = Feedback(*reply)
        if reply not in self.space.class_index:
            raise InvalidInputError(f"{reply} is not a legal reply for {self.config.pegs} pegs")
        self.history.append((query, reply))
        self.query_ids.append(self.space.index(query))
        self.class_ids.append(self.space.class_index[reply])
        self._asked.add(self.query_ids[-1])

    def record_index(self, query_id: int, class_id: int) -> None:
        self.history.append((self.space.codes[query_id], self.space.classes[class_id]))
        self.query_ids.append(query_id)
        self.class_ids.append(class_id)
        self._asked.add(query_id)

    @property
    def candidates(self) -> np.ndarray:
        if self._candidates is None:
            self._candidates = np.arange(len(self.space), dtype=np.int64)
            self._filtered_upto = 0
        if self._filtered_upto < len(self.history):
            table = self.space.table
            cand = self._candidates
            for q, k in zip(self.query_ids[self._filtered_upto:], self.class_ids[self._filtered_upto:]):
                cand = cand[table[q, cand] == k]
            self._candidates = cand
            self._filtered_upto = len(self.history)
        return self._candidates

    def candidate_codes(self) -> list[Code]:
        return [self.space.codes[i] for i in self.candidates]

    def _require_candidates(self) -> np.ndarray:
        cand = self.candidates
        if len(cand) == 0:
            raise ContradictoryHistoryError("no code is consistent with the recorded feedback")
        return cand

    def _opening(self, default_mode: str) -> Code:
        mode = self.params.initial_guess_mode or default_mode
        if mode == FIXED_PAIRS:
            return default_initial_guess(self.config)
        return self.space.codes[self.rng.randrange(len(self.space))]


def default_initial_guess(config: GameConfig) -> Code:
    """Paired-color opening: 1122 for four pegs, 11223 style for odd widths."""
    pairs = (config.pegs + 1) // 2
    colors = [i % config.colors for i in range(pairs)]
    return tuple(colors[min(slot // 2, pairs - 1)] for slot in range(config.pegs))


def random_next(state: SolverState) -> Code:
    """Uniformly random code not yet asked; ignores the replies entirely."""
    if state._unguessed is None:
        order = list(range(len(state.space)))
        state.rng.shuffle(order)
        state._unguessed = order
    while state._unguessed:
        idx = state._unguessed.pop()
        if idx not in state._asked:
            return state.space.codes[idx]
    raise ResourceLimitError("every code has already been guessed")


def _partition_counts(space, rows: np.ndarray, cand: np.ndarray) -> np.ndarray:
    k = len(space.classes)
    sub = space.table[np.ix_(rows, cand)].astype(np.int64)
    sub += (np.arange(len(rows), dtype=np.int64) * k)[:, None]
    return np.bincount(sub.ravel(), minlength=len(rows) * k).reshape(len(rows), k)


@lru_cache(maxsize=500_000)
def _best_query(colors: int, pegs: int, criterion: str, pool: str, key: bytes) -> int:
    space = code_space(colors, pegs)
    cand = np.frombuffer(key, dtype=np.int64)
    if len(cand) == 1:
        return int(cand[0])
    rows = cand if pool == CONSISTENT_ONLY else np.arange(len(space), dtype=np.int64)
    counts = _partition_counts(space, rows, cand)
    if criterion == "max":
        score = counts.max(axis=1)
    else:
        score = (counts * counts).sum(axis=1)
    if pool == FULL_UNIVERSE:
        # Among equal scores prefer a code that could itself be the answer.
        score = score * 2 + ~np.isin(rows, cand)
    return int(rows[np.argmin(score)])


def _select(state: SolverState, criterion: str) -> Code:
    if state.turn == 0:
        return state._opening(FIXED_PAIRS)
    cand = state._require_candidates()
    idx = _best_query(
        state.config.colors, state.config.pegs, criterion,
        state.params.candidate_pool, cand.tobytes(),
    )
    return state.space.codes[idx]


def knuth_next(state: SolverState) -> Code:
    """Candidate whose largest reply class is smallest; ties go to the lowest code."""
    return _select(state, "max")


def merc_next(state: SolverState) -> Code:
    """Candidate with the smallest expected size of the next consistency set."""
    return _select(state, "squares")


def sa_score(candidate: Sequence[int], history: Sequence[tuple[Sequence[int], Feedback]], config: GameConfig) -> int:
    """L1 distance between recorded replies and those ``candidate`` would give as master.

    Zero exactly when ``candidate`` is consistent with ``history``.
    """
    total = 0
    for query, (black, white) in history:
        b, w = feedback(query, candidate, config)
        total += abs(b - black) + abs(w - white)
    return total


def sa_acceptance_probability(score: int, alpha: float) -> float:
    """``alpha / (score + 1)`` clamped to at most 1."""
    if score < 0:
        raise InvalidInputError(f"score must be non-negative, got {score}")
    return min(1.0, alpha / (score + 1))


def _score_index(state: SolverState, idx: int) -> int:
    space = state.space
    got = space.table[state.query_ids, idx]
    want = np.asarray(state.class_ids)
    return int(
        np.abs(space.class_black[got] - space.class_black[want]).sum()
        + np.abs(space.class_white[got] - space.class_white[want]).sum()
    )


def sa_next(state: SolverState) -> Code:
    """Sample from the consistency set joined with the last query's Hamming-1 ring.

    Consistent draws are taken immediately; others survive with probability
    ``sa_acceptance_probability``.  After ``10 * |pool|`` straight rejections
    the lowest consistent code is returned.
    """
    if state.turn == 0:
        return state._opening(RANDOM_START)
    space = state.space
    cand = state._require_candidates()
    ring = space.hamming_indices(state.query_ids[-1])
    pool = np.union1d(cand, ring)
    consistent = np.isin(pool, cand)
    rng = state.rng
    for _ in range(10 * len(pool)):
        j = rng.randrange(len(pool))
        idx = int(pool[j])
        if consistent[j]:
            return space.codes[idx]
        p = sa_acceptance_probability(_score_index(state, idx), state.params.alpha)
        if p >= 1.0 or rng.random() < p:
            return space.codes[idx]
    return space.codes[int(cand[0])]


def merc_expected_size(candidate: Sequence[int], candidates: Sequence[Sequence[int]], config: GameConfig) -> Fraction:
    """Mean size of the consistency set left after asking ``candidate``.

    Each master in ``candidates`` is equally likely; the set that survives
    is that master's reply class, so the mean is ``sum(size**2) / |S|``.
    """
    table = partition_sizes(candidate, candidates, config)
    return Fraction(table.sum_of_squares, len(candidates))


STRATEGIES: dict[str, Callable[[SolverState], Code]] = {
    "random": random_next,
    "knuth": knuth_next,
    "sa": sa_next,
    "merc": merc_next,
}


@dataclass(frozen=True)
class StrategyTreeResult:
    worst_case_depth: int
    expected_depth: float
    node_count: int


def optimal_worst_case(config: GameConfig, tree_cap: int = TREE_CAP) -> StrategyTreeResult:
    """Exact minimax over the whole game tree of a small instance.

    Every code may be asked at every node, consistent or not.  The correct
    final guess counts as a query.  Among strategies with the optimal worst
    case, each node prefers the one with the fewest total queries; the
    reported ``expected_depth`` and ``node_count`` (decision nodes) describe
    that strategy.
    """
    if config.size > tree_cap:
        raise ResourceLimitError(
            f"{config} has {config.size} codes; the tree solver is capped at {tree_cap}"
        )
    n = config.size
    codes = code_space(config.colors, config.pegs).codes
    win = Feedback(config.pegs, 0)
    # masks[g] lists (is_win, bitmask of masters giving that reply to g)
    masks = []
    for g in codes:
        groups: dict[Feedback, int] = {}
        for i, m in enumerate(codes):
            f = feedback(g, m, config)
            groups[f] = groups.get(f, 0) | (1 << i)
        masks.append([(f == win, bits) for f, bits in groups.items()])

    memo: dict[int, tuple[int, int, int]] = {}

    def solve(s: int) -> tuple[int, int, int]:
        # (worst queries, total queries over masters in s, decision nodes)
        if s & (s - 1) == 0:
            return 1, 1, 1
        if s in memo:
            return memo[s]
        size = s.bit_count()
        best = None
        for g in range(n):
            parts = [(is_win, s & bits) for is_win, bits in masks[g] if s & bits]
            if len(parts) == 1 and not parts[0][0]:
                continue
            worst, total, nodes = 1, 0, 1
            for is_win, part in parts:
                if is_win:
                    total += 1
                    continue
                w, t, k = solve(part)
                worst = max(worst, w + 1)
                total += t + part.bit_count()
                nodes += k
                if best is not None and worst > best[0]:
                    break
            else:
                if best is None or (worst, total) < best[:2]:
                    best = (worst, total, nodes)
        memo[s] = best
        return best

    worst, total, nodes = solve((1 << n) - 1)
    return StrategyTreeResult(worst, total / n, nodes)
