"""Combinatorics of generalized Mastermind MM(c, p).

Codes are tuples of 0-based color indices.  Text form uses 1-based digits
("1122"), or dot-separated integers when there are more than nine colors.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

Code = tuple[int, ...]

#: Largest c**p that ``enumerate_codes`` will materialize.
ENUMERATION_CAP = 10**7
#: Largest c**p for which the dense feedback table is built (solvers need it).
TABLE_CAP = 6561
#: Largest number of integer compositions walked by ``cardinality_by_colors``.
COMPOSITION_CAP = 10**6


class MastermindError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(MastermindError, ValueError):
    pass


class ResourceLimitError(MastermindError, RuntimeError):
    pass


class ContradictoryHistoryError(MastermindError, ValueError):
    """No code is consistent with the recorded feedback."""


@dataclass(frozen=True)
class GameConfig:
    colors: int
    pegs: int
    turn_cap: int = field(default=0)

    def __post_init__(self):
        if not isinstance(self.colors, int) or self.colors < 1:
            raise InvalidInputError(f"colors must be a positive integer, got {self.colors!r}")
        if not isinstance(self.pegs, int) or self.pegs < 1:
            raise InvalidInputError(f"pegs must be a positive integer, got {self.pegs!r}")
        if self.turn_cap == 0:
            object.__setattr__(self, "turn_cap", self.colors**self.pegs)
        elif self.turn_cap < 1:
            raise InvalidInputError(f"turn_cap must be positive, got {self.turn_cap!r}")

    @property
    def size(self) -> int:
        return self.colors**self.pegs

    def __str__(self):
        return f"MM({self.colors},{self.pegs})"


class Feedback(NamedTuple):
    black: int
    white: int

    def __str__(self):
        return f"[{self.black},{self.white}]"


def validate_code(code: Sequence[int], config: GameConfig) -> Code:
    code = tuple(code)
    if len(code) != config.pegs:
        raise InvalidInputError(f"code {code} has {len(code)} slots, expected {config.pegs}")
    for slot in code:
        if not isinstance(slot, (int, np.integer)) or not 0 <= slot < config.colors:
            raise InvalidInputError(f"color {slot!r} out of range for {config}")
    return tuple(int(s) for s in code)


def parse_code(text: str, config: GameConfig) -> Code:
    """Parse display notation into a 0-based code.

    ``"1122"`` for up to nine colors; ``"1.1.10.4"`` otherwise (dots are
    accepted for any color count).
    """
    text = text.strip()
    try:
        if "." in text or config.colors > 9:
            digits = [int(part) for part in text.split(".")]
        else:
            digits = [int(ch) for ch in text]
    except ValueError:
        raise InvalidInputError(f"cannot parse code {text!r}") from None
    return validate_code([d - 1 for d in digits], config)


def format_code(code: Sequence[int], config: GameConfig | None = None) -> str:
    if config is not None and config.colors > 9:
        return ".".join(str(s + 1) for s in code)
    return "".join(str(s + 1) for s in code)


def feedback(query: Sequence[int], master: Sequence[int], config: GameConfig) -> Feedback:
    """Key pegs the code-maker returns for ``query`` when the secret is ``master``."""
    query = validate_code(query, config)
    master = validate_code(master, config)
    black = sum(q == m for q, m in zip(query, master))
    common = sum((Counter(query) & Counter(master)).values())
    return Feedback(black, common - black)


def enumerate_codes(config: GameConfig, cap: int = ENUMERATION_CAP) -> list[Code]:
    """All c**p codes in lexicographic order."""
    if config.size > cap:
        raise ResourceLimitError(f"{config} has {config.size} codes, above the cap of {cap}")
    return list(itertools.product(range(config.colors), repeat=config.pegs))


@lru_cache(maxsize=None)
def legal_feedback_classes(pegs: int) -> tuple[Feedback, ...]:
    """Every reply that can occur with ``pegs`` slots, ordered by (black, white).

    (pegs - 1, 1) is impossible: a single misplaced peg would have to swap
    with a slot that is already exact.
    """
    if pegs < 1:
        raise InvalidInputError(f"pegs must be positive, got {pegs}")
    return tuple(
        Feedback(b, w)
        for b in range(pegs + 1)
        for w in range(pegs + 1 - b)
        if (b, w) != (pegs - 1, 1)
    )


def consistent_set(
    history: Iterable[tuple[Sequence[int], Feedback]],
    universe: Iterable[Sequence[int]],
    config: GameConfig,
) -> tuple[Code, ...]:
    """Codes in ``universe`` that would have produced every recorded reply.

    The result is sorted lexicographically; an empty tuple means the
    history contradicts itself.
    """
    history = [(validate_code(q, config), Feedback(*f)) for q, f in history]
    kept = [
        tuple(x)
        for x in universe
        if all(feedback(q, x, config) == f for q, f in history)
    ]
    return tuple(sorted(kept))


@dataclass(frozen=True)
class PartitionTable:
    guess: Code
    sizes: dict[Feedback, int]

    @property
    def total(self) -> int:
        return sum(self.sizes.values())

    @property
    def max_size(self) -> int:
        return max(self.sizes.values())

    @property
    def sum_of_squares(self) -> int:
        return sum(n * n for n in self.sizes.values())


def partition_sizes(
    guess: Sequence[int], candidates: Sequence[Sequence[int]], config: GameConfig
) -> PartitionTable:
    """Group ``candidates`` by the reply each would give to ``guess``."""
    guess = validate_code(guess, config)
    if not candidates:
        raise InvalidInputError("cannot partition an empty candidate set")
    sizes = dict.fromkeys(legal_feedback_classes(config.pegs), 0)
    for master in candidates:
        sizes[feedback(guess, master, config)] += 1
    return PartitionTable(guess, sizes)


def _compositions(total: int, parts: int):
    """Ordered ways to write ``total`` as ``parts`` positive integers."""
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0, *cuts, total)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def cardinality_by_colors(config: GameConfig) -> tuple[int, dict[int, int]]:
    """Count codes by the exact number of distinct colors they use.

    Returns ``(total, {i: C_i})`` where ``C_i`` is ``binom(c, i)`` times the
    sum of multinomials ``p! / (n_1! ... n_i!)`` over compositions of p into
    i positive parts.  ``total`` always equals c**p.
    """
    c, p = config.colors, config.pegs
    if 2 ** (p - 1) > COMPOSITION_CAP:
        raise ResourceLimitError(f"{2 ** (p - 1)} compositions of {p} exceed the cap")
    p_fact = math.factorial(p)
    per_color = {}
    for i in range(1, min(c, p) + 1):
        arrangements = sum(
            p_fact // math.prod(math.factorial(n) for n in comp)
            for comp in _compositions(p, i)
        )
        per_color[i] = math.comb(c, i) * arrangements
    return sum(per_color.values()), per_color


def hamming_neighbors(code: Sequence[int], config: GameConfig) -> list[Code]:
    """Codes differing from ``code`` in exactly one slot, lexicographically sorted."""
    code = validate_code(code, config)
    out = []
    for pos, current in enumerate(code):
        for color in range(config.colors):
            if color != current:
                out.append(code[:pos] + (color,) + code[pos + 1:])
    out.sort()
    return out


class CodeSpace:
    """Indexed universe of MM(c, p) with a lazily built reply table.

    Code ``i`` is the i-th code in lexicographic order, so index order and
    lexicographic order coincide.  ``table[g, m]`` holds the position of
    ``feedback(g, m)`` in ``classes``.
    """

    def __init__(self, colors: int, pegs: int):
        self.config = GameConfig(colors, pegs)
        self.codes = enumerate_codes(self.config)
        self.classes = legal_feedback_classes(pegs)
        self.class_index = {f: i for i, f in enumerate(self.classes)}
        self.win_class = self.class_index[Feedback(pegs, 0)]
        self._radix = tuple(colors ** (pegs - 1 - i) for i in range(pegs))
        self._index = {code: i for i, code in enumerate(self.codes)}

    def __len__(self):
        return len(self.codes)

    def index(self, code: Sequence[int]) -> int:
        return self._index[tuple(code)]

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.codes, dtype=np.int16).reshape(len(self.codes), self.config.pegs)

    @cached_property
    def class_black(self) -> np.ndarray:
        return np.array([f.black for f in self.classes])

    @cached_property
    def class_white(self) -> np.ndarray:
        return np.array([f.white for f in self.classes])

    @cached_property
    def table(self) -> np.ndarray:
        return self.build_table()

    def build_table(self, cap: int = TABLE_CAP) -> np.ndarray:
        """Dense reply-class table; entries of 255 would mark an impossible reply."""
        n = len(self.codes)
        if n > cap:
            raise ResourceLimitError(
                f"{self.config} has {n} codes; solvers need c**p <= {cap}"
            )
        c, p = self.config.colors, self.config.pegs
        codes = self.array
        counts = np.zeros((n, c), dtype=np.int16)
        for color in range(c):
            counts[:, color] = (codes == color).sum(axis=1)
        lookup = np.full((p + 1) * (p + 1), 255, dtype=np.uint8)
        for i, f in enumerate(self.classes):
            lookup[f.black * (p + 1) + f.white] = i
        out = np.empty((n, n), dtype=np.uint8)
        step = max(1, 2_000_000 // (n * max(c, p)))
        for start in range(0, n, step):
            block = slice(start, start + step)
            black = (codes[block, None, :] == codes[None, :, :]).sum(axis=2)
            common = np.minimum(counts[block, None, :], counts[None, :, :]).sum(axis=2)
            out[block] = lookup[black * (p + 1) + (common - black)]
        return out

    def hamming_indices(self, idx: int) -> np.ndarray:
        code = self.codes[idx]
        out = []
        for pos, current in enumerate(code):
            base = idx - current * self._radix[pos]
            step = self._radix[pos]
            out.extend(base + color * step for color in range(self.config.colors) if color != current)
        return np.array(sorted(out), dtype=np.int64)


@lru_cache(maxsize=16)
def code_space(colors: int, pegs: int) -> CodeSpace:
    return CodeSpace(colors, pegs)
