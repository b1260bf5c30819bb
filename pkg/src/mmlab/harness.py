"""Game engine, seeded batch runs, statistics and result files."""
from __future__ import annotations

import csv
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    Code,
    Feedback,
    GameConfig,
    InvalidInputError,
    MastermindError,
    code_space,
    feedback,
    format_code,
    parse_code,
    validate_code,
)
from .solvers import STRATEGIES, SolverParams, SolverState

UNIFORM_RANDOM = "uniform-random"
EXHAUSTIVE_SWEEP = "exhaustive-sweep"

CSV_COLUMNS = ("game_index", "algorithm", "colors", "pegs", "seed", "master", "query_count", "solved")


class ConfigurationError(MastermindError, ValueError):
    pass


class Turn(NamedTuple):
    query: Code
    feedback: Feedback


@dataclass(frozen=True)
class GameRecord:
    config: GameConfig
    algorithm: str
    seed: int
    master: Code
    turns: tuple[Turn, ...]
    solved: bool

    @property
    def query_count(self) -> int:
        return len(self.turns)

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "config": {"colors": cfg.colors, "pegs": cfg.pegs},
            "algorithm": self.algorithm,
            "seed": self.seed,
            "master": format_code(self.master, cfg),
            "turns": [
                {"query": format_code(q, cfg), "black": f.black, "white": f.white}
                for q, f in self.turns
            ],
            "query_count": self.query_count,
            "solved": self.solved,
        }

    @classmethod
    def from_dict(cls, data: dict) -> GameRecord:
        cfg = GameConfig(data["config"]["colors"], data["config"]["pegs"])
        turns = tuple(
            Turn(parse_code(t["query"], cfg), Feedback(t["black"], t["white"]))
            for t in data["turns"]
        )
        if data.get("query_count", len(turns)) != len(turns):
            raise InvalidInputError("query_count does not match the number of turns")
        return cls(cfg, data["algorithm"], int(data["seed"]), parse_code(data["master"], cfg), turns, bool(data["solved"]))


@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean: float
    median: float
    std: float
    max: int

    def to_dict(self) -> dict:
        return {"count": self.count, "mean": self.mean, "median": self.median, "std": self.std, "max": self.max}


def summarize(query_counts: Sequence[int]) -> SummaryStats:
    """Mean, median (averaged middle pair for even n), population std and max."""
    counts = list(query_counts)
    if not counts:
        raise InvalidInputError("cannot summarize an empty batch")
    return SummaryStats(
        count=len(counts),
        mean=statistics.fmean(counts),
        median=float(statistics.median(counts)),
        std=statistics.pstdev(counts),
        max=max(counts),
    )


def play_game(
    config: GameConfig,
    algorithm: str,
    master: Sequence[int],
    seed: int = 0,
    params: SolverParams | None = None,
) -> GameRecord:
    """Let ``algorithm`` play against a truthful code-maker holding ``master``."""
    try:
        choose = STRATEGIES[algorithm]
    except KeyError:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}; choose from {sorted(STRATEGIES)}") from None
    master = validate_code(master, config)
    state = SolverState(config, seed, params)
    space = state.space
    table = space.table
    m = space.index(master)
    solved = False
    while state.turn < config.turn_cap:
        q = space.index(choose(state))
        k = int(table[q, m])
        state.record_index(q, k)
        if k == space.win_class:
            solved = True
            break
    turns = tuple(Turn(q, f) for q, f in state.history)
    return GameRecord(config, algorithm, seed, master, turns, solved)


def game_seed(master_seed: int, game_index: int) -> int:
    """64-bit per-game seed mixed from the batch seed and the game's index."""
    seq = np.random.SeedSequence([master_seed, game_index])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class BatchSpec:
    """Everything needed to replay a batch."""

    config: GameConfig
    algorithm: str
    n_games: int
    master_mode: str = UNIFORM_RANDOM
    master_seed: int = 0
    params: SolverParams = field(default_factory=SolverParams)

    def masters(self) -> list[Code]:
        codes = code_space(self.config.colors, self.config.pegs).codes
        if self.master_mode == EXHAUSTIVE_SWEEP:
            return list(codes)
        rng = np.random.default_rng(self.master_seed)
        return [codes[i] for i in rng.integers(0, len(codes), size=self.n_games)]

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "config": {"colors": self.config.colors, "pegs": self.config.pegs, "turn_cap": self.config.turn_cap},
            "n_games": self.n_games,
            "master_mode": self.master_mode,
            "master_seed": self.master_seed,
            "params": {
                "alpha": self.params.alpha,
                "candidate_pool": self.params.candidate_pool,
                "initial_guess_mode": self.params.initial_guess_mode,
            },
        }


def _play_chunk(spec: BatchSpec, jobs: list[tuple[int, Code]]) -> list[GameRecord]:
    return [
        play_game(spec.config, spec.algorithm, master, game_seed(spec.master_seed, i), spec.params)
        for i, master in jobs
    ]


def run_batch(
    config: GameConfig,
    algorithm: str,
    n_games: int | None = None,
    master_mode: str = UNIFORM_RANDOM,
    master_seed: int = 0,
    params: SolverParams | None = None,
    workers: int = 1,
) -> tuple[list[GameRecord], SummaryStats]:
    """Play a batch of games and summarize their query counts.

    ``uniform-random`` draws masters with replacement from ``master_seed``;
    ``exhaustive-sweep`` plays every code once in lexicographic order.
    Game ``i`` always gets seed ``game_seed(master_seed, i)``, so results do
    not depend on ``workers``.
    """
    if algorithm not in STRATEGIES:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}; choose from {sorted(STRATEGIES)}")
    if master_mode not in (UNIFORM_RANDOM, EXHAUSTIVE_SWEEP):
        raise ConfigurationError(f"unknown master mode {master_mode!r}")
    if master_seed < 0:
        raise ConfigurationError("master_seed must be non-negative")
    if n_games is None:
        if master_mode != EXHAUSTIVE_SWEEP:
            raise ConfigurationError("n_games is required for uniform-random masters")
        n_games = config.size
    if n_games < 1:
        raise ConfigurationError("n_games must be at least 1")
    if master_mode == EXHAUSTIVE_SWEEP and n_games != config.size:
        raise ConfigurationError(f"an exhaustive sweep of {config} needs exactly {config.size} games")
    spec = BatchSpec(config, algorithm, n_games, master_mode, master_seed, params or SolverParams())
    jobs = list(enumerate(spec.masters()))
    if workers <= 1:
        records = _play_chunk(spec, jobs)
    else:
        chunks = [jobs[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_play_chunk, [spec] * workers, chunks))
        by_index = {}
        for chunk, part in zip(chunks, parts):
            by_index.update((i, rec) for (i, _), rec in zip(chunk, part))
        records = [by_index[i] for i in range(n_games)]
    return records, summarize([r.query_count for r in records])


def summary_path(destination: str | Path) -> Path:
    destination = Path(destination)
    return destination.with_name(destination.stem + ".summary.json")


def export_records(
    records: Sequence[GameRecord],
    stats: SummaryStats | None,
    format: str,
    destination: str | Path,
    spec: BatchSpec | None = None,
) -> None:
    """Write records as ``jsonl`` or ``csv`` plus a sibling ``*.summary.json``.

    The summary is skipped when ``stats`` is None (an empty batch has none).
    """
    destination = Path(destination)
    try:
        with destination.open("w", encoding="utf-8", newline="") as fh:
            if format in ("jsonl", "json-lines"):
                for rec in records:
                    fh.write(json.dumps(rec.to_dict(), separators=(",", ":")) + "\n")
            elif format == "csv":
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(CSV_COLUMNS)
                for i, rec in enumerate(records):
                    writer.writerow([
                        i, rec.algorithm, rec.config.colors, rec.config.pegs, rec.seed,
                        format_code(rec.master, rec.config), rec.query_count, rec.solved,
                    ])
            else:
                raise InvalidInputError(f"unknown export format {format!r}")
        if stats is not None:
            doc = spec.to_dict() if spec is not None else _spec_from_records(records)
            doc["stats"] = stats.to_dict()
            summary_path(destination).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"failed to write results to {destination}: {exc}") from exc


def _spec_from_records(records: Sequence[GameRecord]) -> dict:
    first = records[0]
    cfg = first.config
    return {
        "algorithm": first.algorithm,
        "config": {"colors": cfg.colors, "pegs": cfg.pegs, "turn_cap": cfg.turn_cap},
        "n_games": len(records),
    }


def load_records(path: str | Path) -> list[GameRecord]:
    """Read a json-lines export back into records."""
    with Path(path).open(encoding="utf-8") as fh:
        return [GameRecord.from_dict(json.loads(line)) for line in fh if line.strip()]


def load_csv(path: str | Path) -> list[dict]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def replay(record: GameRecord) -> bool:
    """True if every stored reply matches a fresh computation against the master."""
    return all(feedback(q, record.master, record.config) == f for q, f in record.turns)
