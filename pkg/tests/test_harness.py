import json
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mmlab.core import GameConfig, InvalidInputError, feedback, parse_code
from mmlab.harness import (
    CSV_COLUMNS,
    EXHAUSTIVE_SWEEP,
    BatchSpec,
    ConfigurationError,
    GameRecord,
    export_records,
    game_seed,
    load_csv,
    load_records,
    play_game,
    replay,
    run_batch,
    summarize,
    summary_path,
)
from mmlab.solvers import SolverParams

MM64 = GameConfig(6, 4)
MM44 = GameConfig(4, 4)


def code(text, config=MM64):
    return parse_code(text, config)


def check_invariants(rec: GameRecord):
    assert rec.query_count == len(rec.turns)
    assert rec.solved == (rec.turns[-1].feedback == (rec.config.pegs, 0))
    for q, f in rec.turns:
        assert feedback(q, rec.master, rec.config) == f


class TestPlayGame:
    def test_knuth_opening_hits(self):
        rec = play_game(MM64, "knuth", code("1122"))
        assert rec.query_count == 1 and rec.solved

    @pytest.mark.parametrize("master", ["3456", "6666", "1212", "5123"])
    def test_merc_solves_within_seven(self, master):
        rec = play_game(MM64, "merc", code(master))
        assert rec.solved and rec.query_count <= 7
        check_invariants(rec)

    def test_random_deterministic(self):
        a = play_game(MM64, "random", code("2345"), seed=17)
        b = play_game(MM64, "random", code("2345"), seed=17)
        assert a == b
        check_invariants(a)

    @pytest.mark.parametrize("algorithm", ["random", "knuth", "sa", "merc"])
    def test_invariants(self, algorithm):
        rng = random.Random(algorithm)
        for i in range(10):
            master = tuple(rng.randrange(4) for _ in range(4))
            rec = play_game(MM44, algorithm, master, seed=i)
            assert rec.solved
            check_invariants(rec)

    def test_turn_cap_marks_unsolved(self):
        cfg = GameConfig(6, 4, turn_cap=3)
        rec = play_game(cfg, "random", code("6543"), seed=0)
        assert not rec.solved and rec.query_count == 3
        check_invariants(rec)

    def test_unknown_algorithm(self):
        with pytest.raises(ConfigurationError):
            play_game(MM64, "nosuch", code("1122"))


@pytest.mark.parametrize("algorithm", ["random", "knuth", "sa", "merc"])
def test_exhaustive_termination(algorithm):
    # every master of a c**p <= 1296 instance is solved within the turn cap
    for cfg in (GameConfig(3, 3), MM44):
        records, stats = run_batch(cfg, algorithm, master_mode=EXHAUSTIVE_SWEEP, master_seed=3)
        assert stats.count == cfg.size
        assert all(r.solved for r in records)


def test_sweep_maxima_six_by_four():
    for algorithm in ("knuth", "merc"):
        records, stats = run_batch(MM64, algorithm, master_mode=EXHAUSTIVE_SWEEP)
        assert all(r.solved for r in records)
        assert stats.max <= 7


class TestRunBatch:
    def test_seed_derivation_is_stable(self):
        assert game_seed(0, 0) == game_seed(0, 0)
        assert game_seed(0, 0) != game_seed(0, 1) != game_seed(1, 0)
        assert 0 <= game_seed(123, 456) < 2**64

    def test_uses_per_game_seeds(self):
        records, _ = run_batch(MM44, "sa", 20, master_seed=9)
        assert [r.seed for r in records] == [game_seed(9, i) for i in range(20)]

    def test_parallel_matches_serial(self):
        serial, s1 = run_batch(MM44, "sa", 60, master_seed=5, workers=1)
        parallel, s2 = run_batch(MM44, "sa", 60, master_seed=5, workers=3)
        assert serial == parallel and s1 == s2

    def test_sweep_requires_full_count(self):
        with pytest.raises(ConfigurationError):
            run_batch(MM44, "knuth", 10, master_mode=EXHAUSTIVE_SWEEP)

    @pytest.mark.parametrize("kwargs", [dict(algorithm="nosuch", n_games=5), dict(algorithm="knuth", n_games=0),
                                        dict(algorithm="knuth", n_games=5, master_mode="bogus"),
                                        dict(algorithm="knuth", n_games=5, master_seed=-1),
                                        dict(algorithm="knuth")])
    def test_configuration_errors(self, kwargs):
        with pytest.raises(ConfigurationError):
            run_batch(MM44, **kwargs)

    def test_random_small_mean_near_analytic(self):
        _, stats = run_batch(MM44, "random", 100, master_seed=1)
        assert stats.max <= 256
        # sd of the mean is about 74/sqrt(100)
        assert abs(stats.mean - 128.5) < 4 * 74 / 10


class TestSummarize:
    def test_even(self):
        s = summarize([1, 2, 3, 4])
        assert (s.mean, s.median, s.max, s.count) == (2.5, 2.5, 4, 4)
        assert s.std == pytest.approx(math.sqrt(1.25))

    def test_singleton(self):
        s = summarize([5])
        assert (s.mean, s.median, s.std, s.max) == (5, 5, 0, 5)

    def test_fractional_median(self):
        assert summarize([634, 635]).median == 634.5

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            summarize([])

    @given(st.lists(st.integers(1, 2000), min_size=1, max_size=60), st.randoms())
    def test_permutation_invariant(self, counts, rnd):
        shuffled = counts[:]
        rnd.shuffle(shuffled)
        a, b = summarize(counts), summarize(shuffled)
        assert (a.median, a.max, a.count) == (b.median, b.max, b.count)
        assert a.mean == pytest.approx(b.mean) and a.std == pytest.approx(b.std)
        assert min(counts) <= a.median <= a.max and a.std >= 0


class TestExport:
    def batch(self):
        return run_batch(MM44, "sa", 3, master_seed=2)

    def test_csv_lines(self, tmp_path):
        records, stats = self.batch()
        out = tmp_path / "games.csv"
        export_records(records, stats, "csv", out)
        lines = out.read_text().splitlines()
        assert len(lines) == 4
        assert lines[0].split(",") == list(CSV_COLUMNS)
        rows = load_csv(out)
        assert [int(r["query_count"]) for r in rows] == [r.query_count for r in records]
        assert [r["master"] for r in rows] == ["".join(str(s + 1) for s in r.master) for r in records]

    def test_jsonl_round_trip(self, tmp_path):
        records, stats = self.batch()
        out = tmp_path / "games.jsonl"
        spec = BatchSpec(MM44, "sa", 3, master_seed=2, params=SolverParams())
        export_records(records, stats, "jsonl", out, spec)
        assert load_records(out) == records
        first = json.loads(out.read_text().splitlines()[0])
        assert set(first) == {"config", "algorithm", "seed", "master", "turns", "query_count", "solved"}
        assert set(first["turns"][0]) == {"query", "black", "white"}

    def test_summary_document(self, tmp_path):
        params = SolverParams(alpha=1.5)
        records, stats = run_batch(MM44, "sa", 3, master_seed=2, params=params)
        out = tmp_path / "games.jsonl"
        spec = BatchSpec(MM44, "sa", 3, master_seed=2, params=params)
        export_records(records, stats, "jsonl", out, spec)
        doc = json.loads(summary_path(out).read_text())
        assert doc["algorithm"] == "sa" and doc["n_games"] == 3 and doc["master_seed"] == 2
        assert doc["params"]["alpha"] == 1.5
        assert doc["stats"]["count"] == 3 and doc["stats"]["mean"] == stats.mean
        # the summary is enough to replay the batch
        again, _ = run_batch(GameConfig(doc["config"]["colors"], doc["config"]["pegs"]), doc["algorithm"],
                             doc["n_games"], doc["master_mode"], doc["master_seed"],
                             SolverParams(alpha=doc["params"]["alpha"]))
        assert again == records

    def test_empty_records_header_only(self, tmp_path):
        out = tmp_path / "empty.csv"
        export_records([], None, "csv", out)
        assert out.read_text().splitlines() == [",".join(CSV_COLUMNS)]
        assert not summary_path(out).exists()

    def test_replay(self, tmp_path):
        records, stats = run_batch(MM44, "merc", 20, master_seed=4)
        out = tmp_path / "r.jsonl"
        export_records(records, stats, "jsonl", out)
        assert all(replay(r) for r in load_records(out))

    def test_io_error_has_path(self, tmp_path):
        records, stats = self.batch()
        bad = tmp_path / "missing" / "x.jsonl"
        with pytest.raises(OSError, match="missing"):
            export_records(records, stats, "jsonl", bad)

    def test_unknown_format(self, tmp_path):
        records, stats = self.batch()
        with pytest.raises(InvalidInputError):
            export_records(records, stats, "xml", tmp_path / "x")
