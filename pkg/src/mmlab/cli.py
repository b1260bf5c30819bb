"""Command-line entry point: ``mmlab {bench,verify,partitions,optimal,play}``."""
from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence, TextIO

from .core import (
    Feedback,
    GameConfig,
    MastermindError,
    cardinality_by_colors,
    enumerate_codes,
    format_code,
    legal_feedback_classes,
    parse_code,
    partition_sizes,
)
from .harness import (
    EXHAUSTIVE_SWEEP,
    UNIFORM_RANDOM,
    BatchSpec,
    export_records,
    run_batch,
)
from .solvers import (
    CONSISTENT_ONLY,
    FULL_UNIVERSE,
    STRATEGIES,
    TREE_CAP,
    SolverParams,
    SolverState,
    optimal_worst_case,
)
from .tables import COLOR_TERMS_6_4, LEGAL_CLASSES_4, OPENING_PARTITIONS

MASTER_MODES = {"random": UNIFORM_RANDOM, "sweep": EXHAUSTIVE_SWEEP}
POOLS = {"consistent": CONSISTENT_ONLY, "full": FULL_UNIVERSE}
DEFAULT_OPENINGS = ("1111", "1112", "1122", "1123", "1234")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _alpha(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"alpha must be positive, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--colors", type=_positive, default=6, help="number of colors c (default 6)")
    common.add_argument("--pegs", type=_positive, default=4, help="number of pegs p (default 4)")
    common.add_argument("--seed", type=_non_negative, default=0, help="master seed (default 0)")

    parser = argparse.ArgumentParser(prog="mmlab", description="Generalized Mastermind MM(c,p) solver lab.")
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", parents=[common], help="run a seeded batch of games")
    bench.add_argument("--algorithm", required=True, choices=sorted(STRATEGIES))
    bench.add_argument("--games", type=_positive, default=5000, help="games to play in random mode")
    bench.add_argument("--alpha", type=_alpha, default=2.0, help="SA acceptance numerator")
    bench.add_argument("--master-mode", choices=sorted(MASTER_MODES), default="random",
                       help="random masters, or every code once")
    bench.add_argument("--candidate-pool", choices=sorted(POOLS), default="consistent")
    bench.add_argument("--output", help="write per-game records here (summary goes next to it)")
    bench.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    bench.add_argument("--workers", type=_positive, default=1, help="worker processes; output does not depend on it")
    bench.set_defaults(func=cmd_bench)

    verify = sub.add_parser("verify", parents=[common], help="recheck the reference tables and identities")
    verify.set_defaults(func=cmd_verify)

    parts = sub.add_parser("partitions", parents=[common], help="print reply-class sizes for openings")
    parts.add_argument("guesses", nargs="*", help=f"codes in 1-based notation (default: {' '.join(DEFAULT_OPENINGS)})")
    parts.set_defaults(func=cmd_partitions)

    optimal = sub.add_parser("optimal", parents=[common], help="exact worst-case strategy for a small instance")
    optimal.add_argument("--tree-cap", type=_positive, default=TREE_CAP, help=f"largest c**p searched (default {TREE_CAP})")
    optimal.set_defaults(func=cmd_optimal)

    play = sub.add_parser("play", parents=[common], help="solver proposes, you answer with 'b w'")
    play.add_argument("--algorithm", choices=sorted(STRATEGIES), default="merc")
    play.add_argument("--alpha", type=_alpha, default=2.0)
    play.set_defaults(func=cmd_play)
    return parser


def cmd_bench(args: argparse.Namespace) -> int:
    config = GameConfig(args.colors, args.pegs)
    mode = MASTER_MODES[args.master_mode]
    n_games = config.size if mode == EXHAUSTIVE_SWEEP else args.games
    params = SolverParams(alpha=args.alpha, candidate_pool=POOLS[args.candidate_pool])
    records, stats = run_batch(config, args.algorithm, n_games, mode, args.seed, params, workers=args.workers)
    print(f"{args.algorithm} {config}  games={stats.count}  masters={mode}  seed={args.seed}")
    print(f"  mean:   {stats.mean:.4f}")
    print(f"  Max:    {stats.max}")
    print(f"  Median: {stats.median:g}")
    print(f"  STD:    {stats.std:.4f}")
    unsolved = sum(not r.solved for r in records)
    if unsolved:
        print(f"  unsolved within turn cap: {unsolved}")
    if args.output:
        spec = BatchSpec(config, args.algorithm, n_games, mode, args.seed, params)
        export_records(records, stats, args.format, args.output, spec)
        print(f"  records written to {args.output}")
    return 0


def verify_checks(opening_table: dict[str, dict[Feedback, int]] = OPENING_PARTITIONS) -> list[tuple[str, bool, list[str]]]:
    """Run every reference check; returns (name, passed, failure details)."""
    results = []

    got = [tuple(f) for f in legal_feedback_classes(4)]
    results.append((
        "legal reply classes, 4 pegs (14)",
        got == list(LEGAL_CLASSES_4),
        [] if got == list(LEGAL_CLASSES_4) else [f"got {got}"],
    ))

    config = GameConfig(6, 4)
    universe = enumerate_codes(config)
    bad = []
    for opening, expected in opening_table.items():
        sizes = partition_sizes(parse_code(opening, config), universe, config).sizes
        for cls, count in expected.items():
            if sizes.get(cls) != count:
                bad.append(f"opening {opening} class {cls}: expected {count}, computed {sizes.get(cls)}")
    results.append((f"partition sizes of {len(opening_table)} openings over MM(6,4)", not bad, bad))

    bad = []
    for c in range(1, 9):
        for p in range(1, 9):
            total, _ = cardinality_by_colors(GameConfig(c, p))
            if total != c**p:
                bad.append(f"MM({c},{p}): {total} != {c**p}")
    _, terms = cardinality_by_colors(config)
    if terms != COLOR_TERMS_6_4:
        bad.append(f"MM(6,4) per-color terms {terms} != {COLOR_TERMS_6_4}")
    results.append(("code counts by distinct colors, c,p <= 8", not bad, bad))

    bad = []
    for c in range(2, 7):
        depth = optimal_worst_case(GameConfig(c, 2)).worst_case_depth
        if depth != c // 2 + 2:
            bad.append(f"MM({c},2): optimal {depth} != {c // 2 + 2}")
    results.append(("two-peg worst case floor(c/2)+2, c in 2..6", not bad, bad))
    return results


def cmd_verify(args: argparse.Namespace, opening_table: dict[str, dict[Feedback, int]] = OPENING_PARTITIONS) -> int:
    ok = True
    for name, passed, details in verify_checks(opening_table):
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
        for line in details:
            print(f"      {line}")
        ok &= passed
    return 0 if ok else 1


def cmd_partitions(args: argparse.Namespace) -> int:
    config = GameConfig(args.colors, args.pegs)
    literals = args.guesses or list(DEFAULT_OPENINGS)
    try:
        guesses = [parse_code(text, config) for text in literals]
    except MastermindError as exc:
        print(f"mmlab partitions: error: {exc}", file=sys.stderr)
        return 2
    universe = enumerate_codes(config)
    tables = [partition_sizes(g, universe, config) for g in guesses]
    labels = [format_code(g, config) for g in guesses]
    width = max(6, *(len(s) + 1 for s in labels))
    print("class ".ljust(8) + "".join(s.rjust(width) for s in labels))
    for cls in legal_feedback_classes(config.pegs):
        print(str(cls).ljust(8) + "".join(str(t.sizes[cls]).rjust(width) for t in tables))
    print("max".ljust(8) + "".join(str(t.max_size).rjust(width) for t in tables))
    best = min(t.max_size for t in tables)
    marks = ["*" if t.max_size == best else "" for t in tables]
    print("".ljust(8) + "".join(m.rjust(width) for m in marks))
    return 0


def cmd_optimal(args: argparse.Namespace) -> int:
    config = GameConfig(args.colors, args.pegs)
    try:
        result = optimal_worst_case(config, tree_cap=args.tree_cap)
    except MastermindError as exc:
        print(f"mmlab optimal: {exc}; try fewer colors or pegs", file=sys.stderr)
        return 1
    print(f"{config} optimal strategy")
    print(f"  worst_case_depth: {result.worst_case_depth}")
    print(f"  expected_depth:   {result.expected_depth:.6f}")
    print(f"  node_count:       {result.node_count}")
    if config.pegs == 2:
        predicted = config.colors // 2 + 2
        status = "agrees" if predicted == result.worst_case_depth else "DISAGREES"
        print(f"  floor(c/2)+2:     {predicted} ({status})")
    return 0


def _parse_reply(line: str, pegs: int) -> Feedback | str:
    """A legal Feedback, or an explanation of why ``line`` is not one."""
    parts = line.replace(",", " ").split()
    if len(parts) != 2:
        return "answer with two integers 'b w', or 'undo'"
    try:
        reply = Feedback(int(parts[0]), int(parts[1]))
    except ValueError:
        return "answer with two integers 'b w', or 'undo'"
    if reply == (pegs - 1, 1):
        return f"[{pegs - 1},1] cannot happen: one misplaced peg cannot swap into a slot that is already exact"
    if reply not in legal_feedback_classes(pegs):
        return f"{reply} is not a possible reply with {pegs} pegs"
    return reply


def cmd_play(args: argparse.Namespace, stdin: TextIO | None = None, stdout: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    config = GameConfig(args.colors, args.pegs)
    params = SolverParams(alpha=args.alpha)
    choose = STRATEGIES[args.algorithm]

    def say(text: str) -> None:
        print(text, file=stdout, flush=True)

    say(f"{config}, solver {args.algorithm}. Reply 'b w' (black white), or 'undo'.")
    state = SolverState(config, args.seed, params)
    while True:
        if state.turn >= config.turn_cap:
            say("turn cap reached")
            return 1
        query = choose(state)
        turn = state.turn + 1
        while True:
            stdout.write(f"turn {turn}: {format_code(query, config)} > ")
            stdout.flush()
            line = stdin.readline()
            if not line:
                say("\ninput closed")
                return 1
            line = line.strip().lower()
            if line == "undo":
                if not state.history:
                    say("nothing to undo")
                    continue
                state = SolverState(config, args.seed, params, state.history[:-1])
                break
            reply = _parse_reply(line, config.pegs)
            if isinstance(reply, str):
                say(reply)
                continue
            if reply.black == config.pegs:
                say(f"solved in {turn} {'query' if turn == 1 else 'queries'}")
                return 0
            state.record(query, reply)
            if len(state.candidates) == 0:
                say(f"contradiction: no code fits every reply; turn {turn} ({format_code(query, config)} -> {reply}) "
                    "conflicts with the earlier answers")
                return 1
            break


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MastermindError as exc:
        print(f"mmlab {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
