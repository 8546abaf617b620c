"""Command-line entry point: ``propsearch <command> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .evaluators import EvaluatorTag, FeatureWinTable, build_e2_table, build_e3_table, make_evaluator
from .games import (
    DEFAULT_ONES_PROB,
    Side,
    apply_move,
    board_from_string,
    generate_boards,
    initial_position,
    optimal_move,
    solve_exact,
)
from .search import BackupRule
from .tournament import (
    DEFAULT_MATCHUPS,
    SIGNIFICANCE_METHODS,
    format_sig_percent,
    format_win_pct,
    records_to_csv,
    render_tables,
    run_study,
    significance,
)

log = logging.getLogger("propsearch")

EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


def parse_depths(text: str) -> list[int]:
    """``"3"`` or ``"1..10"`` (inclusive)."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"depths must look like 4 or 1..10, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad depth range {text!r}")
    return list(range(lo, hi + 1))


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def table_csv(table: FeatureWinTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["moves_remaining", "ones", "win_prob"])
    for m, w, v in table.rows():
        writer.writerow([m, w, f"{v:.12g}"])
    return buf.getvalue()


# -- commands ---------------------------------------------------------------


def cmd_tournament(args: argparse.Namespace) -> int:
    game = args.game.upper()
    tag = EvaluatorTag(args.eval)
    if tag is EvaluatorTag.E3 and game != "G":
        raise UsageError("e3 is a G-game evaluator")
    if tag is EvaluatorTag.E2 and game == "G":
        raise UsageError("e2 is defined for split games (p or n)")
    if max(args.depths) > args.moves:
        raise UsageError(f"depths must lie within 1..{args.moves}")
    if (args.rule_a is None) != (args.rule_b is None):
        raise UsageError("give both --rule-a and --rule-b, or neither")
    matchups = DEFAULT_MATCHUPS if args.rule_a is None else ((BackupRule(args.rule_a), BackupRule(args.rule_b)),)

    seed: Optional[int] = None
    if game != "G":
        if args.boards < 1:
            raise UsageError("--boards must be >= 1")
        if not 0.0 <= args.ones_prob <= 1.0:
            raise UsageError("--ones-prob must lie in [0, 1]")
        seed = args.seed if args.seed is not None else int(np.random.SeedSequence().entropy % 2**32)
        print(f"master seed: {seed}", file=sys.stderr)
    else:
        print("G-games: all boards enumerated, no seed", file=sys.stderr)

    boards = generate_boards(game, args.boards, args.moves, args.ones_prob, seed or 0)
    evaluator = make_evaluator(tag, args.moves)
    log.info("%d %s-boards, evaluator %s, depths %s", len(boards), game, tag.value, args.depths)
    records = run_study(boards, args.depths, matchups, evaluator, master_seed=seed, workers=args.workers)

    text = records_to_csv(records) if args.format == "csv" else render_tables(records, n_moves=args.moves)
    _write(args.out, text)
    if args.tables:
        _write(args.tables, render_tables(records, n_moves=args.moves))
    return 0


def cmd_e2_table(args: argparse.Namespace) -> int:
    if args.depth < 1:
        raise UsageError("--depth must be >= 1")
    _write(args.out, table_csv(build_e2_table(args.depth)))
    return 0


def cmd_e3_table(args: argparse.Namespace) -> int:
    if args.max_len < 2:
        raise UsageError("--max-len must be >= 2")
    _write(args.out, table_csv(build_e3_table(args.max_len)))
    return 0


def cmd_significance(args: argparse.Namespace) -> int:
    n, k = args.n, args.k
    if n < 1 or not 0 <= k <= n:
        raise UsageError("need n >= 1 and 0 <= k <= n")
    print(f"wins: {format_win_pct(n, k)}%")
    for method in SIGNIFICANCE_METHODS:
        p = significance(n, k, method)
        print(f"p-value ({method}): {p:.6g} ({format_sig_percent(p)})")
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        board = board_from_string(args.board, args.game)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    p = initial_position(board, Side(args.first.upper()))
    value = solve_exact(p)
    print(f"value for MAX: {value}")
    if p.is_terminal:
        return 0
    move = optimal_move(p)
    child = apply_move(p, move)
    print(f"optimal move for {p.mover.value}: {move.name} -> [{child.lo}, {child.hi})")
    return 0


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="propsearch", description="Backup-rule experiments on board-splitting games.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tournament", help="paired-game contests over boards and depths")
    t.add_argument("--game", choices=["p", "n", "g"], default="p")
    t.add_argument("--eval", choices=[e.value for e in EvaluatorTag], default="e1")
    t.add_argument("--rule-a", choices=[r.value for r in BackupRule])
    t.add_argument("--rule-b", choices=[r.value for r in BackupRule])
    t.add_argument("--depths", type=parse_depths, default=list(range(1, 11)), help="A..B, inclusive (default 1..10)")
    t.add_argument("--boards", type=int, default=1600)
    t.add_argument("--moves", type=int, default=10, help="game length in moves (default 10)")
    t.add_argument("--ones-prob", type=float, default=DEFAULT_ONES_PROB, help="P-board leaf probability")
    t.add_argument("--seed", type=int)
    t.add_argument("--out", default="-", help="output path, - for stdout")
    t.add_argument("--format", choices=["csv", "markdown"], default="csv")
    t.add_argument("--tables", help="also write markdown tables here")
    t.add_argument("--workers", type=int, default=1)
    t.set_defaults(func=cmd_tournament)

    e2 = sub.add_parser("e2-table", help="dump the P-game feature win table")
    e2.add_argument("--depth", type=int, default=10)
    e2.add_argument("--out", default="-")
    e2.set_defaults(func=cmd_e2_table)

    e3 = sub.add_parser("e3-table", help="dump the G-game feature win table")
    e3.add_argument("--max-len", type=int, default=11)
    e3.add_argument("--out", default="-")
    e3.set_defaults(func=cmd_e3_table)

    s = sub.add_parser("significance", help="two-sided binomial p-value for k wins in n critical pairs")
    s.add_argument("n", type=int)
    s.add_argument("k", type=int)
    s.set_defaults(func=cmd_significance)

    sv = sub.add_parser("solve", help="exact value and an optimal first move")
    sv.add_argument("board", help="board as a 0/1 string")
    sv.add_argument("--game", choices=["p", "n", "g"], default="g")
    sv.add_argument("--first", choices=["max", "min"], default="max")
    sv.set_defaults(func=cmd_solve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"propsearch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"propsearch: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
