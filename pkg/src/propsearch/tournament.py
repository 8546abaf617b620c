"""Paired-game contests, critical-pair counting and significance.

Each board is played twice, once with each configuration moving first.  A
pair is *critical* when the same configuration wins both games; only those
pairs enter the win statistics.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .evaluators import Evaluator
from .games import (
    Board,
    Side,
    apply_move,
    initial_position,
    terminal_value_for_max,
)
from .search import BackupRule, PlayerConfig, choose_move, choose_moves_batch

DEFAULT_MATCHUPS: tuple[tuple[BackupRule, BackupRule], ...] = (
    (BackupRule.PRODUCT, BackupRule.MINIMAX),
    (BackupRule.AVERAGE, BackupRule.MINIMAX),
    (BackupRule.AVERAGE, BackupRule.PRODUCT),
)

CSV_HEADER = (
    "game",
    "eval",
    "depth",
    "rule_a",
    "rule_b",
    "n_boards",
    "critical_pairs",
    "a_pair_wins",
    "win_pct",
    "p_value",
    "master_seed",
)


class Seat(enum.Enum):
    A = "A"
    B = "B"


class PairOutcome(enum.Enum):
    SPLIT = "SPLIT"
    A_SWEPT = "A_SWEPT"
    B_SWEPT = "B_SWEPT"


@dataclass(frozen=True)
class ContestRecord:
    game_kind: str
    eval_a: str
    eval_b: str
    depth: int
    rule_a: BackupRule
    rule_b: BackupRule
    n_boards: int
    critical_pairs: int
    a_pair_wins: int
    master_seed: Optional[int] = None

    def __post_init__(self) -> None:
        if not 0 <= self.a_pair_wins <= self.critical_pairs <= self.n_boards:
            raise ValueError("need a_pair_wins <= critical_pairs <= n_boards")

    @property
    def b_pair_wins(self) -> int:
        return self.critical_pairs - self.a_pair_wins

    @property
    def report(self) -> Optional["SignificanceReport"]:
        return significance_report(self.critical_pairs, self.a_pair_wins)


@dataclass(frozen=True)
class SignificanceReport:
    win_pct: float
    p_value: float


# -- single games -----------------------------------------------------------


def play_game(board: Board, first: Seat, cfg_a: PlayerConfig, cfg_b: PlayerConfig) -> Seat:
    """Play one game move by move; ``first`` takes the MAX seat."""
    seat_of = {Side.MAX: first, Side.MIN: Seat.B if first is Seat.A else Seat.A}
    p = initial_position(board, Side.MAX)
    while not p.is_terminal:
        cfg = cfg_a if seat_of[p.mover] is Seat.A else cfg_b
        p = apply_move(p, choose_move(p, cfg))
    return seat_of[Side.MAX] if terminal_value_for_max(p) else seat_of[Side.MIN]


def classify(first_a_winner: Seat, first_b_winner: Seat) -> PairOutcome:
    if first_a_winner is first_b_winner:
        return PairOutcome.A_SWEPT if first_a_winner is Seat.A else PairOutcome.B_SWEPT
    return PairOutcome.SPLIT


def play_pair(board: Board, cfg_a: PlayerConfig, cfg_b: PlayerConfig) -> PairOutcome:
    return classify(play_game(board, Seat.A, cfg_a, cfg_b), play_game(board, Seat.B, cfg_a, cfg_b))


# -- batched games ----------------------------------------------------------


def stack_boards(boards: Sequence[Board]) -> tuple[str, np.ndarray, np.ndarray]:
    """``(kind, bits, prefix)`` arrays for boards of one kind and size."""
    if not boards:
        raise ValueError("no boards given")
    kind = boards[0].kind
    n = len(boards[0].squares)
    if any(b.kind != kind or len(b.squares) != n for b in boards):
        raise ValueError("all boards in a contest must share kind and size")
    bits = np.array([b.squares for b in boards], dtype=np.int8)
    prefix = np.zeros((len(boards), n + 1), dtype=np.int64)
    np.cumsum(bits, axis=1, out=prefix[:, 1:])
    return kind, bits, prefix


def max_wins_batch(kind, bits, prefix, cfg_max: PlayerConfig, cfg_min: PlayerConfig) -> np.ndarray:
    """Whether MAX wins each game, MAX moving first on every board."""
    n_boards, n = bits.shape
    n_moves = n - 1 if kind == "G" else n.bit_length() - 1
    lo = np.zeros(n_boards, dtype=np.int64)
    for ply in range(n_moves):
        mover = Side.MAX.after(ply)
        remaining = n_moves - ply
        cfg = cfg_max if mover is Side.MAX else cfg_min
        right = choose_moves_batch(kind, bits, prefix, lo, mover, remaining, cfg)
        if kind == "G":
            lo += 1 - right  # REMOVE_LEFT advances lo; REMOVE_RIGHT shrinks hi
        else:
            lo += right * 2 ** (remaining - 1)
    squares = bits[np.arange(n_boards), lo]
    leaf_mover = Side.MAX.after(n_moves)
    return squares == 1 if leaf_mover is Side.MIN else squares == 0


def pair_outcomes_batch(kind, bits, prefix, cfg_a, cfg_b) -> np.ndarray:
    """+1 where A swept the pair, -1 where B did, 0 for a split."""
    a_first = max_wins_batch(kind, bits, prefix, cfg_a, cfg_b)  # True -> A won
    b_first = max_wins_batch(kind, bits, prefix, cfg_b, cfg_a)  # True -> B won
    return a_first.astype(np.int8) * (~b_first) - (~a_first).astype(np.int8) * b_first


def _contest_counts(args) -> tuple[int, int]:
    boards, cfg_a, cfg_b = args
    kind, bits, prefix = stack_boards(boards)
    out = pair_outcomes_batch(kind, bits, prefix, cfg_a, cfg_b)
    return int(np.count_nonzero(out)), int(np.count_nonzero(out == 1))


def run_contest(
    boards: Sequence[Board],
    depth: int,
    rule_a: BackupRule,
    rule_b: BackupRule,
    evaluator: Evaluator,
    game_kind: Optional[str] = None,
    *,
    evaluator_b: Optional[Evaluator] = None,
    master_seed: Optional[int] = None,
    workers: int = 1,
    chunk_size: int = 400,
) -> ContestRecord:
    """Play every board as a pair and tally critical pairs.

    Counts are summed over chunks, so the record does not depend on board
    order, chunking, or worker count.
    """
    if not boards:
        raise ValueError("a contest needs at least one board")
    kind = boards[0].kind
    if game_kind is not None and game_kind.upper() != kind:
        raise ValueError(f"boards are {kind}-games, not {game_kind}-games")
    evaluator_b = evaluator_b or evaluator
    cfg_a = PlayerConfig(rule_a, evaluator, depth)
    cfg_b = PlayerConfig(rule_b, evaluator_b, depth)
    chunks = [(boards[i : i + chunk_size], cfg_a, cfg_b) for i in range(0, len(boards), chunk_size)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(_contest_counts, chunks))
    else:
        counts = [_contest_counts(c) for c in chunks]
    critical = sum(c for c, _ in counts)
    wins = sum(w for _, w in counts)
    return ContestRecord(
        game_kind=kind,
        eval_a=evaluator.name,
        eval_b=evaluator_b.name,
        depth=depth,
        rule_a=rule_a,
        rule_b=rule_b,
        n_boards=len(boards),
        critical_pairs=critical,
        a_pair_wins=wins,
        master_seed=master_seed,
    )


def _study_task(args) -> ContestRecord:
    boards, depth, rule_a, rule_b, evaluator, master_seed = args
    return run_contest(boards, depth, rule_a, rule_b, evaluator, master_seed=master_seed)


def run_study(
    boards: Sequence[Board],
    depths: Iterable[int],
    matchups: Sequence[tuple[BackupRule, BackupRule]] = DEFAULT_MATCHUPS,
    evaluator: Optional[Evaluator] = None,
    *,
    master_seed: Optional[int] = None,
    workers: int = 1,
) -> list[ContestRecord]:
    """One contest per (matchup, depth), returned matchup-major."""
    if evaluator is None:
        raise ValueError("an evaluator is required")
    tasks = [(boards, d, a, b, evaluator, master_seed) for a, b in matchups for d in depths]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_study_task, tasks))
    return [_study_task(t) for t in tasks]


# -- statistics -------------------------------------------------------------


def _check_counts(n: int, k: int) -> None:
    if n < 0 or not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")


def exact_significance(n: int, k: int) -> Optional[float]:
    """Exact two-sided binomial p-value under a fair coin.

    Sums the probability of every count at least as far from ``n/2`` as ``k``.
    Returns ``None`` when there are no critical pairs.
    """
    _check_counts(n, k)
    if n == 0:
        return None
    dev = abs(2 * k - n)  # doubled deviation keeps everything integral
    if dev == 0:
        return 1.0
    # lower tail j <= (n - dev) / 2, doubled by symmetry
    term, tail = 1, 0
    for j in range((n - dev) // 2 + 1):
        tail += term
        term = term * (n - j) // (j + 1)
    return min(1.0, 2 * tail / 2**n)


def normal_approx_significance(n: int, k: int) -> Optional[float]:
    """Two-sided z-test ``2 * Phi(-|k - n/2| / sqrt(n/4))``, no continuity correction."""
    _check_counts(n, k)
    if n == 0:
        return None
    z = abs(k - n / 2) / math.sqrt(n / 4)
    return math.erfc(z / math.sqrt(2))


SIGNIFICANCE_METHODS = {"normal": normal_approx_significance, "exact": exact_significance}


def significance(n: int, k: int, method: str = "normal") -> Optional[float]:
    """Two-sided p-value for ``k`` wins among ``n`` critical pairs under a fair coin.

    The default z-test is what the published win tables report (its far-tail
    values differ from the exact binomial by an order of magnitude, which is
    how the two can be told apart); ``method="exact"`` gives the binomial tail.
    ``None`` when ``n == 0``.
    """
    try:
        fn = SIGNIFICANCE_METHODS[method]
    except KeyError:
        raise ValueError(f"unknown significance method {method!r}") from None
    return fn(n, k)


def win_percentage(n: int, k: int) -> Optional[float]:
    return None if n == 0 else 100.0 * k / n


def significance_report(n: int, k: int) -> Optional[SignificanceReport]:
    if n == 0:
        return None
    return SignificanceReport(win_pct=win_percentage(n, k), p_value=significance(n, k))


# -- reporting --------------------------------------------------------------


def format_win_pct(n: int, k: int) -> str:
    """One decimal, rounded half up on the exact ratio."""
    if n == 0:
        return ""
    tenths = (2000 * k + n) // (2 * n)
    return f"{tenths // 10}.{tenths % 10}"


def format_p_value(p: Optional[float]) -> str:
    return "" if p is None else f"{p:.1e}"


def format_sig_percent(p: Optional[float]) -> str:
    """Significance as a percentage with two significant digits, e.g. ``0.28%`` or ``6x10^-6%``."""
    if p is None:
        return ""
    pct = 100.0 * p
    if pct >= 0.01:
        return f"{float(f'{pct:.2g}'):g}%"
    mantissa, exponent = f"{pct:.0e}".split("e")
    return f"{mantissa}x10^{int(exponent)}%"


def records_to_csv(records: Iterable[ContestRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(
            [
                r.game_kind,
                r.eval_a if r.eval_a == r.eval_b else f"{r.eval_a}/{r.eval_b}",
                r.depth,
                r.rule_a.value,
                r.rule_b.value,
                r.n_boards,
                r.critical_pairs,
                r.a_pair_wins,
                format_win_pct(r.critical_pairs, r.a_pair_wins),
                format_p_value(significance(r.critical_pairs, r.a_pair_wins)),
                "" if r.master_seed is None else r.master_seed,
            ]
        )
    return buf.getvalue()


def _depth_note(depth: int, n_moves: Optional[int]) -> str:
    if depth == 1:
        return "*"
    if n_moves is not None and depth >= n_moves - 1:
        return "*, **"
    return ""


def _matchup_label(a: BackupRule, b: BackupRule) -> str:
    return f"{a.value.capitalize()} vs. {b.value.capitalize()}"


def render_tables(records: Sequence[ContestRecord], n_moves: Optional[int] = 10) -> str:
    """Markdown counts table and percentage/significance table.

    Rows are depths, column groups are matchups in first-seen order.  In the
    counts table, depth 1 is marked ``*`` (all rules play identically) and
    depths ``n_moves - 1`` and up ``*, **`` (perfect play).
    """
    matchups: list[tuple[BackupRule, BackupRule]] = []
    by_key: dict[tuple[int, BackupRule, BackupRule], ContestRecord] = {}
    for r in records:
        key = (r.rule_a, r.rule_b)
        if key not in matchups:
            matchups.append(key)
        by_key[(r.depth, r.rule_a, r.rule_b)] = r
    depths = sorted({r.depth for r in records})

    head1 = ["Search depth"]
    head2 = ["Search depth"]
    for a, b in matchups:
        label = _matchup_label(a, b)
        head1 += [f"{label}: pairs", f"{label}: wins"]
        head2 += [f"{label}: wins", f"{label}: significance"]
    head1.append("Notes")

    def table(header: list[str], rows: list[list[str]]) -> list[str]:
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        return lines

    rows1, rows2 = [], []
    for d in depths:
        row1, row2 = [str(d)], [str(d)]
        any_critical = False
        for a, b in matchups:
            r = by_key.get((d, a, b))
            if r is None:
                row1 += ["", ""]
                row2 += ["", ""]
                continue
            row1 += [str(r.critical_pairs), str(r.a_pair_wins)]
            pct = format_win_pct(r.critical_pairs, r.a_pair_wins)
            row2 += [f"{pct}%" if pct else "", format_sig_percent(significance(r.critical_pairs, r.a_pair_wins))]
            any_critical = any_critical or r.critical_pairs > 0
        row1.append(_depth_note(d, n_moves))
        rows1.append(row1)
        if any_critical:
            rows2.append(row2)

    lines = ["Critical pairs and pairs won by the first-named rule", ""]
    lines += table(head1, rows1)
    lines += ["", "\\* all rules play identically.", "\\*\\* both players play perfectly.", ""]
    lines += ["Percentage of critical pairs won and two-sided significance", ""]
    lines += table(head2, rows2)
    return "\n".join(lines) + "\n"
