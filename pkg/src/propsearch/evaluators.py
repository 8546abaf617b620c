"""Frontier evaluation functions.

Every evaluator returns an estimate of the probability that a position is a
forced win for MAX.

``E1``
    Fraction of ones in the remaining squares, oriented toward the side that
    will make the final move.
``E2``
    Exact win probability for the player to move given (moves remaining,
    ones count) on a P-game segment, under a uniformly random arrangement.
``E3``
    The G-game analogue of E2, tabulated by exhaustive enumeration.
``EXACT``
    The solved game value (0.0 or 1.0).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
from scipy.special import gammaln

from .games import GBoard, Position, Side, initial_position, solve_exact


class EvaluatorTag(enum.Enum):
    E1 = "e1"
    E2 = "e2"
    E3 = "e3"
    EXACT = "exact"


class TableError(KeyError):
    """Raised when a feature table has no entry for a frontier position."""


@dataclass(frozen=True)
class FeatureWinTable:
    """Win probability for the player to move, keyed by (moves_remaining, ones).

    ``values[m, w]`` mirrors ``entries`` with NaN marking absent keys, for
    vectorised lookup.
    """

    entries: Mapping[tuple[int, int], float]
    values: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def from_entries(cls, entries: Mapping[tuple[int, int], float]) -> "FeatureWinTable":
        max_m = max(m for m, _ in entries)
        max_w = max(w for _, w in entries)
        values = np.full((max_m + 1, max_w + 1), np.nan)
        for (m, w), v in entries.items():
            values[m, w] = v
        values.setflags(write=False)
        return cls(dict(entries), values)

    def __call__(self, moves_remaining: int, ones: int) -> float:
        try:
            return self.entries[(moves_remaining, ones)]
        except KeyError:
            raise TableError(f"no table entry for moves_remaining={moves_remaining}, ones={ones}") from None

    def lookup(self, moves_remaining: np.ndarray, ones: np.ndarray) -> np.ndarray:
        m = np.asarray(moves_remaining)
        w = np.asarray(ones)
        rows, cols = self.values.shape
        if np.any(m >= rows) or np.any(w >= cols) or np.any(m < 0) or np.any(w < 0):
            raise TableError("frontier features fall outside the table")
        out = self.values[m, w]
        if np.isnan(out).any():
            raise TableError("frontier features fall outside the table")
        return out

    def covers(self, moves_remaining: int, max_ones: int) -> bool:
        return all((moves_remaining, w) in self.entries for w in range(max_ones + 1))

    def rows(self) -> list[tuple[int, int, float]]:
        return [(m, w, v) for (m, w), v in sorted(self.entries.items())]


@dataclass(frozen=True)
class Evaluator:
    tag: EvaluatorTag
    table: Optional[FeatureWinTable] = None

    def __post_init__(self) -> None:
        if self.tag in (EvaluatorTag.E2, EvaluatorTag.E3) and self.table is None:
            raise ValueError(f"{self.tag.value} needs a feature table")

    @property
    def name(self) -> str:
        return self.tag.value

    def __call__(self, p: Position) -> float:
        return evaluate(self, p)


# -- table construction -----------------------------------------------------


def _log_comb(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def build_e2_table(depth: int) -> FeatureWinTable:
    """Tabulate W(d, w) for d = 1..depth and w = 0..2**d.

    The mover on a segment of ``2**d`` squares loses iff both halves are wins
    for the opponent.  Conditional on the ones count, the left half's count is
    hypergeometric and the two halves are otherwise independent uniform
    arrangements.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    entries: dict[tuple[int, int], float] = {(1, 0): 0.0, (1, 1): 1.0, (1, 2): 1.0}
    prev = np.array([0.0, 1.0, 1.0])
    for d in range(2, depth + 1):
        size, half = 2**d, 2 ** (d - 1)
        w = np.arange(size + 1)[:, None]
        j = np.arange(half + 1)[None, :]
        rest = w - j
        valid = (rest >= 0) & (rest <= half)
        log_h = _log_comb(half, j) + _log_comb(half, np.clip(rest, 0, half)) - _log_comb(size, w)
        h = np.where(valid, np.exp(log_h), 0.0)
        both = prev[j] * prev[np.clip(rest, 0, half)]
        cur = np.clip(1.0 - np.sum(h * both, axis=1), 0.0, 1.0)
        for w, v in enumerate(cur):
            entries[(d, w)] = float(v)
        prev = cur
    return FeatureWinTable.from_entries(entries)


def build_e3_table(max_len: int) -> FeatureWinTable:
    """Fraction of G-intervals of each (length, ones) that the mover wins.

    Keys are ``(length - 1, ones)`` for lengths 2..max_len.
    """
    if max_len < 2:
        raise ValueError("max_len must be >= 2")
    entries: dict[tuple[int, int], float] = {}
    for length in range(2, max_len + 1):
        wins = np.zeros(length + 1)
        counts = np.zeros(length + 1)
        for bits in itertools.product((0, 1), repeat=length):
            w = sum(bits)
            counts[w] += 1
            wins[w] += solve_exact(initial_position(GBoard(bits), Side.MAX))
        for w in range(length + 1):
            entries[(length - 1, w)] = float(wins[w] / counts[w])
    return FeatureWinTable.from_entries(entries)


def make_evaluator(tag: EvaluatorTag | str, game_depth: int = 10) -> Evaluator:
    """Evaluator with whatever table it needs for games of ``game_depth`` moves."""
    tag = EvaluatorTag(tag.lower()) if isinstance(tag, str) else tag
    if tag is EvaluatorTag.E2:
        return Evaluator(tag, build_e2_table(game_depth))
    if tag is EvaluatorTag.E3:
        return Evaluator(tag, build_e3_table(game_depth + 1))
    return Evaluator(tag)


# -- scalar evaluation ------------------------------------------------------


def _require_nonterminal(p: Position) -> None:
    if p.is_terminal:
        raise ValueError("evaluators are defined on non-terminal positions; use terminal_value_for_max")


def eval_e1(p: Position) -> float:
    _require_nonterminal(p)
    f = p.ones / p.size
    return f if p.last_mover is Side.MAX else 1.0 - f


def _mover_relative(p: Position, t: FeatureWinTable) -> float:
    w = t(p.moves_remaining, p.ones)
    return w if p.mover is Side.MAX else 1.0 - w


def eval_e2(p: Position, t: FeatureWinTable) -> float:
    _require_nonterminal(p)
    return _mover_relative(p, t)


def eval_e3(p: Position, t: FeatureWinTable) -> float:
    _require_nonterminal(p)
    if not isinstance(p.board, GBoard):
        raise ValueError("e3 is defined on G-game positions")
    return _mover_relative(p, t)


def eval_exact(p: Position) -> float:
    return float(solve_exact(p))


def evaluate(ev: Evaluator, p: Position) -> float:
    if ev.tag is EvaluatorTag.E1:
        return eval_e1(p)
    if ev.tag is EvaluatorTag.E2:
        return eval_e2(p, ev.table)
    if ev.tag is EvaluatorTag.E3:
        return eval_e3(p, ev.table)
    return eval_exact(p)


# -- batched evaluation -----------------------------------------------------


def evaluate_batch(
    ev: Evaluator,
    ones: np.ndarray,
    size: int,
    moves_remaining: int,
    mover: Side,
) -> np.ndarray:
    """Evaluate many non-terminal frontier positions sharing size and mover.

    Uses the same floating-point expressions as the scalar evaluators so
    batched and scalar searches break ties identically.
    """
    if ev.tag is EvaluatorTag.E1:
        f = ones / size
        return f if mover.after(moves_remaining - 1) is Side.MAX else 1.0 - f
    if ev.tag in (EvaluatorTag.E2, EvaluatorTag.E3):
        w = ev.table.lookup(np.full(ones.shape, moves_remaining), ones)
        return w if mover is Side.MAX else 1.0 - w
    raise ValueError("the exact evaluator has no batched form; search to the end instead")
