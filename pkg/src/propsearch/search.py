"""Depth-limited game-tree search with interchangeable backup rules.

Values everywhere are MAX-win probabilities.  The three rules differ only in
how a node combines its children:

* ``MINIMAX`` takes the max (MAX to move) or min (MIN to move).
* ``PRODUCT`` treats children as independent win probabilities:
  ``1 - prod(1 - v)`` when MAX chooses, ``prod(v)`` when MIN chooses.
* ``AVERAGE`` is the node-wise mean of the two.

There is no pruning: every rule sees the full tree to the horizon, so the
rules stay comparable.  Two implementations are provided: a plain recursive
one over :class:`~propsearch.games.Position`, and a batched numpy one used by
the tournament runner that plays many boards in lock-step.  They evaluate the
same floating-point expressions in the same order, so they agree bit for bit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .evaluators import Evaluator, EvaluatorTag, evaluate, evaluate_batch
from .games import (
    GBoard,
    IllegalMoveError,
    Move,
    Position,
    Side,
    apply_move,
    legal_moves,
    terminal_value_for_max,
)


class BackupRule(enum.Enum):
    MINIMAX = "minimax"
    PRODUCT = "product"
    AVERAGE = "average"


@dataclass(frozen=True)
class PlayerConfig:
    rule: BackupRule
    evaluator: Evaluator
    depth: int

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("search depth must be >= 1")

    def describe(self) -> str:
        return f"{self.rule.value}/{self.evaluator.name}/d{self.depth}"


def _minimax(node_mover: Side, values: Sequence[float]) -> float:
    return max(values) if node_mover is Side.MAX else min(values)


def _product(node_mover: Side, values: Sequence[float]) -> float:
    acc = 1.0
    if node_mover is Side.MAX:
        for v in values:
            acc *= 1.0 - v
        # 1 - (1 - v) can round below v; the exact value is never below the max
        return max(1.0 - acc, max(values))
    for v in values:
        acc *= v
    return acc


def backup(rule: BackupRule, node_mover: Side, child_values: Sequence[float]) -> float:
    """Combine children's MAX-win probabilities at a node where ``node_mover`` moves."""
    if len(child_values) == 0:
        raise ValueError("backup needs at least one child value")
    if any(not 0.0 <= v <= 1.0 for v in child_values):
        raise ValueError(f"child values must lie in [0, 1], got {list(child_values)}")
    if rule is BackupRule.MINIMAX:
        return _minimax(node_mover, child_values)
    if rule is BackupRule.PRODUCT:
        return _product(node_mover, child_values)
    return 0.5 * (_minimax(node_mover, child_values) + _product(node_mover, child_values))


def search_value(p: Position, cfg: PlayerConfig, lookahead: int | None = None) -> float:
    """Backed-up MAX-win estimate of ``p`` searching ``lookahead`` plies (default ``cfg.depth``)."""
    if lookahead is None:
        lookahead = cfg.depth
    if p.is_terminal:
        return float(terminal_value_for_max(p))
    if lookahead == 0:
        return evaluate(cfg.evaluator, p)
    children = [search_value(apply_move(p, m), cfg, lookahead - 1) for m in legal_moves(p)]
    return backup(cfg.rule, p.mover, children)


def child_values(p: Position, cfg: PlayerConfig) -> list[tuple[Move, float]]:
    return [(m, search_value(apply_move(p, m), cfg, cfg.depth - 1)) for m in legal_moves(p)]


def choose_move(p: Position, cfg: PlayerConfig) -> Move:
    """Best move for the side to move; ties go to the earlier canonical move."""
    if p.is_terminal:
        raise IllegalMoveError("no move to choose at a terminal position")
    scored = child_values(p, cfg)
    best_move, best = scored[0]
    for m, v in scored[1:]:
        if (v > best) if p.mover is Side.MAX else (v < best):
            best_move, best = m, v
    return best_move


# -- batched engine ---------------------------------------------------------


def backup_pair(rule: BackupRule, node_mover: Side, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Elementwise two-child :func:`backup`."""
    if node_mover is Side.MAX:
        mm = np.maximum(left, right)
        pp = np.maximum(1.0 - (1.0 - left) * (1.0 - right), mm)
    else:
        mm = np.minimum(left, right)
        pp = left * right
    if rule is BackupRule.MINIMAX:
        return mm
    if rule is BackupRule.PRODUCT:
        return pp
    return 0.5 * (mm + pp)


def _terminal_values(squares: np.ndarray, leaf_mover: Side) -> np.ndarray:
    won = squares == 1 if leaf_mover is Side.MIN else squares == 0
    return won.astype(np.float64)


def _frontier_split(bits, prefix, lo, mover, moves_remaining, k, evaluator):
    chunk = 2 ** (moves_remaining - k)
    starts = lo[:, None] + np.arange(2**k) * chunk
    if chunk == 1:
        return _terminal_values(np.take_along_axis(bits, starts, axis=1), mover.after(k))
    ones = np.take_along_axis(prefix, starts + chunk, axis=1) - np.take_along_axis(prefix, starts, axis=1)
    return evaluate_batch(evaluator, ones, chunk, moves_remaining - k, mover.after(k))


def _frontier_g(bits, prefix, lo, mover, moves_remaining, k, evaluator):
    # node i at ply k has removed i squares from the left and k - i from the right
    length = moves_remaining + 1 - k
    starts = lo[:, None] + np.arange(k + 1)
    if length == 1:
        return _terminal_values(np.take_along_axis(bits, starts, axis=1), mover.after(k))
    ones = np.take_along_axis(prefix, starts + length, axis=1) - np.take_along_axis(prefix, starts, axis=1)
    return evaluate_batch(evaluator, ones, length, moves_remaining - k, mover.after(k))


def root_child_values(
    kind: str,
    bits: np.ndarray,
    prefix: np.ndarray,
    lo: np.ndarray,
    mover: Side,
    moves_remaining: int,
    cfg: PlayerConfig,
) -> np.ndarray:
    """Search values of both root children for a batch of same-shaped positions.

    ``bits`` is ``(B, n)`` and ``prefix`` its ``(B, n + 1)`` running ones
    count; ``lo`` holds each position's left edge.  Returns ``(B, 2)`` with the
    left-variant child first.
    """
    if moves_remaining < 1:
        raise IllegalMoveError("no move to choose at a terminal position")
    depth = cfg.depth
    if cfg.evaluator.tag is EvaluatorTag.EXACT:
        depth = moves_remaining
    k = min(depth, moves_remaining)
    if kind == "G":
        values = _frontier_g(bits, prefix, lo, mover, moves_remaining, k, cfg.evaluator)
        for ply in range(k - 1, 0, -1):
            values = backup_pair(cfg.rule, mover.after(ply), values[:, 1:], values[:, :-1])
        return values[:, ::-1]
    values = _frontier_split(bits, prefix, lo, mover, moves_remaining, k, cfg.evaluator)
    for ply in range(k - 1, 0, -1):
        pairs = values.reshape(values.shape[0], -1, 2)
        values = backup_pair(cfg.rule, mover.after(ply), pairs[:, :, 0], pairs[:, :, 1])
    return values


def choose_moves_batch(kind, bits, prefix, lo, mover, moves_remaining, cfg) -> np.ndarray:
    """Index of the chosen move per row: 0 for the left variant, 1 for the right."""
    v = root_child_values(kind, bits, prefix, lo, mover, moves_remaining, cfg)
    better = v[:, 1] > v[:, 0] if mover is Side.MAX else v[:, 1] < v[:, 0]
    return better.astype(np.int64)


def board_kind(p: Position) -> str:
    return "G" if isinstance(p.board, GBoard) else p.board.kind
