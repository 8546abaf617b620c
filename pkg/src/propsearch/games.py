"""Board-splitting model games: P-games, N-games and G-games.

All three families end when a single square remains, and the player who made
the final move wins iff that square holds a 1.

* P-games and N-games are played on ``2**depth`` leaf squares; each move keeps
  the left or the right half of the remaining segment.  P-board leaves are
  independent coin flips, N-board leaves come from signed arc labels summed
  along root-to-leaf paths.
* G-games are played on a row of ``n_moves + 1`` squares; each move removes a
  square from one end, so positions are intervals and form a DAG.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np

# Leaf probability at which the mover's chance of a forced win is the same,
# (sqrt(5) - 1) / 2, at every level of a P-game tree.
DEFAULT_ONES_PROB = (3 - 5**0.5) / 2


class Side(enum.Enum):
    MAX = "MAX"
    MIN = "MIN"

    @property
    def opponent(self) -> "Side":
        return Side.MIN if self is Side.MAX else Side.MAX

    def after(self, plies: int) -> "Side":
        """Side to move after ``plies`` further moves."""
        return self if plies % 2 == 0 else self.opponent


def opponent(side: Side) -> Side:
    return side.opponent


class Move(enum.Enum):
    KEEP_LEFT = "KEEP_LEFT"
    KEEP_RIGHT = "KEEP_RIGHT"
    REMOVE_LEFT = "REMOVE_LEFT"
    REMOVE_RIGHT = "REMOVE_RIGHT"


SPLIT_MOVES = (Move.KEEP_LEFT, Move.KEEP_RIGHT)
G_MOVES = (Move.REMOVE_LEFT, Move.REMOVE_RIGHT)


class IllegalMoveError(ValueError):
    """A move or query that the position does not admit."""


def _check_bits(bits: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise ValueError("board squares must be 0 or 1")
    return out


@dataclass(frozen=True)
class SplitBoard:
    kind: str
    depth: int
    leaf_bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("P", "N"):
            raise ValueError(f"split board kind must be 'P' or 'N', got {self.kind!r}")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        object.__setattr__(self, "leaf_bits", _check_bits(self.leaf_bits))
        if len(self.leaf_bits) != 2**self.depth:
            raise ValueError(
                f"expected {2**self.depth} leaf bits for depth {self.depth}, "
                f"got {len(self.leaf_bits)}"
            )

    @property
    def squares(self) -> tuple[int, ...]:
        return self.leaf_bits

    @property
    def n_moves(self) -> int:
        return self.depth

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.leaf_bits, dtype=np.int8)

    @cached_property
    def prefix(self) -> np.ndarray:
        """``prefix[i]`` is the number of ones in ``leaf_bits[:i]``."""
        return np.concatenate(([0], np.cumsum(self.array, dtype=np.int64)))

    def ones(self, lo: int, hi: int) -> int:
        return int(self.prefix[hi] - self.prefix[lo])

    def __str__(self) -> str:
        return board_to_string(self)


@dataclass(frozen=True)
class GBoard:
    squares: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "squares", _check_bits(self.squares))
        if len(self.squares) < 2:
            raise ValueError("a G-board needs at least 2 squares")

    kind = "G"

    @property
    def n_moves(self) -> int:
        return len(self.squares) - 1

    @property
    def depth(self) -> int:
        return self.n_moves

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.squares, dtype=np.int8)

    @cached_property
    def prefix(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.array, dtype=np.int64)))

    def ones(self, lo: int, hi: int) -> int:
        return int(self.prefix[hi] - self.prefix[lo])

    def __str__(self) -> str:
        return board_to_string(self)


Board = Union[SplitBoard, GBoard]


@dataclass(frozen=True)
class Position:
    board: Board = field(repr=False)
    lo: int
    hi: int
    mover: Side
    moves_remaining: int

    @property
    def segment(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    @property
    def size(self) -> int:
        return self.hi - self.lo

    @property
    def is_terminal(self) -> bool:
        return self.moves_remaining == 0

    @property
    def ones(self) -> int:
        return self.board.ones(self.lo, self.hi)

    @property
    def last_mover(self) -> Side:
        """The side that will make the final move of the game from here."""
        return self.mover.after(self.moves_remaining - 1)


# -- board generation -------------------------------------------------------


def generate_p_board(depth: int, ones_prob: float = DEFAULT_ONES_PROB, seed=None) -> SplitBoard:
    """Random P-board with ``2**depth`` independent leaves.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts; a tuple such
    as ``(master_seed, board_index)`` gives independent per-board streams.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not 0.0 <= ones_prob <= 1.0:
        raise ValueError("ones_prob must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    bits = rng.random(2**depth) < ones_prob
    return SplitBoard("P", depth, tuple(bits.astype(int).tolist()))


def n_board_from_arcs(arcs: Sequence[Sequence[int]]) -> SplitBoard:
    """Build an N-board from explicit arc labels.

    ``arcs[j]`` holds the ``2**(j+1)`` labels (each +1 or -1) of the arcs
    entering level ``j+1``, left to right.  A leaf is a 1 iff its path sum is
    strictly positive.
    """
    depth = len(arcs)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    sums = np.zeros(1, dtype=np.int64)
    for level, labels in enumerate(arcs, start=1):
        labels = np.asarray(labels, dtype=np.int64)
        if labels.shape != (2**level,) or not np.all(np.abs(labels) == 1):
            raise ValueError(f"level {level} needs {2**level} labels in {{-1, +1}}")
        sums = np.repeat(sums, 2) + labels
    return SplitBoard("N", depth, tuple((sums > 0).astype(int).tolist()))


def generate_n_board(depth: int, seed=None) -> SplitBoard:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    rng = np.random.default_rng(seed)
    arcs = [rng.choice((-1, 1), size=2**level) for level in range(1, depth + 1)]
    return n_board_from_arcs(arcs)


def enumerate_g_boards(n_moves: int) -> list[GBoard]:
    """All ``2**(n_moves+1)`` G-boards in lexicographic order."""
    if n_moves < 1:
        raise ValueError("n_moves must be >= 1")
    return [GBoard(bits) for bits in itertools.product((0, 1), repeat=n_moves + 1)]


def board_to_string(board: Board) -> str:
    return "".join(str(b) for b in board.squares)


def board_from_string(text: str, kind: str) -> Board:
    """Parse a '0'/'1' string; split boards need a power-of-two length >= 2."""
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"board must be a non-empty string of 0/1, got {text!r}")
    bits = [int(c) for c in text]
    kind = kind.upper()
    if kind == "G":
        return GBoard(bits)
    depth = len(bits).bit_length() - 1
    if len(bits) < 2 or 2**depth != len(bits):
        raise ValueError(f"split board length must be a power of two >= 2, got {len(bits)}")
    return SplitBoard(kind, depth, bits)


# -- rules ------------------------------------------------------------------


def initial_position(board: Board, first_mover: Side = Side.MAX) -> Position:
    return Position(board, 0, len(board.squares), first_mover, board.n_moves)


def legal_moves(p: Position) -> tuple[Move, ...]:
    if p.is_terminal:
        return ()
    return G_MOVES if isinstance(p.board, GBoard) else SPLIT_MOVES


def apply_move(p: Position, m: Move) -> Position:
    if m not in legal_moves(p):
        raise IllegalMoveError(f"{m.name} is not legal at {p}")
    lo, hi = p.lo, p.hi
    if m is Move.KEEP_LEFT:
        hi = (lo + hi) // 2
    elif m is Move.KEEP_RIGHT:
        lo = (lo + hi) // 2
    elif m is Move.REMOVE_LEFT:
        lo += 1
    else:
        hi -= 1
    return Position(p.board, lo, hi, p.mover.opponent, p.moves_remaining - 1)


def terminal_value_for_max(p: Position) -> int:
    """1 if MAX has won at terminal ``p``; the last mover wins iff the square is 1."""
    if not p.is_terminal:
        raise IllegalMoveError("terminal_value_for_max called on a non-terminal position")
    square = p.board.squares[p.lo]
    return int((square == 1) == (p.mover is Side.MIN))


# -- exact solving ----------------------------------------------------------


def _split_leaf_values(board: SplitBoard, lo: int, hi: int, leaf_mover: Side) -> np.ndarray:
    bits = board.array[lo:hi]
    # leaf_mover is the side to move at the terminal, i.e. not the last mover
    return (bits == 1).astype(np.int8) if leaf_mover is Side.MIN else (bits == 0).astype(np.int8)


def _solve_split(p: Position) -> int:
    values = _split_leaf_values(p.board, p.lo, p.hi, p.mover.after(p.moves_remaining))
    for ply in range(p.moves_remaining - 1, -1, -1):
        pairs = values.reshape(-1, 2)
        values = pairs.max(axis=1) if p.mover.after(ply) is Side.MAX else pairs.min(axis=1)
    return int(values[0])


def _solve_g(p: Position) -> int:
    # Interval DP: row[i] is the MAX value of interval [p.lo + i, p.lo + i + length).
    board = p.board.squares
    leaf_mover = p.mover.after(p.moves_remaining)
    n = p.size
    row = [int((board[p.lo + i] == 1) == (leaf_mover is Side.MIN)) for i in range(n)]
    for ply in range(p.moves_remaining - 1, -1, -1):
        pick = max if p.mover.after(ply) is Side.MAX else min
        # children of [i, i+len): REMOVE_LEFT -> row[i+1], REMOVE_RIGHT -> row[i]
        row = [pick(row[i + 1], row[i]) for i in range(len(row) - 1)]
    return row[0]


def solve_exact(p: Position) -> int:
    """Game-theoretic value for MAX under optimal play by both sides."""
    if p.is_terminal:
        return terminal_value_for_max(p)
    if isinstance(p.board, GBoard):
        return _solve_g(p)
    return _solve_split(p)


def solve_naive(p: Position) -> int:
    """Plain recursive tree walk; slow, kept as an independent oracle."""
    if p.is_terminal:
        return terminal_value_for_max(p)
    values = [solve_naive(apply_move(p, m)) for m in legal_moves(p)]
    return max(values) if p.mover is Side.MAX else min(values)


def optimal_move(p: Position) -> Move:
    """First move in canonical order that achieves the exact value."""
    target = solve_exact(p)
    for m in legal_moves(p):
        if solve_exact(apply_move(p, m)) == target:
            return m
    raise IllegalMoveError("terminal position has no moves")


def generate_boards(
    kind: str, count: int, depth: int = 10, ones_prob: float = DEFAULT_ONES_PROB, master_seed: int = 0
) -> list[Board]:
    """Boards for a contest; board ``i`` is seeded by ``(master_seed, i)``.

    G-boards are enumerated exhaustively, so ``count``, ``ones_prob`` and
    ``master_seed`` are ignored for them.
    """
    kind = kind.upper()
    if kind == "G":
        return list(enumerate_g_boards(depth))
    if count < 1:
        raise ValueError("count must be >= 1")
    if kind == "P":
        return [generate_p_board(depth, ones_prob, (master_seed, i)) for i in range(count)]
    if kind == "N":
        return [generate_n_board(depth, (master_seed, i)) for i in range(count)]
    raise ValueError(f"unknown game kind {kind!r}")
