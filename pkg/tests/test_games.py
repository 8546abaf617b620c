import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from propsearch.games import (
    GBoard,
    IllegalMoveError,
    Move,
    Side,
    SplitBoard,
    apply_move,
    board_from_string,
    board_to_string,
    enumerate_g_boards,
    generate_boards,
    generate_n_board,
    generate_p_board,
    initial_position,
    legal_moves,
    n_board_from_arcs,
    optimal_move,
    solve_exact,
    solve_naive,
    terminal_value_for_max,
)


def test_side_opponent():
    assert Side.MAX.opponent is Side.MIN
    assert Side.MIN.opponent is Side.MAX
    assert Side.MAX.after(3) is Side.MIN
    assert Side.MAX.after(4) is Side.MAX


class TestGeneration:
    def test_p_board_size(self):
        board = generate_p_board(10, 0.5, 1)
        assert board.kind == "P"
        assert len(board.leaf_bits) == 1024

    def test_p_board_deterministic(self):
        assert generate_p_board(10, 0.5, (3, 4)) == generate_p_board(10, 0.5, (3, 4))
        assert generate_p_board(10, 0.5, (3, 4)) != generate_p_board(10, 0.5, (3, 5))

    def test_p_board_ones_fraction(self):
        fracs = [np.mean(generate_p_board(10, 0.5, (0, i)).leaf_bits) for i in range(1000)]
        mean = np.mean(fracs)
        sd = np.sqrt(0.25 / (1000 * 1024))
        assert abs(mean - 0.5) < 3 * sd

    @pytest.mark.parametrize("depth,prob", [(0, 0.5), (3, -0.1), (3, 1.5)])
    def test_p_board_bad_args(self, depth, prob):
        with pytest.raises(ValueError):
            generate_p_board(depth, prob, 0)

    def test_p_board_extremes(self):
        assert set(generate_p_board(4, 0.0, 0).leaf_bits) == {0}
        assert set(generate_p_board(4, 1.0, 0).leaf_bits) == {1}

    def test_n_board_from_arcs(self):
        assert n_board_from_arcs([[1, 1], [1, 1, 1, 1]]).leaf_bits == (1, 1, 1, 1)
        assert n_board_from_arcs([[-1, -1], [-1] * 4]).leaf_bits == (0, 0, 0, 0)
        # right subtree sums to -1 + 1 = 0, which is not strictly positive
        assert n_board_from_arcs([[1, -1], [1, 1, 1, 1]]).leaf_bits == (1, 1, 0, 0)

    def test_n_board_from_arcs_validates(self):
        with pytest.raises(ValueError):
            n_board_from_arcs([[1, 2]])
        with pytest.raises(ValueError):
            n_board_from_arcs([[1, 1, 1]])

    def test_n_board_matches_path_sums(self):
        rng = np.random.default_rng(5)
        arcs = [rng.choice((-1, 1), size=2**lvl).tolist() for lvl in range(1, 6)]
        board = n_board_from_arcs(arcs)
        for leaf in range(32):
            total = sum(arcs[lvl][leaf >> (4 - lvl)] for lvl in range(5))
            assert board.leaf_bits[leaf] == int(total > 0)

    def test_n_board_generation(self):
        b = generate_n_board(10, (1, 2))
        assert b.kind == "N" and len(b.leaf_bits) == 1024
        assert b == generate_n_board(10, (1, 2))
        with pytest.raises(ValueError):
            generate_n_board(0, 1)

    def test_enumerate_g_boards(self):
        assert len(enumerate_g_boards(10)) == 2048
        assert [board_to_string(b) for b in enumerate_g_boards(1)] == ["00", "01", "10", "11"]
        assert len({b.squares for b in enumerate_g_boards(10)}) == 2048
        with pytest.raises(ValueError):
            enumerate_g_boards(0)

    def test_generate_boards(self):
        ps = generate_boards("p", 5, 6, 0.4, 9)
        assert ps[3] == generate_p_board(6, 0.4, (9, 3))
        assert len(generate_boards("g", 5, 10)) == 2048
        assert generate_boards("n", 2, 4, master_seed=1)[1] == generate_n_board(4, (1, 1))

    def test_board_validation(self):
        with pytest.raises(ValueError):
            SplitBoard("P", 2, (0, 1, 1))
        with pytest.raises(ValueError):
            SplitBoard("Q", 1, (0, 1))
        with pytest.raises(ValueError):
            GBoard((0, 2))


class TestSerialization:
    def test_round_trip(self):
        g = board_from_string("01101001110", "g")
        assert isinstance(g, GBoard) and g.n_moves == 10
        assert str(g) == "01101001110"
        p = board_from_string("1100", "p")
        assert p.depth == 2 and str(p) == "1100"

    @pytest.mark.parametrize("text,kind", [("", "g"), ("012", "g"), ("110", "p"), ("1", "p")])
    def test_rejects(self, text, kind):
        with pytest.raises(ValueError):
            board_from_string(text, kind)


class TestRules:
    def test_initial_positions(self):
        p = initial_position(generate_p_board(10, 0.5, 0), Side.MAX)
        assert p.segment == (0, 1024) and p.moves_remaining == 10 and p.mover is Side.MAX
        g = initial_position(enumerate_g_boards(10)[5], Side.MIN)
        assert g.segment == (0, 11) and g.moves_remaining == 10 and g.mover is Side.MIN

    def test_legal_moves(self):
        p = initial_position(generate_p_board(3, 0.5, 0))
        assert legal_moves(p) == (Move.KEEP_LEFT, Move.KEEP_RIGHT)
        g = initial_position(GBoard((0,) * 11))
        assert legal_moves(g) == (Move.REMOVE_LEFT, Move.REMOVE_RIGHT)
        while not g.is_terminal:
            g = apply_move(g, Move.REMOVE_RIGHT)
        assert legal_moves(g) == ()

    def test_apply_move(self):
        p = initial_position(generate_p_board(10, 0.5, 0))
        q = apply_move(p, Move.KEEP_LEFT)
        assert q.segment == (0, 512) and q.mover is Side.MIN and q.moves_remaining == 9
        assert apply_move(p, Move.KEEP_RIGHT).segment == (512, 1024)
        g = initial_position(GBoard((0,) * 11))
        g = apply_move(apply_move(g, Move.REMOVE_LEFT), Move.REMOVE_LEFT)
        g = apply_move(apply_move(apply_move(g, Move.REMOVE_RIGHT), Move.REMOVE_RIGHT), Move.REMOVE_RIGHT)
        assert g.segment == (2, 8)
        assert apply_move(g, Move.REMOVE_RIGHT).segment == (2, 7)

    def test_illegal_moves(self):
        p = initial_position(generate_p_board(2, 0.5, 0))
        with pytest.raises(IllegalMoveError):
            apply_move(p, Move.REMOVE_LEFT)
        t = apply_move(apply_move(p, Move.KEEP_LEFT), Move.KEEP_LEFT)
        with pytest.raises(IllegalMoveError):
            apply_move(t, Move.KEEP_LEFT)

    @given(st.lists(st.booleans(), min_size=6, max_size=6), st.integers(0, 2**32 - 1))
    def test_invariants_along_random_lines(self, choices, seed):
        for board in (generate_p_board(6, 0.5, seed), GBoard(tuple(np.random.default_rng(seed).integers(0, 2, 7)))):
            p = initial_position(board)
            split = isinstance(board, SplitBoard)
            for i, right in enumerate(choices):
                p = apply_move(p, legal_moves(p)[int(right)])
                assert p.moves_remaining == 6 - i - 1
                assert p.size == (2**p.moves_remaining if split else p.moves_remaining + 1)
            assert p.is_terminal and p.size == 1

    def test_terminal_value(self):
        one = initial_position(GBoard((1, 1)), Side.MAX)
        t = apply_move(one, Move.REMOVE_LEFT)  # MAX moved last, MIN to move
        assert terminal_value_for_max(t) == 1
        zero = apply_move(initial_position(GBoard((0, 0)), Side.MAX), Move.REMOVE_LEFT)
        assert terminal_value_for_max(zero) == 0
        t_min_last = apply_move(initial_position(GBoard((1, 1)), Side.MIN), Move.REMOVE_LEFT)
        assert terminal_value_for_max(t_min_last) == 0
        with pytest.raises(IllegalMoveError):
            terminal_value_for_max(one)


class TestSolver:
    def test_parity_boards(self):
        zeros = SplitBoard("P", 10, (0,) * 1024)
        ones = SplitBoard("P", 10, (1,) * 1024)
        assert solve_exact(initial_position(zeros, Side.MAX)) == 1
        assert solve_exact(initial_position(ones, Side.MAX)) == 0

    def test_four_square_boards_with_two_ones(self):
        boards = [b for b in itertools.product((0, 1), repeat=4) if sum(b) == 2]
        assert len(boards) == 6
        wins = [solve_exact(initial_position(SplitBoard("P", 2, b), Side.MAX)) for b in boards]
        assert sum(wins) == 2

    def test_terminal_equals_terminal_value(self):
        t = apply_move(initial_position(GBoard((0, 1)), Side.MAX), Move.REMOVE_LEFT)
        assert solve_exact(t) == terminal_value_for_max(t)

    @settings(max_examples=60)
    @given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.sampled_from(list(Side)), st.sampled_from("PN"))
    def test_split_solver_matches_naive(self, depth, seed, first, kind):
        board = generate_p_board(depth, 0.5, seed) if kind == "P" else generate_n_board(depth, seed)
        p = initial_position(board, first)
        assert solve_exact(p) == solve_naive(p)

    def test_g_solver_matches_naive_on_all_boards(self):
        def walk(sq, lo, hi, max_to_move):
            # plain tree walk, no sharing between transpositions
            if hi - lo == 1:
                return int((sq[lo] == 1) != max_to_move)
            a = walk(sq, lo + 1, hi, not max_to_move)
            b = walk(sq, lo, hi - 1, not max_to_move)
            return max(a, b) if max_to_move else min(a, b)

        for board in enumerate_g_boards(10):
            p = initial_position(board, Side.MAX)
            assert solve_exact(p) == walk(board.squares, 0, 11, True), board

    def test_g_solver_matches_position_walk(self):
        for board in enumerate_g_boards(10)[::37]:
            for first in Side:
                p = initial_position(board, first)
                assert solve_exact(p) == solve_naive(p), (board, first)

    def test_g_solver_mid_game(self):
        board = GBoard((0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0))
        p = apply_move(apply_move(initial_position(board), Move.REMOVE_LEFT), Move.REMOVE_RIGHT)
        assert solve_exact(p) == solve_naive(p)

    def test_optimal_move_preserves_value(self):
        for board in enumerate_g_boards(6):
            p = initial_position(board)
            assert solve_exact(apply_move(p, optimal_move(p))) == solve_exact(p)
