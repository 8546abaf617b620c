"""Minimax, product and average propagation on board-splitting model games."""

from .evaluators import (
    Evaluator,
    EvaluatorTag,
    FeatureWinTable,
    build_e2_table,
    build_e3_table,
    eval_e1,
    eval_e2,
    eval_e3,
    eval_exact,
    make_evaluator,
)
from .games import (
    DEFAULT_ONES_PROB,
    GBoard,
    Move,
    Position,
    Side,
    SplitBoard,
    apply_move,
    enumerate_g_boards,
    generate_boards,
    generate_n_board,
    generate_p_board,
    initial_position,
    legal_moves,
    solve_exact,
    terminal_value_for_max,
)
from .search import BackupRule, PlayerConfig, backup, choose_move, search_value
from .tournament import (
    ContestRecord,
    PairOutcome,
    Seat,
    SignificanceReport,
    play_game,
    play_pair,
    render_tables,
    run_contest,
    run_study,
    significance,
)

__version__ = "0.1.0"
