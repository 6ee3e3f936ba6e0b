from fractions import Fraction

import pytest

from crossing_games.game_core import Claim, Player
from crossing_games.lattice import Board, BoardKind, EdgeId, horizontal_edge
from crossing_games.solver import (
    best_move,
    enumerate_crossing_paths,
    erdos_selfridge,
    solve,
    solve_position,
)


def S(m, n):
    return Board(BoardKind.S, m, n)


def test_route_enumeration_oracles():
    lengths = sorted(len(p) for p in enumerate_crossing_paths(S(3, 2)))
    assert lengths == [2, 2, 3, 3]
    assert sorted(len(p) for p in enumerate_crossing_paths(S(2, 1))) == [1]
    assert sorted(len(p) for p in enumerate_crossing_paths(S(2, 2))) == [1, 1]
    assert sorted(len(p) for p in enumerate_crossing_paths(S(4, 1))) == [3]
    lam = Board(BoardKind.LAMBDA, 2, 2)
    assert sorted(len(p) for p in enumerate_crossing_paths(lam)) == [1, 1]


def test_routes_are_crossings():
    from crossing_games.lattice import has_lr_crossing

    for board in (S(3, 2), S(4, 2), S(3, 3)):
        for path in enumerate_crossing_paths(board):
            assert has_lr_crossing(board, path)
            for e in path:
                assert not has_lr_crossing(board, path - {e})


def test_solver_tiny_boards():
    assert solve(S(2, 1), 1, 1).winner is Player.MAKER
    assert solve(S(3, 1), 1, 1).winner is Player.BREAKER
    assert solve(S(3, 2), 1, 1).winner is Player.MAKER
    assert solve(S(4, 2), 1, 1).winner is Player.BREAKER


def test_solver_bias_flips_outcome():
    assert solve(S(3, 2), 2, 1).winner is Player.MAKER
    assert solve(S(3, 2), 1, 2).winner is Player.BREAKER


def test_solver_pv_is_playable():
    res = solve(S(2, 1), 1, 1)
    assert res.pv == (((EdgeId(3, 2)),),)
    res = solve(S(3, 2), 1, 1)
    # replay the line through the referee; maker must end up winning
    from crossing_games.game_core import Move, Variant, apply_move, new_game

    g = new_game(S(3, 2), 1, 1, Variant.CROSSING)
    for edges in res.pv:
        g = apply_move(g, Move(g.turn, edges))
    assert g.result.value == "maker"


def test_solver_is_deterministic():
    a = solve(S(3, 2), 1, 1)
    b = solve(S(3, 2), 1, 1)
    assert a == b
    assert a.nodes > 0


def test_solve_from_position():
    claims = {horizontal_edge(1, 1): Claim.BLUE}
    res = solve_position(S(3, 2), 1, 1, claims, Player.BREAKER)
    assert res.winner is Player.MAKER
    claims = {
        horizontal_edge(1, 1): Claim.RED,
        horizontal_edge(1, 2): Claim.RED,
    }
    res = solve_position(S(3, 2), 1, 1, claims, Player.MAKER)
    assert res.winner is Player.BREAKER


def test_best_move_is_legal_and_winning():
    mv = best_move(S(3, 2), 1, 1, {}, Player.MAKER)
    assert len(mv) == 1
    follow = solve_position(
        S(3, 2), 1, 1, {mv[0]: Claim.BLUE}, Player.BREAKER
    )
    assert follow.winner is Player.MAKER


def test_edge_limit_enforced():
    with pytest.raises(ValueError):
        solve(S(8, 3), 1, 1)
    with pytest.raises(ValueError):
        solve(Board(BoardKind.INFINITE_STRIP, 0, 2), 1, 1)


def test_weighted_count_exact_values():
    rep = erdos_selfridge(S(3, 2), 1, 1)
    assert rep.exact
    assert rep.total == Fraction(3, 4)
    assert rep.bound == Fraction(1, 2)
    assert not rep.passes
    assert rep.sets == 4


def test_weighted_count_boundary_never_passes():
    rep = erdos_selfridge(S(2, 1), 1, 3)
    assert rep.exact
    assert rep.total == Fraction(1, 4) == rep.bound
    assert not rep.passes


def test_weighted_count_passing_example():
    rep = erdos_selfridge(S(3, 1), 1, 1)
    assert rep.exact
    assert rep.total == Fraction(1, 4)
    assert rep.passes
    assert solve(S(3, 1), 1, 1).winner is Player.BREAKER


def test_weighted_count_float_branch():
    rep = erdos_selfridge(S(3, 2), 2, 1)
    assert not rep.exact
    assert isinstance(rep.total, float)
    assert not rep.passes


def test_weighted_count_soundness_sweep():
    boards = [S(3, 1), S(4, 1), S(5, 1), S(2, 2), S(3, 2), S(4, 2), S(2, 3), S(3, 3)]
    for board in boards:
        for q in (1, 2, 3):
            rep = erdos_selfridge(board, 1, q)
            if rep.passes:
                assert solve(board, 1, q).winner is Player.BREAKER, (
                    board,
                    q,
                )
