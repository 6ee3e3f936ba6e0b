import json

import pytest

from crossing_games.game_core import (
    Claim,
    EdgeAlreadyClaimed,
    GameOver,
    GameResult,
    IllegalEdgeCount,
    IllegalMove,
    Move,
    OffBoard,
    Player,
    SecureRestrictionViolated,
    SuperfluousEdge,
    Variant,
    apply_move,
    check_secure_restrictions,
    dumps_record,
    is_superfluous,
    new_game,
    replay_record,
    to_record,
    winner,
)
from crossing_games.lattice import (
    Board,
    BoardKind,
    EdgeId,
    horizontal_edge,
    vertical_edge,
)

S32 = Board(BoardKind.S, 3, 2)
LAMBDA22 = Board(BoardKind.LAMBDA, 2, 2)
STRIP2 = Board(BoardKind.INFINITE_STRIP, 0, 2)
STRIP3 = Board(BoardKind.INFINITE_STRIP, 0, 3)


def play(state, *edge_lists):
    for edges in edge_lists:
        state = apply_move(state, Move(state.turn, tuple(edges)))
    return state


def test_first_player_defaults():
    assert new_game(S32, 1, 1).turn is Player.MAKER
    assert new_game(S32, 1, 1, Variant.SWITCHING).turn is Player.MAKER
    assert new_game(STRIP2, 2, 1, Variant.DOUBLE_RESPONSE).turn is Player.BREAKER
    assert new_game(STRIP2, 2, 1, Variant.SECURE).turn is Player.BREAKER
    assert (
        new_game(S32, 1, 1, first_player=Player.BREAKER).turn is Player.BREAKER
    )


def test_bad_quotas_rejected():
    with pytest.raises(ValueError):
        new_game(S32, 0, 1)
    with pytest.raises(ValueError):
        new_game(S32, 1, -2)


def test_maker_wins_staircase():
    g = new_game(S32, 1, 1)
    g = play(
        g,
        [horizontal_edge(1, 1)],
        [horizontal_edge(1, 2)],
        [vertical_edge(2, 1)],
        [horizontal_edge(2, 1)],
    )
    assert g.result is GameResult.ONGOING
    g = play(g, [horizontal_edge(2, 2)])
    assert g.result is GameResult.MAKER_WIN
    with pytest.raises(GameOver):
        apply_move(g, Move(Player.BREAKER, (horizontal_edge(2, 1),)))


def test_breaker_wins_on_s_board():
    # red duals (3,1)-(3,3)-(3,5) cut every left-right path of S_{3x2}
    g = new_game(S32, 1, 1, first_player=Player.BREAKER)
    g = play(
        g,
        [horizontal_edge(1, 1)],
        [horizontal_edge(2, 1)],
        [horizontal_edge(1, 2)],
    )
    assert g.result is GameResult.BREAKER_WIN
    assert g.claims[horizontal_edge(1, 1)] is Claim.RED


def test_breaker_wins_on_lambda_board():
    g = new_game(LAMBDA22, 1, 1, first_player=Player.BREAKER)
    g = play(g, [horizontal_edge(1, 1)], [vertical_edge(1, 1)])
    assert g.result is GameResult.ONGOING
    g = play(g, [horizontal_edge(1, 2)])
    assert g.result is GameResult.BREAKER_WIN


def test_maker_single_edge_win_on_lambda():
    g = new_game(LAMBDA22, 1, 1)
    g = play(g, [horizontal_edge(1, 1)])
    assert g.result is GameResult.MAKER_WIN


def test_short_final_turn():
    # (3,2) on the 5-edge board: maker takes 3, breaker takes the last 2
    g = new_game(S32, 3, 2)
    g = play(g, [horizontal_edge(1, 1), vertical_edge(2, 1), horizontal_edge(2, 2)])
    assert g.result is GameResult.MAKER_WIN
    # breaker variant: maker takes a losing trio, breaker owes min(2, 2)
    g = new_game(S32, 3, 2)
    g = play(g, [horizontal_edge(1, 1), horizontal_edge(1, 2), vertical_edge(2, 1)])
    assert g.result is GameResult.ONGOING
    with pytest.raises(IllegalEdgeCount):
        apply_move(g, Move(Player.BREAKER, (horizontal_edge(2, 1),)))
    g = play(g, [horizontal_edge(2, 1), horizontal_edge(2, 2)])
    assert g.result is GameResult.BREAKER_WIN


def test_move_rejections():
    g = new_game(S32, 1, 1)
    with pytest.raises(IllegalMove):
        apply_move(g, Move(Player.BREAKER, (horizontal_edge(1, 1),)))
    with pytest.raises(IllegalEdgeCount):
        apply_move(
            g, Move(Player.MAKER, (horizontal_edge(1, 1), horizontal_edge(2, 1)))
        )
    with pytest.raises(OffBoard):
        apply_move(g, Move(Player.MAKER, (vertical_edge(1, 1),)))
    g = play(g, [horizontal_edge(1, 1)])
    with pytest.raises(EdgeAlreadyClaimed):
        apply_move(g, Move(Player.BREAKER, (horizontal_edge(1, 1),)))
    with pytest.raises(IllegalEdgeCount):
        apply_move(
            g,
            Move(Player.BREAKER, (horizontal_edge(2, 1), horizontal_edge(2, 1))),
        )


def test_biased_quota():
    g = new_game(S32, 2, 1)
    g = play(g, [horizontal_edge(1, 1), vertical_edge(2, 1)])
    assert g.turn is Player.BREAKER
    g = play(g, [horizontal_edge(2, 1)])
    g = play(g, [horizontal_edge(2, 2), horizontal_edge(1, 2)])
    assert g.result is GameResult.MAKER_WIN


def test_double_response_flow():
    g = new_game(STRIP2, 4, 2, Variant.DOUBLE_RESPONSE)
    g = play(g, [EdgeId(1, 2), EdgeId(2, 3)])
    assert g.owed == 4
    with pytest.raises(IllegalEdgeCount):
        apply_move(g, Move(Player.MAKER, (EdgeId(5, 2),)))
    g = play(g, [EdgeId(5, 2), EdgeId(5, 4), EdgeId(7, 2), EdgeId(7, 4)])
    assert g.owed is None
    # doubling an own blue is a legal response edge
    g = play(g, [EdgeId(9, 2)])
    g = play(g, [EdgeId(5, 2), EdgeId(11, 2)])
    assert g.claims[EdgeId(5, 2)] is Claim.BLUE_DOUBLE


def test_double_response_rejects_superfluous_arch():
    g = new_game(STRIP2, 4, 2, Variant.DOUBLE_RESPONSE)
    g = play(
        g,
        [EdgeId(1, 2), EdgeId(2, 3)],
        [EdgeId(9, 2), EdgeId(9, 4), EdgeId(11, 2), EdgeId(11, 4)],
    )
    # duals so far: (1,1)-(1,3)-(3,3); adding (3,2) reaches (3,1), a second
    # bottom vertex, closing an arch
    assert is_superfluous(g, EdgeId(3, 2))
    with pytest.raises(SuperfluousEdge):
        apply_move(g, Move(Player.BREAKER, (EdgeId(3, 2),)))
    # a plain extension is fine
    assert not is_superfluous(g, EdgeId(4, 3))


def test_double_response_rejects_superfluous_cycle():
    g = new_game(STRIP3, 4, 2, Variant.DOUBLE_RESPONSE)
    g = play(g, [EdgeId(2, 3), EdgeId(3, 4)])
    g = play(g, [EdgeId(9, 2), EdgeId(9, 4), EdgeId(11, 2), EdgeId(11, 4)])
    g = play(g, [EdgeId(2, 5)])
    g = play(g, [EdgeId(13, 2), EdgeId(13, 4)])
    # duals (1,3)-(3,3)-(3,5)-(1,5) claimed; (1,4) would close the square
    with pytest.raises(SuperfluousEdge):
        apply_move(g, Move(Player.BREAKER, (EdgeId(1, 4),)))


def test_superfluous_checked_within_one_move():
    g = new_game(STRIP2, 4, 2, Variant.DOUBLE_RESPONSE)
    g = play(g, [EdgeId(1, 2), EdgeId(2, 3)])
    g = play(g, [EdgeId(9, 2), EdgeId(9, 4), EdgeId(11, 2), EdgeId(11, 4)])
    # (3,4) alone is fine; (3,2) then arches through it within the same move
    with pytest.raises(SuperfluousEdge):
        apply_move(g, Move(Player.BREAKER, (EdgeId(3, 4), EdgeId(3, 2))))


def test_double_response_breaker_win():
    g = new_game(STRIP2, 4, 2, Variant.DOUBLE_RESPONSE)
    g = play(g, [EdgeId(1, 2)])
    g = play(g, [EdgeId(9, 2), EdgeId(9, 4)])
    g = play(g, [EdgeId(1, 4)])
    assert g.result is GameResult.BREAKER_WIN


def test_secure_restriction_b():
    g = new_game(STRIP2, 2, 1, Variant.SECURE)
    g = play(g, [EdgeId(1, 2)], [EdgeId(9, 2), EdgeId(9, 4)])
    assert check_secure_restrictions(g, EdgeId(1, 4)) == "b"
    with pytest.raises(SecureRestrictionViolated) as info:
        apply_move(g, Move(Player.BREAKER, (EdgeId(1, 4),)))
    assert info.value.code == "b"


def test_secure_restriction_a_precedes_b():
    g = new_game(STRIP2, 2, 1, Variant.SECURE)
    g = play(g, [EdgeId(1, 2)], [EdgeId(9, 2), EdgeId(9, 4)])
    g = play(g, [EdgeId(2, 3)], [EdgeId(11, 2), EdgeId(11, 4)])
    # (3,2) joins (3,1) to the component already holding (1,1): arch
    assert check_secure_restrictions(g, EdgeId(3, 2)) == "a"


def test_secure_restriction_c_conservative_and_exact():
    g = new_game(STRIP3, 2, 1, Variant.SECURE)
    g = play(g, [EdgeId(3, 4)], [EdgeId(3, 2), EdgeId(2, 3)])
    # red comp {(3,3),(3,5)} floats; blue (3,2) has dual ends (3,1),(3,3)
    assert check_secure_restrictions(g, EdgeId(3, 2)) == "c"
    comp = frozenset({(3, 3), (3, 5)})
    paths = [(comp, frozenset({EdgeId(3, 2)}))]
    assert check_secure_restrictions(g, EdgeId(3, 2), paths) == "c"
    # certificate that lists a different path edge frees (3,2)
    paths = [(comp, frozenset({EdgeId(2, 3)}))]
    assert check_secure_restrictions(g, EdgeId(3, 2), paths) is None


def test_secure_restriction_c_ignores_unclaimed_edges():
    g = new_game(STRIP3, 2, 1, Variant.SECURE)
    g = play(g, [EdgeId(3, 4)], [EdgeId(2, 3), EdgeId(9, 2)])
    # (3,2) is unclaimed here, so attaching the floating component to the
    # bottom is V's right
    assert check_secure_restrictions(g, EdgeId(3, 2)) is None


def test_secure_break_budgets():
    g = new_game(STRIP2, 2, 1, Variant.SECURE)
    g = play(g, [EdgeId(9, 2)], [EdgeId(1, 2), EdgeId(3, 2)])
    g = play(g, [EdgeId(1, 2)])  # breaks a blue
    assert g.owed == 3
    assert g.claims[EdgeId(1, 2)] is Claim.RED
    g = play(g, [EdgeId(3, 2), EdgeId(5, 2), EdgeId(5, 4)])
    assert g.claims[EdgeId(3, 2)] is Claim.BLUE_DOUBLE
    g = play(g, [EdgeId(3, 2)])  # breaks a double
    assert g.owed == 4
    with pytest.raises(IllegalEdgeCount):
        apply_move(g, Move(Player.MAKER, (EdgeId(7, 2),)))
    g = play(g, [EdgeId(7, 2), EdgeId(7, 4), EdgeId(11, 2), EdgeId(11, 4)])
    assert g.result is GameResult.ONGOING


def test_secure_single_edge_only():
    g = new_game(STRIP2, 2, 1, Variant.SECURE)
    with pytest.raises(IllegalEdgeCount):
        apply_move(g, Move(Player.BREAKER, (EdgeId(1, 2), EdgeId(5, 2))))


def test_record_round_trip():
    g = new_game(S32, 2, 1)
    g = play(
        g,
        [horizontal_edge(1, 1), vertical_edge(2, 1)],
        [horizontal_edge(2, 1)],
        [horizontal_edge(2, 2), horizontal_edge(1, 2)],
    )
    rec = to_record(g)
    assert rec["result"] == "maker"
    assert rec["kind"] == "S"
    assert rec["moves"][0]["player"] == "maker"
    back = replay_record(json.loads(dumps_record(g)))
    assert back.claims == g.claims
    assert back.result is g.result


def test_replay_rejects_corrupt_result():
    g = new_game(S32, 1, 1)
    g = play(g, [horizontal_edge(1, 1)], [horizontal_edge(1, 2)])
    rec = to_record(g)
    rec["result"] = "maker"
    with pytest.raises(ValueError):
        replay_record(rec)


def test_winner_matches_replay_each_step():
    g = new_game(S32, 1, 1)
    for edges in [
        [horizontal_edge(1, 1)],
        [horizontal_edge(2, 2)],
        [vertical_edge(2, 1)],
    ]:
        g = play(g, edges)
        assert winner(g) is g.result
