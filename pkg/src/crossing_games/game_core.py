"""Referees for the four game variants played on grid boards.

Maker (H, blue) tries to build a left-right crossing; Breaker (V, red)
claims edges whose duals block it.  The Crossing variant is the plain
biased (p, q) game: Maker moves first and each player claims their quota
of unclaimed edges, short final turns taking whatever remains.  Switching
is refereed identically - on a grid triple the terminals are the
contracted side columns, so a safe-edge path between them is exactly a
left-right crossing - and exists as a separate variant tag for records.

DoubleResponse and Secure are the sparse variants on the infinite strip.
V moves first.  In DoubleResponse, V claims r <= q edges and H answers
with exactly 2r; edges whose dual would close a red cycle or a red arch
(both ends on the same board side) are superfluous and the referee
rejects them so the mover picks replacements.  In Secure, V claims one
edge per turn and may take a blue or doubled-blue edge (breaking it),
subject to three restrictions checked here; H answers with b + 2 edges
where b is the number of blues broken, and her claims may double her own
existing edges.

States are immutable values: apply_move returns a fresh state and never
mutates its input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Optional, Sequence

from .lattice import (
    Board,
    BoardKind,
    EdgeId,
    has_lr_crossing,
    has_tb_dual_crossing,
)


class Variant(Enum):
    CROSSING = "Crossing"
    DOUBLE_RESPONSE = "DoubleResponse"
    SECURE = "Secure"
    SWITCHING = "Switching"


class Player(Enum):
    MAKER = "maker"
    BREAKER = "breaker"

    @property
    def other(self) -> "Player":
        return Player.BREAKER if self is Player.MAKER else Player.MAKER


class Claim(Enum):
    BLUE = "blue"
    RED = "red"
    BLUE_DOUBLE = "blue_double"


class GameResult(Enum):
    ONGOING = "ongoing"
    MAKER_WIN = "maker"
    BREAKER_WIN = "breaker"


class IllegalMove(ValueError):
    """Base class for move rejections."""


class IllegalEdgeCount(IllegalMove):
    pass


class EdgeAlreadyClaimed(IllegalMove):
    pass


class OffBoard(IllegalMove):
    pass


class GameOver(IllegalMove):
    pass


class SuperfluousEdge(IllegalMove):
    """V edge whose dual closes a red cycle or arch; pick a replacement."""


class SecureRestrictionViolated(IllegalMove):
    def __init__(self, code: str, message: str) -> None:
        super().__init__(f"restriction ({code}): {message}")
        self.code = code


@dataclass(frozen=True)
class Move:
    player: Player
    edges: tuple[EdgeId, ...]


@dataclass(frozen=True)
class GameState:
    board: Board
    p: int
    q: int
    variant: Variant
    claims: Mapping[EdgeId, Claim]
    turn: Player
    moves: tuple[Move, ...] = ()
    result: GameResult = GameResult.ONGOING
    # edges owed by the player to move (None = derive from p/q quotas)
    owed: Optional[int] = None

    def claim_of(self, e: EdgeId) -> Optional[Claim]:
        return self.claims.get(e)

    def blue_edges(self) -> list[EdgeId]:
        return [e for e, c in self.claims.items() if c is not Claim.RED]

    def red_edges(self) -> list[EdgeId]:
        return [e for e, c in self.claims.items() if c is Claim.RED]


def new_game(
    board: Board,
    p: int,
    q: int,
    variant: Variant = Variant.CROSSING,
    first_player: Optional[Player] = None,
) -> GameState:
    if p < 1 or q < 1:
        raise ValueError(f"quotas must be positive, got p={p} q={q}")
    if variant in (Variant.DOUBLE_RESPONSE, Variant.SECURE):
        default_first = Player.BREAKER
    else:
        default_first = Player.MAKER
    return GameState(
        board=board,
        p=p,
        q=q,
        variant=variant,
        claims={},
        turn=first_player or default_first,
    )


# -- structural checks ---------------------------------------------------


def _red_dual_components(state: GameState) -> list[set[tuple[int, int]]]:
    adj: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for e, c in state.claims.items():
        if c is not Claim.RED:
            continue
        a, b = e.dual_endpoints()
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    comps = []
    seen: set[tuple[int, int]] = set()
    for start in adj:
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = {start}
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def _merged_after(state: GameState, e: EdgeId) -> set[tuple[int, int]]:
    """Dual vertex set of the red component containing e after claiming it."""
    v1, v2 = e.dual_endpoints()
    merged = {v1, v2}
    for comp in _red_dual_components(state):
        if v1 in comp or v2 in comp:
            merged |= comp
    return merged


def is_superfluous(state: GameState, e: EdgeId) -> bool:
    """Would claiming e red close a red dual cycle or a red dual arch?"""
    v1, v2 = e.dual_endpoints()
    comps = _red_dual_components(state)
    for comp in comps:
        if v1 in comp and v2 in comp:
            return True  # cycle
    merged = {v1, v2}
    for comp in comps:
        if v1 in comp or v2 in comp:
            merged |= comp
    top = 2 * state.board.n + 1
    bottoms = sum(1 for _, v in merged if v == 1)
    tops = sum(1 for _, v in merged if v == top)
    return bottoms >= 2 or tops >= 2


def check_secure_restrictions(
    state: GameState,
    e: EdgeId,
    securing_paths: Optional[Sequence[tuple[frozenset, frozenset]]] = None,
) -> Optional[str]:
    """Return the violated restriction code ('a', 'b', 'c') or None.

    securing_paths, when given, lists (dual vertex set, path edge set)
    pairs for the floating components' certificates; restriction (c) then
    fires only for genuine path edges.  Without it every blue edge with a
    dual endpoint in a floating component is treated as a path edge, which
    is the conservative reading.
    """
    if is_superfluous(state, e):
        return "a"
    v1, v2 = e.dual_endpoints()
    merged = _merged_after(state, e)
    top = 2 * state.board.n + 1
    touches_bottom = any(v == 1 for _, v in merged)
    touches_top = any(v == top for _, v in merged)
    if touches_bottom and touches_top:
        return "b"
    if state.claims.get(e) in (Claim.BLUE, Claim.BLUE_DOUBLE) and (
        touches_bottom or touches_top
    ):
        comps = _red_dual_components(state)
        floating = []
        for comp in comps:
            if v1 not in comp and v2 not in comp:
                continue
            if any(v in (1, top) for _, v in comp):
                continue
            floating.append(comp)
        if floating:
            if securing_paths is None:
                return "c"
            for comp_vertices, path_edges in securing_paths:
                if e in path_edges and any(
                    set(comp_vertices) == f for f in floating
                ):
                    return "c"
    return None


# -- move application ----------------------------------------------------


def _expected_count(state: GameState) -> int:
    if state.variant in (Variant.CROSSING, Variant.SWITCHING):
        quota = state.p if state.turn is Player.MAKER else state.q
        remaining = state.board.edge_count() - len(state.claims)
        return min(quota, remaining)
    if state.owed is not None:
        return state.owed
    return 1  # V to move in Secure; DoubleResponse handled separately


def apply_move(
    state: GameState,
    move: Move,
    securing_paths: Optional[Sequence[tuple[frozenset, frozenset]]] = None,
) -> GameState:
    if state.result is not GameResult.ONGOING:
        raise GameOver(f"game already decided: {state.result.value}")
    if move.player is not state.turn:
        raise IllegalMove(f"not {move.player.value}'s turn")
    if len(set(move.edges)) != len(move.edges):
        raise IllegalEdgeCount("duplicate edges in move")
    for e in move.edges:
        if not state.board.contains_edge(e):
            raise OffBoard(f"edge {tuple(e)} not on board")

    variant = state.variant
    claims = dict(state.claims)
    owed: Optional[int] = None

    if variant in (Variant.CROSSING, Variant.SWITCHING):
        expected = _expected_count(state)
        if len(move.edges) != expected:
            raise IllegalEdgeCount(
                f"expected {expected} edges, got {len(move.edges)}"
            )
        for e in move.edges:
            if e in claims:
                raise EdgeAlreadyClaimed(f"edge {tuple(e)} already claimed")
            claims[e] = (
                Claim.BLUE if move.player is Player.MAKER else Claim.RED
            )
    elif variant is Variant.DOUBLE_RESPONSE:
        if move.player is Player.BREAKER:
            if not 1 <= len(move.edges) <= state.q:
                raise IllegalEdgeCount(
                    f"V claims between 1 and {state.q} edges"
                )
            working = replace(state, claims=claims)
            for e in move.edges:
                if e in claims:
                    raise EdgeAlreadyClaimed(f"edge {tuple(e)} already claimed")
                if is_superfluous(working, e):
                    raise SuperfluousEdge(
                        f"edge {tuple(e)} closes a red cycle or arch"
                    )
                claims[e] = Claim.RED
                working = replace(working, claims=claims)
            owed = 2 * len(move.edges)
        else:
            if state.owed is None or len(move.edges) != state.owed:
                raise IllegalEdgeCount(
                    f"H owes exactly {state.owed} edges, got {len(move.edges)}"
                )
            for e in move.edges:
                existing = claims.get(e)
                if existing is Claim.RED:
                    raise EdgeAlreadyClaimed(f"edge {tuple(e)} is red")
                if existing is None:
                    claims[e] = Claim.BLUE
                else:
                    claims[e] = Claim.BLUE_DOUBLE
    elif variant is Variant.SECURE:
        if move.player is Player.BREAKER:
            if len(move.edges) != 1:
                raise IllegalEdgeCount("V claims exactly one edge")
            e = move.edges[0]
            existing = claims.get(e)
            if existing is Claim.RED:
                raise EdgeAlreadyClaimed(f"edge {tuple(e)} is red")
            code = check_secure_restrictions(state, e, securing_paths)
            if code is not None:
                raise SecureRestrictionViolated(code, f"edge {tuple(e)}")
            broken = {
                None: 0,
                Claim.BLUE: 1,
                Claim.BLUE_DOUBLE: 2,
            }[existing]
            claims[e] = Claim.RED
            owed = broken + 2
        else:
            if state.owed is None or len(move.edges) != state.owed:
                raise IllegalEdgeCount(
                    f"H owes exactly {state.owed} edges, got {len(move.edges)}"
                )
            for e in move.edges:
                existing = claims.get(e)
                if existing is Claim.RED:
                    raise EdgeAlreadyClaimed(f"edge {tuple(e)} is red")
                if existing is None:
                    claims[e] = Claim.BLUE
                else:
                    claims[e] = Claim.BLUE_DOUBLE
    else:  # pragma: no cover
        raise AssertionError(variant)

    nxt = GameState(
        board=state.board,
        p=state.p,
        q=state.q,
        variant=variant,
        claims=claims,
        turn=state.turn.other,
        moves=state.moves + (move,),
        result=GameResult.ONGOING,
        owed=owed,
    )
    return replace(nxt, result=winner(nxt))


def winner(state: GameState) -> GameResult:
    """Evaluate the position.  For the sparse variants V wins exactly when
    his duals cross top to bottom; H never wins in finite time there."""
    board = state.board
    red = state.red_edges()
    if state.variant in (Variant.DOUBLE_RESPONSE, Variant.SECURE):
        if has_tb_dual_crossing(board, red):
            return GameResult.BREAKER_WIN
        return GameResult.ONGOING
    blue = state.blue_edges()
    if has_lr_crossing(board, blue):
        return GameResult.MAKER_WIN
    if board.kind is BoardKind.S:
        # by the crossing dichotomy, no live left-right path remains
        # exactly when the red duals already cross top to bottom
        if has_tb_dual_crossing(board, red):
            return GameResult.BREAKER_WIN
    else:
        live = blue + [e for e in board.edge_set() if e not in state.claims]
        if not has_lr_crossing(board, live):
            return GameResult.BREAKER_WIN
    return GameResult.ONGOING


# -- records -------------------------------------------------------------


def to_record(state: GameState) -> dict:
    return {
        "variant": state.variant.value,
        "m": state.board.m,
        "n": state.board.n,
        "kind": state.board.kind.value,
        "p": state.p,
        "q": state.q,
        "moves": [
            {
                "player": mv.player.value,
                "edges": [[e.u, e.v] for e in mv.edges],
            }
            for mv in state.moves
        ],
        "result": state.result.value,
    }


def replay_record(record: dict) -> GameState:
    board = Board(BoardKind(record["kind"]), record["m"], record["n"])
    state = new_game(
        board,
        record["p"],
        record["q"],
        Variant(record["variant"]),
        first_player=(
            Player(record["moves"][0]["player"]) if record["moves"] else None
        ),
    )
    for mv in record["moves"]:
        move = Move(
            Player(mv["player"]),
            tuple(EdgeId(u, v) for u, v in mv["edges"]),
        )
        state = apply_move(state, move)
    if state.result.value != record["result"]:
        raise ValueError(
            f"replay result {state.result.value} != recorded {record['result']}"
        )
    return state


def dumps_record(state: GameState) -> str:
    return json.dumps(to_record(state), separators=(",", ":"))
