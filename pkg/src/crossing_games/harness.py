"""Match runner, adversary agents, and composite defences.

Agents wrap the strategy modules behind one move-producing interface so
they can be pitted against each other, replayed, and traced.  The two
composite constructions live here too: the divide-and-mirror defence
(split a wide board into full-height copies, then defend one copy the
opponent neglected on turn one) and boundary neutralization (claim all
but one dual edge around an opposing component so no crossing path can
ever pass through it).

run_match referees everything through game_core, so agents cannot
overclaim, exceed quotas, or play out of turn.  Every finished game is
emitted as a JSON record that replays to the same result; a fixed seed
reproduces a match byte for byte.  Games on the unbounded strip are
stopped at a turn cap, and the maker wins a capped game exactly when its
safety check held after every one of its turns.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .breaker_strips import (
    BridgitStripPlan,
    LocalStrategy,
    new_ledger,
    absorb_maker_edges,
    breaker_turn,
    phase_check,
    snapshot,
    strip_edges,
)
from .game_core import (
    Claim,
    GameResult,
    GameState,
    Move,
    Player,
    Variant,
    apply_move,
    check_secure_restrictions,
    is_superfluous,
    new_game,
    to_record,
)
from .lattice import (
    Board,
    BoardKind,
    EdgeId,
    external_boundary,
    horizontal_edge,
)
from .maker_secure import (
    double_response,
    is_secure,
    min_dual_break,
    new_secure_state,
    respond_secure,
)
from .solver import best_move
from .switching import claim_safe, fallback_edge, join_move, bridgit_setup

_SPARSE = (Variant.DOUBLE_RESPONSE, Variant.SECURE)
_BLUEISH = (Claim.BLUE, Claim.BLUE_DOUBLE)


class AgentError(ValueError):
    pass


class AgentIncompatible(AgentError):
    """The agent kind cannot play this role, variant, or board."""


class AgentKind(Enum):
    LEHMAN = "lehman"
    SECURE = "secure"
    STRIPS = "strips"
    RANDOM = "random"
    GREEDY = "greedy"
    SOLVER = "solverOptimal"
    HUMAN = "human-via-service"


@dataclass(frozen=True)
class AgentSpec:
    role: Player
    kind: AgentKind
    params: Mapping = field(default_factory=dict)


# -- shared move helpers ---------------------------------------------------


def _owed(state: GameState) -> int:
    """Edges the player to move must produce, mirroring the referee."""
    if state.variant in (Variant.CROSSING, Variant.SWITCHING):
        quota = state.p if state.turn is Player.MAKER else state.q
        remaining = state.board.edge_count() - len(state.claims)
        return min(quota, remaining)
    if state.owed is not None:
        return state.owed
    return 1


def _free_edges(state: GameState) -> list[EdgeId]:
    return [e for e in state.board.edge_set() if e not in state.claims]


def _pad(state: GameState, picks: Sequence[EdgeId], count: int) -> tuple:
    """Trim or deterministically top up a pick list to exactly count."""
    out = []
    for e in picks:
        if e not in out and e not in state.claims:
            out.append(e)
        if len(out) == count:
            return tuple(out)
    for e in _free_edges(state):
        if e not in out:
            out.append(e)
        if len(out) == count:
            break
    return tuple(out)


def _sparse_window(state: GameState, margin: int = 8) -> tuple[int, int]:
    us = [e.u for e in state.claims] or [11]
    return min(us) - margin, max(us) + margin


def _sparse_candidates(state: GameState, lo: int, hi: int) -> list[EdgeId]:
    n = state.board.n
    out = []
    for u in range(lo, hi + 1):
        for v in range(2, 2 * n + 1):
            if (u + v) % 2 == 1:
                out.append(EdgeId(u, v))
    return out


def _build_adjacency(
    edges: Iterable[EdgeId], side: Player
) -> dict[tuple, list[tuple[tuple, EdgeId]]]:
    """Vertex adjacency over the given edges: primal endpoints for the
    maker, dual endpoints for the breaker."""
    adj: dict[tuple, list[tuple[tuple, EdgeId]]] = {}
    for e in edges:
        a, b = e.endpoints() if side is Player.MAKER else e.dual_endpoints()
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    return adj


def _cheapest_crossing(
    state: GameState,
    side: Player,
    adj: dict[tuple, list[tuple[tuple, EdgeId]]],
) -> list[EdgeId]:
    """Free edges, in path order, of a cheapest not-yet-blocked crossing.

    For the maker the path runs left to right on claimed-or-free primal
    edges; for the breaker it runs bottom to top on claimed-or-free dual
    edges.  Own claims cost nothing, free edges cost one, the opponent's
    claims are impassable.  Empty when no crossing remains.
    """
    own = _BLUEISH if side is Player.MAKER else (Claim.RED,)
    claims = state.claims
    if side is Player.MAKER:
        starts = sorted(v for v in adj if v[0] == 2)
        goal_coord, goal_value = 0, 2 * state.board.m
    else:
        starts = sorted(v for v in adj if v[1] == 1)
        goal_coord, goal_value = 1, 2 * state.board.n + 1
    dist: dict[tuple, int] = {v: 0 for v in starts}
    back: dict[tuple, tuple] = {}
    dq = deque(starts)
    goal = None
    while dq:
        v = dq.popleft()
        if v[goal_coord] == goal_value:
            goal = v
            break
        base = dist[v]
        for w, e in adj.get(v, ()):
            c = claims.get(e)
            if c is not None and c not in own:
                continue
            d = base if c is not None else base + 1
            if w not in dist or d < dist[w]:
                dist[w] = d
                back[w] = (v, e)
                if d == base:
                    dq.appendleft(w)
                else:
                    dq.append(w)
    if goal is None:
        return []
    path = []
    v = goal
    while v in back:
        v, e = back[v]
        path.append(e)
    path.reverse()
    return [e for e in path if e not in claims]


# -- agents ----------------------------------------------------------------


class Agent:
    """One side of a match.  begin() binds a fresh game, move() produces
    the edges for the agent's turn given the current refereed state."""

    kind: AgentKind
    role: Player

    def __init__(self, role: Player) -> None:
        self.role = role
        self._seen = 0

    def begin(self, state: GameState, game_seed: str = "") -> None:
        self._seen = 0

    def move(self, state: GameState) -> tuple[EdgeId, ...]:
        raise NotImplementedError

    def health(self, state: GameState) -> Optional[bool]:
        """Safety verdict after this agent's move, when it has one."""
        return None

    def overlay(self) -> Optional[dict]:
        """Bookkeeping snapshot (ledger, certificates) for traces."""
        return None

    def describe(self) -> str:
        return self.kind.value

    def _opponent_edges(self, state: GameState) -> list[EdgeId]:
        """Opponent edges played since this agent last looked."""
        out = []
        for mv in state.moves[self._seen:]:
            if mv.player is not self.role:
                out.extend(mv.edges)
        self._seen = len(state.moves)
        return out


class RandomAgent(Agent):
    kind = AgentKind.RANDOM

    def __init__(self, role: Player, seed: Optional[int] = None) -> None:
        super().__init__(role)
        self.seed = seed
        self.rng = random.Random(seed)
        self._free: list[EdgeId] = []
        self._pos: dict[EdgeId, int] = {}

    def begin(self, state: GameState, game_seed: str = "") -> None:
        super().begin(state, game_seed)
        self.rng = random.Random(f"{game_seed}/{self.seed}/{self.role.value}")
        if state.board.kind is not BoardKind.INFINITE_STRIP:
            self._free = [
                e for e in state.board.edge_set() if e not in state.claims
            ]
            self._pos = {e: i for i, e in enumerate(self._free)}

    def describe(self) -> str:
        return f"random({self.seed})" if self.seed is not None else "random"

    def _discard(self, e: EdgeId) -> None:
        # swap-pop keeps removal O(1); order only feeds the rng
        i = self._pos.pop(e, None)
        if i is None:
            return
        last = self._free.pop()
        if i < len(self._free):
            self._free[i] = last
            self._pos[last] = i

    def move(self, state: GameState) -> tuple[EdgeId, ...]:
        if state.variant in _SPARSE:
            return self._sparse_turn(state)
        for mv in state.moves[self._seen:]:
            for e in mv.edges:
                self._discard(e)
        self._seen = len(state.moves)
        count = min(_owed(state), len(self._free))
        picks = tuple(
            self._free[i]
            for i in self.rng.sample(range(len(self._free)), count)
        )
        for e in picks:
            self._discard(e)
        return picks

    def _sparse_turn(self, state: GameState) -> tuple[EdgeId, ...]:
        want = 1 if state.variant is Variant.SECURE else state.q
        lo, hi = _sparse_window(state)
        pool = _sparse_candidates(state, lo, hi)
        self.rng.shuffle(pool)
        return _legal_sparse_turn(state, pool, want)


def _legal_sparse_turn(
    state: GameState, pool: Iterable[EdgeId], want: int
) -> tuple[EdgeId, ...]:
    """Greedily assemble a turn the sparse-variant referee will accept."""
    picks: list[EdgeId] = []
    working = dict(state.claims)
    probe = replace(state, claims=working)
    for e in pool:
        if len(picks) == want:
            break
        if state.variant is Variant.SECURE:
            if working.get(e) is Claim.RED:
                continue
            # conservative reading: without the certificates every blue
            # edge near a floating component counts as a path edge
            if check_secure_restrictions(probe, e) is not None:
                continue
        else:
            if e in working:
                continue
            if is_superfluous(probe, e):
                continue
        picks.append(e)
        working[e] = Claim.RED
        probe = replace(probe, claims=working)
    if not picks:
        raise AgentError("no legal sparse move found in the window")
    return tuple(picks)


class GreedyAgent(Agent):
    """Claims free edges along a cheapest remaining crossing for its side."""

    kind = AgentKind.GREEDY

    def __init__(self, role: Player) -> None:
        super().__init__(role)
        self._adj: dict = {}

    def begin(self, state: GameState, game_seed: str = "") -> None:
        super().begin(state, game_seed)
        if state.board.kind is not BoardKind.INFINITE_STRIP:
            self._adj = _build_adjacency(state.board.edge_set(), self.role)

    def move(self, state: GameState) -> tuple[EdgeId, ...]:
        if state.variant in _SPARSE:
            return self._sparse_turn(state)
        path = _cheapest_crossing(state, self.role, self._adj)
        return _pad(state, path, _owed(state))

    def _sparse_turn(self, state: GameState) -> tuple[EdgeId, ...]:
        want = 1 if state.variant is Variant.SECURE else state.q
        lo, hi = _sparse_window(state)
        pool = _sparse_candidates(state, lo, hi)
        path = _cheapest_crossing(
            state, self.role, _build_adjacency(pool, self.role)
        )
        ordered = path + [e for e in pool if e not in path]
        return _legal_sparse_turn(state, ordered, want)


class LehmanMakerAgent(Agent):
    """First-player join defence on the self-dual board: open anywhere,
    then repair every cut until the safe edges cross left to right."""

    kind = AgentKind.LEHMAN

    def __init__(self, role: Player, first_edge: Optional[EdgeId] = None):
        if role is not Player.MAKER:
            raise AgentIncompatible("the join defence plays the maker side")
        super().__init__(role)
        self.first = first_edge
        self.pos = None

    def begin(self, state: GameState, game_seed: str = "") -> None:
        super().begin(state, game_seed)
        self.pos = None
        if state.turn is not Player.MAKER:
            raise AgentIncompatible("the join defence must move first")

    def move(self, state: GameState) -> tuple[EdgeId, ...]:
        cuts = self._opponent_edges(state)
        if self.pos is None:
            first = self.first or horizontal_edge(1, 1)
            _, self.pos, _ = bridgit_setup(state.board.n, first)
            return (first,)
        picks: list[EdgeId] = []
        for cut in cuts:
            fix, self.pos = join_move(self.pos, cut)
            if fix is not None:
                picks.append(fix)
        while len(picks) < _owed(state) and self.pos.unclaimed():
            f = fallback_edge(self.pos)
            self.pos = claim_safe(self.pos, f)
            picks.append(f)
        return _pad(state, picks, _owed(state))

    def overlay(self) -> Optional[dict]:
        if self.pos is None:
            return None
        return {
            "safe": [[e.u, e.v] for e in sorted(self.pos.safe)],
            "open": len(self.pos.unclaimed()),
        }


class DivideAndMirrorAgent(Agent):
    """Breaker defence for the (p, p) game on boards of width at least
    (p+1)(n+1): tile p+1 full-height copies, pick one the maker's opening
    missed, and win it with a first-move local plan."""

    kind = AgentKind.LEHMAN

    def __init__(
        self,
        role: Player,
        p: int,
        n: int,
        plugin: Optional[Callable[[int], LocalStrategy]] = None,
    ) -> None:
        if role is not Player.BREAKER:
            raise AgentIncompatible("divide-and-mirror plays the breaker side")
        if n < 2:
            raise AgentIncompatible(f"needs strip height >= 2, got {n}")
        if p != 1 and plugin is None:
            raise AgentIncompatible(
                f"no local plan available for p={p}; supply a plugin"
            )
        super().__init__(role)
        self.p = p
        self.n = n
        self.plugin = plugin or (lambda x0: BridgitStripPlan(n, x0))
        self.copies = [1 + i * (n + 1) for i in range(p + 1)]
        self.plan: Optional[LocalStrategy] = None
        self.owned: set[EdgeId] = set()

    def describe(self) -> str:
        return "lehman(divide-and-mirror)"

    def begin(self, state: GameState, game_seed: str = "") -> None:
        super().begin(state, game_seed)
        board = state.board
        need = (self.p + 1) * (self.n + 1)
        if board.kind is not BoardKind.S or board.n != self.n:
            raise AgentIncompatible("board does not match the copy height")
        if board.m < need:
            raise AgentIncompatible(
                f"board width {board.m} below {need}, cannot tile p+1 copies"
            )
        if state.p != self.p or state.q != self.p:
            raise AgentIncompatible("divide-and-mirror defends (p, p) games")
        self.plan = None
        self.owned = set()

    def move(self, state: GameState) -> tuple[EdgeId, ...]:
        fresh = self._opponent_edges(state)
        if self.plan is None:
            taken = {e for e, c in state.claims.items() if c is not Claim.RED}
            for x0 in self.copies:
                edges = set(strip_edges(self.n, x0))
                if not (edges & taken):
                    self.owned = edges
                    self.plan = self.plugin(x0)
                    break
            else:
                raise AgentError("opening touched every copy")
        else:
            for e in fresh:
                if e in self.owned:
                    self.plan.maker_edge(e)
        picks = list(self.plan.breaker_edges()) if not self.plan.finished() else []
        # spend surplus quota outside the defended copy so the plan's
        # remaining moves stay available
        outside = [e for e in _free_edges(state) if e not in self.owned]
        return _pad(state, picks + outside, _owed(state))


class SecureMakerAgent(Agent):
    """Maker on the unbounded strip: keeps every red component wrapped in
    a certificate, answering r red edges with 2r claims."""

    kind = AgentKind.SECURE

    def __init__(self, role: Player) -> None:
        if role is not Player.MAKER:
            raise AgentIncompatible("the secure strategy plays the maker side")
        super().__init__(role)
        self.sec = None

    def begin(self, state: GameState, game_seed: str = "") -> None:
        super().begin(state, game_seed)
        board = state.board
        if board.kind is not BoardKind.INFINITE_STRIP:
            raise AgentIncompatible("the secure strategy needs the unbounded strip")
        self.sec = new_secure_state(board.n)

    def move(self, state: GameState) -> tuple[EdgeId, ...]:
        red = [e for e in self._opponent_edges(state)]
        if state.variant is Variant.SECURE:
            reply, self.sec = respond_secure(self.sec, red[0])
        else:
            reply, self.sec = double_response(self.sec, red)
        return reply

    def health(self, state: GameState) -> Optional[bool]:
        return bool(
            is_secure(self.sec)
            and min_dual_break(self.sec) == state.board.n
        )

    def overlay(self) -> Optional[dict]:
        if self.sec is None:
            return None
        board = self.sec.state.board
        return {
            "secure": is_secure(self.sec),
            "minDualBreak": min_dual_break(self.sec),
            "certificates": [
                c.to_json(board) for c in self.sec.certificates
            ],
        }


class StripsBreakerAgent(Agent):
    """Breaker for (p, q) games with p <= 2q-1 on long boards, driven by
    the strip ledger."""

    kind = AgentKind.STRIPS

    def __init__(self, role: Player) -> None:
        if role is not Player.BREAKER:
            raise AgentIncompatible("the strip ledger plays the breaker side")
        super().__init__(role)
        self.ledger = None
        self._rounds = 0

    def begin(self, state: GameState, game_seed: str = "") -> None:
        super().begin(state, game_seed)
        board = state.board
        if board.kind is not BoardKind.S:
            raise AgentIncompatible("the strip ledger needs a finite board")
        if state.p > 2 * state.q - 1:
            raise AgentIncompatible(
                f"ledger guarantees cover p <= 2q-1, got ({state.p},{state.q})"
            )
        self.ledger = new_ledger(board.n, state.q, board.m)
        self._rounds = 0

    def move(self, state: GameState) -> tuple[EdgeId, ...]:
        fresh = self._opponent_edges(state)
        self.ledger = absorb_maker_edges(self.ledger, fresh)
        if self._rounds:
            _, self.ledger = phase_check(self.ledger)
        expected = _owed(state)
        if expected < state.q:
            return _pad(state, [], expected)  # endgame scraps
        edges, self.ledger = breaker_turn(self.ledger)
        self._rounds += 1
        return tuple(edges)

    def overlay(self) -> Optional[dict]:
        return snapshot(self.ledger) if self.ledger is not None else None


class SolverAgent(Agent):
    """Plays the exact solver's move; only for boards the search can hold."""

    kind = AgentKind.SOLVER

    def __init__(self, role: Player, max_edges: int = 26) -> None:
        super().__init__(role)
        self.max_edges = max_edges

    def move(self, state: GameState) -> tuple[EdgeId, ...]:
        mv = best_move(
            state.board,
            state.p,
            state.q,
            state.claims,
            self.role,
            self.max_edges,
        )
        return _pad(state, mv, _owed(state))


def divide_and_mirror_breaker(
    p: int,
    n: int,
    plugin: Optional[Callable[[int], LocalStrategy]] = None,
) -> DivideAndMirrorAgent:
    """Breaker agent for (p, p) games on boards of width >= (p+1)(n+1).

    The built-in local plan exists for p=1; wider quotas need a plugin
    producing a first-move local strategy for a copy anchored at x0.
    """
    return DivideAndMirrorAgent(Player.BREAKER, p, n, plugin)


def make_agent(
    spec: AgentSpec, board: Board, p: int, q: int, variant: Variant
) -> Agent:
    """Build an agent, validating kind/role/variant/board compatibility."""
    kind, role, params = spec.kind, spec.role, spec.params
    finite = board.kind is not BoardKind.INFINITE_STRIP
    if kind is AgentKind.HUMAN:
        raise AgentIncompatible("the human agent lives in the play service")
    if kind is AgentKind.RANDOM:
        if variant in _SPARSE and role is Player.MAKER:
            raise AgentIncompatible("the sparse maker must play a strategy")
        return RandomAgent(role, params.get("seed"))
    if kind is AgentKind.GREEDY:
        if variant in _SPARSE and role is Player.MAKER:
            raise AgentIncompatible("the sparse maker must play a strategy")
        return GreedyAgent(role)
    if kind is AgentKind.LEHMAN:
        if variant not in (Variant.CROSSING, Variant.SWITCHING) or not finite:
            raise AgentIncompatible("join defences play finite crossing games")
        if role is Player.MAKER:
            if board.m != board.n + 1 or p != 1 or q != 1:
                raise AgentIncompatible(
                    "the maker join defence needs m = n+1 and p = q = 1"
                )
            return LehmanMakerAgent(role, params.get("first_edge"))
        if p != q:
            raise AgentIncompatible("divide-and-mirror defends (p, p) games")
        return divide_and_mirror_breaker(p, board.n, params.get("plugin"))
    if kind is AgentKind.SECURE:
        if variant not in _SPARSE or finite:
            raise AgentIncompatible(
                "the secure strategy plays sparse games on the unbounded strip"
            )
        if variant is Variant.DOUBLE_RESPONSE and (
            p != 2 * q or board.n < q + 1
        ):
            raise AgentIncompatible(
                "the double response defence plays (2q, q) at height >= q+1"
            )
        return SecureMakerAgent(role)
    if kind is AgentKind.STRIPS:
        if variant not in (Variant.CROSSING, Variant.SWITCHING) or not finite:
            raise AgentIncompatible("the strip ledger plays finite crossing games")
        return StripsBreakerAgent(role)
    if kind is AgentKind.SOLVER:
        if not finite:
            raise AgentIncompatible("the solver needs a finite board")
        max_edges = params.get("max_edges", 26)
        if len(board.edge_set()) > max_edges:
            raise AgentIncompatible(
                f"board exceeds the solver's {max_edges}-edge limit"
            )
        return SolverAgent(role, max_edges)
    raise AgentIncompatible(f"unknown agent kind {kind!r}")


# -- boundary neutralization -------------------------------------------------


def neutralize(component: Iterable[EdgeId]) -> list[EdgeId]:
    """Dual edges that wall off a connected component for good.

    All but one edge of the component's external boundary cycle, so a
    component of k edges costs at most 2k+3 claims; any crossing path
    through the component would have to cross the cycle twice but at most
    one gap remains.  The dropped edge is the lexicographically greatest.
    Raises LatticeError for empty or disconnected input.
    """
    cycle = sorted(external_boundary(component))
    return cycle[:-1]


# -- match running -----------------------------------------------------------


@dataclass(frozen=True)
class MatchReport:
    board: Board
    p: int
    q: int
    variant: Variant
    games: tuple[dict, ...]
    maker_wins: int
    breaker_wins: int
    undecided: int

    def jsonl(self) -> str:
        return "".join(
            json.dumps(g, sort_keys=True, separators=(",", ":")) + "\n"
            for g in self.games
        )


def _resolve(
    agent: Union[AgentSpec, Agent],
    role: Player,
    board: Board,
    p: int,
    q: int,
    variant: Variant,
) -> Agent:
    if isinstance(agent, AgentSpec):
        if agent.role is not role:
            raise AgentIncompatible(
                f"agent declared for {agent.role.value}, used as {role.value}"
            )
        return make_agent(agent, board, p, q, variant)
    if agent.role is not role:
        raise AgentIncompatible(
            f"agent plays {agent.role.value}, used as {role.value}"
        )
    return agent


def run_match(
    board: Board,
    p: int,
    q: int,
    maker: Union[AgentSpec, Agent],
    breaker: Union[AgentSpec, Agent],
    games: int = 1,
    seed: int = 0,
    variant: Variant = Variant.CROSSING,
    turn_cap: int = 10_000,
    out: Optional[str] = None,
    trace: bool = False,
    first_player: Optional[Player] = None,
) -> MatchReport:
    """Play a series of games to termination (or the turn cap) and report.

    Records carry everything needed to replay each game through the
    referee; reruns with the same arguments are byte-identical.
    """
    maker_agent = _resolve(maker, Player.MAKER, board, p, q, variant)
    breaker_agent = _resolve(breaker, Player.BREAKER, board, p, q, variant)
    agents = {Player.MAKER: maker_agent, Player.BREAKER: breaker_agent}
    records = []
    maker_wins = breaker_wins = undecided = 0
    for i in range(games):
        game_seed = f"{seed}:{i}"
        state = new_game(board, p, q, variant, first_player)
        maker_agent.begin(state, game_seed)
        breaker_agent.begin(state, game_seed)
        capped = False
        healthy: Optional[bool] = None
        steps: list[dict] = []
        while state.result is GameResult.ONGOING:
            if len(state.moves) >= turn_cap:
                capped = True
                break
            mover = agents[state.turn]
            edges = tuple(mover.move(state))
            state = apply_move(state, Move(mover.role, edges))
            if trace:
                steps.append(
                    {
                        "turn": len(state.moves),
                        "player": mover.role.value,
                        "edges": [[e.u, e.v] for e in edges],
                        "overlay": mover.overlay(),
                    }
                )
            if mover.role is Player.MAKER:
                check = mover.health(state)
                if check is not None:
                    healthy = check if healthy in (None, True) else False
                    if not check:
                        break

        record = to_record(state)
        record.update(
            {
                "game": i,
                "seed": game_seed,
                "maker": maker_agent.describe(),
                "breaker": breaker_agent.describe(),
                "capped": capped,
                "healthy": healthy,
            }
        )
        if trace:
            record["trace"] = steps
        records.append(record)
        if state.result is GameResult.MAKER_WIN:
            maker_wins += 1
        elif state.result is GameResult.BREAKER_WIN:
            breaker_wins += 1
        elif variant in _SPARSE and healthy is True:
            maker_wins += 1  # safety held through the whole capped game
        elif variant in _SPARSE and healthy is False:
            breaker_wins += 1
        else:
            undecided += 1
    report = MatchReport(
        board=board,
        p=p,
        q=q,
        variant=variant,
        games=tuple(records),
        maker_wins=maker_wins,
        breaker_wins=breaker_wins,
        undecided=undecided,
    )
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(report.jsonl())
    return report
