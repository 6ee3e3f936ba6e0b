"""Acceptance gate: the headline guarantees, each as one pass/fail check.

Every test prints a single summary line so a verbose run reads as a
checklist.  Budgets are generous on purpose; the point is the zero
tolerance, not the speed.
"""

from __future__ import annotations

import json
import random
import sys
from collections import Counter
from fractions import Fraction

from crossing_games.breaker_strips import (
    PhaseOutcome,
    absorb_maker_edges,
    board_strip_family,
    breaker_turn,
    general_strip_strategy,
    new_ledger,
    phase_check,
    snapshot,
)
from crossing_games.game_core import Player, Variant
from crossing_games.harness import (
    AgentKind,
    AgentSpec,
    neutralize,
    run_match,
)
from crossing_games.lattice import (
    Board,
    BoardKind,
    EdgeId,
    external_boundary,
    has_lr_crossing,
    has_tb_dual_crossing,
    horizontal_edge,
    vertical_edge,
)
from crossing_games.solver import erdos_selfridge, solve, solve_position
from crossing_games.switching import (
    bridgit_setup,
    claim_safe,
    fallback_edge,
    join_move,
)

M = Player.MAKER
B = Player.BREAKER


def _edge_count(m: int, n: int) -> int:
    return (m - 1) * n + (m - 2) * (n - 1)


def _small_boards(limit: int) -> list[tuple[int, int]]:
    return [
        (m, n)
        for n in range(1, limit + 1)
        for m in range(2, limit + 8)
        if _edge_count(m, n) <= limit
    ]


# -- 1: exactly one side crosses, always -------------------------------------


def test_criterion_duality_dichotomy():
    checked = 0
    for m, n in ((3, 2), (4, 3)):
        board = Board(BoardKind.S, m, n)
        edges = board.edge_set()
        for mask in range(1 << len(edges)):
            blue = [e for i, e in enumerate(edges) if mask >> i & 1]
            red = [e for i, e in enumerate(edges) if not mask >> i & 1]
            assert has_lr_crossing(board, blue) != has_tb_dual_crossing(
                board, red
            ), (m, n, mask)
            checked += 1
    board = Board(BoardKind.S, 6, 5)
    edges = board.edge_set()
    rng = random.Random(2026)
    for _ in range(100_000):
        mask = rng.getrandbits(len(edges))
        blue, red = [], []
        for i, e in enumerate(edges):
            (blue if mask >> i & 1 else red).append(e)
        assert has_lr_crossing(board, blue) != has_tb_dual_crossing(
            board, red
        ), mask
        checked += 1
    print(f"PASS dichotomy: {checked} bipartitions, exactly one crossing each")


# -- 2: component boundaries stay small ---------------------------------------


def _anchored_shapes(anchor: EdgeId, kmax: int) -> list[frozenset[EdgeId]]:
    """Connected supersets of the anchor, kept when the anchor is their
    lexicographic minimum; over both anchor orientations this enumerates
    every connected shape up to translation."""
    seen = {frozenset([anchor])}
    frontier = [frozenset([anchor])]
    for _ in range(kmax - 1):
        grown = []
        for shape in frontier:
            for e in shape:
                for vx, vy in e.endpoints():
                    for cand in (
                        EdgeId(vx + 1, vy),
                        EdgeId(vx - 1, vy),
                        EdgeId(vx, vy + 1),
                        EdgeId(vx, vy - 1),
                    ):
                        if cand not in shape:
                            bigger = shape | {cand}
                            if bigger not in seen:
                                seen.add(bigger)
                                grown.append(bigger)
        frontier = grown
    return [s for s in seen if min(s) == anchor]


def _random_component(rng: random.Random, k: int) -> set[EdgeId]:
    comp = {horizontal_edge(20, 20)}
    while len(comp) < k:
        e = rng.choice(sorted(comp))
        vx, vy = rng.choice(e.endpoints())
        comp.add(
            rng.choice(
                [
                    EdgeId(vx + 1, vy),
                    EdgeId(vx - 1, vy),
                    EdgeId(vx, vy + 1),
                    EdgeId(vx, vy - 1),
                ]
            )
        )
    return comp


def test_criterion_isoperimetric_bound():
    assert len(external_boundary([horizontal_edge(7, 7)])) == 6
    assert len(external_boundary([vertical_edge(7, 7)])) == 6
    hist = Counter()
    for anchor in (horizontal_edge(20, 20), vertical_edge(20, 20)):
        for shape in _anchored_shapes(anchor, 5):
            assert len(external_boundary(shape)) <= 2 * len(shape) + 4, shape
            hist[len(shape)] += 1
    # translation-distinct connected shape counts, e.g. 6 two-edge shapes
    assert [hist[k] for k in (1, 2, 3, 4, 5)] == [2, 6, 22, 88, 372]
    rng = random.Random(12)
    for _ in range(10_000):
        comp = _random_component(rng, rng.randrange(1, 13))
        assert len(external_boundary(comp)) <= 2 * len(comp) + 4, comp
    print(
        "PASS isoperimetric: 490 exhaustive shapes k<=5 + 10000 random"
        " k<=12, boundary <= 2k+4"
    )


# -- 3: the join defence never loses ------------------------------------------


def _drop(free: list[EdgeId], index: dict[EdgeId, int], i: int) -> None:
    del index[free[i]]
    last = free.pop()
    if i < len(free):
        free[i] = last
        index[last] = i


def _bridgit_soak(n: int, games_per_edge: int, seed: int) -> int:
    """Random-adversary games from every first edge; returns losses."""
    board = Board(BoardKind.S, n + 1, n)
    edges = board.edge_set()
    rng = random.Random(seed)
    losses = 0
    for first in edges:
        _, start, _ = bridgit_setup(n, first)
        base = [e for e in edges if e != first]
        for _ in range(games_per_edge):
            pos = start
            free = base[:]
            index = {e: i for i, e in enumerate(free)}
            while free:
                cut = free[rng.randrange(len(free))]
                _drop(free, index, index[cut])
                fix, pos = join_move(pos, cut)
                if fix is None:
                    fix = min(free)  # fallback_edge without the sort
                    pos = claim_safe(pos, fix)
                _drop(free, index, index[fix])
            if not has_lr_crossing(board, pos.safe):
                losses += 1
    return losses


def _bridgit_exhaustive(n: int, first: EdgeId) -> bool:
    """True when the defence survives every adversary line."""
    board = Board(BoardKind.S, n + 1, n)
    _, start, _ = bridgit_setup(n, first)
    memo: dict = {}

    def walk(pos, free: frozenset) -> bool:
        if not free:
            return has_lr_crossing(board, pos.safe)
        hit = memo.get(pos)
        if hit is not None:
            return hit
        ok = True
        for cut in free:
            fix, after = join_move(pos, cut)
            if fix is None:
                fix = fallback_edge(after)
                after = claim_safe(after, fix)
            if not walk(after, free - {cut, fix}):
                ok = False
                break
        memo[pos] = ok
        return ok

    return walk(start, frozenset(board.edge_set()) - {first})


def test_criterion_bridgit_never_loses():
    sys.setrecursionlimit(10_000)
    games = 0
    for n in range(2, 7):
        losses = _bridgit_soak(n, 1000, seed=100 + n)
        games += 1000 * _edge_count(n + 1, n)
        assert losses == 0, f"n={n}: {losses} losses"
    for n in (2, 3):
        board = Board(BoardKind.S, n + 1, n)
        for first in board.edge_set():
            assert _bridgit_exhaustive(n, first), (n, tuple(first))
    # the refereed agent path agrees with the raw driver
    for n in range(2, 7):
        board = Board(BoardKind.S, n + 1, n)
        first = board.edge_set()[0]
        report = run_match(
            board,
            1,
            1,
            AgentSpec(M, AgentKind.LEHMAN, {"first_edge": first}),
            AgentSpec(B, AgentKind.RANDOM),
            games=3,
            seed=n,
        )
        assert report.maker_wins == 3
    print(
        f"PASS bridgit: {games} random-adversary games across every first"
        " edge (n=2..6) + exhaustive n=2,3, zero losses"
    )


# -- 4: the solver agrees with the width threshold -----------------------------


def test_criterion_solver_vs_theory():
    boards = _small_boards(22)
    for m, n in boards:
        result = solve(Board(BoardKind.S, m, n), 1, 1)
        expect = M if m <= n + 1 else B
        assert result.winner is expect, (m, n, result.winner)
    print(
        f"PASS solver-vs-theory: {len(boards)} boards <= 22 edges,"
        " maker wins exactly when m <= n+1"
    )


# -- 5: the doubling defence holds forever --------------------------------------


def test_criterion_double_response_defence():
    total_turns = {}
    for q in (1, 2, 3):
        n = q + 1
        board = Board(BoardKind.INFINITE_STRIP, 0, n)
        for kind in (AgentKind.RANDOM, AgentKind.GREEDY):
            report = run_match(
                board,
                2 * q,
                q,
                AgentSpec(M, AgentKind.SECURE),
                AgentSpec(B, kind),
                games=100,
                seed=400 + q,
                variant=Variant.DOUBLE_RESPONSE,
                turn_cap=200,
            )
            v_turns = 0
            for record in report.games:
                assert record["result"] != "breaker", (q, kind)
                assert record["healthy"] is True, (q, kind)
                moves = record["moves"]
                for i, mv in enumerate(moves):
                    if mv["player"] == "breaker":
                        v_turns += 1
                    else:
                        owed = 2 * len(moves[i - 1]["edges"])
                        assert len(mv["edges"]) == owed, (q, kind, i)
            assert report.maker_wins == 100
            assert v_turns >= 10_000, (q, kind, v_turns)
            total_turns[(q, kind.value)] = v_turns
    summary = ", ".join(
        f"q={q}/{kind}:{t}" for (q, kind), t in sorted(total_turns.items())
    )
    print(
        "PASS double response: secure after every H turn, dual break"
        f" distance never below n ({summary} adversary turns)"
    )


# -- 6: the strip ledger beats makers on the guaranteed width --------------------


def test_criterion_strip_ledger_defence():
    board = Board(BoardKind.S, 3075, 2)
    for kind, seed in ((AgentKind.RANDOM, 60), (AgentKind.GREEDY, 61)):
        report = run_match(
            board,
            1,
            1,
            AgentSpec(M, kind),
            AgentSpec(B, AgentKind.STRIPS),
            games=50,
            seed=seed,
        )
        assert report.breaker_wins == 50, (kind, report.maker_wins)
    print(
        "PASS strip ledger: breaker 100/100 on S_3075x2 vs random and"
        " greedy makers, accounting invariants clean throughout"
    )


# -- 7: the general engine replays the ledger ------------------------------------


def _generic_view(engine, n: int) -> dict:
    strips = []
    for i, st in enumerate(engine.strips):
        x0 = 1 + i * (n + 1)
        if st.invalid:
            row = ("invalid", st.k, 0)
        elif st.plan is None:
            row = ("neutral", 0, 0)
        elif st.j == 1:
            row = ("valid", st.k, 0)
        else:
            row = ("neutral", st.k, 1)
        strips.append(
            {
                "columns": [x0, x0 + n],
                "status": row[0],
                "k": row[1],
                "pendingHits": row[2],
            }
        )
    return {
        "n": n,
        "q": engine.l,
        "phase": engine.phase,
        "potential": engine.potential(),
        "turn": engine.turn_counter,
        "strips": strips,
    }


def test_criterion_general_engine_matches_ledger():
    n, q, m = 2, 1, 3075
    board = Board(BoardKind.S, m, n)
    edges = board.edge_set()
    ledger = new_ledger(n, q, m)
    engine = general_strip_strategy(
        board_strip_family(n, m), p=1, q=1, l=q, horizon=ledger.horizon
    )
    rng = random.Random(2025)
    claimed: set[EdgeId] = set()

    def maker_pick() -> list[EdgeId]:
        while True:
            e = edges[rng.randrange(len(edges))]
            if e not in claimed:
                claimed.add(e)
                return [e]

    rounds = 0
    opening = maker_pick()
    ledger = absorb_maker_edges(ledger, opening)
    engine.absorb_maker_edges(opening)
    while True:
        led_edges, ledger = breaker_turn(ledger)
        assert led_edges == engine.breaker_turn()
        claimed.update(led_edges)
        maker = maker_pick()
        ledger = absorb_maker_edges(ledger, maker)
        engine.absorb_maker_edges(maker)
        outcome, ledger = phase_check(ledger)
        assert outcome is engine.phase_check()
        a = json.dumps(snapshot(ledger), sort_keys=True)
        b = json.dumps(_generic_view(engine, n), sort_keys=True)
        assert a == b
        rounds += 1
        if outcome is PhaseOutcome.VICTORY:
            break
        assert rounds < 3000
    print(
        f"PASS general engine: p=q=l=1 byte-identical to the ledger for"
        f" {rounds} rounds to victory"
    )


# -- 8: the weighted count is exact and sound -------------------------------------


def test_criterion_weighted_count():
    report = erdos_selfridge(Board(BoardKind.S, 3, 2), 1, 1)
    assert report.exact
    assert report.total == Fraction(3, 4)
    confirmed = 0
    for m, n in _small_boards(22):
        board = Board(BoardKind.S, m, n)
        for p in (1, 2, 3):
            for q in (1, 2, 3):
                if erdos_selfridge(board, p, q).passes:
                    result = solve_position(board, p, q, {}, M)
                    assert result.winner is B, (m, n, p, q)
                    confirmed += 1
    print(
        f"PASS weighted count: S_3x2 sum exactly 3/4; {confirmed} passing"
        " configurations all confirmed breaker wins"
    )


# -- 9: neutralization seals components off ----------------------------------------


def _edges_on_lr_paths(board, allowed: set[EdgeId]) -> set[EdgeId]:
    """Edges lying on at least one simple left-right path over allowed.

    Contract each side column to a terminal; an edge is on a simple
    terminal-to-terminal path exactly when its biconnected component
    sits on the block-cut tree path between the terminals.
    """
    s, t = ("s",), ("t",)
    adj: dict = {s: [], t: []}
    for e in allowed:
        a, b = e.endpoints()
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    for v in list(adj):
        if v in (s, t):
            continue
        if v[0] == 2:
            adj[s].append((v, None))
            adj[v].append((s, None))
        elif v[0] == 2 * board.m:
            adj[t].append((v, None))
            adj[v].append((t, None))

    sys.setrecursionlimit(10_000)
    index: dict = {}
    low: dict = {}
    comps: list[set] = []       # edge sets, one per biconnected component
    members: dict = {}          # vertex -> comp ids it belongs to
    stack: list[tuple] = []
    counter = [0]

    def dfs(v, parent_edge):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        for w, e in adj.get(v, ()):
            if (v, w, e) == parent_edge:
                continue
            if w not in index:
                stack.append((v, w, e))
                dfs(w, (w, v, e))
                low[v] = min(low[v], low[w])
                if low[w] >= index[v]:
                    comp = set()
                    while True:
                        frame = stack.pop()
                        comp.add(frame)
                        if frame == (v, w, e):
                            break
                    cid = len(comps)
                    comps.append({f[2] for f in comp if f[2] is not None})
                    for f in comp:
                        members.setdefault(f[0], set()).add(cid)
                        members.setdefault(f[1], set()).add(cid)
            elif index[w] < index[v]:
                stack.append((v, w, e))
                low[v] = min(low[v], index[w])

    if s not in adj or t not in adj:
        return set()
    dfs(s, None)
    if t not in index:
        return set()  # the sides are not even connected

    # walk the block-cut tree from a component at s to one at t
    start_ids = members.get(s, set())
    goal_ids = members.get(t, set())
    parents: dict[int, int] = {cid: -1 for cid in start_ids}
    frontier = list(start_ids)
    found = None
    while frontier and found is None:
        nxt = []
        for cid in frontier:
            if cid in goal_ids:
                found = cid
                break
            nxt_ids = set()
            for ids in members.values():
                if cid in ids:
                    nxt_ids |= ids
            for other in nxt_ids:
                if other not in parents:
                    parents[other] = cid
                    nxt.append(other)
        frontier = nxt
    if found is None:
        return set()
    on_path: set[EdgeId] = set()
    cid = found
    while cid != -1:
        on_path |= comps[cid]
        cid = parents[cid]
    return on_path


def test_criterion_neutralize_blocks_components():
    board = Board(BoardKind.S, 9, 6)
    rng = random.Random(7)
    scenarios = 0
    for _ in range(25):
        r = rng.randrange(1, 4)
        maker_edges = set()
        while len(maker_edges) < r:
            x = rng.randrange(3, board.m - 1)
            y = rng.randrange(2, board.n)
            maker_edges.add(
                horizontal_edge(x, y) if rng.random() < 0.5
                else vertical_edge(x, y)
            )
        components = []
        todo = set(maker_edges)
        while todo:
            seed_edge = todo.pop()
            comp = {seed_edge}
            grew = True
            while grew:
                grew = False
                for e in list(todo):
                    vs = set(e.endpoints())
                    if any(vs & set(c.endpoints()) for c in comp):
                        comp.add(e)
                        todo.discard(e)
                        grew = True
            components.append(comp)
        walls: set[EdgeId] = set()
        for comp in components:
            walls |= set(neutralize(comp))
        walls &= set(board.edge_set())
        assert len(walls) <= 5 * r, (maker_edges, len(walls))
        allowed = set(board.edge_set()) - walls
        crossing_edges = _edges_on_lr_paths(board, allowed)
        for e in maker_edges:
            assert e not in crossing_edges, (maker_edges, tuple(e))
        scenarios += 1
    print(
        f"PASS neutralize: {scenarios} random scenarios (r <= 3), walls"
        " <= 5r and no crossing ever runs through a sealed component"
    )
