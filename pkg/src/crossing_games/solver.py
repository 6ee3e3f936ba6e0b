"""Exact game-tree search for the biased crossing game on finite boards.

The solver answers "who wins the (p, q) game with best play from this
position" by exhaustive search with a transposition table.  Positions are
canonicalized under the board's horizontal and vertical reflections, move
generation is restricted to edges that still lie on some live crossing
route (claiming anything else is equivalent to passing, which helps
neither player), and candidate edges are tried along a shortest live
route first so refutations come early.  Intended for boards up to a
couple dozen edges; the edge count is checked up front.

Also here: enumeration of the self-avoiding left-right routes of a board
(the minimal winning sets of the crossing game) and the weighted-count
criterion over those sets that certifies a Breaker win when the total
falls strictly below 1/(1+q).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Mapping, Optional, Union

from .game_core import Claim, Player
from .lattice import Board, BoardKind, EdgeId


@dataclass(frozen=True)
class SolveResult:
    winner: Player
    pv: tuple[tuple[EdgeId, ...], ...]
    nodes: int
    hits: int


class _Search:
    def __init__(self, board: Board, p: int, q: int, max_edges: int) -> None:
        if board.kind is BoardKind.INFINITE_STRIP:
            raise ValueError("solver needs a finite board")
        self.board = board
        self.p = p
        self.q = q
        self.edges = board.edge_set()
        if len(self.edges) > max_edges:
            raise ValueError(
                f"{len(self.edges)} edges exceeds the search limit {max_edges}"
            )
        self.index = {e: i for i, e in enumerate(self.edges)}
        self.full_mask = (1 << len(self.edges)) - 1
        self.adj: dict[tuple[int, int], list[tuple[tuple[int, int], int]]] = {}
        for i, e in enumerate(self.edges):
            a, b = e.endpoints()
            self.adj.setdefault(a, []).append((b, i))
            self.adj.setdefault(b, []).append((a, i))
        for lst in self.adj.values():
            lst.sort()
        self.left = sorted(v for v in self.adj if v[0] == 2)
        self.right = sorted(v for v in self.adj if v[0] == 2 * board.m)
        self.perms = self._symmetry_perms()
        self.memo: dict[tuple, Player] = {}
        self.nodes = 0
        self.hits = 0

    def _symmetry_perms(self) -> list[list[int]]:
        m, n = self.board.m, self.board.n
        perms = []
        for hflip, vflip in ((False, True), (True, False), (True, True)):
            perm = []
            ok = True
            for e in self.edges:
                u, v = e
                if hflip:
                    u = 2 * (m + 1) - u
                if vflip:
                    v = 2 * (n + 1) - v
                j = self.index.get(EdgeId(u, v))
                if j is None:
                    ok = False
                    break
                perm.append(j)
            if ok:
                perms.append(perm)
        return perms

    def _apply(self, perm: list[int], mask: int) -> int:
        out = 0
        while mask:
            low = mask & -mask
            out |= 1 << perm[low.bit_length() - 1]
            mask ^= low
        return out

    def _key(self, blue: int, red: int, turn: Player) -> tuple:
        best = (blue, red)
        for perm in self.perms:
            cand = (self._apply(perm, blue), self._apply(perm, red))
            if cand < best:
                best = cand
        return (best, turn)

    def _reach(self, mask: int, sources) -> set[tuple[int, int]]:
        seen = set(sources)
        stack = list(sources)
        while stack:
            x = stack.pop()
            for y, i in self.adj[x]:
                if mask >> i & 1 and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def _maker_crossed(self, blue: int) -> bool:
        return any(v in self.right for v in self._reach(blue, self.left))

    def _shortest_route(self, blue: int, live: int) -> int:
        """Bit mask of one cheapest live route, counting unclaimed edges."""
        INF = float("inf")
        dist: dict[tuple[int, int], float] = {v: 0 for v in self.left}
        prev: dict[tuple[int, int], tuple[tuple[int, int], int]] = {}
        dq = deque(self.left)
        while dq:
            x = dq.popleft()
            for y, i in self.adj[x]:
                if not live >> i & 1:
                    continue
                w = 0 if blue >> i & 1 else 1
                d = dist[x] + w
                if d < dist.get(y, INF):
                    dist[y] = d
                    prev[y] = (x, i)
                    if w:
                        dq.append(y)
                    else:
                        dq.appendleft(y)
        goal = min(
            (v for v in self.right if v in dist),
            key=lambda v: (dist[v], v),
            default=None,
        )
        if goal is None:
            return 0
        mask = 0
        v = goal
        while v in prev:
            v, i = prev[v]
            mask |= 1 << i
        return mask

    def _moves(self, blue: int, red: int, turn: Player) -> Iterator[int]:
        live = self.full_mask & ~red
        unclaimed = live & ~blue
        lset = self._reach(live, self.left)
        rset = self._reach(live, self.right)
        relevant = []
        for v in sorted(lset):
            for y, i in self.adj[v]:
                if unclaimed >> i & 1 and y in rset:
                    relevant.append(i)
        relevant = sorted(set(relevant))
        if not relevant:
            # claiming anything is a pass; yield one filler move
            quota = self.p if turn is Player.MAKER else self.q
            remaining = [i for i in range(len(self.edges)) if unclaimed >> i & 1]
            take = min(quota, len(remaining))
            if take:
                yield sum(1 << i for i in remaining[:take])
            return
        route = self._shortest_route(blue, live)
        ordered = sorted(relevant, key=lambda i: (0 if route >> i & 1 else 1, i))
        quota = self.p if turn is Player.MAKER else self.q
        remaining = bin(unclaimed).count("1")
        take = min(quota, remaining)
        pad = take - min(take, len(ordered))
        filler = [
            i
            for i in range(len(self.edges))
            if unclaimed >> i & 1 and i not in set(ordered)
        ]
        for combo in combinations(ordered, min(take, len(ordered))):
            mask = sum(1 << i for i in combo)
            mask |= sum(1 << i for i in filler[:pad])
            yield mask

    def win(self, blue: int, red: int, turn: Player) -> Player:
        self.nodes += 1
        if self._maker_crossed(blue):
            return Player.MAKER
        live = self.full_mask & ~red
        if not any(v in self.right for v in self._reach(live, self.left)):
            return Player.BREAKER
        key = self._key(blue, red, turn)
        cached = self.memo.get(key)
        if cached is not None:
            self.hits += 1
            return cached
        result = turn.other
        for mask in self._moves(blue, red, turn):
            if turn is Player.MAKER:
                child = self.win(blue | mask, red, turn.other)
            else:
                child = self.win(blue, red | mask, turn.other)
            if child is turn:
                result = turn
                break
        self.memo[key] = result
        return result

    def principal_variation(
        self, blue: int, red: int, turn: Player
    ) -> tuple[tuple[EdgeId, ...], ...]:
        line = []
        winner = self.win(blue, red, turn)
        while True:
            if self._maker_crossed(blue):
                break
            live = self.full_mask & ~red
            if not any(v in self.right for v in self._reach(live, self.left)):
                break
            chosen = None
            for mask in self._moves(blue, red, turn):
                if turn is not winner:
                    chosen = mask  # every reply loses; keep the first
                    break
                nb = blue | mask if turn is Player.MAKER else blue
                nr = red | mask if turn is Player.BREAKER else red
                if self.win(nb, nr, turn.other) is winner:
                    chosen = mask
                    break
            if chosen is None:
                break
            line.append(
                tuple(
                    self.edges[i]
                    for i in range(len(self.edges))
                    if chosen >> i & 1
                )
            )
            if turn is Player.MAKER:
                blue |= chosen
            else:
                red |= chosen
            turn = turn.other
        return tuple(line)


def _masks_from_claims(
    search: _Search, claims: Mapping[EdgeId, Claim]
) -> tuple[int, int]:
    blue = red = 0
    for e, c in claims.items():
        i = search.index[e]
        if c is Claim.RED:
            red |= 1 << i
        else:
            blue |= 1 << i
    return blue, red


def solve_position(
    board: Board,
    p: int,
    q: int,
    claims: Mapping[EdgeId, Claim],
    turn: Player,
    max_edges: int = 26,
) -> SolveResult:
    search = _Search(board, p, q, max_edges)
    blue, red = _masks_from_claims(search, claims)
    winner = search.win(blue, red, turn)
    nodes, hits = search.nodes, search.hits
    pv = search.principal_variation(blue, red, turn)
    return SolveResult(winner=winner, pv=pv, nodes=nodes, hits=hits)


def solve(board: Board, p: int, q: int, max_edges: int = 26) -> SolveResult:
    return solve_position(board, p, q, {}, Player.MAKER, max_edges)


def best_move(
    board: Board,
    p: int,
    q: int,
    claims: Mapping[EdgeId, Claim],
    turn: Player,
    max_edges: int = 26,
) -> tuple[EdgeId, ...]:
    result = solve_position(board, p, q, claims, turn, max_edges)
    if not result.pv:
        return ()
    return result.pv[0]


# -- crossing routes and the weighted-count test ---------------------------


def enumerate_crossing_paths(board: Board) -> list[frozenset[EdgeId]]:
    """All self-avoiding left-right routes, as edge sets.

    These are exactly the minimal claim sets that win for Maker.
    """
    if board.kind is BoardKind.INFINITE_STRIP:
        raise ValueError("route enumeration needs a finite board")
    adj: dict[tuple[int, int], list[tuple[tuple[int, int], EdgeId]]] = {}
    for e in board.edge_set():
        a, b = e.endpoints()
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    for lst in adj.values():
        lst.sort()
    right_u = 2 * board.m
    out: set[frozenset[EdgeId]] = set()

    def walk(v, visited, path):
        if v[0] == right_u:
            out.add(frozenset(path))
            return
        for y, e in adj.get(v, ()):
            if y in visited or y[0] == 2:
                continue
            visited.add(y)
            path.append(e)
            walk(y, visited, path)
            path.pop()
            visited.remove(y)

    for start in sorted(v for v in adj if v[0] == 2):
        walk(start, {start}, [])
    return sorted(out, key=lambda s: sorted(s))


@dataclass(frozen=True)
class WeightedCountReport:
    total: Union[Fraction, float]
    bound: Union[Fraction, float]
    exact: bool
    passes: bool
    sets: int


def erdos_selfridge(board: Board, p: int, q: int) -> WeightedCountReport:
    """Sum (1+q)^(-l/p) over all minimal winning sets of sizes l.

    A strict total below 1/(1+q) certifies that Breaker wins the (p, q)
    game moving second.  The sum is exact rational arithmetic whenever
    every set size is a multiple of p; otherwise floats with a safety
    margin, and near-boundary totals never pass.
    """
    paths = enumerate_crossing_paths(board)
    lengths = [len(s) for s in paths]
    if all(l % p == 0 for l in lengths):
        total = sum(
            (Fraction(1, (1 + q) ** (l // p)) for l in lengths),
            Fraction(0),
        )
        bound = Fraction(1, 1 + q)
        return WeightedCountReport(
            total=total,
            bound=bound,
            exact=True,
            passes=total < bound,
            sets=len(paths),
        )
    total = sum((1 + q) ** (-l / p) for l in lengths)
    bound = 1.0 / (1 + q)
    return WeightedCountReport(
        total=total,
        bound=bound,
        exact=False,
        passes=total < bound - 1e-12,
        sets=len(paths),
    )
