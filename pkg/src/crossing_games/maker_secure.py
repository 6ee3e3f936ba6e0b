"""Sparse-strip defence: certificates that keep the tall crossing safe.

The one-edge-at-a-time game on the unbounded strip is won by restoring an
invariant, not by searching.  After every red dual edge the responder
repairs a small constellation of blue edges around the red component the
edge touched, so that each component ends the turn wrapped by a blue path
plus a reserved four-edge bracket (floating components) or by a blue arch
plus a gate edge (components touching the bottom or top of the strip).
The certificates recorded here are exactly those wrappings; everything
the responder does is a case analysis on which certified structure the
new red edge crossed.

Coordinates follow lattice.py: doubled integers, horizontal edge
(x+0.5, y) stored as (2x+1, 2y), vertical edge (x, y+0.5) as (2x, 2y+1),
dual vertices (odd, odd).  Rows run 1..n; the bottom dual row has v = 1
and the top dual row has v = 2n+1.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from .game_core import (
    Claim,
    GameState,
    Move,
    Player,
    Variant,
    apply_move,
    new_game,
)
from .lattice import (
    Board,
    BoardKind,
    ComponentClass,
    DualComponent,
    EdgeId,
    dual_components,
    horizontal_edge,
    vertical_edge,
)

DualVertex = tuple[int, int]
Vertex = tuple[int, int]

_BLUEISH = (Claim.BLUE, Claim.BLUE_DOUBLE)


class NotSecure(RuntimeError):
    """The position handed to the responder lacks a coherent certificate
    set, or a response failed to re-establish one."""


# -- brackets -------------------------------------------------------------


class BracketKind(Enum):
    T1 = "T1"
    T2 = "T2"
    T3_PLUS = "T3plus"
    T3_MINUS = "T3minus"


_REFLECTED_KIND = {
    BracketKind.T1: BracketKind.T1,
    BracketKind.T2: BracketKind.T2,
    BracketKind.T3_PLUS: BracketKind.T3_MINUS,
    BracketKind.T3_MINUS: BracketKind.T3_PLUS,
}


@dataclass(frozen=True)
class Bracket:
    """Four reserved non-red edges guarding a floating component.

    The anchor is the lower-left corner in lattice coordinates.  T1 and
    T2 span corners (x,y)..(x+2,y+2); the two T3 chiralities span
    (x,y)..(x+1,y+1), with T3plus dipping one row below its corners and
    T3minus bulging one column to the right.
    """

    kind: BracketKind
    x: int
    y: int

    @property
    def anchor(self) -> tuple[int, int]:
        return (self.x, self.y)

    @property
    def span(self) -> int:
        return 2 if self.kind in (BracketKind.T1, BracketKind.T2) else 1

    def corners(self) -> tuple[Vertex, Vertex]:
        s = self.span
        return (2 * self.x, 2 * self.y), (2 * (self.x + s), 2 * (self.y + s))

    def edges(self) -> tuple[EdgeId, EdgeId, EdgeId, EdgeId]:
        x, y = self.x, self.y
        if self.kind is BracketKind.T1:
            return (
                horizontal_edge(x, y),
                horizontal_edge(x + 1, y),
                vertical_edge(x + 2, y),
                vertical_edge(x + 2, y + 1),
            )
        if self.kind is BracketKind.T2:
            return (
                horizontal_edge(x, y),
                vertical_edge(x + 1, y),
                horizontal_edge(x + 1, y + 1),
                vertical_edge(x + 2, y + 1),
            )
        if self.kind is BracketKind.T3_PLUS:
            return (
                vertical_edge(x, y - 1),
                horizontal_edge(x, y - 1),
                vertical_edge(x + 1, y - 1),
                vertical_edge(x + 1, y),
            )
        return (
            horizontal_edge(x, y),
            horizontal_edge(x + 1, y),
            vertical_edge(x + 2, y),
            horizontal_edge(x + 1, y + 1),
        )

    def interior_duals(self) -> tuple[DualVertex, ...]:
        x, y = self.x, self.y
        if self.kind is BracketKind.T1:
            return (
                (2 * x + 1, 2 * y + 1),
                (2 * x + 3, 2 * y + 1),
                (2 * x + 3, 2 * y + 3),
            )
        if self.kind is BracketKind.T2:
            return ((2 * x + 1, 2 * y + 1), (2 * x + 3, 2 * y + 3))
        if self.kind is BracketKind.T3_PLUS:
            return ((2 * x + 1, 2 * y - 1), (2 * x + 1, 2 * y + 1))
        return ((2 * x + 1, 2 * y + 1), (2 * x + 3, 2 * y + 1))

    def edge_index(self, e: EdgeId) -> Optional[int]:
        edges = self.edges()
        return edges.index(e) if e in edges else None

    def reflection_line(self) -> int:
        """Primal constant c of the corner-swapping diagonal x + y = c."""
        return self.x + self.y + self.span

    def fits(self, board: Board) -> bool:
        return all(board.contains_edge(e) for e in self.edges())


def reflect_point(p: tuple[int, int], c: int) -> tuple[int, int]:
    """Reflect a doubled coordinate pair through the line x + y = c."""
    return (2 * c - p[1], 2 * c - p[0])


def reflect_edge(e: EdgeId, c: int) -> EdgeId:
    u, v = reflect_point((e.u, e.v), c)
    return EdgeId(u, v)


def reflect_bracket(b: Bracket, c: int) -> Bracket:
    """Reflect a bracket through x + y = c; swaps the T3 chiralities."""
    s = b.span
    return Bracket(_REFLECTED_KIND[b.kind], c - b.y - s, c - b.x - s)


# -- certificates ---------------------------------------------------------


@dataclass(frozen=True)
class Gate:
    """The single non-red escape edge of a bottom or top component.  A
    gate that is itself blue makes the component extra secure."""

    edge: EdgeId
    extra_secure: bool = False


Closure = Union[Bracket, Gate]


@dataclass(frozen=True)
class SecurityCertificate:
    """One component's wrapping: its dual vertex set, the blue path, and
    the closing structure (bracket or gate)."""

    component: frozenset[DualVertex]
    path: frozenset[EdgeId]
    closure: Closure

    @property
    def root(self) -> DualVertex:
        return min(self.component)

    def to_json(self, board: Board) -> dict:
        top = 2 * board.n + 1
        if any(v == 1 for _, v in self.component):
            cls = "bottom"
        elif any(v == top for _, v in self.component):
            cls = "top"
        else:
            cls = "floating"
        if isinstance(self.closure, Bracket):
            closure = {
                "bracket": {
                    "kind": self.closure.kind.value,
                    "anchor": [self.closure.x, self.closure.y],
                }
            }
        else:
            closure = {
                "gate": [self.closure.edge.u, self.closure.edge.v],
                "extra": self.closure.extra_secure,
            }
        return {
            "class": cls,
            "path": [[u, v] for u, v in sorted(self.path)],
            "closure": closure,
        }


@dataclass(frozen=True)
class SecureState:
    """A one-edge-game position together with one certificate per red
    component, kept sorted by component root."""

    state: GameState
    certificates: tuple[SecurityCertificate, ...]

    def cert_map(self) -> dict[DualVertex, SecurityCertificate]:
        return {c.root: c for c in self.certificates}


def new_secure_state(n: int) -> SecureState:
    """Empty position on the unbounded strip of height n >= 2."""
    if n < 2:
        raise ValueError(f"strip height must be at least 2, got {n}")
    board = Board(BoardKind.INFINITE_STRIP, 0, n)
    return SecureState(new_game(board, 2, 1, Variant.SECURE), ())


# -- validation -----------------------------------------------------------


def _blueish(state: GameState, e: EdgeId) -> bool:
    return state.claims.get(e) in _BLUEISH


def _path_shape_defects(
    path: frozenset[EdgeId], ends: tuple[Vertex, Vertex]
) -> list[str]:
    """A path must be one simple chain whose leaves are the given ends."""
    if not path:
        return ["empty path"]
    deg: dict[Vertex, int] = {}
    for e in path:
        a, b = e.endpoints()
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    leaves = sorted(v for v, d in deg.items() if d == 1)
    if any(d > 2 for d in deg.values()) or leaves != sorted(ends):
        return [f"path is not a simple chain between {ends}"]
    if len(path) != len(deg) - 1:
        return ["path has a cycle"]
    # connectivity
    adj: dict[Vertex, list[Vertex]] = {}
    for e in path:
        a, b = e.endpoints()
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = {ends[0]}
    stack = [ends[0]]
    while stack:
        p = stack.pop()
        for q in adj.get(p, ()):
            if q not in seen:
                seen.add(q)
                stack.append(q)
    if len(seen) != len(deg):
        return ["path is disconnected"]
    return []


def _dual_neighbours(n: int, p: DualVertex) -> list[tuple[DualVertex, EdgeId]]:
    """Dual grid steps from p with the board edge each one crosses."""
    u, v = p
    out = []
    if v + 1 <= 2 * n:  # upward, across a horizontal edge
        out.append(((u, v + 2), EdgeId(u, v + 1)))
    if v - 1 >= 2:
        out.append(((u, v - 2), EdgeId(u, v - 1)))
    if 3 <= v <= 2 * n - 1:  # sideways, across vertical edges
        out.append(((u + 2, v), EdgeId(u + 1, v)))
        out.append(((u - 2, v), EdgeId(u - 1, v)))
    return out


def _escapes(
    n: int,
    barrier: frozenset[EdgeId],
    targets: Iterable[DualVertex],
    stop_bottom: bool,
    stop_top: bool,
) -> bool:
    """True if some target can reach a forbidden boundary row without
    stepping across a barrier edge.

    Escaping the x-window of the barrier and targets counts as reaching
    both rows, since nothing blocks the way out there.
    """
    targets = set(targets)
    us = [u for u, _ in targets]
    for e in barrier:
        us.extend(p[0] for p in e.dual_endpoints())
    lo, hi = min(us) - 2, max(us) + 2
    top = 2 * n + 1
    seen: set[DualVertex] = set(targets)
    stack: list[DualVertex] = list(targets)
    while stack:
        p = stack.pop()
        if p[0] <= lo or p[0] >= hi:
            return True
        for q, crossing in _dual_neighbours(n, p):
            if crossing in barrier or q in seen:
                continue
            if stop_bottom and q[1] == 1:
                return True
            if stop_top and q[1] == top:
                return True
            seen.add(q)
            stack.append(q)
    return False


def _certificate_defects(
    state: GameState, comp: DualComponent, cert: SecurityCertificate
) -> list[str]:
    """All the ways cert fails to secure comp, empty when it does."""
    board = state.board
    n = board.n
    defects: list[str] = []
    if cert.component != comp.vertices:
        return [f"certificate covers {sorted(cert.component)[:3]}..., "
                f"component is {sorted(comp.vertices)[:3]}..."]
    for e in cert.path:
        if not _blueish(state, e):
            defects.append(f"path edge {tuple(e)} is not blue")
        if not (set(e.dual_endpoints()) & comp.vertices):
            defects.append(f"path edge {tuple(e)} does not touch the component")
    if defects:
        return defects

    if comp.kind is ComponentClass.FLOATING:
        if not isinstance(cert.closure, Bracket):
            return ["floating component closed by a gate"]
        bracket = cert.closure
        if not bracket.fits(board):
            return [f"bracket {bracket.kind.value}@{bracket.anchor} off board"]
        for e in bracket.edges():
            if state.claims.get(e) is Claim.RED:
                defects.append(f"bracket edge {tuple(e)} is red")
        if not set(bracket.interior_duals()) <= comp.vertices:
            defects.append("bracket interior duals outside the component")
        defects += _path_shape_defects(cert.path, bracket.corners())
        if defects:
            return defects
        barrier = frozenset(cert.path) | frozenset(bracket.edges())
        if _escapes(n, barrier, comp.vertices, True, True):
            defects.append("component not enclosed by path plus bracket")
        return defects

    if comp.kind is ComponentClass.TOP_AND_BOTTOM:
        return ["component joins top and bottom"]

    if not isinstance(cert.closure, Gate):
        return ["boundary component closed by a bracket"]
    gate = cert.closure.edge
    if state.claims.get(gate) is Claim.RED:
        return [f"gate {tuple(gate)} is red"]
    gate_blue = _blueish(state, gate)
    if cert.closure.extra_secure != gate_blue:
        defects.append("extra-secure flag disagrees with the gate's claim")

    if comp.kind is ComponentClass.BOTTOM:
        gate_row = 3
        boundary = [p for p in comp.vertices if p[1] == 1]
    else:
        gate_row = 2 * n - 1
        boundary = [p for p in comp.vertices if p[1] == 2 * n + 1]
    if len(boundary) != 1:
        return [f"component must touch its boundary row exactly once, "
                f"found {len(boundary)} contacts"]
    xr = (boundary[0][0] - 1) // 2
    if not (gate.u % 2 == 0 and gate.v == gate_row):
        return [f"gate {tuple(gate)} is not a boundary-row vertical edge"]
    xg = gate.u // 2
    if xg < xr + 1:
        defects.append("gate sits at or left of the boundary contact")
    if xg > xr + 1 and not gate_blue:
        defects.append("distant gate must be blue")
    if comp.kind is ComponentClass.BOTTOM:
        ends = ((2 * xg, 4), (2 * xr, 2))
    else:
        ends = ((2 * xg, 2 * n - 2), (2 * xr, 2 * n))
    defects += _path_shape_defects(cert.path, ends)
    if defects:
        return defects
    barrier = frozenset(cert.path) | {gate}
    stop_bottom = comp.kind is ComponentClass.TOP
    if _escapes(n, barrier, comp.vertices, stop_bottom, not stop_bottom):
        defects.append("component not enclosed by path plus gate")
    return defects


def secure_defects(sec: SecureState) -> list[str]:
    """Every reason the position is not secure; empty when it is."""
    state = sec.state
    comps = dual_components(state.board, state.red_edges())
    cmap = sec.cert_map()
    defects: list[str] = []
    matched: set[DualVertex] = set()
    for comp in comps:
        cert = cmap.get(comp.root)
        if cert is None:
            defects.append(f"component rooted at {comp.root} has no certificate")
            continue
        matched.add(comp.root)
        defects += _certificate_defects(state, comp, cert)
    for root in sorted(set(cmap) - matched):
        defects.append(f"certificate rooted at {root} matches no component")
    certs = sorted(sec.certificates, key=lambda c: c.root)
    for i, a in enumerate(certs):
        for b in certs[i + 1:]:
            for e in sorted(a.path & b.path):
                if state.claims.get(e) is not Claim.BLUE_DOUBLE:
                    defects.append(
                        f"shared path edge {tuple(e)} is not doubled"
                    )
    return defects


def is_secure(sec: SecureState) -> bool:
    """Recompute the components and validate every certificate."""
    return not secure_defects(sec)


# -- responder ------------------------------------------------------------


def _fallback_edges(
    state: GameState, count: int, taken: set[EdgeId]
) -> list[EdgeId]:
    """Deterministic harmless filler: the least unclaimed edges beyond
    distance two from every red dual vertex."""
    if count <= 0:
        return []
    n = state.board.n
    red_duals: set[DualVertex] = set()
    for e, claim in state.claims.items():
        if claim is Claim.RED:
            red_duals.update(e.dual_endpoints())
    def far_enough(e: EdgeId) -> bool:
        return all(
            max(abs(pu - ru), abs(pv - rv)) > 4
            for pu, pv in e.dual_endpoints()
            for ru, rv in red_duals
        )

    anchor = min((e.u for e in state.claims), default=0)
    out: list[EdgeId] = []
    u = anchor - 6
    while len(out) < count:  # march left, away from the play region
        if u % 2 == 1:
            rows: Iterable[int] = range(2, 2 * n + 1, 2)
        else:
            rows = range(3, 2 * n, 2)
        for v in rows:
            e = EdgeId(u, v)
            if e in state.claims or e in taken or not far_enough(e):
                continue
            out.append(e)
            taken.add(e)
            if len(out) == count:
                break
        u -= 1
    return out


def _bfs_path(
    pool: Iterable[EdgeId], start: Vertex, goal: Vertex
) -> Optional[frozenset[EdgeId]]:
    adj: dict[Vertex, list[tuple[Vertex, EdgeId]]] = {}
    for e in sorted(set(pool)):
        a, b = e.endpoints()
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    if start not in adj or goal not in adj:
        return None
    prev: dict[Vertex, tuple[Vertex, EdgeId]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        if p == goal:
            edges = set()
            while p != start:
                q, e = prev[p]
                edges.add(e)
                p = q
            return frozenset(edges)
        for q, e in adj[p]:
            if q not in seen:
                seen.add(q)
                prev[q] = (p, e)
                queue.append(q)
    return None


@dataclass
class _Plan:
    """What the dispatch decided: edges to claim now, the merged
    component, its closure, and the edge pool the new path may use."""

    listed: list[EdgeId]
    component: frozenset[DualVertex]
    closure: Closure
    pool: set[EdgeId]


def _path_targets(
    closure: Closure, component: frozenset[DualVertex], n: int
) -> tuple[Vertex, Vertex]:
    if isinstance(closure, Bracket):
        return closure.corners()
    gate = closure.edge
    xg = gate.u // 2
    bottoms = [p for p in component if p[1] == 1]
    tops = [p for p in component if p[1] == 2 * n + 1]
    if bottoms and not tops:
        if len(bottoms) != 1:
            raise NotSecure("bottom component without a unique contact")
        xr = (bottoms[0][0] - 1) // 2
        return ((2 * xg, 4), (2 * xr, 2))
    if tops and not bottoms:
        if len(tops) != 1:
            raise NotSecure("top component without a unique contact")
        xr = (tops[0][0] - 1) // 2
        return ((2 * xg, 2 * n - 2), (2 * xr, 2 * n))
    raise NotSecure("gated component must touch exactly one boundary row")


def _build_certificate(
    state: GameState, plan: _Plan
) -> SecurityCertificate:
    """Choose the path from the plan's pool and validate the result."""
    n = state.board.n
    closure = plan.closure
    if isinstance(closure, Gate):
        # the chosen gate may already be blue (another certificate's
        # path edge or an old filler); the flag must say so
        closure = Gate(closure.edge, _blueish(state, closure.edge))
        closure_edges = {closure.edge}
    else:
        closure_edges = set(closure.edges())
    start, goal = _path_targets(closure, plan.component, n)
    blue = {e for e in plan.pool if _blueish(state, e)}
    wide = {
        e
        for e, claim in state.claims.items()
        if claim in _BLUEISH and set(e.dual_endpoints()) & plan.component
    }
    comp = _component_of(state, plan.component)
    for pool in (blue - closure_edges, blue, wide - closure_edges, wide):
        path = _bfs_path(pool, start, goal)
        if path is None:
            continue
        cert = SecurityCertificate(plan.component, path, closure)
        if not _certificate_defects(state, comp, cert):
            return cert
    raise NotSecure(
        f"no valid securing path between {start} and {goal}"
    )


def _component_of(
    state: GameState, vertices: frozenset[DualVertex]
) -> DualComponent:
    for comp in dual_components(state.board, state.red_edges()):
        if comp.vertices == vertices:
            return comp
    raise NotSecure("planned component does not match the board")


def _loop_edges(v2: DualVertex, broken: EdgeId) -> list[EdgeId]:
    """The three other board edges whose duals meet v2."""
    u, v = v2
    ring = [EdgeId(u, v - 1), EdgeId(u, v + 1), EdgeId(u - 1, v), EdgeId(u + 1, v)]
    return [e for e in ring if e != broken]


def _h(x: int, y: int) -> EdgeId:
    return horizontal_edge(x, y)


def _v(x: int, y: int) -> EdgeId:
    return vertical_edge(x, y)


# Responses to a red edge across a floating bracket, away from the strip
# boundary.  Keyed by (kind, edge index); values take the bracket anchor
# and give H's claims plus the replacement bracket.
_BRACKET_MOVES = {
    (BracketKind.T1, 0): lambda x, y: (
        [_v(x, y - 1), _v(x + 2, y + 1)],
        Bracket(BracketKind.T2, x, y - 1),
    ),
    (BracketKind.T1, 1): lambda x, y: (
        [_h(x, y), _v(x + 2, y + 1)],
        Bracket(BracketKind.T3_PLUS, x + 1, y),
    ),
    (BracketKind.T2, 0): lambda x, y: (
        [_h(x + 1, y + 1), _v(x + 2, y + 1)],
        Bracket(BracketKind.T3_PLUS, x, y),
    ),
    (BracketKind.T2, 1): lambda x, y: (
        [],
        Bracket(BracketKind.T1, x, y),
    ),
    (BracketKind.T3_PLUS, 0): lambda x, y: (
        [_h(x - 1, y), _v(x - 1, y - 1)],
        Bracket(BracketKind.T1, x - 1, y - 1),
    ),
    (BracketKind.T3_PLUS, 1): lambda x, y: (
        [_v(x, y - 1), _v(x + 1, y)],
        Bracket(BracketKind.T3_PLUS, x, y - 1),
    ),
    (BracketKind.T3_PLUS, 2): lambda x, y: (
        [_v(x, y - 1), _v(x + 1, y)],
        Bracket(BracketKind.T3_MINUS, x, y - 1),
    ),
    (BracketKind.T3_PLUS, 3): lambda x, y: (
        [_v(x, y - 1), _h(x + 1, y + 1)],
        Bracket(BracketKind.T2, x, y - 1),
    ),
}

# Two brackets sharing the edge that was just crossed: canonical form has
# the first bracket of kind T3plus at (x, y) with its lowest vertical edge
# crossed.  Keyed by the second bracket's kind and anchor offset.
_PAIR_MOVES = {
    (BracketKind.T1, -2, -2): lambda x, y: (
        [_h(x - 2, y - 2), _v(x + 1, y)],
        Bracket(BracketKind.T2, x - 1, y - 2),
    ),
    (BracketKind.T1, -2, -1): lambda x, y: (
        [_h(x - 2, y - 1)],
        Bracket(BracketKind.T1, x - 1, y - 1),
    ),
    (BracketKind.T2, -2, -2): lambda x, y: (
        [_h(x - 2, y - 2), _v(x - 1, y - 2)],
        Bracket(BracketKind.T1, x - 1, y - 1),
    ),
    (BracketKind.T3_PLUS, -1, -1): lambda x, y: (
        [_v(x - 1, y - 2), _v(x + 1, y)],
        Bracket(BracketKind.T2, x - 1, y - 2),
    ),
    (BracketKind.T3_PLUS, -1, 0): lambda x, y: (
        [_v(x - 1, y - 1)],
        Bracket(BracketKind.T1, x - 1, y - 1),
    ),
    (BracketKind.T3_MINUS, -2, -1): lambda x, y: (
        [_h(x - 2, y - 1), _h(x - 1, y)],
        Bracket(BracketKind.T1, x - 1, y - 1),
    ),
}


def _bracket_move(
    bracket: Bracket, e: EdgeId
) -> tuple[list[EdgeId], Bracket]:
    """Floating response for a red edge across one bracket edge."""
    idx = bracket.edge_index(e)
    if idx is None:
        raise NotSecure(f"edge {tuple(e)} is not on the bracket")
    key = (bracket.kind, idx)
    if key in _BRACKET_MOVES:
        listed, nxt = _BRACKET_MOVES[key](bracket.x, bracket.y)
        return list(listed), nxt
    # the remaining subcases are the diagonal mirror images of the above
    c = bracket.reflection_line()
    mirrored = reflect_bracket(bracket, c)
    listed, nxt = _bracket_move(mirrored, reflect_edge(e, c))
    return [reflect_edge(f, c) for f in listed], reflect_bracket(nxt, c)


def _pair_move(
    first: Bracket, second: Bracket, e: EdgeId
) -> Optional[tuple[list[EdgeId], Bracket]]:
    """Response when e lies on the brackets of two distinct components,
    tried with `first` as the canonical T3plus."""
    if first.kind is BracketKind.T3_PLUS:
        if e != first.edges()[0]:
            return None
        key = (second.kind, second.x - first.x, second.y - first.y)
        maker = _PAIR_MOVES.get(key)
        if maker is None:
            return None
        listed, nxt = maker(first.x, first.y)
        return list(listed), nxt
    if first.kind is BracketKind.T3_MINUS:
        c = first.reflection_line()
        res = _pair_move(
            reflect_bracket(first, c), reflect_bracket(second, c),
            reflect_edge(e, c),
        )
        if res is None:
            return None
        listed, nxt = res
        return [reflect_edge(f, c) for f in listed], reflect_bracket(nxt, c)
    return None


def _dispatch(
    sec: SecureState, e: EdgeId
) -> _Plan:
    """Decide H's claims and the replacement certificate for V's edge e.

    Certificates of components untouched by e stay as they are; the plan
    covers only the component(s) whose structures e crossed.
    """
    state = sec.state
    n = state.board.n
    d1, d2 = e.dual_endpoints()
    comps = dual_components(state.board, state.red_edges())
    owner: dict[DualVertex, DualComponent] = {}
    for comp in comps:
        for p in comp.vertices:
            owner[p] = comp
    cmap = sec.cert_map()
    for comp in comps:
        if comp.root not in cmap:
            raise NotSecure(f"component rooted at {comp.root} lacks a certificate")
    c1 = owner.get(d1)
    c2 = owner.get(d2)

    if c1 is None and c2 is None:
        merged = frozenset((d1, d2))
        if e.is_horizontal and e.v == 2:  # touches the bottom dual row
            x = (e.u - 1) // 2
            return _Plan(
                [_v(x, 1), _h(x, 2)],
                merged,
                Gate(_v(x + 1, 1)),
                {_v(x, 1), _h(x, 2)},
            )
        if e.is_horizontal and e.v == 2 * n:  # touches the top dual row
            x = (e.u - 1) // 2
            return _Plan(
                [_v(x, n - 1), _h(x, n - 1)],
                merged,
                Gate(_v(x + 1, n - 1)),
                {_v(x, n - 1), _h(x, n - 1)},
            )
        if e.is_horizontal:
            x, y = (e.u - 1) // 2, e.v // 2
            listed = [_v(x, y), _h(x, y + 1)]
            return _Plan(
                listed, merged, Bracket(BracketKind.T3_PLUS, x, y), set(listed)
            )
        x, y = e.u // 2, (e.v - 1) // 2
        listed = [_v(x - 1, y), _h(x - 1, y + 1)]
        return _Plan(
            listed, merged, Bracket(BracketKind.T3_MINUS, x - 1, y), set(listed)
        )

    if c1 is not None and c2 is not None:
        return _dispatch_join(e, cmap[c1.root], cmap[c2.root])

    comp = c1 if c1 is not None else c2
    v2 = d2 if c1 is not None else d1
    assert comp is not None
    return _dispatch_extend(sec, e, cmap[comp.root], comp, v2)


def _dispatch_extend(
    sec: SecureState,
    e: EdgeId,
    cert: SecurityCertificate,
    comp: DualComponent,
    v2: DualVertex,
) -> _Plan:
    """One endpoint of e sits in a certified component, the other is new."""
    state = sec.state
    n = state.board.n
    top = 2 * n + 1
    merged = comp.vertices | {v2}
    closure = cert.closure

    if isinstance(closure, Bracket) and closure.edge_index(e) is not None:
        return _dispatch_bracket_crossing(cert, closure, e, v2, merged, n)

    if isinstance(closure, Gate) and e == closure.edge:
        xg = e.u // 2
        if any(p[1] == 1 for p in comp.vertices):  # bottom gate
            listed = [_h(xg, 2), _v(xg + 1, 1)]
            return _Plan(
                listed, merged, Gate(_v(xg + 1, 1), extra_secure=True),
                set(cert.path) | {_h(xg, 2)},
            )
        listed = [_h(xg, n - 1), _v(xg + 1, n - 1)]
        return _Plan(
            listed, merged, Gate(_v(xg + 1, n - 1), extra_secure=True),
            set(cert.path) | {_h(xg, n - 1)},
        )

    if e in cert.path:
        if v2[1] in (1, top):
            raise NotSecure("blue path broken toward a boundary row")
        listed = _loop_edges(v2, e)
        return _Plan(
            listed, merged, closure, (set(cert.path) - {e}) | set(listed)
        )

    # e stayed inside the certified region: nothing to repair
    return _Plan([], merged, closure, set(cert.path))


def _dispatch_bracket_crossing(
    cert: SecurityCertificate,
    bracket: Bracket,
    e: EdgeId,
    v2: DualVertex,
    merged: frozenset[DualVertex],
    n: int,
) -> _Plan:
    x, y = bracket.x, bracket.y
    kind = bracket.kind
    idx = bracket.edge_index(e)
    pool = set(cert.path)

    if v2[1] == 1:  # the red edge dived to the bottom dual row
        if kind is BracketKind.T1 and y == 1 and idx == 0:
            listed = [_v(x + 2, 1), _v(x + 2, 2)]
            return _Plan(
                listed, merged, Gate(_v(x + 2, 1), extra_secure=True),
                pool | {_v(x + 2, 2)},
            )
        if kind is BracketKind.T1 and y == 1 and idx == 1:
            listed = [_v(x + 2, 2), _h(x, 1)]
            return _Plan(
                listed, merged, Gate(_v(x + 2, 1)), pool | set(listed)
            )
        if kind is BracketKind.T2 and y == 1 and idx == 0:
            listed = [_h(x + 1, 2), _v(x + 2, 2)]
            return _Plan(
                listed, merged, Gate(_v(x + 1, 1)), pool | set(listed)
            )
        if kind is BracketKind.T3_PLUS and y == 2 and idx == 1:
            # The path drops to (x,1) on the left and meets the gate row
            # from (x+1,2); written out directly because the staircase
            # pattern of the floating subcases does not apply this close
            # to the boundary.
            listed = [_v(x, 1), _v(x + 1, 2)]
            return _Plan(
                listed, merged, Gate(_v(x + 1, 1)), pool | set(listed)
            )
        if kind is BracketKind.T3_MINUS and y == 1 and idx == 0:
            listed = [_h(x + 1, 2), _v(x + 2, 1)]
            return _Plan(
                listed, merged, Gate(_v(x + 2, 1), extra_secure=True),
                pool | {_h(x + 1, 2)},
            )
        if kind is BracketKind.T3_MINUS and y == 1 and idx == 1:
            listed = [_h(x, 1), _h(x + 1, 2)]
            return _Plan(
                listed, merged, Gate(_v(x + 2, 1)), pool | set(listed)
            )
        raise NotSecure(f"unexpected dive to the bottom row across {tuple(e)}")

    if v2[1] == 2 * n + 1:  # the red edge climbed to the top dual row
        if kind is BracketKind.T3_MINUS and y == n - 1 and idx == 3:
            listed = [_h(x, n - 1), _h(x + 1, n - 1)]
            return _Plan(
                listed, merged, Gate(_v(x + 2, n - 1)), pool | set(listed)
            )
        raise NotSecure(f"unexpected climb to the top row across {tuple(e)}")

    listed, nxt = _bracket_move(bracket, e)
    return _Plan(listed, merged, nxt, pool | set(listed))


def _dispatch_join(
    e: EdgeId,
    cert1: SecurityCertificate,
    cert2: SecurityCertificate,
) -> _Plan:
    """Both endpoints of e already sit in certified components."""
    merged = cert1.component | cert2.component
    in_p1, in_p2 = e in cert1.path, e in cert2.path
    b1 = cert1.closure if isinstance(cert1.closure, Bracket) else None
    b2 = cert2.closure if isinstance(cert2.closure, Bracket) else None
    g1 = cert1.closure if isinstance(cert1.closure, Gate) else None
    g2 = cert2.closure if isinstance(cert2.closure, Gate) else None
    on_b1 = b1 is not None and b1.edge_index(e) is not None
    on_b2 = b2 is not None and b2.edge_index(e) is not None
    on_g1 = g1 is not None and e == g1.edge
    on_g2 = g2 is not None and e == g2.edge

    if in_p1 and in_p2:
        if b1 is None or b2 is None:
            raise NotSecure("shared path edge on a boundary component")
        first, second = (
            (cert1, cert2) if cert1.root <= cert2.root else (cert2, cert1)
        )
        fb = first.closure
        sb = second.closure
        assert isinstance(fb, Bracket) and isinstance(sb, Bracket)
        listed = list(fb.edges())
        pool = (set(cert1.path) | set(cert2.path) | set(fb.edges())) - {e}
        return _Plan(listed, merged, sb, pool)

    if (in_p1 and on_g2) or (in_p2 and on_g1):
        raise NotSecure("a gate cannot double as another component's path")

    if (in_p1 and on_b2) or (in_p2 and on_b1):
        keeper, crossed = (cert1, b2) if in_p1 else (cert2, b1)
        assert crossed is not None
        listed = [f for f in crossed.edges() if f != e]
        pool = (set(cert1.path) | set(cert2.path) | set(listed)) - {e}
        return _Plan(listed, merged, keeper.closure, pool)

    if (on_g1 or on_b1) and (on_g2 or on_b2):
        if on_g1 and on_g2:
            raise NotSecure("two gates cannot share an edge")
        if on_g1 or on_g2:
            gate_cert = cert1 if on_g1 else cert2
            bracket = b2 if on_g1 else b1
            gate = gate_cert.closure
            assert isinstance(gate, Gate) and bracket is not None
            if not any(p[1] == 1 for p in gate_cert.component):
                raise NotSecure("a top gate cannot meet a bracket")
            xg = gate.edge.u // 2
            if (bracket.kind, bracket.x, bracket.y) != (
                BracketKind.T3_PLUS, xg, 2
            ):
                raise NotSecure("gate crossed by an incompatible bracket")
            listed = [_v(xg + 1, 1), _v(xg + 1, 2)]
            pool = set(cert1.path) | set(cert2.path) | {_v(xg + 1, 2)}
            return _Plan(
                listed, merged, Gate(_v(xg + 1, 1), extra_secure=True), pool
            )
        assert b1 is not None and b2 is not None
        res = _pair_move(b1, b2, e)
        if res is None:
            res = _pair_move(b2, b1, e)
        if res is None:
            raise NotSecure(
                f"no bracket pairing covers {tuple(e)} between "
                f"{b1.kind.value}@{b1.anchor} and {b2.kind.value}@{b2.anchor}"
            )
        listed, nxt = res
        pool = (set(cert1.path) | set(cert2.path) | set(listed)) - {e}
        return _Plan(listed, merged, nxt, pool)

    raise NotSecure(
        f"edge {tuple(e)} joins two components without crossing "
        "their certified structures"
    )


def _refresh_gate_flags(
    state: GameState, certs: Iterable[SecurityCertificate]
) -> tuple[SecurityCertificate, ...]:
    """A claim may have landed on someone's gate; keep the flags honest."""
    out = []
    for cert in certs:
        closure = cert.closure
        if isinstance(closure, Gate):
            blue = _blueish(state, closure.edge)
            if closure.extra_secure != blue:
                cert = replace(cert, closure=Gate(closure.edge, blue))
        out.append(cert)
    return tuple(sorted(out, key=lambda c: c.root))


def respond_secure(
    sec: SecureState, e: EdgeId
) -> tuple[tuple[EdgeId, ...], SecureState]:
    """Apply V's red edge e and H's repair claims.

    Returns H's claimed edges (exactly b+2 of them, where b counts the
    blue claims broken by e) together with the next secure position.
    Raises game_core.SecureRestrictionViolated for an illegal e and
    NotSecure when the position or the repair is inconsistent.
    """
    state = sec.state
    floating_paths = [
        (cert.component, cert.path)
        for cert in sec.certificates
        if isinstance(cert.closure, Bracket)
    ]
    after_v = apply_move(
        state, Move(Player.BREAKER, (e,)), securing_paths=floating_paths
    )
    plan = _dispatch(sec, e)
    owed = after_v.owed or 0
    listed = list(plan.listed)
    if len(listed) > owed:
        raise NotSecure(
            f"dispatch wants {len(listed)} edges but only {owed} are owed"
        )
    taken = set(listed)
    claims = [
        f for f in listed
        if after_v.claims.get(f) is not Claim.BLUE_DOUBLE
    ]
    for f in claims:
        if after_v.claims.get(f) is Claim.RED:
            raise NotSecure(f"prescribed claim {tuple(f)} is already red")
    fillers = _fallback_edges(after_v, owed - len(claims), taken)
    move_edges = tuple(claims + fillers)
    after_h = apply_move(after_v, Move(Player.MAKER, move_edges))

    kept = [
        cert
        for cert in sec.certificates
        if not (cert.component & plan.component)
    ]
    new_cert = _build_certificate(after_h, plan)
    certs = _refresh_gate_flags(after_h, kept + [new_cert])
    return move_edges, SecureState(after_h, certs)


# -- turn bundling --------------------------------------------------------


def order_moves(
    sec: SecureState, moves: Iterable[EdgeId]
) -> tuple[EdgeId, ...]:
    """Order V's turn so edges of each boundary-touching component come
    root-first; this is what keeps the sequential replay legal."""
    state = sec.state
    todo = sorted(set(moves))
    combined = list(state.red_edges()) + todo
    comps = dual_components(state.board, combined)
    top = 2 * state.board.n + 1
    rank: dict[EdgeId, int] = {}
    far = 10 ** 9
    for comp in comps:
        if comp.kind is ComponentClass.BOTTOM:
            roots = [p for p in comp.vertices if p[1] == 1]
        elif comp.kind is ComponentClass.TOP:
            roots = [p for p in comp.vertices if p[1] == top]
        elif comp.kind is ComponentClass.TOP_AND_BOTTOM:
            roots = [min(comp.vertices)]
        else:
            for e in comp.edges:
                if e in todo:
                    rank[e] = far
            continue
        adj: dict[DualVertex, list[DualVertex]] = {}
        for e in comp.edges:
            a, b = e.dual_endpoints()
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        dist = {p: 0 for p in roots}
        queue = deque(roots)
        while queue:
            p = queue.popleft()
            for q in adj.get(p, ()):
                if q not in dist:
                    dist[q] = dist[p] + 1
                    queue.append(q)
        for e in comp.edges:
            if e in todo:
                a, b = e.dual_endpoints()
                rank[e] = min(dist.get(a, far), dist.get(b, far))
    return tuple(sorted(todo, key=lambda e: (rank.get(e, far), e)))


def double_response(
    sec: SecureState, moves: Sequence[EdgeId]
) -> tuple[tuple[EdgeId, ...], SecureState]:
    """Answer a whole turn of r red dual edges with exactly 2r claims.

    The edges are replayed one at a time through respond_secure on an
    auxiliary position; a later red edge may break blue claims made
    earlier in the same replay, and those drop out of the answer.  The
    surviving claims are topped up with fallback edges so the real-board
    reply always has exactly 2r distinct, never-red edges.
    """
    todo = order_moves(sec, moves)
    r = len(todo)
    aux = sec
    events: list[EdgeId] = []
    for e in todo:
        if sec.state.claims.get(e) is not None:
            raise NotSecure(f"turn edge {tuple(e)} was already claimed")
        events = [f for f in events if f != e]
        claimed, aux = respond_secure(aux, e)
        events.extend(claimed)
    reply: list[EdgeId] = []
    taken: set[EdgeId] = set()
    for f in events:
        if f in taken:
            continue
        taken.add(f)
        reply.append(f)
    fillers = _fallback_edges(aux.state, 2 * r - len(reply), set(taken))
    return tuple(reply + fillers), aux


# -- safety metric --------------------------------------------------------


def min_dual_break(state: Union[SecureState, GameState]) -> int:
    """Fewest extra red dual edges V needs for a top-bottom crossing,
    capped at the strip height n.

    Existing red edges cost nothing to walk, unclaimed edges cost one,
    and blue or doubled edges cannot be crossed at all.  An empty board
    scores exactly n; any secure position scores at least n.
    """
    st = state.state if isinstance(state, SecureState) else state
    n = st.board.n
    top = 2 * n + 1
    if not st.claims:
        return n
    us = [e.u for e in st.claims]
    pad = 2 * (n + 2)
    lo, hi = min(us) - pad, max(us) + pad
    infinity = n + 1
    dist: dict[DualVertex, int] = {}
    queue: deque[tuple[int, DualVertex]] = deque()
    for u in range(lo, hi + 1):
        if u % 2 == 1:
            p = (u, 1)
            dist[p] = 0
            queue.append((0, p))
    best = infinity
    while queue:
        d, p = queue.popleft()
        if d > dist.get(p, infinity):
            continue
        if p[1] == top:
            best = min(best, d)
            continue
        if d >= n:
            continue
        for q, crossing in _dual_neighbours(n, p):
            if not (lo <= q[0] <= hi):
                continue
            claim = st.claims.get(crossing)
            if claim in _BLUEISH:
                continue
            w = 0 if claim is Claim.RED else 1
            nd = d + w
            if nd < dist.get(q, infinity):
                dist[q] = nd
                if w == 0:
                    queue.appendleft((nd, q))
                else:
                    queue.append((nd, q))
    return min(best, n)
