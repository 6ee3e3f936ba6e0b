"""Grid boards, their duals, and crossing connectivity.

Everything downstream speaks one coordinate language: an edge of the square
lattice is identified with its midpoint, stored in doubled integer
coordinates so no floats ever appear.  A horizontal edge joining (x, y) and
(x+1, y) has midpoint (x+0.5, y) and is stored as EdgeId(2x+1, 2y); a
vertical edge joining (x, y) and (x, y+1) has midpoint (x, y+0.5) and is
stored as EdgeId(2x, 2y+1).  Exactly one coordinate of a valid EdgeId is
odd.  Lattice vertices double to (even, even) pairs and dual vertices
(face centres, at (x+0.5, y+0.5)) double to (odd, odd) pairs.

A planar dual edge crosses its primal partner at the shared midpoint, so
the same EdgeId names both; the four incidence helpers below are the only
place the geometry is spelled out.

Boards come in three kinds.  Lambda(m, n) is the full m-by-n grid graph.
S(m, n) removes the vertical edges in the leftmost and rightmost columns,
which makes left-right crossings and top-bottom dual crossings exact
complements of each other.  InfiniteStrip(n) is S with unbounded width,
used by the sparse game variants.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple


class LatticeError(ValueError):
    """Raised for malformed boards, edges, or component inputs."""


class EdgeId(NamedTuple):
    """Doubled midpoint coordinates of a lattice edge (exactly one odd)."""

    u: int
    v: int

    @property
    def is_horizontal(self) -> bool:
        return self.u % 2 == 1

    def endpoints(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Doubled coordinates of the two lattice vertices joined."""
        u, v = self
        if u % 2 == 1:
            return (u - 1, v), (u + 1, v)
        return (u, v - 1), (u, v + 1)

    def dual_endpoints(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Doubled coordinates of the two face centres the dual edge joins."""
        u, v = self
        if u % 2 == 1:
            return (u, v - 1), (u, v + 1)
        return (u - 1, v), (u + 1, v)


def edge(u: int, v: int) -> EdgeId:
    if (u % 2 == 1) == (v % 2 == 1):
        raise LatticeError(f"not an edge midpoint: ({u}, {v})")
    return EdgeId(u, v)


def horizontal_edge(x: int, y: int) -> EdgeId:
    """Edge with midpoint (x+0.5, y), joining (x, y) and (x+1, y)."""
    return EdgeId(2 * x + 1, 2 * y)


def vertical_edge(x: int, y: int) -> EdgeId:
    """Edge with midpoint (x, y+0.5), joining (x, y) and (x, y+1)."""
    return EdgeId(2 * x, 2 * y + 1)


class BoardKind(Enum):
    LAMBDA = "Lambda"
    S = "S"
    INFINITE_STRIP = "InfiniteStrip"


@dataclass(frozen=True)
class Board:
    """A rectangular board. m counts columns of vertices, n counts rows.

    For INFINITE_STRIP the width m is ignored (stored as 0) and only the
    height n is meaningful; such boards cannot enumerate their edges.
    """

    kind: BoardKind
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.kind is BoardKind.INFINITE_STRIP:
            if self.n < 1:
                raise LatticeError(f"invalid strip height {self.n}")
            object.__setattr__(self, "m", 0)
            return
        if self.m < 2 or self.n < 1:
            raise LatticeError(f"invalid dimensions {self.m}x{self.n}")

    # -- membership ----------------------------------------------------

    def contains_edge(self, e: EdgeId) -> bool:
        u, v = e
        if (u % 2 == 1) == (v % 2 == 1):
            return False
        if u % 2 == 1:  # horizontal: x in [1, m-1], y in [1, n]
            if not (2 <= v <= 2 * self.n and v % 2 == 0):
                return False
            if self.kind is BoardKind.INFINITE_STRIP:
                return True
            return 3 <= u <= 2 * self.m - 1
        # vertical: y in [1, n-1]; S boards drop the outermost columns
        if not (3 <= v <= 2 * self.n - 1):
            return False
        if self.kind is BoardKind.INFINITE_STRIP:
            return True
        if self.kind is BoardKind.S:
            return 4 <= u <= 2 * self.m - 2
        return 2 <= u <= 2 * self.m

    def edge_count(self) -> int:
        """len(edge_set()) without the enumeration."""
        if self.kind is BoardKind.INFINITE_STRIP:
            raise LatticeError("infinite strip has no finite edge set")
        columns = self.m - 2 if self.kind is BoardKind.S else self.m
        return (self.m - 1) * self.n + columns * (self.n - 1)

    def edge_set(self) -> list[EdgeId]:
        """All edges in deterministic (u, v) order."""
        if self.kind is BoardKind.INFINITE_STRIP:
            raise LatticeError("infinite strip has no finite edge set")
        out = []
        for x in range(1, self.m):
            for y in range(1, self.n + 1):
                out.append(horizontal_edge(x, y))
        lo, hi = (2, self.m - 1) if self.kind is BoardKind.S else (1, self.m)
        for x in range(lo, hi + 1):
            for y in range(1, self.n):
                out.append(vertical_edge(x, y))
        out.sort()
        return out

    # -- duality -------------------------------------------------------

    def dual_board(self) -> "Board":
        if self.kind is not BoardKind.S:
            raise LatticeError("only S boards have an S-board dual")
        return Board(BoardKind.S, self.n + 1, self.m - 1)

    def dual_vertices(self) -> list[tuple[int, int]]:
        """Face centres of an S board, doubled: x in [1, m-1], y in [0, n]."""
        if self.kind is not BoardKind.S:
            raise LatticeError("dual vertex enumeration is for S boards")
        return [
            (2 * x + 1, 2 * y + 1)
            for x in range(1, self.m)
            for y in range(0, self.n + 1)
        ]

    @property
    def bottom_dual_v(self) -> int:
        return 1

    @property
    def top_dual_v(self) -> int:
        return 2 * self.n + 1


def to_dual_coords(board: Board, e: EdgeId) -> EdgeId:
    """EdgeId of e's dual partner in dual-board coordinates.

    The dual of S(m, n) is S(n+1, m-1) after a quarter turn: the dual
    vertex (x+0.5, y+0.5) of the primal board lands on the dual board's
    lattice vertex (y+1, x).  The map is an involution up to that of the
    dual board.
    """
    if board.kind is not BoardKind.S:
        raise LatticeError("dual coordinates are defined for S boards")
    # primal dual-vertex (a, b) doubled -> dual-board vertex (b + 1, a - 1)
    (a1, b1), (a2, b2) = e.dual_endpoints()
    p1 = (b1 + 1, a1 - 1)
    p2 = (b2 + 1, a2 - 1)
    mid = ((p1[0] + p2[0]) // 2, (p1[1] + p2[1]) // 2)
    return EdgeId(mid[0], mid[1])


def from_dual_coords(board: Board, e: EdgeId) -> EdgeId:
    """Inverse of to_dual_coords."""
    if board.kind is not BoardKind.S:
        raise LatticeError("dual coordinates are defined for S boards")
    (a1, b1), (a2, b2) = e.endpoints()
    q1 = (b1 + 1, a1 - 1)
    q2 = (b2 + 1, a2 - 1)
    mid = ((q1[0] + q2[0]) // 2, (q1[1] + q2[1]) // 2)
    return EdgeId(mid[0], mid[1])


# -- connectivity -------------------------------------------------------


def _adjacency(edges: Iterable[EdgeId]) -> dict[tuple[int, int], list[tuple[int, int]]]:
    adj: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for e in edges:
        a, b = e.endpoints()
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    return adj


def has_lr_crossing(board: Board, edges: Iterable[EdgeId]) -> bool:
    """True iff the given edges contain a path joining the left and right
    vertex columns of the board."""
    if board.kind is BoardKind.INFINITE_STRIP:
        raise LatticeError("left-right crossing needs a finite board")
    adj = _adjacency(edges)
    left, right = 2, 2 * board.m
    stack = [p for p in adj if p[0] == left]
    seen = set(stack)
    while stack:
        p = stack.pop()
        if p[0] == right:
            return True
        for q in adj[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return False


def has_tb_dual_crossing(board: Board, edges: Iterable[EdgeId]) -> bool:
    """True iff the duals of the given edges contain a path joining the
    bottom row of dual vertices (y = 0.5) to the top row (y = n + 0.5)."""
    adj: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for e in edges:
        a, b = e.dual_endpoints()
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    top = 2 * board.n + 1
    stack = [p for p in adj if p[1] == 1]
    seen = set(stack)
    while stack:
        p = stack.pop()
        if p[1] == top:
            return True
        for q in adj[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return False


# -- components and boundaries ------------------------------------------


def _connected(edges: list[EdgeId]) -> bool:
    if not edges:
        return True
    adj = _adjacency(edges)
    start = edges[0].endpoints()[0]
    stack = [start]
    seen = {start}
    while stack:
        p = stack.pop()
        for q in adj[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return len(seen) == len(adj)


def external_boundary(component: Iterable[EdgeId]) -> set[EdgeId]:
    """Dual edges separating a finite connected edge component of the full
    lattice from the infinite outside.

    The result is the set of duals of the lattice edges that join a vertex
    of the component to the infinite complement component; it always forms
    a simple dual cycle enclosing the input.  Edges into holes enclosed by
    the component are excluded because the flood fill never reaches them.
    """
    comp = sorted(set(component))
    if not comp:
        raise LatticeError("empty component")
    if not _connected(comp):
        raise LatticeError("component edges must be connected")
    vertices: set[tuple[int, int]] = set()
    for e in comp:
        a, b = e.endpoints()
        vertices.add(a)
        vertices.add(b)
    xs = [p[0] for p in vertices]
    ys = [p[1] for p in vertices]
    x0, x1 = min(xs) - 4, max(xs) + 4
    y0, y1 = min(ys) - 4, max(ys) + 4
    # flood the complement from the padded box border; holes stay unreached
    start = (x0, y0)
    outside = {start}
    stack = [start]
    while stack:
        x, y = stack.pop()
        for q in ((x + 2, y), (x - 2, y), (x, y + 2), (x, y - 2)):
            if not (x0 <= q[0] <= x1 and y0 <= q[1] <= y1):
                continue
            if q in vertices or q in outside:
                continue
            outside.add(q)
            stack.append(q)
    boundary: set[EdgeId] = set()
    for x, y in vertices:
        for q in ((x + 2, y), (x - 2, y), (x, y + 2), (x, y - 2)):
            if q in outside:
                boundary.add(EdgeId((x + q[0]) // 2, (y + q[1]) // 2))
    return boundary


def is_simple_dual_cycle(edges: Iterable[EdgeId]) -> bool:
    """Check that the duals of the given edges form one simple cycle."""
    deg: dict[tuple[int, int], int] = {}
    adj: dict[tuple[int, int], list[tuple[int, int]]] = {}
    count = 0
    for e in edges:
        count += 1
        a, b = e.dual_endpoints()
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if count == 0 or any(d != 2 for d in deg.values()):
        return False
    start = next(iter(adj))
    stack = [start]
    seen = {start}
    while stack:
        p = stack.pop()
        for q in adj[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return len(seen) == len(deg) == count


class ComponentClass(Enum):
    FLOATING = "Floating"
    TOP = "Top"
    BOTTOM = "Bottom"
    TOP_AND_BOTTOM = "TopAndBottom"


@dataclass(frozen=True)
class DualComponent:
    """A maximal set of at least two dual vertices joined by claimed dual
    edges, classified by which board sides it touches."""

    vertices: frozenset[tuple[int, int]]
    edges: frozenset[EdgeId]
    kind: ComponentClass

    @property
    def root(self) -> tuple[int, int]:
        """Canonical representative: the minimum vertex."""
        return min(self.vertices)


def classify_dual_vertices(
    board: Board, vertices: Iterable[tuple[int, int]]
) -> ComponentClass:
    top = 2 * board.n + 1
    has_bottom = any(v == 1 for _, v in vertices)
    has_top = any(v == top for _, v in vertices)
    if has_top and has_bottom:
        return ComponentClass.TOP_AND_BOTTOM
    if has_top:
        return ComponentClass.TOP
    if has_bottom:
        return ComponentClass.BOTTOM
    return ComponentClass.FLOATING


def dual_components(board: Board, claimed: Iterable[EdgeId]) -> list[DualComponent]:
    """Partition the duals of the claimed edges into connected components.

    Sorted by root vertex so output order is reproducible.
    """
    adj: dict[tuple[int, int], list[tuple[int, int]]] = {}
    edge_at: dict[tuple[int, int], list[EdgeId]] = {}
    for e in claimed:
        a, b = e.dual_endpoints()
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
        edge_at.setdefault(a, []).append(e)
        edge_at.setdefault(b, []).append(e)
    seen: set[tuple[int, int]] = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        verts = {start}
        ces: set[EdgeId] = set()
        while stack:
            p = stack.pop()
            ces.update(edge_at[p])
            for q in adj[p]:
                if q not in seen:
                    seen.add(q)
                    verts.add(q)
                    stack.append(q)
        comps.append(
            DualComponent(
                frozenset(verts),
                frozenset(ces),
                classify_dual_vertices(board, verts),
            )
        )
    return comps
