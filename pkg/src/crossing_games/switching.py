"""Switching games on multigraphs and the two-subgraph join strategy.

Cut deletes edges, Join marks edges safe, and Join's goal is that the
terminals a, b stay connected once every edge is safe or deleted.  Join's
classical strategy keeps a list of edge-disjoint connected spanning
subgraphs: whenever a deletion splits one of them, some other subgraph
still carries a path between the two parts, and marking the first edge
of that path that leaves the component of a repairs the split.  Safe
edges count as members of every subgraph, which is what lets repairs
accumulate without the subgraphs ever competing for them.

The grid lift: on the board with n+1 columns and n rows, the horizontal
(green) and vertical (orange) edges can be rebalanced around any first
claimed edge so that greens and oranges each form a connected spanning
subgraph of the column-contracted graph, overlapping in the first edge
alone.  That turns the crossing game into a switching game that the
join strategy wins outright, whatever the first move was.

Also here: k-positivity search, vertex separations, and the reduction
operations (delete/contract/separate) used to transfer wins between
game triples.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Any, Iterable, Mapping, Optional, Sequence

from .lattice import Board, BoardKind, EdgeId, LatticeError, horizontal_edge, vertical_edge

Label = Any


class InvariantBroken(RuntimeError):
    """A switching position failed a structural check it should satisfy."""


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[tuple[int, int, Label], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one vertex")
        seen = set()
        for a, b, label in self.edges:
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge {label} endpoint out of range")
            if label in seen:
                raise ValueError(f"duplicate edge label {label!r}")
            seen.add(label)

    @cached_property
    def by_label(self) -> dict[Label, tuple[int, int]]:
        return {label: (a, b) for a, b, label in self.edges}

    def labels(self) -> tuple[Label, ...]:
        return tuple(label for _, _, label in self.edges)

    def multiplicity(self, u: int, v: int) -> int:
        if u == v:
            return self.loop_count(u)
        return sum(1 for a, b, _ in self.edges if {a, b} == {u, v})

    def loop_count(self, v: int) -> int:
        return sum(1 for a, b, _ in self.edges if a == b == v)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[a, b] for a, b, _ in self.edges]}

    @staticmethod
    def from_json(data: dict, labels: Optional[Sequence[Label]] = None) -> "Multigraph":
        pairs = data["edges"]
        if labels is None:
            labels = range(len(pairs))
        return Multigraph(
            data["n"],
            tuple((a, b, lab) for (a, b), lab in zip(pairs, labels)),
        )

    @staticmethod
    def build(n: int, pairs: Iterable[tuple[int, int]]) -> "Multigraph":
        return Multigraph(n, tuple((a, b, i) for i, (a, b) in enumerate(pairs)))


@dataclass(frozen=True)
class GameTriple:
    graph: Multigraph
    A: frozenset[int]
    B: frozenset[int]

    def __post_init__(self) -> None:
        for side in (self.A, self.B):
            if not side:
                raise ValueError("terminal sets must be nonempty")
            if not all(0 <= v < self.graph.n for v in side):
                raise ValueError("terminal vertex out of range")


def _components(
    vertices: Iterable[int], pairs: Iterable[tuple[int, int]]
) -> dict[int, int]:
    """Map each vertex to a component root (the minimum member)."""
    parent: dict[int, int] = {v: v for v in vertices}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        if a not in parent:
            parent[a] = a
        if b not in parent:
            parent[b] = b
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return {v: find(v) for v in parent}


def is_connected_spanning(graph: Multigraph, labels: Iterable[Label]) -> bool:
    pairs = [graph.by_label[lab] for lab in labels]
    roots = _components(range(graph.n), pairs)
    return len(set(roots.values())) == 1


def _spanning_trees(
    graph: Multigraph, allowed: Sequence[Label]
) -> Iterable[frozenset[Label]]:
    """Enumerate spanning trees using only the allowed edges."""
    n = graph.n
    need = n - 1

    def grow(idx: int, picked: list[Label], parent: dict[int, int]):
        if len(picked) == need:
            yield frozenset(picked)
            return
        if need - len(picked) > len(allowed) - idx:
            return
        for i in range(idx, len(allowed)):
            lab = allowed[i]
            a, b = graph.by_label[lab]

            def find(x: int) -> int:
                while parent[x] != x:
                    x = parent[x]
                return x

            ra, rb = find(a), find(b)
            if ra == rb:
                continue
            parent[max(ra, rb)] = min(ra, rb)
            picked.append(lab)
            yield from grow(i + 1, picked, parent)
            picked.pop()
            parent[max(ra, rb)] = max(ra, rb)

    yield from grow(0, [], {v: v for v in range(n)})


def is_k_positive(graph: Multigraph, k: int) -> Optional[list[frozenset[Label]]]:
    """k pairwise edge-disjoint connected spanning subgraphs, or None."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if graph.n == 1:
        return [frozenset() for _ in range(k)]
    nonloop = [lab for a, b, lab in graph.edges if a != b]
    if k * (graph.n - 1) > len(nonloop):
        return None

    def search(depth: int, avail: list[Label]) -> Optional[list[frozenset[Label]]]:
        if depth == k - 1:
            if is_connected_spanning(graph, avail):
                tree = next(_spanning_trees(graph, avail))
                return [tree]
            return None
        for tree in _spanning_trees(graph, avail):
            rest = [lab for lab in avail if lab not in tree]
            tail = search(depth + 1, rest)
            if tail is not None:
                return [tree] + tail
        return None

    return search(0, nonloop)


def verify_decomposition(
    graph: Multigraph, parts: Sequence[Iterable[Label]]
) -> bool:
    sets = [frozenset(p) for p in parts]
    for i, s in enumerate(sets):
        if not s <= set(graph.by_label):
            return False
        for t in sets[i + 1 :]:
            if s & t:
                return False
        if not is_connected_spanning(graph, s):
            return False
    return True


# -- the join strategy -----------------------------------------------------


@dataclass(frozen=True)
class SwitchingPosition:
    graph: Multigraph
    a: int
    b: int
    spanning: tuple[frozenset[Label], ...]
    safe: frozenset[Label]
    deleted: frozenset[Label]

    def effective(self, i: int) -> frozenset[Label]:
        return (self.spanning[i] - self.deleted) | self.safe

    def footprint(self, i: int) -> set[int]:
        verts = {self.a, self.b}
        for lab in self.spanning[i] | self.safe:
            u, v = self.graph.by_label[lab]
            verts.add(u)
            verts.add(v)
        return verts

    def unclaimed(self) -> list[Label]:
        return sorted(
            lab
            for lab in self.graph.by_label
            if lab not in self.safe and lab not in self.deleted
        )


def validate_position(pos: SwitchingPosition) -> None:
    if pos.safe & pos.deleted:
        raise InvariantBroken("an edge is both safe and deleted")
    if len(pos.spanning) < 2:
        raise InvariantBroken("need at least two subgraphs")
    for i, s in enumerate(pos.spanning):
        for t in pos.spanning[i + 1 :]:
            if (s & t) - pos.safe:
                raise InvariantBroken("subgraphs share an unsafe edge")
    for i in range(len(pos.spanning)):
        if not _healthy(pos, i):
            raise InvariantBroken(f"subgraph {i} is disconnected")


def _comp_roots(pos: SwitchingPosition, i: int) -> dict[int, int]:
    pairs = [pos.graph.by_label[lab] for lab in pos.effective(i)]
    return _components(pos.footprint(i), pairs)


def _healthy(pos: SwitchingPosition, i: int) -> bool:
    roots = _comp_roots(pos, i)
    return len(set(roots.values())) == 1


def _bfs_path(
    pos: SwitchingPosition, i: int, start: int, goal: int
) -> Optional[list[tuple[Label, int, int]]]:
    """Edges of a shortest start-goal walk in subgraph i, in walk order."""
    adj: dict[int, list[tuple[int, Label]]] = {}
    for lab in sorted(pos.effective(i), key=repr):
        u, v = pos.graph.by_label[lab]
        adj.setdefault(u, []).append((v, lab))
        adj.setdefault(v, []).append((u, lab))
    for lst in adj.values():
        lst.sort(key=repr)
    prev: dict[int, tuple[int, Label]] = {}
    seen = {start}
    queue = [start]
    while queue:
        nxt = []
        for x in queue:
            if x == goal:
                queue = []
                nxt = []
                break
            for y, lab in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    prev[y] = (x, lab)
                    nxt.append(y)
        queue = nxt
    if goal != start and goal not in prev:
        return None
    path = []
    v = goal
    while v != start:
        u, lab = prev[v]
        path.append((lab, u, v))
        v = u
    path.reverse()
    return path


def _repair(
    pos: SwitchingPosition, i: int
) -> Optional[Label]:
    """One repair step for subgraph i; returns the newly safe edge."""
    roots = _comp_roots(pos, i)
    comp_sets: dict[int, set[int]] = {}
    for v, r in roots.items():
        comp_sets.setdefault(r, set()).add(v)
    if len(comp_sets) == 1:
        return None
    X = comp_sets[roots[pos.a]]
    if pos.b not in X:
        Y = comp_sets[roots[pos.b]]
    else:
        outside = min(v for v in roots if v not in X)
        Y = comp_sets[roots[outside]]
    w = pos.b if pos.b in Y else min(Y)
    for j in range(len(pos.spanning)):
        if j == i:
            continue
        path = _bfs_path(pos, j, pos.a, w)
        if path is None:
            continue
        for lab, u, v in path:
            if (u in X) != (v in X):
                return lab
    return None


def join_move(
    pos: SwitchingPosition, cut: Label
) -> tuple[Optional[Label], SwitchingPosition]:
    """Process one deletion; returns (safe edge or None for a pass, position)."""
    if cut not in pos.graph.by_label:
        raise InvariantBroken(f"unknown edge {cut!r}")
    if cut in pos.safe or cut in pos.deleted:
        raise InvariantBroken(f"edge {cut!r} is not cuttable")
    pos = replace(pos, deleted=pos.deleted | {cut})
    for i, raw in enumerate(pos.spanning):
        if cut not in raw:
            continue
        fix = _repair(pos, i)
        if fix is not None:
            return fix, replace(pos, safe=pos.safe | {fix})
        break
    return None, pos


def claim_safe(pos: SwitchingPosition, label: Label) -> SwitchingPosition:
    if label not in pos.graph.by_label:
        raise InvariantBroken(f"unknown edge {label!r}")
    if label in pos.safe or label in pos.deleted:
        raise InvariantBroken(f"edge {label!r} already claimed")
    return replace(pos, safe=pos.safe | {label})


def fallback_edge(pos: SwitchingPosition) -> Optional[Label]:
    free = pos.unclaimed()
    return free[0] if free else None


def kk_join_move(
    pos: SwitchingPosition, cuts: Sequence[Label]
) -> tuple[list[Label], SwitchingPosition]:
    """Process a batch of k deletions against k+1 subgraphs."""
    if len(pos.spanning) != len(cuts) + 1:
        raise InvariantBroken(
            f"{len(cuts)} cuts need {len(cuts) + 1} subgraphs,"
            f" have {len(pos.spanning)}"
        )
    if len(set(cuts)) != len(cuts):
        raise InvariantBroken("repeated cut edge")
    for cut in cuts:
        if cut not in pos.graph.by_label:
            raise InvariantBroken(f"unknown edge {cut!r}")
        if cut in pos.safe or cut in pos.deleted:
            raise InvariantBroken(f"edge {cut!r} is not cuttable")
    pos = replace(pos, deleted=pos.deleted | set(cuts))
    replies: list[Label] = []
    stray_ok: set[int] = set()
    while True:
        for i in range(len(pos.spanning)):
            if i in stray_ok or _healthy(pos, i):
                continue
            fix = _repair(pos, i)
            if fix is None:
                roots = _comp_roots(pos, i)
                if roots[pos.a] == roots[pos.b]:
                    stray_ok.add(i)  # lost a terminal-free part for good
                    continue
                raise InvariantBroken(f"subgraph {i} cannot be repaired")
            replies.append(fix)
            pos = replace(pos, safe=pos.safe | {fix})
            stray_ok.clear()
            break
        else:
            break
    if len(replies) > len(cuts):
        raise InvariantBroken("repairs exceeded the allowed reply quota")
    return replies, pos


# -- the grid lift ----------------------------------------------------------


def _greedy_fill(
    n: int, used_x: set[int], used_y: set[int]
) -> list[EdgeId]:
    out = []
    for x in range(1, n + 1):
        if x in used_x:
            continue
        y = min(set(range(1, n + 1)) - used_y)
        used_x.add(x)
        used_y.add(y)
        out.append(horizontal_edge(x, y))
    return out


def bridgit_setup(
    n: int, first_edge: EdgeId
) -> tuple[GameTriple, SwitchingPosition, frozenset[EdgeId]]:
    """Position for the join strategy after an arbitrary first claim.

    Returns the column-contracted game triple, a two-subgraph switching
    position with the first edge already safe, and the recolored green
    set A.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    board = Board(BoardKind.S, n + 1, n)
    if not board.contains_edge(first_edge):
        raise LatticeError(f"edge {tuple(first_edge)} not on the board")
    greens = [
        horizontal_edge(x, y) for x in range(1, n + 1) for y in range(1, n + 1)
    ]
    oranges = [
        vertical_edge(x, y) for x in range(2, n + 1) for y in range(1, n)
    ]
    e = first_edge
    if e.is_horizontal:
        ex, ey = (e.u - 1) // 2, e.v // 2
        A = frozenset(_greedy_fill(n, {ex}, {ey}))
        g1 = frozenset(greens) - A
        g2 = frozenset(oranges) | A | {e}
    else:
        ex, ey = e.u // 2, (e.v - 1) // 2
        f1 = horizontal_edge(ex, ey)
        f2 = horizontal_edge(ex - 1, ey + 1)
        fill = _greedy_fill(n, {ex, ex - 1}, {ey, ey + 1})
        A = frozenset(fill) | {f1, f2}
        g1 = (frozenset(greens) - A) | {e}
        g2 = frozenset(oranges) | A | {e}

    def vertex_id(v: tuple[int, int]) -> int:
        x, y = v[0] // 2, v[1] // 2
        if x == 1:
            return 0
        if x == n + 1:
            return 1
        return 2 + (x - 2) * n + (y - 1)

    count = 2 + (n - 1) * n
    edges = []
    for edge in board.edge_set():
        p, q = edge.endpoints()
        edges.append((vertex_id(p), vertex_id(q), edge))
    graph = Multigraph(count, tuple(edges))
    pos = SwitchingPosition(
        graph=graph,
        a=0,
        b=1,
        spanning=(g1, g2),
        safe=frozenset({e}),
        deleted=frozenset(),
    )
    validate_position(pos)
    triple = GameTriple(graph, frozenset({0}), frozenset({1}))
    return triple, pos, A


# -- reductions -------------------------------------------------------------


def delete_edge(graph: Multigraph, label: Label) -> Multigraph:
    if label not in graph.by_label:
        raise ValueError(f"unknown edge {label!r}")
    return Multigraph(
        graph.n, tuple(t for t in graph.edges if t[2] != label)
    )


def delete_vertex(graph: Multigraph, v: int) -> Multigraph:
    if not 0 <= v < graph.n:
        raise ValueError(f"vertex {v} out of range")
    if graph.n == 1:
        raise ValueError("cannot delete the last vertex")

    def shift(x: int) -> int:
        return x - 1 if x > v else x

    edges = tuple(
        (shift(a), shift(b), lab)
        for a, b, lab in graph.edges
        if a != v and b != v
    )
    return Multigraph(graph.n - 1, edges)


def contract_edge(graph: Multigraph, label: Label) -> Multigraph:
    if label not in graph.by_label:
        raise ValueError(f"unknown edge {label!r}")
    p, q = graph.by_label[label]
    if p == q:
        return delete_edge(graph, label)
    keep, gone = min(p, q), max(p, q)

    def shift(x: int) -> int:
        x = keep if x == gone else x
        return x - 1 if x > gone else x

    edges = tuple(
        (shift(a), shift(b), lab)
        for a, b, lab in graph.edges
        if lab != label
    )
    return Multigraph(graph.n - 1, edges)


def vertex_separation(
    graph: Multigraph, v: int, assignment: Mapping[Label, str]
) -> Multigraph:
    """Split v into v and a fresh vertex, joined by one new edge.

    assignment maps each edge at v to "v1" or "v2" (loops may also go
    "cross", turning into an edge between the halves).
    """
    if not 0 <= v < graph.n:
        raise ValueError(f"vertex {v} out of range")
    incident = {lab for a, b, lab in graph.edges if a == v or b == v}
    if set(assignment) != incident:
        raise ValueError("assignment must cover exactly the edges at v")
    v2 = graph.n
    edges = []
    for a, b, lab in graph.edges:
        if lab not in assignment:
            edges.append((a, b, lab))
            continue
        where = assignment[lab]
        if a == b == v:
            if where == "v1":
                edges.append((v, v, lab))
            elif where == "v2":
                edges.append((v2, v2, lab))
            elif where == "cross":
                edges.append((v, v2, lab))
            else:
                raise ValueError(f"bad assignment {where!r} for loop {lab!r}")
        else:
            if where not in ("v1", "v2"):
                raise ValueError(f"bad assignment {where!r} for edge {lab!r}")
            other = b if a == v else a
            end = v if where == "v1" else v2
            edges.append((other, end, lab) if a != v else (end, other, lab))
    base = 0
    labels = {lab for _, _, lab in graph.edges}
    while ("sep", base) in labels:
        base += 1
    edges.append((v, v2, ("sep", base)))
    return Multigraph(graph.n + 1, tuple(edges))


def monotone_reduce(triple: GameTriple, ops: Sequence[tuple]) -> GameTriple:
    """Apply delete/contract/separate steps, tracking the terminal sets."""
    graph, A, B = triple.graph, set(triple.A), set(triple.B)
    for op in ops:
        kind = op[0]
        if kind == "delete_edge":
            graph = delete_edge(graph, op[1])
        elif kind == "delete_vertex":
            v = op[1]
            graph = delete_vertex(graph, v)
            A = {x - 1 if x > v else x for x in A if x != v}
            B = {x - 1 if x > v else x for x in B if x != v}
            if not A or not B:
                raise ValueError("deletion emptied a terminal set")
        elif kind == "contract_edge":
            p, q = graph.by_label[op[1]]
            graph = contract_edge(graph, op[1])
            if p != q:
                keep, gone = min(p, q), max(p, q)
                remap = lambda x: (
                    keep if x == gone else x - 1 if x > gone else x
                )
                A = {remap(x) for x in A}
                B = {remap(x) for x in B}
        elif kind == "separate_vertex":
            graph = vertex_separation(graph, op[1], op[2])
        else:
            raise ValueError(f"unknown reduction {kind!r}")
    return GameTriple(graph, frozenset(A), frozenset(B))
