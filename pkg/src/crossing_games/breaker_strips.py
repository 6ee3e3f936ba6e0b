"""Long-board Breaker play built from short self-contained strips.

The board is tiled into strips the height of the board and one column
wider, each of which Breaker can win on its own.  A ledger tracks every
strip's standing, upgrades a quota of the leftmost healthy strips each
turn, and writes off strips the opponent damages twice.  A potential
over freshly upgraded strips rises faster per round than the opponent
can tear it down, so phases keep advancing until some strip is played
out completely and carries a finished top-bottom dual crossing.

The same ledger runs over any family of local games supplied by the
caller, as long as each comes with a first-player winning plan whose
horizon is bounded; the strip game is the instance where the local plan
is the two-subgraph join defence on the strip's dual board.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Hashable, Optional, Protocol, Sequence

from .lattice import (
    Board,
    BoardKind,
    EdgeId,
    has_tb_dual_crossing,
    horizontal_edge,
    vertical_edge,
)
from .switching import (
    SwitchingPosition,
    bridgit_setup,
    claim_safe,
    fallback_edge,
    join_move,
)


class OutOfNeutralStrips(RuntimeError):
    """Fewer upgradable strips than the turn quota needs; the board was
    too short for the guarantee."""


class LedgerBroken(RuntimeError):
    """An accounting invariant failed; the ledger was driven illegally."""


class StatusKind(Enum):
    VALID = "valid"
    NEUTRAL = "neutral"
    INVALID = "invalid"


class PhaseOutcome(Enum):
    CONTINUE = "continue"
    ADVANCE = "advance-phase"
    VICTORY = "victory"


# canonical opening claim on a strip's dual board
_FIRST_LOCAL = horizontal_edge(1, 1)


@dataclass(frozen=True)
class Strip:
    """One tracked strip and its local defence state.

    x0 is the strip's leftmost vertex column.  The strip owns the
    horizontal edges starting in columns x0..x0+n-1 and the vertical
    edges strictly between its boundary columns, which together form a
    self-dual short board.  k counts the strip's red edges.  The local
    switching position lives on the strip's dual board; pending holds
    an unanswered opponent edge, already translated to a dual label.
    """

    x0: int
    kind: StatusKind
    k: int
    pending: tuple[EdgeId, ...]
    local: Optional[SwitchingPosition]

    @property
    def pending_hits(self) -> int:
        return len(self.pending)


@dataclass(frozen=True)
class StripLedger:
    """Phase ledger for Breaker's strip strategy on an m-column board."""

    n: int
    q: int
    m: int
    strips: tuple[Strip, ...]
    phase: int
    potential: int
    turn_counter: int

    @property
    def horizon(self) -> int:
        """Edges per strip; also the number of phases."""
        return self.n * self.n + (self.n - 1) * (self.n - 1)

    @property
    def board(self) -> Board:
        return Board(BoardKind.S, self.m, self.n)


# -- sizing -----------------------------------------------------------------


def general_strip_bound(p: int, q: int, l: int, horizon: int) -> int:
    """Strips that keep the ledger from running dry:
    (s(p+1))^horizon + l(p+1) - 1 with s = l(p+q+1) - 1."""
    if p < 1 or q < 1 or l < 1 or horizon < 0:
        raise ValueError("need p, q, l >= 1 and horizon >= 0")
    s = l * (p + q + 1) - 1
    return (s * (p + 1)) ** horizon + l * (p + 1) - 1


def m0(n: int, q: int) -> int:
    """Columns guaranteeing the strip strategy wins the (2q-1, q) game.

    Exact big-integer arithmetic; the count is astronomically generous
    already at n = 3.
    """
    if n < 2 or q < 1:
        raise ValueError(f"need n >= 2 and q >= 1, got n={n} q={q}")
    horizon = n * n + (n - 1) * (n - 1)
    return (n + 1) * general_strip_bound(1, 1, q, horizon)


def new_ledger(n: int, q: int, m: Optional[int] = None) -> StripLedger:
    """Fresh ledger over the strips of an m-column board (default m0).

    Leftover columns beyond the last whole strip are ignored.
    """
    if n < 2 or q < 1:
        raise ValueError(f"need n >= 2 and q >= 1, got n={n} q={q}")
    if m is None:
        m = m0(n, q)
    count = m // (n + 1)
    if count < 1:
        raise ValueError(f"no whole strip fits in {m} columns")
    strips = tuple(
        Strip(
            x0=1 + i * (n + 1),
            kind=StatusKind.NEUTRAL,
            k=0,
            pending=(),
            local=None,
        )
        for i in range(count)
    )
    return StripLedger(
        n=n, q=q, m=m, strips=strips, phase=0, potential=0, turn_counter=0
    )


# -- strip geometry ----------------------------------------------------------


def strip_index(ledger: StripLedger, e: EdgeId) -> Optional[int]:
    """Index of the strip owning e, or None for untracked edges.

    Horizontal edges bridging two strips, vertical edges on a strip's
    boundary columns, and edges beyond the tiled columns all map to
    None.
    """
    n = ledger.n
    if e.is_horizontal:
        x = (e.u - 1) // 2
        i = (x - 1) // (n + 1)
        if not 0 <= i < len(ledger.strips):
            return None
        d = x - ledger.strips[i].x0
        return i if 0 <= d <= n - 1 else None
    x = e.u // 2
    i = (x - 1) // (n + 1)
    if not 0 <= i < len(ledger.strips):
        return None
    d = x - ledger.strips[i].x0
    return i if 1 <= d <= n - 1 else None


def strip_dual_label(e: EdgeId, x0: int) -> EdgeId:
    """Board edge of the strip at x0 -> edge of the strip's dual board.

    Quarter turn: the strip's bottom dual row becomes the dual board's
    left terminal column, the top row its right one.
    """
    return EdgeId(e.v + 1, e.u - 2 * x0 + 1)


def strip_primal_edge(d: EdgeId, x0: int) -> EdgeId:
    """Inverse of strip_dual_label."""
    return EdgeId(d.v + 2 * x0 - 1, d.u - 1)


def strip_edges(n: int, x0: int) -> list[EdgeId]:
    """All board edges owned by the strip at column x0."""
    out = [
        horizontal_edge(x, y)
        for x in range(x0, x0 + n)
        for y in range(1, n + 1)
    ]
    out += [
        vertical_edge(x, y)
        for x in range(x0 + 1, x0 + n)
        for y in range(1, n)
    ]
    return sorted(out)


# -- potential ---------------------------------------------------------------


def _potential(strips: Sequence[Strip], phase: int) -> int:
    # R = 2 * #Valid(phase+1) + #Neutral(phase+1)
    k = phase + 1
    total = 0
    for s in strips:
        if s.k != k:
            continue
        if s.kind is StatusKind.VALID:
            total += 2
        elif s.kind is StatusKind.NEUTRAL:
            total += 1
    return total


def recompute_potential(ledger: StripLedger) -> int:
    return _potential(ledger.strips, ledger.phase)


# -- turn operations ---------------------------------------------------------


def _capacity(s: Strip) -> int:
    """Edges the strip can still absorb from its own side."""
    if s.local is None:
        return 1
    return len(s.local.unclaimed()) - len(s.pending)


def _eligible(ledger: StripLedger, s: Strip) -> bool:
    if s.k != ledger.phase or s.kind is StatusKind.INVALID:
        return False
    # a valid strip counts as neutral; neutral with 2+ hits is invalid
    return _capacity(s) >= 1


def breaker_turn(ledger: StripLedger) -> tuple[list[EdgeId], StripLedger]:
    """Claim one edge in each of the q leftmost upgradable strips.

    A fresh strip opens its dual-board defence, a hit strip answers the
    pending edge, and an untouched healthy strip takes its next free
    edge.  Each chosen strip moves to Valid(phase+1), raising R by
    exactly 2 per strip.
    """
    chosen = [i for i, s in enumerate(ledger.strips) if _eligible(ledger, s)]
    if len(chosen) < ledger.q:
        raise OutOfNeutralStrips(
            f"phase {ledger.phase}: {len(chosen)} upgradable strips, "
            f"need {ledger.q}"
        )
    chosen = chosen[: ledger.q]
    strips = list(ledger.strips)
    edges: list[EdgeId] = []
    for i in chosen:
        s = strips[i]
        if s.local is None:
            pos = bridgit_setup(ledger.n, _FIRST_LOCAL)[1]
            played = _FIRST_LOCAL
        elif s.pending:
            reply, pos = join_move(s.local, s.pending[0])
            if reply is None:
                reply = fallback_edge(pos)
                pos = claim_safe(pos, reply)
            played = reply
        else:
            played = fallback_edge(s.local)
            pos = claim_safe(s.local, played)
        strips[i] = replace(
            s, kind=StatusKind.VALID, k=s.k + 1, pending=(), local=pos
        )
        edges.append(strip_primal_edge(played, s.x0))
    out = replace(
        ledger,
        strips=tuple(strips),
        potential=_potential(strips, ledger.phase),
    )
    if out.potential != ledger.potential + 2 * ledger.q:
        raise LedgerBroken("an upgrade must raise R by exactly 2 per strip")
    return edges, out


def absorb_maker_edges(
    ledger: StripLedger, edges: Sequence[EdgeId]
) -> StripLedger:
    """Record opponent edges one at a time.

    A valid strip drops to neutral with the hit left pending; a neutral
    strip (fresh, or already nursing a hit) is written off.  Untracked
    edges are ignored.  Each edge may lower R by at most 1.
    """
    strips = list(ledger.strips)
    for e in edges:
        i = strip_index(ledger, e)
        if i is None:
            continue
        s = strips[i]
        if s.kind is StatusKind.INVALID:
            continue
        before = _potential(strips, ledger.phase)
        if s.kind is StatusKind.VALID:
            cut = strip_dual_label(e, s.x0)
            strips[i] = replace(
                s, kind=StatusKind.NEUTRAL, pending=s.pending + (cut,)
            )
        else:
            strips[i] = replace(s, kind=StatusKind.INVALID, pending=())
        if _potential(strips, ledger.phase) < before - 1:
            raise LedgerBroken("one opponent edge may lower R by at most 1")
    return replace(
        ledger,
        strips=tuple(strips),
        potential=_potential(strips, ledger.phase),
    )


def _finished_index(ledger: StripLedger) -> Optional[int]:
    """Index of a played-out strip, verifying its red dual crossing."""
    for i, s in enumerate(ledger.strips):
        if s.kind is StatusKind.INVALID or s.local is None:
            continue
        free = s.local.unclaimed()
        if s.k >= ledger.horizon or len(free) == len(s.pending):
            reds = [strip_primal_edge(d, s.x0) for d in s.local.safe]
            if not has_tb_dual_crossing(ledger.board, reds):
                raise LedgerBroken(
                    f"strip at column {s.x0} ran out of edges without a "
                    "top-bottom dual crossing"
                )
            return i
    return None


def phase_check(ledger: StripLedger) -> tuple[PhaseOutcome, StripLedger]:
    """End-of-round bookkeeping; call after q + (2q-1) combined edges.

    Victory fires once some strip has no undecided edges left, at which
    point its red edges contain a top-bottom dual crossing (checked).
    Otherwise the round counter advances, R >= rounds is asserted, and
    the phase advances once R clears 2 * (6q-2)^(horizon-phase-1).
    """
    if ledger.potential != recompute_potential(ledger):
        raise LedgerBroken("stored potential is stale")
    if _finished_index(ledger) is not None:
        return PhaseOutcome.VICTORY, ledger
    r = ledger.turn_counter + 1
    ledger = replace(ledger, turn_counter=r)
    if ledger.potential < r:
        raise LedgerBroken(
            f"potential {ledger.potential} fell below round count {r}"
        )
    threshold = 2 * (6 * ledger.q - 2) ** (ledger.horizon - ledger.phase - 1)
    if ledger.potential >= threshold:
        ledger = replace(ledger, phase=ledger.phase + 1, turn_counter=0)
        ledger = replace(ledger, potential=recompute_potential(ledger))
        if ledger.phase >= ledger.horizon:
            return PhaseOutcome.VICTORY, ledger
        return PhaseOutcome.ADVANCE, ledger
    return PhaseOutcome.CONTINUE, ledger


def finished_strip(ledger: StripLedger) -> Optional[int]:
    """Public view of the victory test used by phase_check."""
    return _finished_index(ledger)


def snapshot(ledger: StripLedger) -> dict:
    """JSON-ready ledger view for traces and board overlays."""
    strips = [
        {
            "columns": [s.x0, s.x0 + ledger.n],
            "status": s.kind.value,
            "k": s.k,
            "pendingHits": s.pending_hits,
        }
        for s in ledger.strips
    ]
    return {
        "n": ledger.n,
        "q": ledger.q,
        "phase": ledger.phase,
        "potential": ledger.potential,
        "turn": ledger.turn_counter,
        "strips": strips,
    }


# -- the generic ledger ------------------------------------------------------


class LocalStrategy(Protocol):
    """First-player winning plan for one local game."""

    def breaker_edges(self) -> Sequence[Hashable]:
        """The next q edges the plan prescribes."""

    def maker_edge(self, label: Hashable) -> None:
        """Record an opponent edge inside this local game."""

    def finished(self) -> bool:
        """True once the local game is won."""


@dataclass(frozen=True)
class LocalGame:
    """One strip of the generic ledger: the edge labels it owns and a
    factory for its local winning plan."""

    labels: frozenset
    strategy: Callable[[], LocalStrategy]


@dataclass
class _GeneralStrip:
    game: LocalGame
    k: int = 0
    j: int = 0
    invalid: bool = False
    done: bool = False
    plan: Optional[LocalStrategy] = None


class GeneralStripEngine:
    """Phase ledger over caller-supplied local games.

    Plays the (l(p+1)-1, lq) game: every turn upgrades the l leftmost
    healthy strips with q edges apiece, restoring their damage
    tolerance j to p.  Each opponent edge lowers a strip's tolerance by
    one, below zero writing the strip off, and lowers the potential
    sum of (j+1) over freshly upgraded strips by at most 1.  Phases
    advance when the potential clears (p+1)((p+1)s)^(horizon-phase-1),
    with s = l(p+q+1)-1 combined edges per round.
    """

    def __init__(
        self,
        family: Sequence[LocalGame],
        p: int,
        q: int,
        l: int,
        horizon: int,
    ) -> None:
        if p < 1 or q < 1 or l < 1 or horizon < 0:
            raise ValueError("need p, q, l >= 1 and horizon >= 0")
        self.p = p
        self.q = q
        self.l = l
        self.horizon = horizon
        self.strips = [_GeneralStrip(game=g) for g in family]
        self.phase = 0
        self.turn_counter = 0
        self._owner: dict = {}
        for idx, g in enumerate(family):
            for lab in g.labels:
                if lab in self._owner:
                    raise ValueError(f"label {lab!r} belongs to two strips")
                self._owner[lab] = idx

    @property
    def s(self) -> int:
        return self.l * (self.p + self.q + 1) - 1

    def potential(self) -> int:
        k = self.phase + 1
        return sum(
            st.j + 1 for st in self.strips if not st.invalid and st.k == k
        )

    def breaker_turn(self) -> list:
        """l * q edges, q per chosen strip, leftmost strips first."""
        eligible = [
            st
            for st in self.strips
            if not st.invalid and not st.done and st.k == self.phase
        ]
        if len(eligible) < self.l:
            raise OutOfNeutralStrips(
                f"phase {self.phase}: {len(eligible)} upgradable strips, "
                f"need {self.l}"
            )
        before = self.potential()
        out: list = []
        for st in eligible[: self.l]:
            if st.plan is None:
                st.plan = st.game.strategy()
            moves = list(st.plan.breaker_edges())
            if len(moves) != self.q:
                raise LedgerBroken(
                    f"local plan returned {len(moves)} edges, wanted {self.q}"
                )
            st.k += 1
            st.j = self.p
            st.done = st.plan.finished()
            out.extend(moves)
        if self.potential() != before + (self.p + 1) * self.l:
            raise LedgerBroken(
                "an upgrade must raise R by exactly p+1 per strip"
            )
        return out

    def absorb_maker_edges(self, labels: Sequence[Hashable]) -> None:
        for lab in labels:
            idx = self._owner.get(lab)
            if idx is None:
                continue
            st = self.strips[idx]
            if st.invalid or st.done:
                # a finished strip's crossing is already on the board
                continue
            before = self.potential()
            if st.j >= 1:
                st.j -= 1
                if st.plan is not None:
                    st.plan.maker_edge(lab)
                    if st.plan.finished():
                        st.done = True
            else:
                st.invalid = True
            if self.potential() < before - 1:
                raise LedgerBroken(
                    "one opponent edge may lower R by at most 1"
                )

    def phase_check(self) -> PhaseOutcome:
        if self.phase >= self.horizon:
            return PhaseOutcome.VICTORY
        if any(st.done for st in self.strips):
            return PhaseOutcome.VICTORY
        for st in self.strips:
            # overwhelmed strips are written off, not held to the promise
            if not st.invalid and st.k >= self.horizon:
                raise LedgerBroken(
                    "a local plan used up its horizon without winning"
                )
        self.turn_counter += 1
        pot = self.potential()
        if pot < self.turn_counter:
            raise LedgerBroken(
                f"potential {pot} fell below round count {self.turn_counter}"
            )
        exponent = self.horizon - self.phase - 1
        threshold = (self.p + 1) * ((self.p + 1) * self.s) ** exponent
        if pot >= threshold:
            self.phase += 1
            self.turn_counter = 0
            if self.phase >= self.horizon:
                return PhaseOutcome.VICTORY
            return PhaseOutcome.ADVANCE
        return PhaseOutcome.CONTINUE

    def snapshot(self) -> dict:
        strips = [
            {
                "status": "invalid" if st.invalid else "valid",
                "k": st.k,
                "j": st.j,
                "done": st.done,
            }
            for st in self.strips
        ]
        return {
            "p": self.p,
            "q": self.q,
            "l": self.l,
            "phase": self.phase,
            "potential": self.potential(),
            "turn": self.turn_counter,
            "strips": strips,
        }


def general_strip_strategy(
    family: Sequence[LocalGame],
    p: int,
    q: int,
    l: int,
    horizon: int,
    m: Optional[int] = None,
) -> GeneralStripEngine:
    """Generic ledger over the first m local games of the family.

    The caller promises each local game has a first-player winning plan
    that needs at most `horizon` turns.  With m at least
    general_strip_bound(p, q, l, horizon) the engine never runs out of
    upgradable strips.
    """
    games = list(family)
    if m is not None:
        games = games[:m]
    return GeneralStripEngine(games, p=p, q=q, l=l, horizon=horizon)


# -- the strip game as a local-game family -----------------------------------


class BridgitStripPlan:
    """The strip defence phrased as a local plan for the generic ledger.

    Opens the strip's dual board with the canonical first claim, then
    answers recorded hits through the join defence or takes the lowest
    free edge.  Emits board edges of the owning strip.
    """

    def __init__(self, n: int, x0: int) -> None:
        self.n = n
        self.x0 = x0
        self.pos: Optional[SwitchingPosition] = None
        self.queue: list[EdgeId] = []

    def breaker_edges(self) -> tuple[EdgeId, ...]:
        if self.pos is None:
            self.pos = bridgit_setup(self.n, _FIRST_LOCAL)[1]
            played = _FIRST_LOCAL
        elif self.queue:
            cut = self.queue.pop(0)
            reply, self.pos = join_move(self.pos, cut)
            if reply is None:
                reply = fallback_edge(self.pos)
                self.pos = claim_safe(self.pos, reply)
            played = reply
        else:
            played = fallback_edge(self.pos)
            self.pos = claim_safe(self.pos, played)
        return (strip_primal_edge(played, self.x0),)

    def maker_edge(self, e: EdgeId) -> None:
        self.queue.append(strip_dual_label(e, self.x0))

    def finished(self) -> bool:
        if self.pos is None:
            return False
        return len(self.pos.unclaimed()) == len(self.queue)


def board_strip_family(n: int, m: int) -> list[LocalGame]:
    """The m-column board's strips as local games (q = 1 edges a turn)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    count = m // (n + 1)
    out = []
    for i in range(count):
        x0 = 1 + i * (n + 1)
        out.append(
            LocalGame(
                labels=frozenset(strip_edges(n, x0)),
                strategy=lambda x0=x0: BridgitStripPlan(n, x0),
            )
        )
    return out
