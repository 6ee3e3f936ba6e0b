"""Command line front end: match running, exact solving, the weighted
count report, and the play service.

Exit codes: 0 on success, 2 when a strategy's contract or a game
invariant broke mid-run, 3 when a size or resource limit was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .breaker_strips import LedgerBroken, OutOfNeutralStrips
from .game_core import IllegalMove, Player, Variant
from .harness import AgentError, AgentKind, AgentSpec, run_match
from .lattice import Board, BoardKind
from .solver import erdos_selfridge, solve_position

_VARIANTS = {
    "crossing": Variant.CROSSING,
    "switching": Variant.SWITCHING,
    "doubleResponse": Variant.DOUBLE_RESPONSE,
    "secure": Variant.SECURE,
}
_SPARSE = (Variant.DOUBLE_RESPONSE, Variant.SECURE)


def _board_for(variant: Variant, m: int, n: int) -> Board:
    if variant in _SPARSE:
        return Board(BoardKind.INFINITE_STRIP, 0, n)
    return Board(BoardKind.S, m, n)


def _cmd_match(args: argparse.Namespace) -> int:
    variant = _VARIANTS[args.variant]
    board = _board_for(variant, args.m, args.n)
    maker = AgentSpec(Player.MAKER, AgentKind(args.maker))
    breaker = AgentSpec(Player.BREAKER, AgentKind(args.breaker))
    report = run_match(
        board,
        args.p,
        args.q,
        maker,
        breaker,
        games=args.games,
        seed=args.seed,
        variant=variant,
        turn_cap=args.turn_cap,
        out=args.out,
        trace=args.trace,
    )
    name = f"S{board.m}x{board.n}" if board.kind is BoardKind.S else f"strip(n={board.n})"
    print(f"{name} ({args.p},{args.q}) {args.variant}: {args.games} games")
    print(f"maker={args.maker} breaker={args.breaker} seed={args.seed}")
    print(
        f"maker wins {report.maker_wins}, breaker wins {report.breaker_wins},"
        f" undecided {report.undecided}"
    )
    if args.out:
        print(f"records written to {args.out}")
    if any(g.get("healthy") is False for g in report.games):
        print("contract violation: a safety check failed mid-game", file=sys.stderr)
        return 2
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    board = Board(BoardKind.S, args.m, args.n)
    turn = Player.MAKER if args.turn == "maker" else Player.BREAKER
    result = solve_position(board, args.p, args.q, {}, turn)
    print(f"S{args.m}x{args.n} ({args.p},{args.q}), {args.turn} to move")
    print(f"winner: {result.winner.value}")
    print(f"nodes: {result.nodes}")
    pv = [[[e.u, e.v] for e in ply] for ply in result.pv]
    print(f"pv: {json.dumps(pv)}")
    return 0


def _cmd_es(args: argparse.Namespace) -> int:
    board = Board(BoardKind.S, args.m, args.n)
    rep = erdos_selfridge(board, args.p, args.q)
    print(f"S{args.m}x{args.n} ({args.p},{args.q}) weighted count")
    print(f"sets: {rep.sets}")
    print(f"total: {rep.total}")
    print(f"bound: {rep.bound}")
    print(f"exact: {rep.exact}")
    print(f"passes: {rep.passes}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .play_service import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="crossing-games",
        description="crossing games on grid boards: matches, solving, serving",
    )
    sub = top.add_subparsers(dest="command", required=True)

    m = sub.add_parser("match", help="run a series of games between two agents")
    m.add_argument("--variant", choices=sorted(_VARIANTS), default="crossing")
    m.add_argument("--m", type=int, default=6, help="board width (finite games)")
    m.add_argument("--n", type=int, default=5, help="board height")
    m.add_argument("--p", type=int, default=1, help="maker quota")
    m.add_argument("--q", type=int, default=1, help="breaker quota")
    m.add_argument(
        "--maker", default="random", choices=[k.value for k in AgentKind]
    )
    m.add_argument(
        "--breaker", default="random", choices=[k.value for k in AgentKind]
    )
    m.add_argument("--games", type=int, default=1)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out", default=None, help="write JSON-lines records here")
    m.add_argument("--turn-cap", type=int, default=10_000)
    m.add_argument(
        "--trace",
        action="store_true",
        help="embed per-turn edges and agent overlays in each record",
    )
    m.set_defaults(fn=_cmd_match)

    s = sub.add_parser("solve", help="exactly solve a small empty board")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, default=1)
    s.add_argument("--q", type=int, default=1)
    s.add_argument("--turn", choices=["maker", "breaker"], default="maker")
    s.set_defaults(fn=_cmd_solve)

    e = sub.add_parser("es", help="weighted count over all crossing paths")
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--p", type=int, default=1)
    e.add_argument("--q", type=int, default=1)
    e.set_defaults(fn=_cmd_es)

    v = sub.add_parser("serve", help="start the HTTP play service")
    v.add_argument("--port", type=int, default=8080)
    v.add_argument("--host", default="127.0.0.1")
    v.set_defaults(fn=_cmd_serve)

    return top


def main(argv: Optional[list[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except OutOfNeutralStrips as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return 3
    except (LedgerBroken, IllegalMove, AgentError) as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        if "search limit" in str(exc):
            print(f"limit exceeded: {exc}", file=sys.stderr)
            return 3
        raise


if __name__ == "__main__":
    sys.exit(main())
