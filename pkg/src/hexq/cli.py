"""Command line front end.

Agent specs for `arena`: `random`, `heuristic:exact`, `heuristic:estimate`,
or `net:<weights-file>`.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .arena import (
    Agent,
    Heuristic1Ply,
    NetGreedy,
    UniformRandom,
    tournament_all_openings,
    tournament_unrestricted,
)
from .board import cell_to_string, from_moves, parse_cell
from .circuit import heuristic_action_values
from .gtp import engine_loop
from .net import NetConfig, init_network, load_weights, save_weights
from .posdb import generate_db, load_db, save_db
from .trainer import load_train_config, mentor, train_dql

log = logging.getLogger(__name__)


def parse_agent(spec: str) -> Agent:
    if spec == "random":
        return UniformRandom()
    if spec == "heuristic":
        return Heuristic1Ply("exact")
    if spec.startswith("heuristic:"):
        return Heuristic1Ply(spec.split(":", 1)[1])
    if spec.startswith("net:"):
        path = spec.split(":", 1)[1]
        return NetGreedy(load_weights(path), label=f"net:{Path(path).name}")
    raise argparse.ArgumentTypeError(f"unknown agent spec {spec!r}")


def _net_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--layers", type=int, default=10)
    p.add_argument("--filters-d5", type=int, default=64)
    p.add_argument("--filters-d3", type=int, default=64)
    p.add_argument("--precision", choices=("single", "double"), default="single")
    p.add_argument("--init-seed", type=int, default=0)


def cmd_heur(args) -> int:
    moves = [parse_cell(tok, args.size) for tok in args.moves.split()]
    board = from_moves(args.size, moves)
    hv = heuristic_action_values(board, mode=args.mode)
    for cell, value in hv.ranked(args.size):
        print(f"{cell_to_string(cell)} {value:+.6f}")
    return 0


def cmd_gen_db(args) -> int:
    rng = np.random.default_rng(args.seed)
    db = generate_db(args.size, args.games, rng, temperature=args.tau)
    save_db(db, args.out)
    print(f"wrote {len(db.games)} games ({db.n_positions} positions) to {args.out}")
    return 0


def cmd_train(args) -> int:
    config = load_train_config(args.config)
    db = load_db(args.db)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    net = init_network(
        NetConfig(
            db.size,
            conv_layers=args.layers,
            filters_d5=args.filters_d5,
            filters_d3=args.filters_d3,
            precision=args.precision,
            init_seed=args.init_seed,
        )
    )
    if args.mentor_passes > 0:
        log.info("mentoring: %d passes over %d positions", args.mentor_passes, db.n_positions)
        net, losses = mentor(net, db, args.mentor_passes, config)
        (out / "mentor_loss.csv").write_text(
            "batch,mse\n" + "\n".join(f"{i},{v:.6f}" for i, v in enumerate(losses)) + "\n"
        )
        save_weights(net, out / "mentored.hxw")
    net, metrics, _ = train_dql(net, db, config, out_dir=out)
    metrics.to_csv(out / "metrics.csv")
    save_weights(net, out / "final.hxw")
    print(f"trained {config.episodes} episodes; weights and metrics in {out}")
    return 0


def cmd_arena(args) -> int:
    a, b = args.a, args.b
    if a.label == b.label:
        a.label += "-a"
        b.label += "-b"
    if args.mode == "all-openings":
        report = tournament_all_openings(a, b, args.size, seed=args.seed)
    else:
        report = tournament_unrestricted(a, b, args.size, args.games, seed=args.seed)
    if args.csv:
        report.to_csv(args.csv)
    print(report.summary())
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    agent = NetGreedy(load_weights(args.weights), label="engine")
    serve(agent, port=args.port, host=args.host)
    return 0


def cmd_engine(args) -> int:
    agent = NetGreedy(load_weights(args.weights), label="engine")
    engine_loop(sys.stdin, sys.stdout, agent, size=args.size)
    return 0


def cmd_init_net(args) -> int:
    net = init_network(
        NetConfig(
            args.size,
            conv_layers=args.layers,
            filters_d5=args.filters_d5,
            filters_d3=args.filters_d3,
            precision=args.precision,
            init_seed=args.init_seed,
        )
    )
    save_weights(net, args.out)
    print(f"wrote fresh {args.size}x{args.size} network to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hexq", description=__doc__)
    parser.add_argument("--version", action="version", version=f"hexq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("heur", help="print ranked heuristic values for a position")
    p.add_argument("--size", type=int, default=13)
    p.add_argument("--moves", default="", help="space-separated cells, e.g. 'a1 b2'")
    p.add_argument("--mode", choices=("exact", "estimate"), default="exact")
    p.set_defaults(fn=cmd_heur)

    p = sub.add_parser("gen-db", help="self-play a starting-position database")
    p.add_argument("--games", type=int, required=True)
    p.add_argument("--size", type=int, default=13)
    p.add_argument("--tau", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_gen_db)

    p = sub.add_parser("train", help="mentor then Q-learn a network")
    p.add_argument("--config", required=True, help="flat key=value TrainConfig file")
    p.add_argument("--out", required=True, help="directory for weights and metrics")
    p.add_argument("--db", required=True, help="starting-position database file")
    p.add_argument("--mentor-passes", type=int, default=0)
    _net_config_args(p)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("arena", help="pit two agents against each other")
    p.add_argument("--a", type=parse_agent, required=True)
    p.add_argument("--b", type=parse_agent, required=True)
    p.add_argument("--mode", choices=("open", "all-openings"), default="open")
    p.add_argument("--games", type=int, default=100)
    p.add_argument("--size", type=int, default=13)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=cmd_arena)

    p = sub.add_parser("serve", help="HTTP JSON API for browser play")
    p.add_argument("--weights", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("engine", help="line protocol loop on stdin/stdout")
    p.add_argument("--weights", required=True)
    p.add_argument("--size", type=int, default=13)
    p.set_defaults(fn=cmd_engine)

    p = sub.add_parser("init-net", help="write freshly initialized weights")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--out", required=True)
    _net_config_args(p)
    p.set_defaults(fn=cmd_init_net)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
