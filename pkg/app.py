import argparse
import logging
import os
import sys

from dotenv import load_dotenv

# Load environment variables before the solver modules read their defaults
load_dotenv()

# ─── Logging ──────────────────────────────────────────────────────────────────
logging.basicConfig(
    level=os.getenv("LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s [%(levelname)s] %(name)s – %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
    stream=sys.stderr,
)

from cli.commands import (  # noqa: E402
    cmd_capacity,
    cmd_compare,
    cmd_exponent,
    cmd_gen_channel,
    cmd_oracle,
)
from solver.algorithms import DEFAULT_EPSILON, DEFAULT_MAX_ITER  # noqa: E402
from solver.compare import DEFAULT_ALPHAS, PRESETS  # noqa: E402
from utils.oracle import DEFAULT_STEP  # noqa: E402


def _add_solver_limits(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                        help="stop when |F(k) - F(k-1)| < epsilon")
    parser.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER,
                        help="iteration guard; hitting it exits with code 2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alphacap",
        description="α-capacity of discrete memoryless channels by alternating optimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    # ── capacity ──────────────────────────────────────────────────────────────
    p = sub.add_parser("capacity", help="run one solver and print a JSON record")
    p.add_argument("--algorithm", required=True, choices=["arimoto", "jo", "csiszar"])
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--channel", required=True, help="channel CSV or JSON file")
    _add_solver_limits(p)
    p.add_argument("--init", default=None,
                   help="uniform-x, uniform-xy, product, or a CSV/JSON file with a custom start")
    p.add_argument("--trace", default=None, help="write the k,F trace CSV here")
    p.add_argument("--bits", action="store_true", help="report the value in bits")
    p.set_defaults(func=cmd_capacity)

    # ── compare ───────────────────────────────────────────────────────────────
    p = sub.add_parser("compare", help="run the preset configurations over a list of α")
    p.add_argument("--channel", required=True)
    p.add_argument("--alphas", default=",".join(f"{a:g}" for a in DEFAULT_ALPHAS))
    _add_solver_limits(p)
    p.add_argument("--preset", default="table1", choices=sorted(PRESETS))
    p.add_argument("--traces-dir", default=None, help="one k,F CSV per run")
    p.add_argument("--format", default="text", choices=["text", "csv"])
    p.set_defaults(func=cmd_compare)

    # ── exponent ──────────────────────────────────────────────────────────────
    p = sub.add_parser("exponent", help="correct decoding exponent at a rate")
    p.add_argument("--channel", required=True)
    p.add_argument("--rate", type=float, required=True, help="rate in nats")
    p.add_argument("--rho-grid", type=int, default=200)
    p.add_argument("--algorithm", default="arimoto", choices=["arimoto", "jo", "csiszar"])
    _add_solver_limits(p)
    p.add_argument("--csv", default=None, help="write the rho,min_e0 sweep here instead of stdout")
    p.set_defaults(func=cmd_exponent)

    # ── gen-channel ───────────────────────────────────────────────────────────
    p = sub.add_parser("gen-channel", help="print a random row-stochastic matrix")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_channel)

    # ── oracle ────────────────────────────────────────────────────────────────
    p = sub.add_parser("oracle", help="brute-force grid maximum of the Sibson MI")
    p.add_argument("--channel", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--step", type=float, default=DEFAULT_STEP)
    p.add_argument("--refine", action="store_true")
    p.add_argument("--certify", default=None, choices=["arimoto", "jo", "csiszar"],
                   help="also run this solver and check it against the grid")
    p.add_argument("--tol", type=float, default=1e-4)
    _add_solver_limits(p)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
