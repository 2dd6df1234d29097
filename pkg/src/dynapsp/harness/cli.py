"""Command line entry point: ``dynapsp run`` and ``dynapsp generate``.

Exit codes: 0 clean run, 1 oracle mismatch, 2 unreadable or invalid trace.
The default seed can be overridden with the ``DYNAPSP_SEED`` environment
variable.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from ..apsp import DETERMINISTIC, RANDOMIZED, Params
from ..dagreach import PrimeField
from ..errors import DynApspError, MalformedUpdateError, OracleMismatch, ParameterError, TraceParseError
from .runner import run_trace
from .trace import APSP, DAG, format_trace, generate_trace, parse_trace

EXIT_OK, EXIT_MISMATCH, EXIT_BAD_INPUT = 0, 1, 2


def default_seed() -> int:
    raw = os.environ.get("DYNAPSP_SEED")
    return int(raw) if raw else 0


def parse_params(text: str | None) -> dict:
    """``h=3,delta=9,tau=400`` -> ``{"h": 3, "delta": 9, "tau": 400}``."""
    out: dict = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in ("h", "delta", "tau", "c"):
            raise argparse.ArgumentTypeError(f"bad parameter {item!r}; expected h=,delta=,tau=,c=")
        try:
            out[name] = int(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"parameter {name} needs an integer, got {value!r}") from None
    return out


def _prime(text: str, seed: int) -> PrimeField:
    if text == "random":
        return PrimeField.random(seed)
    return PrimeField(int(text))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dynapsp", description="Dynamic APSP and DAG reachability trace runner.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a trace file ('-' for stdin)")
    run.add_argument("trace")
    run.add_argument("--params", type=parse_params, default={}, help="h=..,delta=..,tau=..[,c=..]")
    run.add_argument("--mode", choices=(DETERMINISTIC, RANDOMIZED), default=DETERMINISTIC)
    run.add_argument("--unweighted", action="store_true")
    run.add_argument("--degree-split", action="store_true")
    run.add_argument("--oracle-check", action="store_true")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--prime", default=None, help="prime modulus for dag traces, or 'random' to draw one from the seed")
    run.add_argument("--phase-len", type=int, default=4, help="updates per phase for dag traces")
    run.add_argument("--inverse-checks", type=int, default=0, help="random inverse entries audited per dag update")
    run.add_argument("--report", default=None, help="write JSON-lines report here (default stdout)")
    run.add_argument("--timing", action="store_true", help="include wall time in the summary")

    gen = sub.add_parser("generate", help="write a random trace")
    gen.add_argument("--engine", choices=(APSP, DAG), default=APSP)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--ops", type=int, default=200)
    gen.add_argument("--wmin", type=int, default=-5)
    gen.add_argument("--wmax", type=int, default=50)
    gen.add_argument("--neg-fraction", type=float, default=0.0)
    gen.add_argument("--update-fraction", type=float, default=0.4)
    gen.add_argument("--unweighted", action="store_true")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out", default=None)
    return ap


def cmd_run(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    try:
        if args.trace == "-":
            trace = parse_trace(sys.stdin)
        else:
            with open(args.trace) as fh:
                trace = parse_trace(fh)
    except (OSError, TraceParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    knobs = args.params
    params = Params(
        h=knobs.get("h"),
        delta=knobs.get("delta"),
        tau=knobs.get("tau"),
        rand_c=knobs.get("c", 3),
        mode=args.mode,
        unweighted=args.unweighted,
        degree_split=args.degree_split,
        seed=seed,
    )
    try:
        prime = _prime(args.prime, seed) if args.prime else None
        report = run_trace(
            trace,
            params,
            args.oracle_check,
            phase_len=args.phase_len,
            prime=prime,
            inverse_checks=args.inverse_checks,
            seed=seed,
            timing=args.timing,
        )
    except OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        print(json.dumps({"record": "mismatch", **exc.record}, sort_keys=True))
        return EXIT_MISMATCH
    except (ParameterError, MalformedUpdateError, ValueError, DynApspError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    text = report.to_jsonl()
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_generate(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    try:
        trace = generate_trace(
            args.n,
            args.m,
            args.ops,
            weight_range=(args.wmin, args.wmax),
            neg_fraction=args.neg_fraction,
            engine=args.engine,
            seed=seed,
            update_fraction=args.update_fraction,
            unweighted=args.unweighted,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    text = format_trace(trace)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    return cmd_generate(args)


if __name__ == "__main__":
    sys.exit(main())
