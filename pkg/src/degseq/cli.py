"""Command-line interface: ``degseq gen``, ``degseq verify`` and ``degseq bench``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .bipartite import inc_bipartite
from .errors import (
    DegSeqError,
    GaveUp,
    InsufficientSamples,
    InvalidDegree,
    NotGraphical,
    OddDegreeSum,
    TooLargeForOracle,
    UnbalancedParts,
)
from .graph import build_bipartite_sequence, build_degree_sequence
from .incgen import DEFAULT_MAX_RESTARTS, inc_gen
from .verification import chi_square_uniformity, enumerate_bipartite_graphs, enumerate_graphs

EXIT_INPUT, EXIT_NOT_GRAPHICAL, EXIT_GAVE_UP = 2, 3, 4


class InputError(Exception):
    pass


def _parse_ints(text: str, where: str) -> list[int]:
    tokens = text.replace(",", " ").split()
    try:
        return [int(tok) for tok in tokens]
    except ValueError:
        raise InputError(f"{where}: expected non-negative integers") from None


def _read_file(path: str) -> list[int]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return _parse_ints(text, path)


def _degree_source(args):
    """The requested degrees: a list, or an (s, t) pair in bipartite mode."""
    sources = [args.degrees is not None, args.degrees_file is not None, args.regular is not None, args.bipartite is not None]
    if sum(sources) != 1:
        raise InputError("give exactly one of --degrees, --degrees-file, --regular, --bipartite")
    if args.degrees is not None:
        return _parse_ints(args.degrees, "--degrees")
    if args.degrees_file is not None:
        return _read_file(args.degrees_file)
    if args.regular is not None:
        if args.n is None:
            raise InputError("--regular needs --n")
        return [args.regular] * args.n
    return tuple(_read_file(p) for p in args.bipartite)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("DEGSEQ_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"DEGSEQ_SEED is not an integer: {env!r}") from None


def _make_sampler(source, max_restarts):
    if isinstance(source, tuple):
        bds = build_bipartite_sequence(*source)
        if not bds.bigraphical:
            raise NotGraphical("bipartite degree sequence is not realisable")
        return lambda rng: inc_bipartite(bds, rng, max_restarts)
    ds = build_degree_sequence(source)
    if ds.M % 2:
        raise OddDegreeSum(f"degree sum {ds.M} is odd")
    if not ds.graphical:
        raise NotGraphical("degree sequence is not graphical")
    return lambda rng: inc_gen(ds, rng, max_restarts)


def _run_all(sampler, seed: int, count: int, workers: int):
    """Sample ``count`` graphs, the k-th from its own child seed; results in index order."""
    children = np.random.SeedSequence(seed).spawn(count)

    def one(k):
        return sampler(np.random.default_rng(children[k]))

    if workers <= 1 or count == 1:
        return [one(k) for k in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(count)))


def _format_graph(g, fmt: str, k: int) -> str:
    edges = g.sorted_edges().tolist()
    if fmt == "jsonl":
        return json.dumps({"seed_index": k, "edges": edges}, separators=(",", ":")) + "\n"
    return "".join(f"{u} {v}\n" for u, v in edges)


def _write(args, text: str) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            Path(args.output).write_text(text)
        except OSError as e:
            raise InputError(f"cannot write {args.output}: {e.strerror}") from None


def cmd_gen(args) -> int:
    sampler = _make_sampler(_degree_source(args), args.max_restarts)
    results = _run_all(sampler, _seed(args), args.samples, args.workers)
    parts = [_format_graph(g, args.format, k) for k, (g, _) in enumerate(results)]
    _write(args, ("" if args.format == "jsonl" else "\n").join(parts))
    return 0


def cmd_verify(args) -> int:
    source = _degree_source(args)
    universe = enumerate_bipartite_graphs(*source) if isinstance(source, tuple) else enumerate_graphs(source)
    sampler = _make_sampler(source, args.max_restarts)
    if len(universe) < 2:
        raise InputError(f"universe has {len(universe)} graph(s); nothing to test")
    results = _run_all(sampler, _seed(args), args.samples, args.workers)
    report = chi_square_uniformity(universe.tally(g.key() for g, _ in results), args.alpha)
    record = report.to_dict()
    record["universe_size"] = len(universe)
    record["samples"] = args.samples
    _write(args, json.dumps(record) + "\n")
    return 0


def cmd_bench(args) -> int:
    source = _degree_source(args)
    sampler = _make_sampler(source, args.max_restarts)
    seed = _seed(args)
    results = _run_all(sampler, seed, args.samples, args.workers)
    n = sum(map(len, source)) if isinstance(source, tuple) else len(source)
    lines = []
    for k, (_, stats) in enumerate(results):
        rec = {"run": k, "seed": seed, "n": n, "bipartite": isinstance(source, tuple)}
        rec.update(stats.to_dict())
        lines.append(json.dumps(rec) + "\n")
    _write(args, "".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="degseq", description="Uniform random graphs with a given degree sequence.")
    sub = parser.add_subparsers(dest="mode", required=True)
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("degree source (exactly one)")
    src.add_argument("--degrees", help="comma or space separated degrees")
    src.add_argument("--degrees-file", help="file of whitespace separated degrees")
    src.add_argument("--regular", type=int, metavar="D", help="D-regular sequence, needs --n")
    src.add_argument("--n", type=int, help="vertex count for --regular")
    src.add_argument("--bipartite", nargs=2, metavar=("S_FILE", "T_FILE"), help="part X and part Y degree files")
    common.add_argument("--seed", type=int, help="master seed (default: $DEGSEQ_SEED or 0)")
    common.add_argument("--max-restarts", type=int, default=DEFAULT_MAX_RESTARTS)
    common.add_argument("--output", "-o", help="output path (default stdout)")
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("gen", parents=[common], help="write sampled graphs")
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--format", choices=("edgelist", "jsonl"), default="edgelist")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", parents=[common], help="chi-square uniformity check against full enumeration")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--alpha", type=float, default=0.001)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[common], help="per-run wall time and restart statistics as JSON lines")
    p.add_argument("--samples", type=int, default=10)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.samples < 1:
            raise InputError("--samples must be at least 1")
        return args.func(args)
    except (InputError, InvalidDegree, TooLargeForOracle, InsufficientSamples) as e:
        print(f"degseq: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (NotGraphical, OddDegreeSum, UnbalancedParts) as e:
        print(f"degseq: {e}", file=sys.stderr)
        return EXIT_NOT_GRAPHICAL
    except GaveUp as e:
        print(f"degseq: {e}", file=sys.stderr)
        return EXIT_GAVE_UP
    except DegSeqError as e:
        print(f"degseq: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
