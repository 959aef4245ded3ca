"""
Command-line front-end.

Results go to files or stdout; diagnostics go to stderr through logging.
Exit codes: 0 success, 1 usage error, 2 resource guard, 3 agreement failure
or invariant violation.
"""
import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

from .automata import ensure_complete, global_mintermise, local_mintermise
from .bench import bench, filter_min_ms, records_to_csv, summarise, summary_to_csv
from .config import Deadline, configure_logging, get_settings
from .errors import SfaError, UsageError
from .generate import DEFAULT_DENSITY, parse_algebra_option, random_sfa, write_corpus
from .reduction import COMPARISON_HEADER, compare_reductions, reduce_iterative, reduction_pass
from .regex import regex_compile
from .simulation import ALGORITHMS, check_agreement, run_algorithm
from .textformat import load_sfa, save_sfa

logger = logging.getLogger("sfa-simulation")

EXIT_OK = 0
EXIT_AGREEMENT = 3


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def cmd_sim(args: argparse.Namespace) -> int:
    m = load_sfa(args.input)
    if args.complete:
        m, added = ensure_complete(m)
        logger.info(f"Added sink state {m.sink}" if added else "Input is already complete")
    logger.info(f"Running {args.algo} on {m.n} states, {m.m} transitions")
    started = time.perf_counter()
    relation = run_algorithm(args.algo, m, Deadline(args.timeout), args.cap)
    logger.info(f"{args.algo}: {len(relation)} pairs in {(time.perf_counter() - started) * 1000:.1f} ms")
    _emit(relation.to_csv(args.algo), args.out)
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    m = load_sfa(args.input)
    method = "simulation" if args.method == "sim" else "bisimulation"
    if args.iterative:
        reduced, report = reduce_iterative(m, method, args.max_iters)
        if args.report:
            _emit(report.to_csv(), args.report)
    else:
        reduced, _ = reduction_pass(m, method)
    logger.info(f"Reduced {m.n} -> {reduced.n} states, {m.m} -> {reduced.m} transitions")
    save_sfa(reduced, args.out)
    return EXIT_OK


def cmd_minterms(args: argparse.Namespace) -> int:
    m = load_sfa(args.input)
    mintermise = global_mintermise if args.scope == "global" else local_mintermise
    _, stats = mintermise(m, args.cap)
    ratio = "n/a" if stats.blowup_ratio is None else f"{stats.blowup_ratio:.3f}"
    lines = [
        f"scope: {stats.scope}",
        f"minterms: {stats.minterm_count}",
        f"transitions: {stats.original_transitions} -> {stats.transitions}",
        f"blowup: {ratio}",
    ]
    if stats.per_state:
        lines.append("per_state: " + " ".join(str(k) for k in stats.per_state))
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_regex(args: argparse.Namespace) -> int:
    m = regex_compile(args.pattern, args.encoding)
    save_sfa(m, args.out)
    logger.info(f"Compiled {args.pattern!r} to {m.n} states, {m.m} transitions")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    m = random_sfa(args.seed, args.n, args.density, parse_algebra_option(args.algebra), args.pool)
    save_sfa(m, args.out)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    records = bench(args.dir, args.algos, args.timeout, args.cap, args.jobs)
    if args.min_ms:
        records = filter_min_ms(records, args.min_ms)
    _emit(records_to_csv(records), args.out)
    if args.summary:
        timeout = get_settings().timeout_ms if args.timeout is None else args.timeout
        _emit(summary_to_csv(summarise(records, timeout)), args.summary)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    m = load_sfa(args.input)
    report = check_agreement(m, cap=args.cap, max_word_len=args.max_word_len)
    sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    if not report.agreed:
        for d in report.discrepancies:
            logger.error(f"{d.algorithm} disagrees on {d.pair}: expected {d.expected}, got {d.actual}; word {d.word}")
        return EXIT_AGREEMENT
    logger.info(f"All algorithms agree ({len(report.digests)} run, {len(report.skipped)} skipped)")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        raise UsageError(f"corpus directory {root} does not exist")
    rows = [COMPARISON_HEADER]
    for path in sorted(root.glob("*.sfa")):
        try:
            m = load_sfa(path)
        except (SfaError, OSError) as e:
            logger.warning(f"Skipping {path.name}: {e}")
            continue
        rows.append(compare_reductions(m, args.max_iters, name=path.stem).csv_row(path.stem))
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_corpus(args: argparse.Namespace) -> int:
    write_corpus(args.out, args.seed, args.count, args.n)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sfa-simulation", description="Simulation preorders and reduction for symbolic finite automata")
    parser.add_argument("--log-level", default=None, help="Logging level (default: SFASIM_LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sim", help="Compute the simulation preorder")
    p.add_argument("--algo", choices=list(ALGORITHMS), default="nocount")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", default=None, help="Relation CSV (default: stdout)")
    p.add_argument("--complete", action="store_true", help="Complete the automaton first")
    p.add_argument("--timeout", type=float, default=None, help="Timeout in ms (default: none)")
    p.add_argument("--cap", type=int, default=None, help="Minterm cap for global")
    p.set_defaults(handler=cmd_sim)

    p = sub.add_parser("reduce", help="Reduce an automaton by simulation or bisimulation")
    p.add_argument("--method", choices=["sim", "bisim"], default="sim")
    p.add_argument("--iterative", action="store_true")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None, help="Per-pass CSV report (with --iterative)")
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("minterms", help="Print mintermisation statistics")
    p.add_argument("--scope", choices=["global", "local"], default="global")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(handler=cmd_minterms)

    p = sub.add_parser("regex", help="Compile a regex to an SFA")
    p.add_argument("--pattern", required=True)
    p.add_argument("--encoding", choices=["interval", "bdd16"], default="interval")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_regex)

    p = sub.add_parser("gen", help="Generate a random SFA")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--density", type=float, default=DEFAULT_DENSITY)
    p.add_argument("--algebra", default="interval", help="interval[:LO:HI], bitvector[:K] or explicit[:a,b,...]")
    p.add_argument("--pool", type=int, default=4)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("bench", help="Benchmark algorithms over a corpus directory")
    p.add_argument("--dir", required=True)
    p.add_argument("--algos", default="iny,global,local,nocount")
    p.add_argument("--timeout", type=float, default=None, help="Per-run timeout in ms")
    p.add_argument("--cap", type=int, default=None, help="Minterm cap")
    p.add_argument("--out", default=None, help="Bench CSV (default: stdout)")
    p.add_argument("--summary", default=None, help="Per-algorithm summary CSV")
    p.add_argument("--min-ms", type=float, default=0.0, help="Drop automata where every run is faster")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("check", help="Cross-check all algorithms against the oracle")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--max-word-len", type=int, default=5)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("compare", help="Compare simulation and bisimulation reduction over a corpus")
    p.add_argument("--dir", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--max-iters", type=int, default=None)
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("corpus", help="Write the benchmark corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--n", type=int, default=8)
    p.set_defaults(handler=cmd_corpus)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else UsageError.exit_code
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except SfaError as e:
        logger.error(str(e))
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return UsageError.exit_code


if __name__ == "__main__":
    sys.exit(main())
