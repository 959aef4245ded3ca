"""
Benchmark harness.

Runs the selected simulation algorithms over every ``*.sfa`` file of a corpus
directory under a deadline and a minterm cap, and records one ``BenchRecord``
per (automaton, algorithm) cell. Failed cells are charged the full timeout.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, Iterable, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from .algebra import OperationCounter
from .automata import Sfa, complete, global_mintermise
from .config import Deadline, get_settings
from .errors import DeadlineExceeded, MintermBlowupError, ResourceError, SfaError, UsageError
from .simulation import ALGORITHMS, run_algorithm
from .textformat import load_sfa

logger = logging.getLogger(__name__)

Outcome = Literal["ok", "timeout", "minterm-cap", "oom-guard"]

DEFAULT_ALGORITHMS = ("iny", "global", "local", "nocount")
BENCH_HEADER = "id,n,m,maxoutdeg,minterms,blowup,algo,ms,ops_and,ops_or,ops_not,ops_sat,outcome,digest"
SUMMARY_HEADER = "algo,total_ms,wins,fails"


class BenchRecord(BaseModel):
    id: str
    n: int
    m: int
    maxoutdeg: int
    minterms: Optional[int] = None
    blowup: Optional[float] = None
    algo: str
    ms: float
    ops_and: int = 0
    ops_or: int = 0
    ops_not: int = 0
    ops_sat: int = 0
    outcome: Outcome = "ok"
    digest: str = ""

    @property
    def ok(self) -> bool:
        return self.outcome == "ok"

    def csv_row(self) -> str:
        minterms = "" if self.minterms is None else str(self.minterms)
        blowup = "" if self.blowup is None else f"{self.blowup:.3f}"
        return ",".join(
            [
                self.id,
                str(self.n),
                str(self.m),
                str(self.maxoutdeg),
                minterms,
                blowup,
                self.algo,
                f"{self.ms:.3f}",
                str(self.ops_and),
                str(self.ops_or),
                str(self.ops_not),
                str(self.ops_sat),
                self.outcome,
                self.digest,
            ]
        )


class AlgorithmSummary(BaseModel):
    algo: str
    total_ms: float = 0.0
    wins: int = 0
    fails: int = 0

    def csv_row(self) -> str:
        return f"{self.algo},{self.total_ms:.3f},{self.wins},{self.fails}"


def parse_algorithms(text: Union[str, Iterable[str]]) -> List[str]:
    names = [s.strip() for s in text.split(",")] if isinstance(text, str) else list(text)
    names = [s for s in names if s]
    unknown = [s for s in names if s not in ALGORITHMS]
    if unknown:
        raise UsageError(f"unknown algorithm(s) {', '.join(unknown)}; expected any of {', '.join(ALGORITHMS)}")
    if not names:
        raise UsageError("no algorithms selected")
    return names


def corpus_files(corpus_dir: Union[str, Path]) -> List[Path]:
    root = Path(corpus_dir)
    if not root.is_dir():
        raise UsageError(f"corpus directory {root} does not exist")
    return sorted(root.glob("*.sfa"))


def _shape(automaton_id: str, m: Sfa, cap: int, timeout_ms: Optional[float] = None) -> Dict[str, object]:
    """Size columns of a bench row; the minterm columns stay empty past the cap or the timeout."""
    completed = complete(m)
    try:
        _, stats = global_mintermise(completed, cap, Deadline(timeout_ms))
        minterms, blowup = stats.minterm_count, stats.blowup_ratio
    except MintermBlowupError as e:
        logger.info(f"{automaton_id}: global minterms exceed cap ({e.count} > {e.cap})")
        minterms, blowup = None, None
    except DeadlineExceeded:
        logger.info(f"{automaton_id}: global minterms not counted within {timeout_ms} ms")
        minterms, blowup = None, None
    return {
        "id": automaton_id,
        "n": m.n,
        "m": m.m,
        "maxoutdeg": m.max_out_degree(),
        "minterms": minterms,
        "blowup": blowup,
    }


def run_cell(
    automaton_id: str, m: Sfa, algo: str, timeout_ms: float, cap: int, shape: Optional[Dict[str, object]] = None
) -> BenchRecord:
    """Time one algorithm on one automaton; completion counts toward the time."""
    shape = shape or _shape(automaton_id, m, cap, timeout_ms)
    counter = m.algebra.counter
    before = counter.snapshot()
    started = time.perf_counter()
    outcome: Outcome = "ok"
    digest = ""
    try:
        deadline = Deadline(timeout_ms)
        relation = run_algorithm(algo, complete(m), deadline, cap)
        digest = relation.digest()
    except ResourceError as e:
        outcome = e.outcome
        logger.warning(f"{automaton_id}/{algo}: {e}")
    except MemoryError:
        outcome = "oom-guard"
        logger.warning(f"{automaton_id}/{algo}: out of memory")
    elapsed = (time.perf_counter() - started) * 1000.0
    delta = OperationCounter.delta(before, counter.snapshot())
    ops = {f"ops_{name}": delta[name] for name in ("and", "or", "not", "sat")}
    if outcome != "ok":
        elapsed = float(timeout_ms)
    elif elapsed > get_settings().slow_run_ms:
        logger.warning(f"Slow run: {automaton_id}/{algo} took {elapsed:.0f} ms")
    return BenchRecord(algo=algo, ms=elapsed, outcome=outcome, digest=digest, **ops, **shape)


def bench(
    corpus_dir: Union[str, Path],
    algos: Sequence[str] = DEFAULT_ALGORITHMS,
    timeout_ms: Optional[float] = None,
    minterm_cap: Optional[int] = None,
    jobs: Optional[int] = None,
) -> List[BenchRecord]:
    """
    Benchmark every automaton in ``corpus_dir``.

    Files that fail to load are logged and skipped. Records come back ordered
    by file name and then by the order of ``algos``, whatever ``jobs`` is.
    """
    settings = get_settings()
    timeout_ms = settings.timeout_ms if timeout_ms is None else timeout_ms
    minterm_cap = settings.minterm_cap if minterm_cap is None else minterm_cap
    jobs = settings.bench_jobs if jobs is None else jobs
    algos = parse_algorithms(algos)

    cells: List[Tuple[str, Sfa, str, Dict[str, object]]] = []
    for path in corpus_files(corpus_dir):
        try:
            m = load_sfa(path)
        except (SfaError, OSError) as e:
            logger.warning(f"Skipping {path.name}: {e}")
            continue
        shape = _shape(path.stem, m, minterm_cap, timeout_ms)
        cells.extend((path.stem, m, algo, shape) for algo in algos)
    logger.info(f"Benchmarking {len(cells)} cells ({', '.join(algos)}) with {jobs} job(s)")

    def run(cell: Tuple[str, Sfa, str, Dict[str, object]]) -> BenchRecord:
        automaton_id, m, algo, shape = cell
        return run_cell(automaton_id, m, algo, timeout_ms, minterm_cap, shape)

    if jobs <= 1:
        records = [run(cell) for cell in cells]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run, cells))
    _log_digest_mismatches(records)
    return records


def _log_digest_mismatches(records: Iterable[BenchRecord]) -> None:
    digests: Dict[str, Dict[str, str]] = {}
    for r in records:
        if r.ok and r.algo != "bisim":
            digests.setdefault(r.id, {})[r.algo] = r.digest
    for automaton_id, by_algo in digests.items():
        if len(set(by_algo.values())) > 1:
            logger.warning(f"{automaton_id}: relation digests differ across algorithms: {by_algo}")


def filter_min_ms(records: Sequence[BenchRecord], min_ms: float) -> List[BenchRecord]:
    """Drop automata on which every algorithm finished below ``min_ms``."""
    keep = {r.id for r in records if not r.ok or r.ms >= min_ms}
    return [r for r in records if r.id in keep]


def summarise(records: Sequence[BenchRecord], timeout_ms: Optional[float] = None) -> List[AlgorithmSummary]:
    """Per-algorithm total time, wins (fastest ok run, ties shared) and failures."""
    timeout_ms = get_settings().timeout_ms if timeout_ms is None else timeout_ms
    summary: Dict[str, AlgorithmSummary] = {}
    best: Dict[str, float] = {}
    for r in records:
        entry = summary.setdefault(r.algo, AlgorithmSummary(algo=r.algo))
        if r.ok:
            entry.total_ms += r.ms
            best[r.id] = min(best.get(r.id, r.ms), r.ms)
        else:
            entry.total_ms += timeout_ms
            entry.fails += 1
    for r in records:
        if r.ok and r.ms == best[r.id]:
            summary[r.algo].wins += 1
    return list(summary.values())


def records_to_csv(records: Iterable[BenchRecord]) -> str:
    return "\n".join([BENCH_HEADER] + [r.csv_row() for r in records]) + "\n"


def summary_to_csv(rows: Iterable[AlgorithmSummary]) -> str:
    return "\n".join([SUMMARY_HEADER] + [row.csv_row() for row in rows]) + "\n"
