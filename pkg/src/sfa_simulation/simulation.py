"""
Simulation preorder algorithms for SFAs.

* ``oracle_sim``   - naive least-fixpoint iteration of the nonsimulation
  relation, evaluated symbolically; the reference everything is checked
  against.
* ``iny_sim``      - counter-based worklist algorithm on the syntactic NFA
  (guards are compared as letters).
* ``global_sim``   - global mintermisation followed by ``iny_sim``.
* ``local_sim``    - counters indexed by local minterms plus a
  satisfiability test against the original guards.
* ``nocount_sim``  - no counters and no mintermisation; pending pairs of
  one row are processed as a batch.
* ``bisimulation`` - signature refinement of the bisimulation equivalence.
* ``enumerated_sim`` - explicit fixpoint over every symbol of a small domain,
  used as an independent cross-check.

Every algorithm returns a ``Relation`` over the states of its input.
"""
import hashlib
import heapq
import logging
from collections import defaultdict, deque
from typing import Any, Callable, Dict, Iterable, List, Optional, Set, Tuple

import numpy as np
from pydantic import BaseModel, Field

from .algebra import Predicate
from .automata import (
    Sfa,
    complete,
    find_language_difference,
    global_mintermise,
    local_mintermise,
    merge_parallel,
    require_complete,
)
from .config import Deadline, get_settings
from .errors import InvariantViolation, ParseError, ResourceError, UsageError

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


class Relation:
    """A binary relation over ``0 .. n-1`` stored as a dense boolean matrix."""

    __slots__ = ("bits",)

    def __init__(self, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[0] != bits.shape[1]:
            raise UsageError(f"relation matrix must be square, got shape {bits.shape}")
        self.bits = bits

    @classmethod
    def full(cls, n: int) -> "Relation":
        return cls(np.ones((n, n), dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "Relation":
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def identity(cls, n: int) -> "Relation":
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Pair]) -> "Relation":
        bits = np.zeros((n, n), dtype=bool)
        for i, j in pairs:
            bits[i, j] = True
        return cls(bits)

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    def __contains__(self, pair: Pair) -> bool:
        i, j = pair
        return bool(self.bits[i, j])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash(self.digest())

    def __len__(self) -> int:
        return int(self.bits.sum())

    def __repr__(self) -> str:
        return f"<Relation n={self.n} pairs={len(self)}>"

    def pairs(self) -> List[Pair]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.bits))]

    def row(self, i: int) -> Set[int]:
        return {int(j) for j in np.flatnonzero(self.bits[i])}

    def transpose(self) -> "Relation":
        return Relation(self.bits.T.copy())

    def symmetric_fragment(self) -> "Relation":
        return Relation(self.bits & self.bits.T)

    def intersection(self, other: "Relation") -> "Relation":
        return Relation(self.bits & other.bits)

    def issubset(self, other: "Relation") -> bool:
        return not bool(np.any(self.bits & ~other.bits))

    def difference(self, other: "Relation") -> List[Pair]:
        """Pairs on which the two relations disagree, ascending."""
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.bits != other.bits))]

    def is_reflexive(self) -> bool:
        return bool(np.all(np.diagonal(self.bits)))

    def violated_transitivity(self) -> Optional[Tuple[int, int, int]]:
        """Some ``(i, j, k)`` with ``i R j``, ``j R k`` but not ``i R k``."""
        as_int = self.bits.astype(np.int64)
        composed = (as_int @ as_int) > 0
        missing = np.argwhere(composed & ~self.bits)
        if missing.size == 0:
            return None
        i, k = (int(x) for x in missing[0])
        j = int(np.flatnonzero(self.bits[i] & self.bits[:, k])[0])
        return i, j, k

    def is_transitive(self) -> bool:
        return self.violated_transitivity() is None

    def is_preorder(self) -> bool:
        return self.is_reflexive() and self.is_transitive()

    def check_preorder(self) -> None:
        """Raise ``UsageError`` naming a witness if this is not a preorder."""
        for i in range(self.n):
            if not self.bits[i, i]:
                raise UsageError(f"relation is not a preorder: ({i}, {i}) missing")
        violation = self.violated_transitivity()
        if violation is not None:
            i, j, k = violation
            raise UsageError(f"relation is not a preorder: ({i}, {j}) and ({j}, {k}) present but ({i}, {k}) missing")

    def digest(self) -> str:
        payload = self.n.to_bytes(8, "big") + np.packbits(self.bits, axis=None).tobytes()
        return hashlib.sha256(payload).hexdigest()

    def to_csv(self, algo: str = "") -> str:
        pairs = self.pairs()
        lines = [f"# states={self.n} pairs={len(pairs)} algo={algo}"]
        lines.extend(f"{i},{j}" for i, j in pairs)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "Relation":
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if not lines or not lines[0].startswith("#"):
            raise ParseError("relation CSV must start with a '# states=...' header")
        header = dict(field.split("=", 1) for field in lines[0].lstrip("#").split() if "=" in field)
        try:
            n = int(header["states"])
        except (KeyError, ValueError):
            raise ParseError("relation CSV header lacks states=N", token=lines[0])
        pairs = []
        for line in lines[1:]:
            try:
                i, j = (int(x) for x in line.split(","))
            except ValueError:
                raise ParseError("expected 'i,j'", token=line)
            pairs.append((i, j))
        return cls.from_pairs(n, pairs)


class Worklist:
    """FIFO of pending pairs; a pair is never queued twice while pending."""

    def __init__(self, n: int):
        self._queue: deque = deque()
        self._pending = np.zeros((n, n), dtype=bool)

    def push(self, i: int, j: int) -> bool:
        if self._pending[i, j]:
            return False
        self._pending[i, j] = True
        self._queue.append((i, j))
        return True

    def pop(self) -> Pair:
        i, j = self._queue.popleft()
        self._pending[i, j] = False
        return i, j

    def is_pending(self, i: int, j: int) -> bool:
        return bool(self._pending[i, j])

    def __bool__(self) -> bool:
        return bool(self._queue)

    def __len__(self) -> int:
        return len(self._queue)


def _debug_enabled(debug: Optional[bool]) -> bool:
    return get_settings().debug_invariants if debug is None else debug


def _check_result(name: str, sim: np.ndarray) -> None:
    """A simulation must come out reflexive and transitive."""
    missing = np.flatnonzero(~np.diagonal(sim))
    if missing.size:
        q = int(missing[0])
        raise InvariantViolation(f"{name}: result lacks ({q}, {q})")
    violation = Relation(sim).violated_transitivity()
    if violation is not None:
        raise InvariantViolation(f"{name}: result is not transitive at {violation}")


def _seed_final(n: int, final: Iterable[int]) -> List[Pair]:
    finals = sorted(final)
    non_final = [q for q in range(n) if q not in set(finals)]
    return [(f, q) for f in finals for q in non_final]


def _merged_edges(m: Sfa) -> Tuple[List[Dict[int, Predicate]], List[List[Tuple[int, Predicate]]]]:
    """Per-state ``{target: guard}`` and ``[(source, guard)]`` with parallel edges merged."""
    merged = merge_parallel(m)
    out = [{t.target: t.guard for t in merged.out[q]} for q in merged.states]
    inc = [[(t.source, t.guard) for t in merged.inc[q]] for q in merged.states]
    return out, inc


def oracle_sim(m: Sfa, deadline: Optional[Deadline] = None, debug: Optional[bool] = None) -> Relation:
    """
    Simulation preorder as the complement of the least nonsimulation.

    Starting from final-vs-non-final pairs, ``(s, t)`` becomes nonsimilar
    when for some ``i`` the guard ``phi_si`` intersects the complement of
    ``Reach_t`` into the states still simulating ``i``. Rounds are computed
    from the previous round only, until nothing changes.
    """
    deadline = deadline or Deadline.none()
    debug = _debug_enabled(debug)
    algebra = m.algebra
    n = m.n
    out, inc = _merged_edges(m)
    notsim = np.zeros((n, n), dtype=bool)
    for i, j in _seed_final(n, m.final):
        notsim[i, j] = True

    rounds = 0
    while True:
        rounds += 1
        refined = notsim.copy()
        for i in range(n):
            if not inc[i]:
                continue
            for t in range(n):
                deadline.check()
                reach = algebra.disjoin(g for j, g in out[t].items() if not notsim[i, j])
                blocked = algebra.not_(reach)
                for s, phi in inc[i]:
                    if not refined[s, t] and algebra.is_sat(algebra.and_(phi, blocked)):
                        refined[s, t] = True
        if np.array_equal(refined, notsim):
            break
        notsim = refined
    if debug:
        _check_result("oracle_sim", ~notsim)
    logger.debug(f"oracle_sim: fixpoint after {rounds} rounds on {n} states")
    return Relation(~notsim)


def iny_sim(m: Sfa, deadline: Optional[Deadline] = None, debug: Optional[bool] = None) -> Relation:
    """
    Counter-based simulation on the syntactic NFA of ``m``.

    Each distinct guard is one letter. ``N[(t, a)][i]`` counts the
    ``a``-successors of ``t`` that still simulate ``i``; it reaching zero
    means ``t`` can no longer match an ``a``-move into ``i``.
    """
    deadline = deadline or Deadline.none()
    debug = _debug_enabled(debug)
    n = m.n
    post_size: Dict[Tuple[int, Predicate], int] = defaultdict(int)
    pre: Dict[Tuple[int, Predicate], List[int]] = defaultdict(list)
    letters_of: List[Set[Predicate]] = [set() for _ in range(n)]
    for t in m.transitions:
        post_size[(t.source, t.guard)] += 1
        pre[(t.target, t.guard)].append(t.source)
        letters_of[t.source].add(t.guard)
    counters = {key: np.full(n, size, dtype=np.int64) for key, size in post_size.items()}

    sim = np.ones((n, n), dtype=bool)
    worklist = Worklist(n)
    for i, j in _seed_final(n, m.final):
        worklist.push(i, j)
    for q in range(n):
        for r in range(n):
            if letters_of[q] - letters_of[r]:
                worklist.push(q, r)

    pops = 0
    while worklist:
        deadline.check()
        i, j = worklist.pop()
        pops += 1
        if debug:
            if not sim[i, j]:
                raise InvariantViolation(f"pair ({i}, {j}) dequeued twice")
            _check_counters(m, counters, sim)
        sim[i, j] = False
        for t in m.inc[j]:
            counter = counters[(t.source, t.guard)]
            counter[i] -= 1
            if counter[i] == 0:
                for s in pre[(i, t.guard)]:
                    if sim[s, t.source]:
                        worklist.push(s, t.source)
    if debug:
        _check_result("iny_sim", sim)
    logger.debug(f"iny_sim: {pops} worklist pops, {len(m.guards())} letters, {n} states")
    return Relation(sim)


def global_sim(
    m: Sfa, cap: Optional[int] = None, deadline: Optional[Deadline] = None, debug: Optional[bool] = None
) -> Relation:
    """Globally mintermise, then run ``iny_sim`` on the syntactic NFA."""
    cap = get_settings().minterm_cap if cap is None else cap
    mintermised, stats = global_mintermise(m, cap, deadline)
    logger.debug(f"global_sim: {stats.minterm_count} minterms, blowup {stats.blowup_ratio}")
    return iny_sim(mintermised, deadline, debug)


def _init_counters(local: Sfa) -> Dict[Tuple[int, Predicate], np.ndarray]:
    """``N_psi(t, .)`` initialised to the number of ``psi``-successors of ``t``."""
    sizes: Dict[Tuple[int, Predicate], int] = defaultdict(int)
    for t in local.transitions:
        sizes[(t.source, t.guard)] += 1
    return {key: np.full(local.n, size, dtype=np.int64) for key, size in sizes.items()}


def _check_counters(
    local: Sfa, counters: Dict[Tuple[int, Predicate], np.ndarray], sim: np.ndarray
) -> None:
    targets: Dict[Tuple[int, Predicate], List[int]] = defaultdict(list)
    for t in local.transitions:
        targets[(t.source, t.guard)].append(t.target)
    for key, counter in counters.items():
        expected = sim[:, targets[key]].sum(axis=1)
        mismatch = np.flatnonzero(counter != expected)
        if mismatch.size:
            i = int(mismatch[0])
            raise InvariantViolation(
                f"counter N[{key[1]}]({key[0]}, {i}) = {int(counter[i])}, expected {int(expected[i])}"
            )


def local_sim(m: Sfa, deadline: Optional[Deadline] = None, debug: Optional[bool] = None) -> Relation:
    """
    Simulation with counters indexed by local minterms.

    Requires a complete SFA. When ``N_psi(t, i)`` drops to zero, every
    original transition ``s -phi-> i`` with ``(s, t)`` still in the relation
    is tested for ``IsSat(psi & phi)``.
    """
    require_complete(m, "local_sim")
    deadline = deadline or Deadline.none()
    debug = _debug_enabled(debug)
    algebra = m.algebra
    n = m.n
    local, stats = local_mintermise(m, deadline=deadline)
    counters = _init_counters(local)
    _, original_inc = _merged_edges(m)

    sim = np.ones((n, n), dtype=bool)
    worklist = Worklist(n)
    for i, j in _seed_final(n, m.final):
        worklist.push(i, j)

    pops = 0
    while worklist:
        deadline.check()
        i, j = worklist.pop()
        pops += 1
        if debug:
            if not sim[i, j]:
                raise InvariantViolation(f"pair ({i}, {j}) dequeued twice")
            _check_counters(local, counters, sim)
        sim[i, j] = False
        for t in local.inc[j]:
            counter = counters[(t.source, t.guard)]
            counter[i] -= 1
            if counter[i] == 0:
                for s, phi in original_inc[i]:
                    if sim[s, t.source] and not worklist.is_pending(s, t.source):
                        if algebra.is_sat(algebra.and_(t.guard, phi)):
                            worklist.push(s, t.source)
    if debug:
        _check_result("local_sim", sim)
    logger.debug(f"local_sim: {pops} worklist pops, {stats.minterm_count} local minterms")
    return Relation(sim)


def nocount_sim(m: Sfa, deadline: Optional[Deadline] = None, debug: Optional[bool] = None) -> Relation:
    """
    Simulation without counters or mintermisation.

    Requires a complete SFA. All pending pairs ``(i, .)`` of the least row
    ``i`` are flushed at once; afterwards each predecessor ``t`` of a flushed
    state rebuilds ``Reach_t(Sim(i))`` and every ``s -phi-> i`` with
    ``(s, t)`` in the relation is tested for ``IsSat(~Reach & phi)``.
    """
    require_complete(m, "nocount_sim")
    deadline = deadline or Deadline.none()
    debug = _debug_enabled(debug)
    algebra = m.algebra
    n = m.n
    out, inc = _merged_edges(m)

    sim = np.ones((n, n), dtype=bool)
    notsim = np.zeros((n, n), dtype=bool)
    rows: List[int] = []

    def mark(s: int, t: int) -> None:
        if not notsim[s, t]:
            if not notsim[s].any():
                heapq.heappush(rows, s)
            notsim[s, t] = True

    for i, j in _seed_final(n, m.final):
        mark(i, j)

    batches = 0
    while rows:
        i = heapq.heappop(rows)
        if not notsim[i].any():
            continue
        deadline.check()
        batches += 1
        flushed = np.flatnonzero(notsim[i])
        if debug and not sim[i, flushed].all():
            raise InvariantViolation(f"row {i}: pending pair already outside the relation")
        rm = sorted({s for j in flushed for s, _ in inc[j]})
        sim[i, flushed] = False
        notsim[i] = False
        for t in rm:
            reach = algebra.disjoin(g for j, g in out[t].items() if sim[i, j])
            blocked = algebra.not_(reach)
            for s, phi in inc[i]:
                if sim[s, t] and not notsim[s, t] and algebra.is_sat(algebra.and_(blocked, phi)):
                    mark(s, t)
    if debug:
        _check_result("nocount_sim", sim)
    logger.debug(f"nocount_sim: {batches} row batches on {n} states")
    return Relation(sim)


def bisimulation(m: Sfa, deadline: Optional[Deadline] = None, debug: Optional[bool] = None) -> Relation:
    """
    Bisimulation equivalence by signature refinement.

    A state's signature is its block together with, for every block it can
    reach, the canonical predicate ``Reach_q(block)`` on the locally
    mintermised automaton. Blocks split until the block count is stable.
    """
    require_complete(m, "bisimulation")
    deadline = deadline or Deadline.none()
    debug = _debug_enabled(debug)
    algebra = m.algebra
    local, _ = local_mintermise(m, deadline=deadline)
    n = local.n
    block = [1 if q in m.final else 0 for q in range(n)]
    count = len(set(block))
    rounds = 0
    while True:
        rounds += 1
        deadline.check()
        signatures: List[Tuple[Any, ...]] = []
        for q in range(n):
            reach: Dict[int, Predicate] = {}
            for t in local.out[q]:
                b = block[t.target]
                reach[b] = algebra.or_(reach[b], t.guard) if b in reach else t.guard
            signatures.append((block[q], frozenset(reach.items())))
        ids: Dict[Tuple[Any, ...], int] = {}
        refined = [ids.setdefault(sig, len(ids)) for sig in signatures]
        if debug:
            _check_refinement(block, refined)
        block = refined
        if len(ids) == count:
            break
        count = len(ids)
    logger.debug(f"bisimulation: {count} blocks after {rounds} rounds")
    labels = np.asarray(block)
    return Relation(labels[:, None] == labels[None, :])


def _check_refinement(old: List[int], new: List[int]) -> None:
    """Every new block must lie inside one old block."""
    parent: Dict[int, int] = {}
    for q, (before, after) in enumerate(zip(old, new)):
        if parent.setdefault(after, before) != before:
            raise InvariantViolation(f"bisimulation: block {after} of state {q} spans two earlier blocks")


def enumerated_sim(m: Sfa, deadline: Optional[Deadline] = None, domain_cap: Optional[int] = None) -> Relation:
    """
    Simulation on the explicit NFA obtained by listing every symbol.

    Symbols reading the same set of transitions are grouped, then the
    greatest fixpoint is computed with one successor matrix per group. No
    Boolean algebra operation is involved beyond listing guard members, so
    this serves as an independent check of the symbolic algorithms. Domains
    larger than ``domain_cap`` (default ``enum_domain_cap``) are refused.
    """
    deadline = deadline or Deadline.none()
    domain_cap = get_settings().enum_domain_cap if domain_cap is None else domain_cap
    algebra = m.algebra
    size = algebra.domain_size()
    if size > domain_cap:
        raise UsageError(f"domain of {size} symbols exceeds the enumeration cap {domain_cap}")
    n = m.n
    reads: Dict[Any, Set[int]] = defaultdict(set)
    for index, t in enumerate(m.transitions):
        deadline.check()
        for symbol in algebra.enumerate(t.guard, size):
            reads[symbol].add(index)
    successor_matrices = []
    for group in {frozenset(indices) for indices in reads.values()}:
        step = np.zeros((n, n), dtype=bool)
        for index in group:
            t = m.transitions[index]
            step[t.source, t.target] = True
        successor_matrices.append(step.astype(np.int64))

    finals = np.array([q in m.final for q in range(n)], dtype=bool)
    sim = ~(finals[:, None] & ~finals[None, :])
    while True:
        deadline.check()
        refined = sim.copy()
        as_int = sim.astype(np.int64)
        for step in successor_matrices:
            # matched[p2, q]: q has a step into some state simulating p2
            matched = (as_int @ step.T) > 0
            refined &= ~((step @ (~matched).astype(np.int64)) > 0)
        if np.array_equal(refined, sim):
            break
        sim = refined
    logger.debug(f"enumerated_sim: {size} symbols in {len(successor_matrices)} groups, {n} states")
    return Relation(sim)


ALGORITHMS: Dict[str, Callable[..., Relation]] = {
    "oracle": oracle_sim,
    "iny": iny_sim,
    "global": global_sim,
    "local": local_sim,
    "nocount": nocount_sim,
    "bisim": bisimulation,
}

AGREEMENT_ALGORITHMS = ("oracle", "global", "local", "nocount")


def run_algorithm(
    name: str, m: Sfa, deadline: Optional[Deadline] = None, cap: Optional[int] = None
) -> Relation:
    """Dispatch by registry name, passing the cap only where it applies."""
    try:
        fn = ALGORITHMS[name]
    except KeyError:
        raise UsageError(f"unknown algorithm {name!r}; expected one of {', '.join(ALGORITHMS)}")
    if name == "global":
        return fn(m, cap=cap, deadline=deadline)
    return fn(m, deadline=deadline)


def distinguishing_word(m: Sfa, p: int, q: int, max_len: int = 5) -> Optional[List[Any]]:
    """A word of length <= ``max_len`` accepted from ``p`` but not from ``q``."""
    word = find_language_difference(m, m, max_len, left_initial={p}, right_initial={q}, inclusion_only=True)
    return None if word is None else list(word)


class Discrepancy(BaseModel):
    algorithm: str
    pair: Tuple[int, int]
    expected: bool
    actual: bool
    word: Optional[List[Any]] = None


class AgreementReport(BaseModel):
    states: int
    transitions: int
    digests: Dict[str, str] = Field(default_factory=dict)
    skipped: Dict[str, str] = Field(default_factory=dict)
    discrepancies: List[Discrepancy] = Field(default_factory=list)

    @property
    def agreed(self) -> bool:
        return not self.discrepancies


def check_agreement(
    m: Sfa,
    algorithms: Optional[Dict[str, Callable[[Sfa], Relation]]] = None,
    cap: Optional[int] = None,
    max_word_len: int = 5,
) -> AgreementReport:
    """
    Run every algorithm on ``complete(m)`` and compare against the oracle.
    By default the enumerated check joins them when the domain has at most
    ``enum_domain_cap`` symbols.

    A disagreement is reported with its least differing pair and, when the
    pair is truly nonsimilar, a word of length <= ``max_word_len`` accepted
    from the first state but not the second.
    """
    completed = complete(m)
    report = AgreementReport(states=completed.n, transitions=completed.m)
    if algorithms is None:
        algorithms = {name: ALGORITHMS[name] for name in AGREEMENT_ALGORITHMS}
        if completed.algebra.domain_size() <= get_settings().enum_domain_cap:
            algorithms["enumerated"] = enumerated_sim
        else:
            logger.info(f"check_agreement: enumerated skipped, domain has {completed.algebra.domain_size()} symbols")
            report.skipped["enumerated"] = "domain-cap"
    results: Dict[str, Relation] = {}
    for name, fn in algorithms.items():
        try:
            if fn is global_sim:
                results[name] = fn(completed, cap=cap)
            else:
                results[name] = fn(completed)
        except ResourceError as e:
            logger.warning(f"check_agreement: {name} skipped: {e}")
            report.skipped[name] = e.outcome
            continue
        report.digests[name] = results[name].digest()

    reference = results.get("oracle")
    if reference is None:
        reference = oracle_sim(completed)
    for name, relation in results.items():
        if name == "oracle":
            continue
        diff = relation.difference(reference)
        if not diff:
            continue
        p, q = diff[0]
        expected = (p, q) in reference
        word = None if expected else distinguishing_word(completed, p, q, max_word_len)
        report.discrepancies.append(
            Discrepancy(algorithm=name, pair=(p, q), expected=expected, actual=(p, q) in relation, word=word)
        )
        logger.warning(f"check_agreement: {name} disagrees with oracle on ({p}, {q})")
    return report
