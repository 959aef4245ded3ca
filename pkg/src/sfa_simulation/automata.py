"""
Symbolic finite automata and their structural transformations.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .algebra import Algebra, Predicate
from .config import Deadline, get_settings
from .errors import UsageError

logger = logging.getLogger(__name__)

Word = Tuple[Any, ...]


@dataclass(frozen=True)
class Transition:
    source: int
    guard: Predicate
    target: int

    @property
    def order_key(self) -> Tuple[Any, ...]:
        return (self.source, self.target, self.guard.sort_key)


@dataclass(frozen=True)
class MintermStats:
    """Size of an automaton before and after mintermisation."""

    scope: str
    original_transitions: int
    transitions: int
    minterm_count: int
    per_state: Tuple[int, ...] = ()

    @property
    def blowup_ratio(self) -> Optional[float]:
        if self.original_transitions == 0:
            return None
        return self.transitions / self.original_transitions


TransitionLike = Union[Transition, Tuple[int, Predicate, int]]


class Sfa:
    """
    An SFA ``(Q, A, Delta, I, F)`` over states ``0 .. n-1``.

    Transitions with unsatisfiable guards are dropped and identical
    ``(source, guard, target)`` triples are stored once. Parallel edges with
    different guards are kept apart (mintermised forms rely on that); use
    ``merge_parallel`` to fold them into one guard per (source, target).
    """

    def __init__(
        self,
        algebra: Algebra,
        states: int,
        transitions: Iterable[TransitionLike] = (),
        initial: Iterable[int] = (),
        final: Iterable[int] = (),
        sink: Optional[int] = None,
    ):
        if states < 0:
            raise UsageError(f"state count must be >= 0, got {states}")
        self.algebra = algebra
        self.n = states
        self.initial: FrozenSet[int] = frozenset(initial)
        self.final: FrozenSet[int] = frozenset(final)
        self.sink = sink
        for q in self.initial | self.final:
            self._check_state(q)

        unique: Dict[Tuple[int, Predicate, int], Transition] = {}
        for item in transitions:
            t = item if isinstance(item, Transition) else Transition(*item)
            self._check_state(t.source)
            self._check_state(t.target)
            algebra._check(t.guard)
            if not algebra.is_sat(t.guard):
                continue
            unique.setdefault((t.source, t.guard, t.target), t)
        self.transitions: Tuple[Transition, ...] = tuple(sorted(unique.values(), key=lambda t: t.order_key))

        out: List[List[Transition]] = [[] for _ in range(states)]
        inc: List[List[Transition]] = [[] for _ in range(states)]
        for t in self.transitions:
            out[t.source].append(t)
            inc[t.target].append(t)
        self.out: Tuple[Tuple[Transition, ...], ...] = tuple(tuple(ts) for ts in out)
        self.inc: Tuple[Tuple[Transition, ...], ...] = tuple(
            tuple(sorted(ts, key=lambda t: (t.source, t.guard.sort_key))) for ts in inc
        )

    def _check_state(self, q: int) -> None:
        if not isinstance(q, int) or not 0 <= q < self.n:
            raise UsageError(f"state {q!r} out of range for automaton with {self.n} states")

    @property
    def states(self) -> range:
        return range(self.n)

    @property
    def m(self) -> int:
        return len(self.transitions)

    def guards(self) -> List[Predicate]:
        seen: Dict[Predicate, None] = {}
        for t in self.transitions:
            seen.setdefault(t.guard, None)
        return list(seen)

    def max_out_degree(self) -> int:
        return max((len(ts) for ts in self.out), default=0)

    def with_initial(self, initial: Iterable[int]) -> "Sfa":
        return Sfa(self.algebra, self.n, self.transitions, initial, self.final, self.sink)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sfa):
            return NotImplemented
        return (
            self.algebra is other.algebra
            and self.n == other.n
            and self.transitions == other.transitions
            and self.initial == other.initial
            and self.final == other.final
        )

    def __hash__(self) -> int:
        return hash((self.n, self.transitions, self.initial, self.final))

    def __repr__(self) -> str:
        return f"<Sfa {self.algebra.kind} states={self.n} transitions={self.m} initial={sorted(self.initial)} final={sorted(self.final)}>"


def merge_parallel(m: Sfa) -> Sfa:
    """One transition per (source, target), guards joined by disjunction."""
    merged: Dict[Tuple[int, int], Predicate] = {}
    for t in m.transitions:
        key = (t.source, t.target)
        merged[key] = m.algebra.or_(merged[key], t.guard) if key in merged else t.guard
    return Sfa(m.algebra, m.n, [(s, g, d) for (s, d), g in merged.items()], m.initial, m.final, m.sink)


def residual(m: Sfa, q: int) -> Predicate:
    """Symbols on which ``q`` has no outgoing transition."""
    return m.algebra.not_(m.algebra.disjoin(t.guard for t in m.out[q]))


def is_complete(m: Sfa) -> bool:
    return all(not m.algebra.is_sat(residual(m, q)) for q in m.states)


def uncovered_witness(m: Sfa) -> Optional[Tuple[int, Any]]:
    """A state and a symbol it cannot read, if the automaton is incomplete."""
    for q in m.states:
        rest = residual(m, q)
        if m.algebra.is_sat(rest):
            return q, m.algebra.witness(rest)
    return None


def require_complete(m: Sfa, operation: str) -> None:
    found = uncovered_witness(m)
    if found is not None:
        q, symbol = found
        raise UsageError(f"{operation} requires a complete SFA: state {q} has no transition on symbol {symbol!r} (run complete first)")


def ensure_complete(m: Sfa) -> Tuple[Sfa, bool]:
    """
    Add a non-final sink so every state reads every symbol.

    Returns the complete automaton and whether a sink was added. An input
    that is already complete comes back unchanged with ``False``; otherwise
    the result's ``sink`` attribute holds the index of the new sink state.
    """
    additions: List[Tuple[int, Predicate, int]] = []
    sink = m.n
    for q in m.states:
        rest = residual(m, q)
        if m.algebra.is_sat(rest):
            additions.append((q, rest, sink))
    if not additions:
        logger.debug(f"Automaton with {m.n} states is already complete")
        return m, False
    additions.append((sink, m.algebra.top, sink))
    logger.debug(f"Completed automaton: sink {sink}, {len(additions)} new transitions")
    return Sfa(m.algebra, m.n + 1, list(m.transitions) + additions, m.initial, m.final, sink), True


def complete(m: Sfa) -> Sfa:
    """``ensure_complete`` without the flag."""
    return ensure_complete(m)[0]


def global_mintermise(
    m: Sfa, cap: Optional[int] = None, deadline: Optional[Deadline] = None
) -> Tuple[Sfa, MintermStats]:
    """Replace every guard by the global minterms it contains."""
    unique, cells = m.algebra.minterm_signatures(m.guards(), cap, deadline)
    position = {g: i for i, g in enumerate(unique)}
    transitions: List[Tuple[int, Predicate, int]] = []
    for t in m.transitions:
        bit = 1 << position[t.guard]
        transitions.extend((t.source, cell, t.target) for cell, mask in cells if mask & bit)
    result = Sfa(m.algebra, m.n, transitions, m.initial, m.final, m.sink)
    stats = MintermStats("global", m.m, result.m, len(cells))
    logger.debug(f"Global mintermisation: {len(cells)} minterms, {m.m} -> {result.m} transitions")
    return result, stats


def local_mintermise(
    m: Sfa, cap: Optional[int] = None, deadline: Optional[Deadline] = None
) -> Tuple[Sfa, MintermStats]:
    """Make the outgoing guards of every state a partition of their union."""
    transitions: List[Tuple[int, Predicate, int]] = []
    per_state: List[int] = []
    for q in m.states:
        outgoing = m.out[q]
        if not outgoing:
            per_state.append(0)
            continue
        unique, cells = m.algebra.minterm_signatures([t.guard for t in outgoing], cap, deadline)
        # The complement cell is not a minterm of the outgoing guards' union.
        cells = [(cell, mask) for cell, mask in cells if mask]
        per_state.append(len(cells))
        position = {g: i for i, g in enumerate(unique)}
        for t in outgoing:
            bit = 1 << position[t.guard]
            transitions.extend((q, cell, t.target) for cell, mask in cells if mask & bit)
    result = Sfa(m.algebra, m.n, transitions, m.initial, m.final, m.sink)
    stats = MintermStats("local", m.m, result.m, sum(per_state), tuple(per_state))
    logger.debug(f"Local mintermisation: {stats.minterm_count} minterms, {m.m} -> {result.m} transitions")
    return result, stats


def reverse(m: Sfa) -> Sfa:
    """Flip every transition and swap initial and final states."""
    return Sfa(
        m.algebra,
        m.n,
        [(t.target, t.guard, t.source) for t in m.transitions],
        m.final,
        m.initial,
    )


def restrict(m: Sfa, keep: Iterable[int]) -> Sfa:
    """Sub-automaton on ``keep``, reindexed densely in ascending order."""
    order = sorted(set(keep))
    index = {q: i for i, q in enumerate(order)}
    return Sfa(
        m.algebra,
        len(order),
        [(index[t.source], t.guard, index[t.target]) for t in m.transitions if t.source in index and t.target in index],
        [index[q] for q in m.initial if q in index],
        [index[q] for q in m.final if q in index],
        index.get(m.sink) if m.sink is not None else None,
    )


def post(m: Sfa, current: Iterable[int], symbol: Any) -> FrozenSet[int]:
    return frozenset(t.target for q in current for t in m.out[q] if m.algebra.contains(t.guard, symbol))


def accepts(m: Sfa, word: Sequence[Any], initial: Optional[Iterable[int]] = None) -> bool:
    """Membership by state-set stepping; ``initial`` overrides the initial set."""
    current = frozenset(m.initial if initial is None else initial)
    for symbol in word:
        current = post(m, current, m.algebra.check_symbol(symbol))
        if not current:
            return False
    return bool(current & m.final)


def representatives(algebra: Algebra, guards: Iterable[Predicate]) -> List[Any]:
    """One witness symbol per minterm of ``guards`` that lies inside some guard."""
    _, cells = algebra.minterm_signatures(guards)
    return sorted(algebra.witness(cell) for cell, mask in cells if mask)


def language_alphabet(*automata: Sfa) -> List[Any]:
    """Witness symbols that separate every guard of the given automata."""
    algebra = automata[0].algebra
    guards: List[Predicate] = []
    for m in automata:
        if m.algebra is not algebra:
            raise UsageError("automata use different algebras")
        guards.extend(m.guards())
    return representatives(algebra, guards)


def enumerate_language(
    m: Sfa,
    max_len: Optional[int] = None,
    alphabet: Optional[Sequence[Any]] = None,
    initial: Optional[Iterable[int]] = None,
) -> Set[Word]:
    """
    Accepted words of length <= ``max_len``.

    Without an explicit ``alphabet`` each reachable state set is stepped
    with one representative symbol per distinct successor signature, so the
    result is finite on any domain. Pass a shared ``alphabet`` (see
    ``language_alphabet``) when comparing the languages of two automata.
    """
    max_len = get_settings().max_word_len if max_len is None else max_len
    start = frozenset(m.initial if initial is None else initial)
    words: Set[Word] = set()
    layer: List[Tuple[FrozenSet[int], Word]] = [(start, ())]
    stepping_cache: Dict[FrozenSet[int], List[Any]] = {}
    for length in range(max_len + 1):
        next_layer: List[Tuple[FrozenSet[int], Word]] = []
        for current, word in layer:
            if current & m.final:
                words.add(word)
            if length == max_len:
                continue
            if alphabet is not None:
                symbols = alphabet
            else:
                if current not in stepping_cache:
                    stepping_cache[current] = representatives(m.algebra, (t.guard for q in current for t in m.out[q]))
                symbols = stepping_cache[current]
            for symbol in symbols:
                successor = post(m, current, symbol)
                if successor:
                    next_layer.append((successor, word + (symbol,)))
        layer = next_layer
    return words


def find_language_difference(
    left: Sfa,
    right: Sfa,
    max_len: Optional[int] = None,
    left_initial: Optional[Iterable[int]] = None,
    right_initial: Optional[Iterable[int]] = None,
    inclusion_only: bool = False,
) -> Optional[Word]:
    """
    Shortest word of length <= ``max_len`` on which the automata disagree.

    With ``inclusion_only`` only words accepted by ``left`` and rejected by
    ``right`` count. Both automata must share an algebra. The search walks
    pairs of state sets breadth first, so it never enumerates words whose
    prefixes lead to an already-seen pair.
    """
    if left.algebra is not right.algebra:
        raise UsageError("automata use different algebras")
    max_len = get_settings().max_word_len if max_len is None else max_len
    algebra = left.algebra
    start = (
        frozenset(left.initial if left_initial is None else left_initial),
        frozenset(right.initial if right_initial is None else right_initial),
    )
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (a, b), word = queue.popleft()
        in_left, in_right = bool(a & left.final), bool(b & right.final)
        if in_left and not in_right or (not inclusion_only and in_right and not in_left):
            return word
        if len(word) == max_len or (inclusion_only and not a):
            continue
        guards = [t.guard for q in a for t in left.out[q]] + [t.guard for q in b for t in right.out[q]]
        if not guards:
            continue
        for symbol in representatives(algebra, guards):
            pair = (post(left, a, symbol), post(right, b, symbol))
            if pair not in seen:
                seen.add(pair)
                queue.append((pair, word + (symbol,)))
    return None


def reachable_states(m: Sfa, start: Iterable[int], backward: bool = False) -> Set[int]:
    seen = set(start)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        edges = m.inc[q] if backward else m.out[q]
        for t in edges:
            nxt = t.source if backward else t.target
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen
