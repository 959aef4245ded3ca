"""
Language-preserving reduction of SFAs by simulation or bisimulation.

One pass completes the automaton, computes the relation, merges each
equivalence class into its least member, drops little-brother transitions
(simulation only), strips dead states (this removes the completion sink) and
unreachable states, and reverses the result. Passes repeat until the state
count stops decreasing.
"""
import logging
import time
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from .automata import Sfa, complete, merge_parallel, reachable_states, restrict, reverse
from .config import Deadline, get_settings
from .errors import UsageError
from .simulation import Relation, bisimulation, run_algorithm

logger = logging.getLogger(__name__)

Method = Literal["simulation", "bisimulation"]
METHODS = ("simulation", "bisimulation")


class ReductionStep(BaseModel):
    iteration: int
    direction: Literal["forward", "backward"]
    states_before: int
    states_after: int
    transitions_before: int
    transitions_after: int
    elapsed_ms: float


class ReductionReport(BaseModel):
    method: Method
    iterations: List[ReductionStep] = Field(default_factory=list)
    reached_fixpoint: bool = False

    def to_csv(self) -> str:
        lines = ["iter,direction,states_before,states_after,trans_before,trans_after,ms"]
        for step in self.iterations:
            lines.append(
                f"{step.iteration},{step.direction},{step.states_before},{step.states_after},"
                f"{step.transitions_before},{step.transitions_after},{step.elapsed_ms:.3f}"
            )
        return "\n".join(lines) + "\n"


def _check_relation(m: Sfa, preorder: Relation) -> None:
    if preorder.n != m.n:
        raise UsageError(f"relation over {preorder.n} states does not fit automaton with {m.n} states")
    preorder.check_preorder()


def equivalence_classes(preorder: Relation) -> List[int]:
    """Class index of every state; classes are numbered by their least member."""
    equivalent = preorder.bits & preorder.bits.T
    representative = [int(np.flatnonzero(equivalent[q])[0]) for q in range(preorder.n)]
    numbering = {rep: index for index, rep in enumerate(sorted(set(representative)))}
    return [numbering[rep] for rep in representative]


def quotient(m: Sfa, preorder: Relation) -> Sfa:
    """Merge every class of ``preorder & preorder^-1`` into one state."""
    _check_relation(m, preorder)
    classes = equivalence_classes(preorder)
    size = max(classes) + 1 if classes else 0
    merged = Sfa(
        m.algebra,
        size,
        [(classes[t.source], t.guard, classes[t.target]) for t in m.transitions],
        {classes[q] for q in m.initial},
        {classes[q] for q in m.final},
    )
    return merge_parallel(merged)


def lift_relation(preorder: Relation, classes: List[int]) -> Relation:
    """The relation induced on classes by their members."""
    size = max(classes) + 1 if classes else 0
    members = [0] * size
    for q in reversed(range(len(classes))):
        members[classes[q]] = q
    index = np.asarray(members, dtype=np.int64)
    return Relation(preorder.bits[np.ix_(index, index)])


def trim_unreachable(m: Sfa) -> Sfa:
    """Keep the states reachable from an initial state."""
    return restrict(m, reachable_states(m, m.initial))


def trim_dead(m: Sfa) -> Sfa:
    """Keep the states from which a final state is reachable."""
    return restrict(m, reachable_states(m, m.final, backward=True))


def remove_little_brothers(m: Sfa, preorder: Relation) -> Sfa:
    """
    Drop symbols from ``q -> p`` that ``q`` also reads into a strictly bigger ``p'``.

    Only strict dominance counts, so of two mutually similar targets neither
    loses symbols; such targets are merged by ``quotient`` instead.
    """
    _check_relation(m, preorder)
    algebra = m.algebra
    strict = preorder.bits & ~preorder.bits.T
    merged = merge_parallel(m)
    transitions = []
    removed = 0
    for q in merged.states:
        outgoing = merged.out[q]
        for t in outgoing:
            bigger = [u.guard for u in outgoing if u.target != t.target and strict[t.target, u.target]]
            guard = t.guard
            if bigger:
                guard = algebra.and_(guard, algebra.not_(algebra.disjoin(bigger)))
            if algebra.is_sat(guard):
                transitions.append((q, guard, t.target))
            else:
                removed += 1
    logger.debug(f"Little brothers: {removed} transitions removed")
    return trim_unreachable(Sfa(algebra, merged.n, transitions, merged.initial, merged.final))


def reduction_pass(
    m: Sfa, method: Method = "simulation", algorithm: str = "nocount", deadline: Optional[Deadline] = None
) -> Tuple[Sfa, int]:
    """One pass in the current orientation; returns the result and its class count."""
    completed = complete(m)
    if method == "simulation":
        relation = run_algorithm(algorithm, completed, deadline)
        merged = quotient(completed, relation)
        lifted = lift_relation(relation, equivalence_classes(relation))
        classes = merged.n
        merged = remove_little_brothers(merged, lifted)
    elif method == "bisimulation":
        relation = bisimulation(completed, deadline)
        merged = quotient(completed, relation)
        classes = merged.n
    else:
        raise UsageError(f"unknown reduction method {method!r}")
    return trim_unreachable(trim_dead(merged)), classes


def reduce_iterative(
    m: Sfa,
    method: Method = "simulation",
    max_iters: Optional[int] = None,
    algorithm: str = "nocount",
    deadline: Optional[Deadline] = None,
) -> Tuple[Sfa, ReductionReport]:
    """Alternate forward and backward passes until states stop decreasing."""
    max_iters = get_settings().reduction_max_iters if max_iters is None else max_iters
    if max_iters < 1:
        raise UsageError(f"max_iters must be >= 1, got {max_iters}")
    if method not in METHODS:
        raise UsageError(f"unknown reduction method {method!r}; expected one of {', '.join(METHODS)}")
    report = ReductionReport(method=method)
    current = m
    forward = True
    for iteration in range(1, max_iters + 1):
        started = time.perf_counter()
        reduced, _ = reduction_pass(current, method, algorithm, deadline)
        elapsed = (time.perf_counter() - started) * 1000.0
        report.iterations.append(
            ReductionStep(
                iteration=iteration,
                direction="forward" if forward else "backward",
                states_before=current.n,
                states_after=reduced.n,
                transitions_before=current.m,
                transitions_after=reduced.m,
                elapsed_ms=elapsed,
            )
        )
        logger.info(f"Reduction {method} pass {iteration}: {current.n} -> {reduced.n} states, {current.m} -> {reduced.m} transitions")
        decreased = reduced.n < current.n
        current = reverse(reduced)
        forward = not forward
        if not decreased:
            report.reached_fixpoint = True
            break
    if not forward:
        current = reverse(current)
    return current, report


class ReductionComparison(BaseModel):
    """First-pass and iterated sizes for both reduction methods."""

    states: int
    transitions: int
    sim_once_states: int
    sim_once_transitions: int
    bisim_once_states: int
    bisim_once_transitions: int
    sim_classes: int
    bisim_classes: int
    sim_states: int
    sim_transitions: int
    bisim_states: int
    bisim_transitions: int

    def csv_row(self, automaton_id: str) -> str:
        return ",".join(
            str(x)
            for x in (
                automaton_id,
                self.states,
                self.transitions,
                self.sim_once_states,
                self.sim_once_transitions,
                self.bisim_once_states,
                self.bisim_once_transitions,
                self.sim_states,
                self.sim_transitions,
                self.bisim_states,
                self.bisim_transitions,
            )
        )


COMPARISON_HEADER = "id,states,trans,sim1_states,sim1_trans,bisim1_states,bisim1_trans,sim_states,sim_trans,bisim_states,bisim_trans"


def compare_reductions(
    m: Sfa, max_iters: Optional[int] = None, algorithm: str = "nocount", name: str = ""
) -> ReductionComparison:
    sim_once, sim_classes = reduction_pass(m, "simulation", algorithm)
    bisim_once, bisim_classes = reduction_pass(m, "bisimulation")
    sim_all, _ = reduce_iterative(m, "simulation", max_iters, algorithm)
    bisim_all, _ = reduce_iterative(m, "bisimulation", max_iters)
    if bisim_all.m < sim_all.m:
        logger.warning(
            f"Bisimulation reduced {name or 'automaton'} further than simulation "
            f"({bisim_all.m} vs {sim_all.m} transitions)"
        )
    return ReductionComparison(
        states=m.n,
        transitions=m.m,
        sim_once_states=sim_once.n,
        sim_once_transitions=sim_once.m,
        bisim_once_states=bisim_once.n,
        bisim_once_transitions=bisim_once.m,
        sim_classes=sim_classes,
        bisim_classes=bisim_classes,
        sim_states=sim_all.n,
        sim_transitions=sim_all.m,
        bisim_states=bisim_all.n,
        bisim_transitions=bisim_all.m,
    )
