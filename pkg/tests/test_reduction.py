import pytest
from hypothesis import given, settings

from sfa_simulation.automata import Sfa, complete, enumerate_language, find_language_difference, language_alphabet
from sfa_simulation.corpus import regex_corpus
from sfa_simulation.errors import UsageError
from sfa_simulation.generate import disjoint_chain_copies
from sfa_simulation.reduction import (
    COMPARISON_HEADER,
    compare_reductions,
    equivalence_classes,
    lift_relation,
    quotient,
    reduce_iterative,
    reduction_pass,
    remove_little_brothers,
    trim_dead,
    trim_unreachable,
)
from sfa_simulation.regex import regex_compile
from sfa_simulation.simulation import Relation, nocount_sim

from .conftest import small_sfas


def same_language(left: Sfa, right: Sfa, max_len: int = 5) -> bool:
    return find_language_difference(left, right, max_len) is None


def test_equivalence_classes_use_least_member():
    r = Relation.from_pairs(4, [(q, q) for q in range(4)] + [(1, 3), (3, 1), (0, 2)])
    assert equivalence_classes(r) == [0, 1, 2, 1]


def test_quotient_merges_chain_copies():
    m = disjoint_chain_copies(3, copies=3)
    merged = quotient(complete(m), nocount_sim(complete(m)))
    # three copies collapse to one chain, plus the completion sink
    assert merged.n == 5
    assert same_language(merged, m)


def test_quotient_rejects_non_preorder(little_brothers):
    bad = Relation.from_pairs(4, [(0, 1), (1, 2)])
    with pytest.raises(UsageError, match="not a preorder"):
        quotient(little_brothers, bad)
    with pytest.raises(UsageError):
        quotient(little_brothers, Relation.identity(3))


def test_identity_quotient_is_a_no_op(little_brothers):
    assert quotient(little_brothers, Relation.identity(4)) == little_brothers


def test_lift_relation():
    r = Relation.from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 2), (2, 0), (1, 0), (1, 2)])
    classes = equivalence_classes(r)
    assert classes == [0, 1, 0]
    assert lift_relation(r, classes) == Relation.from_pairs(2, [(0, 0), (1, 1), (1, 0)])


def test_little_brothers_are_removed(little_brothers):
    m = complete(little_brothers)
    reduced = remove_little_brothers(m, nocount_sim(m))
    # 'a' now only leads to the bigger brother, so state 1 became unreachable
    assert reduced.n == m.n - 1
    assert same_language(reduced, m)
    assert all(t.source != 0 or reduced.algebra.format(t.guard) != "[97]" for t in reduced.transitions)


def test_trim(ascii_algebra):
    a = ascii_algebra
    m = Sfa(a, 4, [(0, a.top, 1), (2, a.top, 3), (0, a.top, 3)], [0], [1])
    assert trim_unreachable(m).n == 3
    assert trim_dead(m).n == 2


def test_reduction_pass_strips_sink(little_brothers):
    reduced, classes = reduction_pass(little_brothers)
    assert reduced.sink is None
    assert classes >= reduced.n
    assert same_language(reduced, little_brothers)


def test_reduce_iterative_report(little_brothers):
    reduced, report = reduce_iterative(little_brothers, "simulation", max_iters=5)
    assert report.method == "simulation"
    assert report.iterations[0].direction == "forward"
    assert report.iterations[0].states_before == little_brothers.n
    assert report.reached_fixpoint
    assert report.to_csv().splitlines()[0] == "iter,direction,states_before,states_after,trans_before,trans_after,ms"
    assert len(report.to_csv().splitlines()) == len(report.iterations) + 1
    assert same_language(reduced, little_brothers)


def test_reduce_iterative_validates_arguments(little_brothers):
    with pytest.raises(UsageError):
        reduce_iterative(little_brothers, max_iters=0)
    with pytest.raises(UsageError):
        reduce_iterative(little_brothers, method="magic")


def test_empty_language_reduces_to_nothing(ascii_algebra):
    a = ascii_algebra
    m = Sfa(a, 2, [(0, a.top, 1)], [0], [])
    reduced, _ = reduce_iterative(m)
    assert reduced.n == 0
    assert enumerate_language(reduced, 3) == set()


@settings(max_examples=40, deadline=None)
@given(m=small_sfas(complete=False))
@pytest.mark.parametrize("method", ["simulation", "bisimulation"])
def test_reduction_preserves_language(method, m):
    reduced, _ = reduce_iterative(m, method, max_iters=4)
    assert reduced.n <= complete(m).n
    assert same_language(reduced, m)


@settings(max_examples=40, deadline=None)
@given(m=small_sfas(complete=False))
def test_simulation_merges_at_least_as_much_as_bisimulation(m):
    _, sim_classes = reduction_pass(m, "simulation")
    _, bisim_classes = reduction_pass(m, "bisimulation")
    assert sim_classes <= bisim_classes


@pytest.mark.parametrize("pattern", regex_corpus()[:12])
def test_regex_corpus_reduction(pattern):
    m = regex_compile(pattern)
    alphabet = language_alphabet(m)
    expected = enumerate_language(m, 3, alphabet)
    for method in ("simulation", "bisimulation"):
        reduced, _ = reduce_iterative(m, method)
        assert enumerate_language(reduced, 3, alphabet) == expected


def test_compare_reductions(little_brothers):
    row = compare_reductions(little_brothers, max_iters=3)
    assert row.states == little_brothers.n
    assert row.sim_classes <= row.bisim_classes
    assert row.sim_states <= row.bisim_states
    fields = row.csv_row("lb").split(",")
    assert len(fields) == len(COMPARISON_HEADER.split(","))
    assert fields[0] == "lb"
