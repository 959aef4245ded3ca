import time

import pytest
from hypothesis import given, settings

from sfa_simulation.automata import (
    Sfa,
    accepts,
    complete,
    ensure_complete,
    enumerate_language,
    find_language_difference,
    global_mintermise,
    is_complete,
    language_alphabet,
    local_mintermise,
    merge_parallel,
    reachable_states,
    require_complete,
    restrict,
    reverse,
    uncovered_witness,
)
from sfa_simulation.config import Deadline
from sfa_simulation.errors import DeadlineExceeded, MintermBlowupError, UsageError
from sfa_simulation.generate import independent_bits_family

from .conftest import small_sfas


def test_unsat_guards_and_duplicates_are_dropped(ascii_algebra):
    a = ascii_algebra
    m = Sfa(a, 2, [(0, a.bottom, 1), (0, a.range("a"), 1), (0, a.range("a"), 1)], [0], [1])
    assert m.m == 1


def test_state_indices_are_checked(ascii_algebra):
    with pytest.raises(UsageError):
        Sfa(ascii_algebra, 2, [(0, ascii_algebra.top, 2)], [0], [1])
    with pytest.raises(UsageError):
        Sfa(ascii_algebra, 2, [], [5], [])


def test_merge_parallel(ascii_algebra):
    a = ascii_algebra
    m = Sfa(a, 2, [(0, a.range("a"), 1), (0, a.range("b"), 1)], [0], [1])
    merged = merge_parallel(m)
    assert merged.m == 1
    assert merged.transitions[0].guard == a.range("a", "b")


def test_complete_adds_sink(ascii_algebra):
    a = ascii_algebra
    m = Sfa(a, 2, [(0, a.range("a"), 1)], [0], [1])
    assert not is_complete(m)
    assert uncovered_witness(m) == (0, 0)
    c = complete(m)
    assert is_complete(c)
    assert c.n == 3 and c.sink == 2
    assert 2 not in c.final
    assert complete(c) is c


def test_ensure_complete_reports_added_sink(ascii_algebra):
    a = ascii_algebra
    m = Sfa(a, 2, [(0, a.range("a"), 1)], [0], [1])
    c, added = ensure_complete(m)
    assert added and c.sink == 2
    same, added = ensure_complete(c)
    assert same is c and not added


def test_require_complete_names_state_and_symbol(ascii_algebra):
    a = ascii_algebra
    m = Sfa(a, 2, [(0, a.top, 1)], [0], [1])
    with pytest.raises(UsageError, match="state 1"):
        require_complete(m, "local_sim")


def test_accepts(ascii_algebra):
    a = ascii_algebra
    m = Sfa(a, 3, [(0, a.range("a"), 1), (1, a.range("b"), 2), (2, a.range("a"), 1)], [0], [2])
    assert accepts(m, "ab")
    assert accepts(m, "abab")
    assert not accepts(m, "aba")
    assert not accepts(m, "")
    with pytest.raises(UsageError):
        accepts(m, [1000])


def test_enumerate_language(abc):
    m = Sfa(abc, 2, [(0, abc.of("a", "b"), 1), (1, abc.of("c"), 1)], [0], [1])
    words = enumerate_language(m, 2, alphabet=["a", "b", "c"])
    assert words == {("a",), ("b",), ("a", "c"), ("b", "c")}


def test_global_mintermise_independent_bits():
    m = independent_bits_family(6)
    _, stats = global_mintermise(m)
    assert stats.minterm_count == 64
    with pytest.raises(MintermBlowupError):
        global_mintermise(m, cap=32)


def test_mintermisation_stops_at_deadline():
    m = independent_bits_family(16)
    started = time.perf_counter()
    with pytest.raises(DeadlineExceeded):
        global_mintermise(m, deadline=Deadline(50))
    expired = Deadline(0.001)
    time.sleep(0.01)
    with pytest.raises(DeadlineExceeded):
        local_mintermise(m, deadline=expired)
    assert time.perf_counter() - started < 10


def test_local_mintermise_counts_per_state(abc):
    m = Sfa(abc, 3, [(0, abc.of("a", "b"), 1), (0, abc.of("b", "c"), 2), (1, abc.top, 1)], [0], [1])
    local, stats = local_mintermise(m)
    assert stats.scope == "local"
    assert stats.per_state == (3, 1, 0)
    assert local.m == 5
    assert stats.blowup_ratio == pytest.approx(5 / 3)


@settings(max_examples=40, deadline=None)
@given(m=small_sfas(complete=False))
def test_mintermisation_preserves_language(m):
    alphabet = language_alphabet(m)
    expected = enumerate_language(m, 4, alphabet)
    assert enumerate_language(global_mintermise(m)[0], 4, alphabet) == expected
    assert enumerate_language(local_mintermise(m)[0], 4, alphabet) == expected
    assert enumerate_language(complete(m), 4, alphabet) == expected


@settings(max_examples=40, deadline=None)
@given(m=small_sfas(complete=False))
def test_reverse_reverses_words(m):
    alphabet = language_alphabet(m)
    forward = enumerate_language(m, 4, alphabet)
    backward = enumerate_language(reverse(m), 4, alphabet)
    assert {tuple(reversed(w)) for w in backward} == forward


def test_restrict_reindexes(ascii_algebra):
    a = ascii_algebra
    m = Sfa(a, 4, [(0, a.top, 2), (2, a.top, 3), (1, a.top, 3)], [0], [3])
    r = restrict(m, {0, 2, 3})
    assert r.n == 3
    assert [(t.source, t.target) for t in r.transitions] == [(0, 1), (1, 2)]
    assert r.final == frozenset({2})


def test_reachable_states(ascii_algebra):
    a = ascii_algebra
    m = Sfa(a, 4, [(0, a.top, 1), (2, a.top, 3)], [0], [3])
    assert reachable_states(m, [0]) == {0, 1}
    assert reachable_states(m, [3], backward=True) == {2, 3}


def test_find_language_difference(ascii_algebra):
    a = ascii_algebra
    ab = Sfa(a, 3, [(0, a.range("a"), 1), (1, a.range("b"), 2)], [0], [2])
    a_any = Sfa(a, 3, [(0, a.range("a"), 1), (1, a.top, 2)], [0], [2])
    assert find_language_difference(ab, ab, 4) is None
    assert find_language_difference(ab, a_any, 4, inclusion_only=True) is None
    word = find_language_difference(a_any, ab, 4, inclusion_only=True)
    assert word is not None and accepts(a_any, word) and not accepts(ab, word)
