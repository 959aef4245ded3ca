import math

import pytest

from sfa_simulation.automata import global_mintermise, is_complete
from sfa_simulation.errors import UsageError
from sfa_simulation.generate import (
    DENSE_DENSITY,
    disjoint_chain_copies,
    independent_bits_family,
    parse_algebra_option,
    random_complete_sfa,
    random_sfa,
    write_corpus,
)
from sfa_simulation.textformat import load_sfa, write_sfa


def test_random_sfa_is_reproducible():
    assert write_sfa(random_sfa(7, 6)) == write_sfa(random_sfa(7, 6))
    assert write_sfa(random_sfa(7, 6)) != write_sfa(random_sfa(8, 6))


def test_random_sfa_shape():
    m = random_sfa(3, 8, DENSE_DENSITY, parse_algebra_option("bitvector:4"), pred_pool=3)
    assert m.n == 8
    assert m.initial
    # duplicates collapse, so at most ceil(density * n) transitions survive
    assert m.m <= math.ceil(DENSE_DENSITY * 8)
    assert len(m.guards()) <= 3


def test_single_state_self_loop():
    m = random_sfa(0, 1, 1.0)
    assert m.n == 1 and m.m == 1
    t = m.transitions[0]
    assert t.source == t.target == 0


@pytest.mark.parametrize("kwargs", [{"n": 0}, {"n": 3, "density": 0}, {"n": 3, "pred_pool": 0}])
def test_random_sfa_rejects_bad_arguments(kwargs):
    with pytest.raises(UsageError):
        random_sfa(0, **kwargs)


def test_random_complete_sfa_is_complete():
    assert is_complete(random_complete_sfa(5, 6, algebra=parse_algebra_option("explicit:x,y")))


@pytest.mark.parametrize(
    "text, kind, descriptor",
    [
        ("interval", "interval", "0 1114111"),
        ("interval:0:255", "interval", "0 255"),
        ("bitvector:6", "bitvector", "6"),
        ("explicit:p,q", "explicit", "p q"),
    ],
)
def test_parse_algebra_option(text, kind, descriptor):
    algebra = parse_algebra_option(text)
    assert algebra.kind == kind
    assert algebra.descriptor() == descriptor


def test_parse_algebra_option_unknown():
    with pytest.raises(UsageError):
        parse_algebra_option("octonion")


@pytest.mark.parametrize("bits", [4, 7, 10])
def test_independent_bits_family_minterms(bits):
    m = independent_bits_family(bits)
    assert is_complete(m)
    assert m.max_out_degree() >= bits
    _, stats = global_mintermise(m)
    assert stats.minterm_count == 2**bits


def test_disjoint_chain_copies():
    m = disjoint_chain_copies(4, copies=3)
    assert m.n == 15
    assert m.m == 12
    assert len(m.initial) == 3 and len(m.final) == 3


def test_write_corpus(tmp_path):
    written = write_corpus(tmp_path, seed=1, count=2, n=4)
    names = {p.name for p in written}
    assert "random_d25_000.sfa" in names
    assert "random_d60_001.sfa" in names
    assert "bits_04.sfa" in names and "bits_14.sfa" in names
    assert any(name.startswith("regex_") for name in names)
    for path in written:
        load_sfa(path)
