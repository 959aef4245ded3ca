"""Shared fixtures for the sfa-simulation tests."""
from pathlib import Path

import pytest
from hypothesis import strategies as st

from sfa_simulation.algebra import get_algebra
from sfa_simulation.automata import Sfa
from sfa_simulation.config import get_settings
from sfa_simulation.generate import random_complete_sfa, random_sfa

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Each test sees settings built from its own environment."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def ascii_algebra():
    return get_algebra("interval", (0, 127))


@pytest.fixture
def bits4():
    return get_algebra("bitvector", (4,))


@pytest.fixture
def abc():
    return get_algebra("explicit", ("a", "b", "c"))


@pytest.fixture
def samples_dir() -> Path:
    return SAMPLES


@pytest.fixture
def little_brothers(ascii_algebra) -> Sfa:
    """0 reads 'a' into 1 and 'a'/'b' into 2; 2 simulates 1."""
    a = ascii_algebra
    return Sfa(
        a,
        4,
        [
            (0, a.range("a"), 1),
            (0, a.range("a", "b"), 2),
            (1, a.range("x"), 3),
            (2, a.range("x", "z"), 3),
            (3, a.top, 3),
        ],
        [0],
        [3],
    )


def algebra_kinds():
    return st.sampled_from(
        [
            ("interval", (0, 127)),
            ("bitvector", (4,)),
            ("explicit", ("a", "b", "c")),
        ]
    )


@st.composite
def small_sfas(draw, complete: bool = True, max_states: int = 6):
    """Seeded random SFAs over one of the three test algebras."""
    kind, descriptor = draw(algebra_kinds())
    algebra = get_algebra(kind, descriptor)
    seed = draw(st.integers(min_value=0, max_value=10_000))
    n = draw(st.integers(min_value=1, max_value=max_states))
    density = draw(st.sampled_from([1.0, 2.5, 4.0]))
    pool = draw(st.integers(min_value=1, max_value=4))
    build = random_complete_sfa if complete else random_sfa
    return build(seed, n, density, algebra, pool)
