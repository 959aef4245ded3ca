"""
Seeded automaton generators for tests and benchmarks.
"""
import logging
import math
import random
from pathlib import Path
from typing import List, Optional, Tuple, Union

from .algebra import Algebra, BitVectorAlgebra, Predicate, get_algebra
from .automata import Sfa, complete, merge_parallel
from .corpus import regex_corpus
from .errors import SfaError, UsageError
from .regex import regex_compile
from .textformat import save_sfa

logger = logging.getLogger(__name__)

DEFAULT_DENSITY = 2.5
DENSE_DENSITY = 6.0


def parse_algebra_option(text: str) -> Algebra:
    """
    Algebra from a compact CLI spelling.

    ``interval`` (full codepoint range), ``interval:LO:HI``,
    ``bitvector:K`` and ``explicit:a,b,c`` are accepted.
    """
    kind, _, rest = text.partition(":")
    if kind == "interval":
        if not rest:
            return get_algebra("interval", (0, 0x10FFFF))
        lo, _, hi = rest.partition(":")
        return get_algebra("interval", (int(lo), int(hi)))
    if kind == "bitvector":
        return get_algebra("bitvector", (int(rest or 4),))
    if kind == "explicit":
        symbols = tuple(s for s in rest.split(",") if s) or ("a", "b", "c")
        return get_algebra("explicit", symbols)
    raise UsageError(f"unknown algebra {text!r}; expected interval[:LO:HI], bitvector[:K] or explicit[:a,b,...]")


def random_sfa(
    seed: int,
    n: int,
    density: float = DEFAULT_DENSITY,
    algebra: Optional[Algebra] = None,
    pred_pool: int = 4,
) -> Sfa:
    """
    A reproducible random SFA with ``ceil(density * n)`` transitions.

    Guards come from a pool of ``pred_pool`` random predicates; the initial
    set is non-empty and the final set is random. The same arguments always
    yield the same automaton.
    """
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    if density <= 0:
        raise UsageError(f"density must be > 0, got {density}")
    if pred_pool < 1:
        raise UsageError(f"pred_pool must be >= 1, got {pred_pool}")
    algebra = algebra or get_algebra("interval", (0, 0x10FFFF))
    rng = random.Random(seed)
    pool: List[Predicate] = [algebra.random_predicate(rng) for _ in range(pred_pool)]
    count = math.ceil(density * n)
    transitions: List[Tuple[int, Predicate, int]] = [
        (rng.randrange(n), rng.choice(pool), rng.randrange(n)) for _ in range(count)
    ]
    initial = {q for q in range(n) if rng.random() < 0.3} or {rng.randrange(n)}
    final = {q for q in range(n) if rng.random() < 0.4}
    return Sfa(algebra, n, transitions, initial, final)


def random_complete_sfa(seed: int, n: int, density: float = DEFAULT_DENSITY, algebra: Optional[Algebra] = None, pred_pool: int = 4) -> Sfa:
    return complete(merge_parallel(random_sfa(seed, n, density, algebra, pred_pool)))


def independent_bits_family(bits: int, width: Optional[int] = None) -> Sfa:
    """
    One source with a transition on each bit predicate ``b_i`` to its own
    final target. The guards are independent, so the automaton has ``2**bits``
    global minterms while every algorithm that avoids mintermisation sees
    only ``bits`` guards.
    """
    if bits < 1:
        raise UsageError(f"bits must be >= 1, got {bits}")
    algebra = get_algebra("bitvector", (width or bits,))
    assert isinstance(algebra, BitVectorAlgebra)
    transitions = [(0, algebra.bit(i), i + 1) for i in range(bits)]
    # Targets loop back so the automaton is not trivially acyclic.
    transitions += [(i + 1, algebra.bit(i), 0) for i in range(bits)]
    return complete(Sfa(algebra, bits + 1, transitions, [0], range(1, bits + 1)))


def disjoint_chain_copies(length: int, copies: int = 2, algebra: Optional[Algebra] = None) -> Sfa:
    """``copies`` identical chains ``a^length`` side by side, all initial."""
    algebra = algebra or get_algebra("interval", (0, 0x10FFFF))
    states = (length + 1) * copies
    guard = algebra.parse("[97]") if algebra.kind == "interval" else algebra.top
    transitions = []
    initial, final = [], []
    for c in range(copies):
        base = c * (length + 1)
        initial.append(base)
        final.append(base + length)
        transitions += [(base + k, guard, base + k + 1) for k in range(length)]
    return Sfa(algebra, states, transitions, initial, final)


def write_corpus(out_dir: Union[str, Path], seed: int = 0, count: int = 50, n: int = 8) -> List[Path]:
    """
    Write the shipped regex corpus, random automata at densities 2.5 and 6.0,
    and the adversarial bit family (4..14 bits) to ``out_dir``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []
    for index, pattern in enumerate(regex_corpus()):
        try:
            m = regex_compile(pattern)
        except SfaError as e:
            logger.warning(f"Skipping corpus pattern {pattern!r}: {e}")
            continue
        path = out / f"regex_{index:03d}.sfa"
        save_sfa(m, path)
        written.append(path)
    for density, tag in ((DEFAULT_DENSITY, "d25"), (DENSE_DENSITY, "d60")):
        for index in range(count):
            m = random_sfa(seed + index, n, density, pred_pool=4)
            path = out / f"random_{tag}_{index:03d}.sfa"
            save_sfa(m, path)
            written.append(path)
    for bits in range(4, 15):
        path = out / f"bits_{bits:02d}.sfa"
        save_sfa(independent_bits_family(bits), path)
        written.append(path)
    logger.info(f"Wrote {len(written)} automata to {out}")
    return written
