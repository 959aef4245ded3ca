"""
Effective Boolean algebras.

Three algebras are provided:

* ``explicit``  - a finite list of named symbols; predicates are bitsets.
* ``interval``  - integer codepoints in ``[lo, hi]``; predicates are sorted,
  disjoint, non-adjacent inclusive ranges.
* ``bitvector`` - ``k``-bit vectors; predicates are reduced ordered BDDs over
  variables ``b0 .. b{k-1}`` (declared in that order, never reordered).
  Bit ``b0`` is the most significant bit of a symbol, so a symbol is the
  integer read off ``b0 b1 ... b{k-1}``.

Predicates are canonical: two predicates of one algebra denote the same set
exactly when they compare equal.
"""
import bisect
import itertools
import logging
import random
import re
import threading
from abc import ABC, abstractmethod
from collections import Counter
from functools import lru_cache
from typing import Any, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from dd import autoref as _bdd

from .config import Deadline
from .errors import MintermBlowupError, ParseError, UsageError

logger = logging.getLogger(__name__)

MAX_CODEPOINT = 0x10FFFF
MAX_BITVECTOR_WIDTH = 64


class OperationCounter:
    """
    Counts algebra calls (and/or/not/is_sat/minterms).

    Counts are kept per thread so concurrent runs over a shared algebra can
    each read their own totals.
    """

    FIELDS = ("and", "or", "not", "sat", "minterms")

    def __init__(self):
        self._local = threading.local()

    def _counts(self) -> Counter:
        counts = getattr(self._local, "counts", None)
        if counts is None:
            counts = Counter()
            self._local.counts = counts
        return counts

    def bump(self, name: str) -> None:
        self._counts()[name] += 1

    def snapshot(self) -> Dict[str, int]:
        """Counts made by the calling thread."""
        counts = self._counts()
        return {name: counts[name] for name in self.FIELDS}

    @staticmethod
    def delta(before: Dict[str, int], after: Dict[str, int]) -> Dict[str, int]:
        return {name: after[name] - before[name] for name in OperationCounter.FIELDS}


class Predicate:
    """An immutable, canonical predicate of one algebra."""

    __slots__ = ("algebra", "key", "payload")

    def __init__(self, algebra: "Algebra", key: Hashable, payload: Any = None):
        self.algebra = algebra
        self.key = key
        self.payload = key if payload is None else payload

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Predicate):
            return NotImplemented
        return self.algebra is other.algebra and self.key == other.key

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.key))

    def __and__(self, other: "Predicate") -> "Predicate":
        return self.algebra.and_(self, other)

    def __or__(self, other: "Predicate") -> "Predicate":
        return self.algebra.or_(self, other)

    def __invert__(self) -> "Predicate":
        return self.algebra.not_(self)

    def __repr__(self) -> str:
        return f"Predicate({self.algebra.format(self)})"

    def __str__(self) -> str:
        return self.algebra.format(self)

    @property
    def sort_key(self) -> Any:
        """Deterministic ordering key, stable across processes."""
        return self.algebra.sort_key(self)


class Algebra(ABC):
    """Common interface and the algebra-independent algorithms."""

    kind: str = ""

    def __init__(self):
        self.counter = OperationCounter()

    # -- construction -----------------------------------------------------

    @property
    @abstractmethod
    def top(self) -> Predicate: ...

    @property
    @abstractmethod
    def bottom(self) -> Predicate: ...

    @abstractmethod
    def descriptor(self) -> str:
        """Domain descriptor as written after ``algebra`` in SFA files."""

    @abstractmethod
    def domain_size(self) -> int: ...

    # -- primitive operations (subclasses implement the underscored forms) --

    @abstractmethod
    def _and(self, p: Predicate, q: Predicate) -> Predicate: ...

    @abstractmethod
    def _or(self, p: Predicate, q: Predicate) -> Predicate: ...

    @abstractmethod
    def _not(self, p: Predicate) -> Predicate: ...

    @abstractmethod
    def _is_sat(self, p: Predicate) -> bool: ...

    @abstractmethod
    def _iter_symbols(self, p: Predicate) -> Iterator[Any]:
        """Symbols of p in canonical domain order."""

    @abstractmethod
    def contains(self, p: Predicate, symbol: Any) -> bool: ...

    @abstractmethod
    def parse(self, text: str) -> Predicate: ...

    @abstractmethod
    def format(self, p: Predicate) -> str: ...

    @abstractmethod
    def sort_key(self, p: Predicate) -> Any: ...

    @abstractmethod
    def random_predicate(self, rng: random.Random) -> Predicate:
        """A random satisfiable predicate."""

    def coerce_symbol(self, symbol: Any) -> Any:
        """Normalise a user-supplied symbol or raise ``UsageError``."""
        return symbol

    # -- public operations ---------------------------------------------

    def _check(self, *preds: Predicate) -> None:
        for p in preds:
            if not isinstance(p, Predicate) or p.algebra is not self:
                raise UsageError(f"algebra mismatch: {p!r} does not belong to {self.kind} algebra {self.descriptor()}")

    def and_(self, p: Predicate, q: Predicate) -> Predicate:
        self._check(p, q)
        self.counter.bump("and")
        return self._and(p, q)

    def or_(self, p: Predicate, q: Predicate) -> Predicate:
        self._check(p, q)
        self.counter.bump("or")
        return self._or(p, q)

    def not_(self, p: Predicate) -> Predicate:
        self._check(p)
        self.counter.bump("not")
        return self._not(p)

    def is_sat(self, p: Predicate) -> bool:
        self._check(p)
        self.counter.bump("sat")
        return self._is_sat(p)

    def disjoin(self, preds: Iterable[Predicate]) -> Predicate:
        result = self.bottom
        for p in preds:
            result = self.or_(result, p)
        return result

    def conjoin(self, preds: Iterable[Predicate]) -> Predicate:
        result = self.top
        for p in preds:
            result = self.and_(result, p)
        return result

    def is_subset(self, p: Predicate, q: Predicate) -> bool:
        return not self.is_sat(self.and_(p, self.not_(q)))

    def is_equivalent(self, p: Predicate, q: Predicate) -> bool:
        self._check(p, q)
        return p == q

    def enumerate(self, p: Predicate, limit: int) -> List[Any]:
        """Up to ``limit`` symbols of p in canonical domain order."""
        self._check(p)
        if limit < 0:
            raise UsageError(f"enumerate limit must be >= 0, got {limit}")
        return list(itertools.islice(self._iter_symbols(p), limit))

    def witness(self, p: Predicate) -> Optional[Any]:
        found = self.enumerate(p, 1)
        return found[0] if found else None

    def check_symbol(self, symbol: Any) -> Any:
        symbol = self.coerce_symbol(symbol)
        if not self.contains(self.top, symbol):
            raise UsageError(f"symbol {symbol!r} is outside the domain {self.descriptor()}")
        return symbol

    def minterm_signatures(
        self, preds: Iterable[Predicate], cap: Optional[int] = None, deadline: Optional[Deadline] = None
    ) -> Tuple[List[Predicate], List[Tuple[Predicate, int]]]:
        """
        Minterms of ``preds`` with their membership signatures.

        Returns the de-duplicated input list together with ``(minterm, mask)``
        pairs where bit ``i`` of ``mask`` is set iff the minterm lies inside
        the ``i``-th de-duplicated predicate. Cells are split one predicate
        at a time and unsatisfiable cells are dropped immediately. The
        deadline is checked once per refined cell.
        """
        deadline = deadline or Deadline.none()
        unique: List[Predicate] = []
        seen = set()
        for p in preds:
            self._check(p)
            if p not in seen:
                seen.add(p)
                unique.append(p)
        self.counter.bump("minterms")
        cells: List[Tuple[Predicate, int]] = [(self.top, 0)]
        for index, phi in enumerate(unique):
            negated = self.not_(phi)
            refined: List[Tuple[Predicate, int]] = []
            for cell, mask in cells:
                deadline.check()
                inside = self.and_(cell, phi)
                if self.is_sat(inside):
                    refined.append((inside, mask | (1 << index)))
                outside = self.and_(cell, negated)
                if self.is_sat(outside):
                    refined.append((outside, mask))
            if cap is not None and len(refined) > cap:
                logger.warning(f"Minterm generation stopped at {len(refined)} cells (cap {cap})")
                raise MintermBlowupError(len(refined), cap)
            cells = refined
        return unique, cells

    def minterms(
        self, preds: Iterable[Predicate], cap: Optional[int] = None, deadline: Optional[Deadline] = None
    ) -> List[Predicate]:
        _, cells = self.minterm_signatures(preds, cap, deadline)
        return [cell for cell, _ in cells]

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.descriptor()}>"


class ExplicitAlgebra(Algebra):
    """Finite named symbols; a predicate is a bitset over the declared order."""

    kind = "explicit"
    _SYMBOL = re.compile(r"[^\s,{}#\[\]]+")

    def __init__(self, symbols: Sequence[str]):
        super().__init__()
        symbols = [str(s) for s in symbols]
        if not symbols:
            raise UsageError("explicit algebra needs at least one symbol")
        for s in symbols:
            if not self._SYMBOL.fullmatch(s):
                raise UsageError(f"invalid explicit symbol {s!r}")
        if len(set(symbols)) != len(symbols):
            raise UsageError(f"duplicate symbols in explicit domain {symbols}")
        self.symbols: Tuple[str, ...] = tuple(symbols)
        self._index = {s: i for i, s in enumerate(self.symbols)}
        self._full = (1 << len(self.symbols)) - 1
        self._top = Predicate(self, self._full)
        self._bottom = Predicate(self, 0)

    @property
    def top(self) -> Predicate:
        return self._top

    @property
    def bottom(self) -> Predicate:
        return self._bottom

    def descriptor(self) -> str:
        return " ".join(self.symbols)

    def domain_size(self) -> int:
        return len(self.symbols)

    def of(self, *symbols: str) -> Predicate:
        mask = 0
        for s in symbols:
            if s not in self._index:
                raise UsageError(f"symbol {s!r} is outside the domain {self.descriptor()}")
            mask |= 1 << self._index[s]
        return Predicate(self, mask)

    def _and(self, p, q):
        return Predicate(self, p.key & q.key)

    def _or(self, p, q):
        return Predicate(self, p.key | q.key)

    def _not(self, p):
        return Predicate(self, self._full & ~p.key)

    def _is_sat(self, p):
        return p.key != 0

    def _iter_symbols(self, p):
        for i, s in enumerate(self.symbols):
            if p.key >> i & 1:
                yield s

    def contains(self, p, symbol):
        index = self._index.get(symbol)
        return index is not None and bool(p.key >> index & 1)

    def coerce_symbol(self, symbol):
        return str(symbol)

    def parse(self, text: str) -> Predicate:
        text = text.strip()
        if not (text.startswith("{") and text.endswith("}")):
            raise ParseError("explicit predicate must be written {a,b,...}", 0, text)
        body = text[1:-1].strip()
        if not body:
            return self.bottom
        mask = 0
        offset = 1
        for token in body.split(","):
            name = token.strip()
            if name not in self._index:
                raise ParseError("unknown symbol in explicit predicate", offset, name or token)
            mask |= 1 << self._index[name]
            offset += len(token) + 1
        return Predicate(self, mask)

    def format(self, p: Predicate) -> str:
        return "{" + ",".join(self._iter_symbols(p)) + "}"

    def sort_key(self, p):
        return (p.key,)

    def random_predicate(self, rng):
        mask = 0
        while mask == 0:
            mask = rng.getrandbits(len(self.symbols)) & self._full
        return Predicate(self, mask)


Ranges = Tuple[Tuple[int, int], ...]


def _normalise_ranges(ranges: Iterable[Tuple[int, int]]) -> Ranges:
    """Sort and coalesce overlapping or adjacent inclusive ranges."""
    merged: List[List[int]] = []
    for lo, hi in sorted(ranges):
        if merged and lo <= merged[-1][1] + 1:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


class IntervalAlgebra(Algebra):
    """Integer codepoints in an inclusive range; predicates are range unions."""

    kind = "interval"

    def __init__(self, lo: int = 0, hi: int = MAX_CODEPOINT):
        super().__init__()
        if not (0 <= lo <= hi <= MAX_CODEPOINT):
            raise UsageError(f"interval domain must satisfy 0 <= lo <= hi <= {MAX_CODEPOINT}, got [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self._top = Predicate(self, ((lo, hi),))
        self._bottom = Predicate(self, ())

    @property
    def top(self) -> Predicate:
        return self._top

    @property
    def bottom(self) -> Predicate:
        return self._bottom

    def descriptor(self) -> str:
        return f"{self.lo} {self.hi}"

    def domain_size(self) -> int:
        return self.hi - self.lo + 1

    def range(self, lo: Any, hi: Any = None) -> Predicate:
        """Predicate for ``[lo, hi]``; characters are read as codepoints."""
        lo = self.coerce_symbol(lo)
        hi = lo if hi is None else self.coerce_symbol(hi)
        if lo > hi:
            raise UsageError(f"empty range [{lo}, {hi}]")
        lo, hi = max(lo, self.lo), min(hi, self.hi)
        if lo > hi:
            return self.bottom
        return Predicate(self, ((lo, hi),))

    def from_ranges(self, ranges: Iterable[Tuple[Any, Any]]) -> Predicate:
        clipped = []
        for lo, hi in ranges:
            lo, hi = max(self.coerce_symbol(lo), self.lo), min(self.coerce_symbol(hi), self.hi)
            if lo <= hi:
                clipped.append((lo, hi))
        return Predicate(self, _normalise_ranges(clipped))

    def _and(self, p, q):
        a, b = p.key, q.key
        i = j = 0
        out = []
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return Predicate(self, tuple(out))

    def _or(self, p, q):
        return Predicate(self, _normalise_ranges(p.key + q.key))

    def _not(self, p):
        out = []
        cursor = self.lo
        for lo, hi in p.key:
            if lo > cursor:
                out.append((cursor, lo - 1))
            cursor = hi + 1
        if cursor <= self.hi:
            out.append((cursor, self.hi))
        return Predicate(self, tuple(out))

    def _is_sat(self, p):
        return bool(p.key)

    def _iter_symbols(self, p):
        for lo, hi in p.key:
            yield from range(lo, hi + 1)

    def contains(self, p, symbol):
        if not isinstance(symbol, int):
            return False
        index = bisect.bisect_right(p.key, (symbol, MAX_CODEPOINT + 1)) - 1
        return index >= 0 and p.key[index][0] <= symbol <= p.key[index][1]

    def coerce_symbol(self, symbol):
        if isinstance(symbol, str):
            if len(symbol) != 1:
                raise UsageError(f"interval symbol must be a single character, got {symbol!r}")
            return ord(symbol)
        if isinstance(symbol, bool) or not isinstance(symbol, int):
            raise UsageError(f"interval symbol must be an integer codepoint, got {symbol!r}")
        return symbol

    def parse(self, text: str) -> Predicate:
        stripped = text.strip()
        if not (stripped.startswith("[") and stripped.endswith("]")):
            raise ParseError("interval predicate must be written [lo-hi,...]", 0, stripped)
        body = stripped[1:-1]
        if not body.strip():
            return self.bottom
        ranges: List[Tuple[int, int]] = []
        offset = 1
        for token in body.split(","):
            item = token.strip()
            match = re.fullmatch(r"(\d+)(?:-(\d+))?", item)
            if not match:
                raise ParseError("malformed range", offset, item or token)
            lo = int(match.group(1))
            hi = int(match.group(2)) if match.group(2) is not None else lo
            if lo > hi:
                raise ParseError("range bounds out of order", offset, item)
            if lo < self.lo or hi > self.hi:
                raise ParseError(f"range outside domain [{self.lo}, {self.hi}]", offset, item)
            for other_lo, other_hi in ranges:
                if lo <= other_hi and other_lo <= hi:
                    raise ParseError("overlapping range", offset, item)
            ranges.append((lo, hi))
            offset += len(token) + 1
        return Predicate(self, _normalise_ranges(ranges))

    def format(self, p: Predicate) -> str:
        return "[" + ",".join(str(lo) if lo == hi else f"{lo}-{hi}" for lo, hi in p.key) + "]"

    def sort_key(self, p):
        return p.key

    def random_predicate(self, rng):
        # Small unions drawn from a window so that random guards overlap often.
        window_hi = min(self.hi, self.lo + 63)
        ranges = []
        for _ in range(rng.randint(1, 3)):
            a, b = rng.randint(self.lo, window_hi), rng.randint(self.lo, window_hi)
            ranges.append((min(a, b), max(a, b)))
        return Predicate(self, _normalise_ranges(ranges))


class BitVectorAlgebra(Algebra):
    """``k``-bit vectors with predicates as BDDs over ``b0 .. b{k-1}``."""

    kind = "bitvector"
    _TOKEN = re.compile(r"\s*(?:(b\d+)|(true|false)|([&|!()]))")

    def __init__(self, width: int):
        super().__init__()
        if not (1 <= width <= MAX_BITVECTOR_WIDTH):
            raise UsageError(f"bitvector width must be in [1, {MAX_BITVECTOR_WIDTH}], got {width}")
        self.width = width
        self.variables = [f"b{i}" for i in range(width)]
        self._lock = threading.RLock()
        self._manager = _bdd.BDD()
        self._manager.configure(reordering=False)
        self._manager.declare(*self.variables)
        self._top = self._wrap(self._manager.true)
        self._bottom = self._wrap(self._manager.false)
        # Holding the function keeps its node id from being reused.
        self._format_cache: Dict[int, Tuple[Any, str]] = {}

    def _wrap(self, u) -> Predicate:
        return Predicate(self, int(u), u)

    @property
    def top(self) -> Predicate:
        return self._top

    @property
    def bottom(self) -> Predicate:
        return self._bottom

    def descriptor(self) -> str:
        return str(self.width)

    def domain_size(self) -> int:
        return 1 << self.width

    def bit(self, index: int) -> Predicate:
        if not 0 <= index < self.width:
            raise UsageError(f"bit b{index} outside width {self.width}")
        with self._lock:
            return self._wrap(self._manager.var(self.variables[index]))

    def from_range(self, lo: int, hi: int) -> Predicate:
        """Predicate for the unsigned integers ``lo <= v <= hi``."""
        lo, hi = max(lo, 0), min(hi, self.domain_size() - 1)
        if lo > hi:
            return self.bottom
        with self._lock:
            return self._wrap(self._at_least(lo, 0) & self._at_most(hi, 0))

    def _at_least(self, bound: int, level: int):
        if level == self.width:
            return self._manager.true
        var = self._manager.var(self.variables[level])
        if bound >> (self.width - 1 - level) & 1:
            return var & self._at_least(bound, level + 1)
        return var | self._at_least(bound, level + 1)

    def _at_most(self, bound: int, level: int):
        if level == self.width:
            return self._manager.true
        var = self._manager.var(self.variables[level])
        if bound >> (self.width - 1 - level) & 1:
            return ~var | self._at_most(bound, level + 1)
        return ~var & self._at_most(bound, level + 1)

    def _and(self, p, q):
        with self._lock:
            return self._wrap(p.payload & q.payload)

    def _or(self, p, q):
        with self._lock:
            return self._wrap(p.payload | q.payload)

    def _not(self, p):
        with self._lock:
            return self._wrap(~p.payload)

    def _is_sat(self, p):
        return p.payload != self._manager.false

    def _cofactor(self, u, level: int, value: bool):
        return self._manager.let({self.variables[level]: value}, u)

    def _iter_symbols(self, p):
        false = self._manager.false
        true = self._manager.true

        def walk(u, level, prefix):
            if u == false:
                return
            if level == self.width:
                yield prefix
                return
            if u == true:
                # Remaining bits are free.
                free = self.width - level
                for tail in range(1 << free):
                    yield (prefix << free) | tail
                return
            with self._lock:
                low = self._cofactor(u, level, False)
                high = self._cofactor(u, level, True)
            yield from walk(low, level + 1, prefix << 1)
            yield from walk(high, level + 1, (prefix << 1) | 1)

        return walk(p.payload, 0, 0)

    def assignment(self, symbol: int) -> Dict[str, bool]:
        return {var: bool(symbol >> (self.width - 1 - i) & 1) for i, var in enumerate(self.variables)}

    def contains(self, p, symbol):
        if isinstance(symbol, bool) or not isinstance(symbol, int) or not 0 <= symbol < self.domain_size():
            return False
        with self._lock:
            return self._manager.let(self.assignment(symbol), p.payload) == self._manager.true

    def coerce_symbol(self, symbol):
        if isinstance(symbol, str) and symbol and set(symbol) <= {"0", "1"}:
            if len(symbol) != self.width:
                raise UsageError(f"bit string {symbol!r} has wrong width for {self.width}-bit domain")
            return int(symbol, 2)
        if isinstance(symbol, bool) or not isinstance(symbol, int):
            raise UsageError(f"bitvector symbol must be an integer or bit string, got {symbol!r}")
        return symbol

    def parse(self, text: str) -> Predicate:
        tokens: List[Tuple[str, int]] = []
        position = 0
        stripped = text.rstrip()
        while position < len(stripped):
            match = self._TOKEN.match(stripped, position)
            if not match:
                raise ParseError("unexpected character in bitvector predicate", position, stripped[position:position + 8])
            token = match.group(match.lastindex)
            tokens.append((token, match.start(match.lastindex)))
            position = match.end()
        parser = _ExpressionParser(self, tokens)
        with self._lock:
            u = parser.parse()
        return self._wrap(u)

    def format(self, p: Predicate) -> str:
        cached = self._format_cache.get(p.key)
        if cached is not None:
            return cached[1]
        if p.payload == self._manager.true:
            text = "true"
        elif p.payload == self._manager.false:
            text = "false"
        else:
            cubes: List[str] = []
            with self._lock:
                self._collect_cubes(p.payload, 0, [], cubes)
            text = "|".join(cubes)
        self._format_cache[p.key] = (p.payload, text)
        return text

    def _collect_cubes(self, u, level: int, literals: List[str], out: List[str]) -> None:
        if u == self._manager.false:
            return
        if u == self._manager.true or level == self.width:
            out.append("&".join(literals) if literals else "true")
            return
        low = self._cofactor(u, level, False)
        high = self._cofactor(u, level, True)
        if low == high:
            self._collect_cubes(low, level + 1, literals, out)
            return
        var = self.variables[level]
        self._collect_cubes(low, level + 1, literals + [f"!{var}"], out)
        self._collect_cubes(high, level + 1, literals + [var], out)

    def sort_key(self, p):
        return (self.format(p),)

    def random_predicate(self, rng):
        # Random cube over a few bits.
        count = rng.randint(1, min(3, self.width))
        chosen = rng.sample(range(self.width), count)
        with self._lock:
            u = self._manager.true
            for index in chosen:
                var = self._manager.var(self.variables[index])
                u = u & (var if rng.random() < 0.5 else ~var)
            return self._wrap(u)


class _ExpressionParser:
    """Recursive descent over ``|`` / ``&`` / ``!`` with the usual precedence."""

    def __init__(self, algebra: BitVectorAlgebra, tokens: List[Tuple[str, int]]):
        self.algebra = algebra
        self.manager = algebra._manager
        self.tokens = tokens
        self.index = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.index][0] if self.index < len(self.tokens) else None

    def position(self) -> int:
        return self.tokens[self.index][1] if self.index < len(self.tokens) else -1

    def consume(self, expected: Optional[str] = None) -> str:
        token = self.peek()
        if token is None or (expected is not None and token != expected):
            raise ParseError(f"expected {expected or 'operand'}", self.position(), token)
        self.index += 1
        return token

    def parse(self):
        if not self.tokens:
            raise ParseError("empty bitvector predicate", 0)
        u = self.disjunction()
        if self.peek() is not None:
            raise ParseError("unexpected token", self.position(), self.peek())
        return u

    def disjunction(self):
        u = self.conjunction()
        while self.peek() == "|":
            self.consume("|")
            u = u | self.conjunction()
        return u

    def conjunction(self):
        u = self.factor()
        while self.peek() == "&":
            self.consume("&")
            u = u & self.factor()
        return u

    def factor(self):
        token = self.peek()
        if token == "!":
            self.consume("!")
            return ~self.factor()
        if token == "(":
            self.consume("(")
            u = self.disjunction()
            self.consume(")")
            return u
        if token == "true":
            self.consume()
            return self.manager.true
        if token == "false":
            self.consume()
            return self.manager.false
        if token is not None and token.startswith("b"):
            index = int(token[1:])
            if index >= self.algebra.width:
                raise ParseError(f"variable outside width {self.algebra.width}", self.position(), token)
            self.consume()
            return self.manager.var(self.algebra.variables[index])
        raise ParseError("expected operand", self.position(), token)


@lru_cache(maxsize=None)
def get_algebra(kind: str, descriptor: Tuple[Any, ...]) -> Algebra:
    """Shared algebra instance for a kind and domain descriptor."""
    if kind == "explicit":
        return ExplicitAlgebra(descriptor)
    if kind == "interval":
        lo, hi = descriptor
        return IntervalAlgebra(int(lo), int(hi))
    if kind == "bitvector":
        (width,) = descriptor
        return BitVectorAlgebra(int(width))
    raise UsageError(f"unknown algebra kind {kind!r}; expected explicit, interval or bitvector")


def algebra_from_tokens(tokens: Sequence[str]) -> Algebra:
    """Build an algebra from ``kind descriptor...`` tokens of an SFA header."""
    if not tokens:
        raise ParseError("missing algebra kind")
    kind, rest = tokens[0], tuple(tokens[1:])
    try:
        if kind == "interval":
            if len(rest) != 2:
                raise ParseError("interval algebra needs lo and hi", token=" ".join(rest))
            return get_algebra(kind, (int(rest[0]), int(rest[1])))
        if kind == "bitvector":
            if len(rest) != 1:
                raise ParseError("bitvector algebra needs a width", token=" ".join(rest))
            return get_algebra(kind, (int(rest[0]),))
        if kind == "explicit":
            return get_algebra(kind, rest)
    except ValueError as e:
        raise ParseError(f"bad algebra descriptor: {e}", token=" ".join(rest))
    raise ParseError("unknown algebra kind", token=kind)
