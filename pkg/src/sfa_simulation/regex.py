"""
A small regex-to-SFA compiler.

Supported syntax: literals, ``.``, ``[a-z0-9]`` / ``[^...]`` classes,
``|``, ``*``, ``+``, ``?``, grouping ``( )``, the escapes ``\\d \\w \\s \\n \\t``
and backslash-escaped metacharacters. Patterns are compiled with Thompson's
construction followed by epsilon elimination.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple, Union

from .algebra import Algebra, BitVectorAlgebra, IntervalAlgebra, MAX_CODEPOINT, Predicate, get_algebra
from .automata import Sfa, reachable_states, restrict
from .errors import ParseError, UsageError

logger = logging.getLogger(__name__)

METACHARACTERS = set("()[]{}|*+?.\\^$-")
_CLASS_ESCAPES: Dict[str, List[Tuple[int, int]]] = {
    "d": [(48, 57)],
    "w": [(48, 57), (65, 90), (95, 95), (97, 122)],
    "s": [(9, 13), (32, 32)],
}
_CHAR_ESCAPES = {"n": 10, "t": 9, "r": 13, "f": 12, "v": 11}


@dataclass(frozen=True)
class CharClass:
    ranges: Tuple[Tuple[int, int], ...]
    negated: bool = False


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Concat:
    parts: Tuple["RegexAst", ...]


@dataclass(frozen=True)
class Alternation:
    options: Tuple["RegexAst", ...]


@dataclass(frozen=True)
class Star:
    node: "RegexAst"


@dataclass(frozen=True)
class Plus:
    node: "RegexAst"


@dataclass(frozen=True)
class Question:
    node: "RegexAst"


RegexAst = Union[CharClass, Epsilon, Concat, "Alternation", Star, Plus, Question]

ANY = CharClass(((0, MAX_CODEPOINT),))


class RegexParser:
    """Recursive descent parser producing a ``RegexAst``."""

    def __init__(self, pattern: str):
        self.pattern = pattern
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.pattern[self.pos] if self.pos < len(self.pattern) else None

    def error(self, expected: str) -> ParseError:
        found = self.peek()
        return ParseError(f"expected {expected}", self.pos, "end of pattern" if found is None else found)

    def take(self) -> str:
        ch = self.peek()
        if ch is None:
            raise self.error("more input")
        self.pos += 1
        return ch

    def parse(self):
        node = self.alternation()
        if self.peek() is not None:
            raise self.error("end of pattern or '|'")
        return node

    def alternation(self):
        options = [self.concatenation()]
        while self.peek() == "|":
            self.pos += 1
            options.append(self.concatenation())
        return options[0] if len(options) == 1 else Alternation(tuple(options))

    def concatenation(self):
        parts = []
        while self.peek() is not None and self.peek() not in "|)":
            parts.append(self.repetition())
        if not parts:
            return Epsilon()
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def repetition(self):
        node = self.atom()
        while self.peek() in ("*", "+", "?"):
            op = self.take()
            node = Star(node) if op == "*" else Plus(node) if op == "+" else Question(node)
        return node

    def atom(self):
        ch = self.peek()
        if ch is None:
            raise self.error("atom")
        if ch == "(":
            self.pos += 1
            node = self.alternation()
            if self.peek() != ")":
                raise self.error("')'")
            self.pos += 1
            return node
        if ch == "[":
            return self.char_class()
        if ch == ".":
            self.pos += 1
            return ANY
        if ch == "\\":
            return self.escape()
        if ch in "*+?":
            raise self.error("atom before quantifier")
        if ch in "]{}^$":
            raise self.error(f"escaped '{ch}'")
        self.pos += 1
        return CharClass(((ord(ch), ord(ch)),))

    def escape(self) -> CharClass:
        self.pos += 1
        ch = self.peek()
        if ch is None:
            raise self.error("escaped character")
        self.pos += 1
        if ch in _CLASS_ESCAPES:
            return CharClass(tuple(_CLASS_ESCAPES[ch]))
        if ch in _CHAR_ESCAPES:
            code = _CHAR_ESCAPES[ch]
            return CharClass(((code, code),))
        if ch in METACHARACTERS or not ch.isalnum():
            return CharClass(((ord(ch), ord(ch)),))
        self.pos -= 1
        raise self.error("metacharacter or one of d, w, s, n, t, r, f, v after '\\'")

    def class_char(self) -> Union[int, CharClass]:
        ch = self.peek()
        if ch is None:
            raise self.error("']'")
        if ch == "\\":
            escaped = self.escape()
            if len(escaped.ranges) == 1 and escaped.ranges[0][0] == escaped.ranges[0][1]:
                return escaped.ranges[0][0]
            return escaped
        self.pos += 1
        return ord(ch)

    def char_class(self) -> CharClass:
        self.pos += 1
        negated = False
        if self.peek() == "^":
            negated = True
            self.pos += 1
        ranges: List[Tuple[int, int]] = []
        first = True
        while self.peek() != "]" or first:
            if self.peek() is None:
                raise self.error("']'")
            start = self.pos
            lo = self.class_char()
            first = False
            if isinstance(lo, CharClass):
                ranges.extend(lo.ranges)
                continue
            if self.peek() == "-" and self.pos + 1 < len(self.pattern) and self.pattern[self.pos + 1] != "]":
                self.pos += 1
                hi = self.class_char()
                if isinstance(hi, CharClass):
                    raise ParseError("class escape cannot end a range", start, self.pattern[start:self.pos])
                if hi < lo:
                    raise ParseError("range bounds out of order", start, self.pattern[start:self.pos])
                ranges.append((lo, hi))
            else:
                ranges.append((lo, lo))
        self.pos += 1
        return CharClass(tuple(ranges), negated)


def parse_regex(pattern: str):
    return RegexParser(pattern).parse()


class _Builder:
    """Thompson construction into an epsilon-NFA over predicates."""

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self.count = 0
        self.edges: List[Tuple[int, Predicate, int]] = []
        self.epsilon: Dict[int, Set[int]] = {}

    def state(self) -> int:
        self.count += 1
        return self.count - 1

    def eps(self, a: int, b: int) -> None:
        self.epsilon.setdefault(a, set()).add(b)

    def predicate(self, node: CharClass) -> Predicate:
        algebra = self.algebra
        if isinstance(algebra, IntervalAlgebra):
            pred = algebra.from_ranges(node.ranges)
        elif isinstance(algebra, BitVectorAlgebra):
            pred = algebra.disjoin(algebra.from_range(lo, hi) for lo, hi in node.ranges)
        else:
            raise UsageError(f"regex compilation needs an interval or bitvector algebra, got {algebra.kind}")
        return algebra.not_(pred) if node.negated else pred

    def build(self, node) -> Tuple[int, int]:
        if isinstance(node, CharClass):
            start, end = self.state(), self.state()
            pred = self.predicate(node)
            if self.algebra.is_sat(pred):
                self.edges.append((start, pred, end))
            return start, end
        if isinstance(node, Epsilon):
            start, end = self.state(), self.state()
            self.eps(start, end)
            return start, end
        if isinstance(node, Concat):
            start, end = self.build(node.parts[0])
            for part in node.parts[1:]:
                s, e = self.build(part)
                self.eps(end, s)
                end = e
            return start, end
        if isinstance(node, Alternation):
            start, end = self.state(), self.state()
            for option in node.options:
                s, e = self.build(option)
                self.eps(start, s)
                self.eps(e, end)
            return start, end
        if isinstance(node, (Star, Plus, Question)):
            start, end = self.state(), self.state()
            s, e = self.build(node.node)
            self.eps(start, s)
            self.eps(e, end)
            if not isinstance(node, Plus):
                self.eps(start, end)
            if not isinstance(node, Question):
                self.eps(e, s)
            return start, end
        raise UsageError(f"unknown regex node {node!r}")

    def closure(self, q: int) -> Set[int]:
        seen = {q}
        stack = [q]
        while stack:
            for nxt in self.epsilon.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen


def regex_compile(pattern: str, encoding: str = "interval") -> Sfa:
    """
    Compile ``pattern`` into an epsilon-free SFA.

    ``encoding="interval"`` targets codepoints ``[0, 0x10FFFF]``;
    ``encoding="bdd16"`` targets 16-bit code units as BDDs over 16 variables.
    """
    if encoding == "interval":
        algebra = get_algebra("interval", (0, MAX_CODEPOINT))
    elif encoding == "bdd16":
        algebra = get_algebra("bitvector", (16,))
    else:
        raise UsageError(f"unknown regex encoding {encoding!r}; expected interval or bdd16")
    ast = parse_regex(pattern)
    builder = _Builder(algebra)
    start, accept = builder.build(ast)

    by_source: Dict[int, List[Tuple[Predicate, int]]] = {}
    for source, pred, target in builder.edges:
        by_source.setdefault(source, []).append((pred, target))
    transitions = []
    final = []
    for q in range(builder.count):
        reach = builder.closure(q)
        if accept in reach:
            final.append(q)
        for p in reach:
            transitions.extend((q, pred, target) for pred, target in by_source.get(p, ()))
    nfa = Sfa(algebra, builder.count, transitions, [start], final)
    useful = reachable_states(nfa, nfa.initial) & reachable_states(nfa, nfa.final, backward=True)
    # Keep the initial state even for an empty language.
    result = restrict(nfa, useful | {start})
    logger.debug(f"Compiled {pattern!r}: {result.n} states, {result.m} transitions")
    return result
