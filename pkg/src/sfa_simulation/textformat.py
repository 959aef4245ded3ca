"""
Reading and writing the line-oriented SFA text format.

    @sfa
    algebra interval 0 1114111        # kind + domain descriptor
    states 3
    initial 0
    final 2
    trans 0 [97-109] 1
    trans 1 [97-122] 2

Parallel transitions between the same pair of states are merged by guard
disjunction when a file is read.
"""
import logging
import re
from pathlib import Path
from typing import List, Optional, Tuple, Union

from .algebra import Algebra, Predicate, algebra_from_tokens
from .automata import Sfa, merge_parallel
from .errors import ParseError

logger = logging.getLogger(__name__)

_TRANS = re.compile(r"trans\s+(\d+)\s+(.+?)\s+(\d+)\s*$")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _state_list(tokens: List[str], line_no: int) -> List[int]:
    try:
        return [int(tok) for tok in tokens]
    except ValueError as e:
        raise ParseError(f"line {line_no}: expected state indices: {e}", token=" ".join(tokens))


def read_sfa(text: str, algebra: Optional[Algebra] = None) -> Sfa:
    """Parse an SFA; ``algebra`` overrides the one declared in the header."""
    declared: Optional[Algebra] = None
    states: Optional[int] = None
    initial: List[int] = []
    final: List[int] = []
    pending: List[Tuple[int, int, str, int]] = []
    seen_header = False

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        if not seen_header:
            if line != "@sfa":
                raise ParseError(f"line {line_no}: expected '@sfa' header", token=line)
            seen_header = True
            continue
        keyword, _, rest = line.partition(" ")
        tokens = rest.split()
        if keyword == "algebra":
            declared = algebra_from_tokens(tokens)
        elif keyword == "states":
            if len(tokens) != 1 or not tokens[0].isdigit():
                raise ParseError(f"line {line_no}: 'states' takes one count", token=rest)
            states = int(tokens[0])
        elif keyword == "initial":
            initial.extend(_state_list(tokens, line_no))
        elif keyword == "final":
            final.extend(_state_list(tokens, line_no))
        elif keyword == "trans":
            match = _TRANS.match(line)
            if not match:
                raise ParseError(f"line {line_no}: expected 'trans SRC GUARD DST'", token=line)
            pending.append((line_no, int(match.group(1)), match.group(2), int(match.group(3))))
        else:
            raise ParseError(f"line {line_no}: unknown directive", token=keyword)

    if not seen_header:
        raise ParseError("missing '@sfa' header")
    algebra = algebra or declared
    if algebra is None:
        raise ParseError("missing 'algebra' directive")
    if states is None:
        raise ParseError("missing 'states' directive")

    transitions: List[Tuple[int, Predicate, int]] = []
    for line_no, source, guard_text, target in pending:
        try:
            guard = algebra.parse(guard_text)
        except ParseError as e:
            raise ParseError(f"line {line_no}: {e}", token=e.token) from e
        transitions.append((source, guard, target))
    return merge_parallel(Sfa(algebra, states, transitions, initial, final))


def write_sfa(m: Sfa) -> str:
    """Serialise with transitions sorted by (source, target)."""
    lines = [
        "@sfa",
        f"algebra {m.algebra.kind} {m.algebra.descriptor()}",
        f"states {m.n}",
    ]
    if m.initial:
        lines.append("initial " + " ".join(str(q) for q in sorted(m.initial)))
    if m.final:
        lines.append("final " + " ".join(str(q) for q in sorted(m.final)))
    for t in m.transitions:
        lines.append(f"trans {t.source} {m.algebra.format(t.guard)} {t.target}")
    return "\n".join(lines) + "\n"


def load_sfa(path: Union[str, Path]) -> Sfa:
    path = Path(path)
    logger.debug(f"Reading automaton from {path}")
    return read_sfa(path.read_text(encoding="utf-8"))


def save_sfa(m: Sfa, path: Union[str, Path]) -> None:
    path = Path(path)
    path.write_text(write_sfa(m), encoding="utf-8")
    logger.debug(f"Wrote automaton with {m.n} states to {path}")
