"""
sfa-simulation package initialization.
"""
from . import algebra, automata, reduction, simulation
from .algebra import BitVectorAlgebra, ExplicitAlgebra, IntervalAlgebra, Predicate, get_algebra
from .automata import Sfa, complete, ensure_complete, global_mintermise, local_mintermise
from .errors import (
    DeadlineExceeded,
    InvariantViolation,
    MintermBlowupError,
    ParseError,
    ResourceError,
    SfaError,
    UsageError,
)
from .reduction import reduce_iterative
from .regex import regex_compile
from .simulation import (
    Relation,
    bisimulation,
    check_agreement,
    enumerated_sim,
    global_sim,
    iny_sim,
    local_sim,
    nocount_sim,
    oracle_sim,
)
from .textformat import load_sfa, read_sfa, save_sfa, write_sfa


def main():
	"""Main entry point for the package."""
	from .cli import main as cli_main

	return cli_main()

# Expose important items at package level
__all__ = [
    "main",
    "algebra",
    "automata",
    "reduction",
    "simulation",
    "BitVectorAlgebra",
    "ExplicitAlgebra",
    "IntervalAlgebra",
    "Predicate",
    "get_algebra",
    "Sfa",
    "complete",
    "ensure_complete",
    "global_mintermise",
    "local_mintermise",
    "DeadlineExceeded",
    "InvariantViolation",
    "MintermBlowupError",
    "ParseError",
    "ResourceError",
    "SfaError",
    "UsageError",
    "reduce_iterative",
    "regex_compile",
    "Relation",
    "bisimulation",
    "check_agreement",
    "enumerated_sim",
    "global_sim",
    "iny_sim",
    "local_sim",
    "nocount_sim",
    "oracle_sim",
    "load_sfa",
    "read_sfa",
    "save_sfa",
    "write_sfa",
]
