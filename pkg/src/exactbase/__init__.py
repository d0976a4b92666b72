"""Exact-weight matroid bases: FPT solver, LP vertices, reductions and an exchange lab."""
from .errors import CapabilityError, EnumerationOverflow, SpecificationError, TheoremAlarm, TheoremInapplicable
from .matroid import (Contraction, DirectSum, Graphic, Linear, Matroid, Partition, Restriction, Transversal,
                      Uniform, compile_spec, enumerate_bases)
from .weights import WeightMatrix
from .solver import SolveReport, brute_force_solve, solve
from .polytope import lp_vertex

__version__ = "0.1.0"
