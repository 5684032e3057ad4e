"""Contextuality analysis for qubit empirical models under local projective measurements."""
from .contextuality import (
    contextual_fraction,
    find_consistent_assignment,
    is_strongly_contextual,
    logically_contextual_events,
)
from .empirical import (
    EmpiricalModel,
    Support,
    born,
    build_model,
    exact_family_support,
    no_signalling_check,
    support_of,
)
from .gf2 import Gf2System, family_gf2_system, family_support_to_gf2, gf2_unsatisfiable
from .kernels import BACKEND
from .lp import LinearProgram, maximize
from .scenario import LocalMeasurement, Scenario, parse_sites

__version__ = "0.1.0"
