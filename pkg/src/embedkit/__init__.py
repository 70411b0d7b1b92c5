"""Prime-to-p embedding problems over Z/p^a covers, reduced to module arithmetic."""

from .cyclotomic import cyclo_factorization, factor_cyclotomic, hensel_lift
from .gmodule import GModule, Submodule, decompose, graded_dims, is_type_t1
from .oracle import count_isomorphic, enumerate_g_submodules
from .pm_builder import PuncturedCoverSpec, artin_schreier_example, build_pm_genus0, pm_inclusion
from .solvability import (
    count_nsext, invariants_of, solvable_field, solvable_prime_power, solvable_squarefree,
)

__version__ = "0.1.0"
