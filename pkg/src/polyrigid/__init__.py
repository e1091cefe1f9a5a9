"""Polynomial rigidity groups: exact algebra and finite-stage cocycle simulation."""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .cocycle import (CocycleSystem, FrequencyTable, birkhoff_sum, column_values,
                      coupling_sequence, frequency_table, input_data, input_term, sigma)
from .cyclic import (CyclicProduct, ProductSubgroup, annihilator, enumerate_subgroups,
                     has_star_property, is_coupling, subgroup_closure)
from .errors import (CapacityError, ConsistencyError, DomainError, HypothesisError,
                     InfeasibleError, InputError, PreconditionError, TruncationError,
                     UndefinedColumnError)
from .lattice import (LatticeSubgroup, index, intersect, is_rigidity, member, minimal_period,
                      project_mod, separate)
from .odometer import OdometerPoint, OdometerSpec, build_spec, locate, successor
from .poly import BivariatePolynomial, IntPolynomial, difference_decomposition, evaluate
from .spectral import (CharacterSumResult, LimitVerdict, character, character_sum_exact,
                       character_sum_mc, classify_limit, fs_set, ip_character_trace)

__all__ = [
    "KERNEL_BACKEND",
    "CocycleSystem", "FrequencyTable", "birkhoff_sum", "column_values", "coupling_sequence",
    "frequency_table", "input_data", "input_term", "sigma",
    "CyclicProduct", "ProductSubgroup", "annihilator", "enumerate_subgroups",
    "has_star_property", "is_coupling", "subgroup_closure",
    "CapacityError", "ConsistencyError", "DomainError", "HypothesisError", "InfeasibleError",
    "InputError", "PreconditionError", "TruncationError", "UndefinedColumnError",
    "LatticeSubgroup", "index", "intersect", "is_rigidity", "member", "minimal_period",
    "project_mod", "separate",
    "OdometerPoint", "OdometerSpec", "build_spec", "locate", "successor",
    "BivariatePolynomial", "IntPolynomial", "difference_decomposition", "evaluate",
    "CharacterSumResult", "LimitVerdict", "character", "character_sum_exact",
    "character_sum_mc", "classify_limit", "fs_set", "ip_character_trace",
]
