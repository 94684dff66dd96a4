"""Verification library for the group-foliation analysis of the heavenly
equation u_{z zbar} = kappa (e^u)_{tt}: truncated-Taylor jet arithmetic,
closed-form solution families, differential invariants and their operator
algebra, the resolving system, symmetry generators, and the invariance
classification of the two-logarithm solution family."""

__version__ = "0.1.0"

from .errors import HeavenlyError
from .expr import Expr, parse, pretty
from .fields import Point, SolutionField, conformal_pushforward, make_solution
from .invariants import (InvariantSet, commutator_residual, invariants_at,
                         liouville_residual, pde_residual)
from .jet import Jet
from .classify import (TheoremCase, classify_b, theorem_case, verify_case)
from .resolving import (ResolvingPoint, ansatz_functions, jacobi_residual,
                        resolving_residuals)
from .symmetry import (GeneratorSpec, conf_inv_witness, invariance_residual,
                       x2_apply)

__all__ = [
    "__version__", "HeavenlyError", "Expr", "parse", "pretty", "Point",
    "SolutionField", "conformal_pushforward", "make_solution", "InvariantSet",
    "commutator_residual", "invariants_at", "liouville_residual",
    "pde_residual", "Jet", "TheoremCase", "classify_b", "theorem_case",
    "verify_case", "ResolvingPoint", "ansatz_functions", "jacobi_residual",
    "resolving_residuals", "GeneratorSpec", "conf_inv_witness",
    "invariance_residual", "x2_apply",
]
