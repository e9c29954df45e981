"""Transmutation kernels connecting pairs of one-dimensional operators.

The package has four layers:

* ``expr`` / ``specfun`` - a small expression DSL with second-order jets
  and the scalar special functions it needs;
* ``operators`` / ``kernels`` - differential operator pairs and the
  catalog of closed-form kernel cases;
* ``conditions`` / ``quadrature`` - the kernel existence checks and the
  weighted Gauss-Jacobi transform machinery;
* ``goursat`` - a characteristic-grid solver producing kernels
  numerically when no closed form is listed, plus grid diagnostics.

``cli`` wires everything into the ``transmute`` command.
"""

__version__ = "0.1.0"

from .errors import (
    AdmissibilityError,
    ConvergenceError,
    DomainError,
    ExpressionError,
    NumericalError,
    ParseError,
    PoleError,
    RangeError,
    SpecFunError,
    TransmuteError,
    UnboundSymbolError,
    UsageError,
)
from .expr import Jet2, evaluate, evaluate_jet, parse, to_string
from .kernels import TransmutationCase, describe, get_case, list_cases
from .conditions import VerifyConfig, VerificationReport, verify_all
from .quadrature import apply_transmutation, identity_error, jacobi_rule
from .goursat import GoursatProblem, problem_from_case, solve

__all__ = [
    "__version__",
    "AdmissibilityError",
    "ConvergenceError",
    "DomainError",
    "ExpressionError",
    "NumericalError",
    "ParseError",
    "PoleError",
    "RangeError",
    "SpecFunError",
    "TransmuteError",
    "UnboundSymbolError",
    "UsageError",
    "Jet2",
    "evaluate",
    "evaluate_jet",
    "parse",
    "to_string",
    "TransmutationCase",
    "describe",
    "get_case",
    "list_cases",
    "VerifyConfig",
    "VerificationReport",
    "verify_all",
    "apply_transmutation",
    "identity_error",
    "jacobi_rule",
    "GoursatProblem",
    "problem_from_case",
    "solve",
]
