"""Exact symbolic verification of quantum deformations of so(2,2).

Truncated power series in ``tau`` with rational coefficients, PBW normal
ordering, Hopf-algebra checks, differential-difference realizations, and
Inonu-Wigner contractions.
"""

from .builtins import BUILTIN_NAMES, builtin, so22, uiso21, usl2, uso22, uso22_swapped
from .contraction import CLASSICAL_LIMIT_MAP, IDENTITY_MAP, POINCARE_MAP, ContractionMap, check_cybe, contract_full
from .hopf import HopfSpec, TensorElement, coproduct, derive_antipode, hopf_suite, rmatrix
from .ncalgebra import AlgebraElement, AlgebraSpec, check_jacobi, commutator, multiply, normal_order
from .realization import PhaseSpaceOperator, PolynomialFunction, apply, casimir
from .report import CheckItem, Report
from .scalars import DEFAULT_ORDER, ScalarSeries, SeriesError
from .specdsl import ElaborationError, SpecSyntaxError, elaborate, load, parse

__all__ = [
    "AlgebraElement", "AlgebraSpec", "BUILTIN_NAMES", "CLASSICAL_LIMIT_MAP", "CheckItem", "ContractionMap",
    "DEFAULT_ORDER", "ElaborationError", "HopfSpec", "IDENTITY_MAP", "POINCARE_MAP", "PhaseSpaceOperator",
    "PolynomialFunction", "Report", "ScalarSeries", "SeriesError", "SpecSyntaxError", "TensorElement",
    "apply", "builtin", "casimir", "check_cybe", "check_jacobi", "commutator", "contract_full", "coproduct",
    "derive_antipode", "elaborate", "hopf_suite", "load", "multiply", "normal_order", "parse", "rmatrix",
    "so22", "uiso21", "usl2", "uso22", "uso22_swapped",
]
