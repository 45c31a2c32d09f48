"""Exact computations for Deligne-Mostow ball quotients.

Cyclotomic arithmetic, intersection forms on twisted homology, braid
monodromy, INT classification, pull-back covers, pseudo-discriminants and
Hermitian lattices over the Gaussian and Eisenstein integers.
"""

from .cyclotomic import CycloNumber, root_of_unity
from .errors import ConditionFailed, DMError, HypothesisError, InconsistencyError, InvalidInput
from .intersection import intersection_matrix, normalized_hermitian, signature, signature_report
from .mulist import MuList, parse_mu

__version__ = "0.1.0"

__all__ = [
    "CycloNumber",
    "root_of_unity",
    "DMError",
    "InvalidInput",
    "ConditionFailed",
    "HypothesisError",
    "InconsistencyError",
    "MuList",
    "parse_mu",
    "intersection_matrix",
    "normalized_hermitian",
    "signature",
    "signature_report",
]
