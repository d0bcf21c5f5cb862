"""Degree-two determinants over finite chain rings, ordinarity certificates and weight-one Hecke algebras."""

from .chainring import AlgebraElement, AlgebraHom, ChainAlgebra, HowellForm, howell_form
from .determinant import DeterminantPair, from_matrix_rep, kernel_test, unramified_test, validate_axioms
from .errors import PseudodetError
from .groupring import GroupModel
from .ordinary import OrdinaryWitness, check_ordinary, prop_key_certify
from .qexp import QExpansion

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "AlgebraHom",
    "ChainAlgebra",
    "DeterminantPair",
    "GroupModel",
    "HowellForm",
    "OrdinaryWitness",
    "PseudodetError",
    "QExpansion",
    "check_ordinary",
    "from_matrix_rep",
    "howell_form",
    "kernel_test",
    "prop_key_certify",
    "unramified_test",
    "validate_axioms",
]
