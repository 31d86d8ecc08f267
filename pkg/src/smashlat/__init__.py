"""Finite smash lattices: operators, classification, lemma checks, search."""
from .order import Lattice, build_lattice, join_of, meet_of
from .quantale import Model, build_model, smash_of, validate_axioms
from .ops import (
    classify_model, curlyvee_op, membership_ba, membership_cba, membership_dl,
    pc, ra_op, retract, structural_flags,
)

__version__ = "0.1.0"
