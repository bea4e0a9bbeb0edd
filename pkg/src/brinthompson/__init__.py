"""Exact computations in generalized Brin-Thompson groups V_{k_1,...,k_m}.

Tables, clopen algebra and regular supports, bounded algebraic
disjointness, coordinatewise embeddings with their projection anchor maps,
and finite-depth anchor limits.
"""

from .clopen import Clopen, is_partition, parse_clopen
from .embeddings import EmbeddingSpec, anchor_preimage, check_anchor, iota, push_forward
from .tables import (
    Element,
    Table,
    apply,
    commutator,
    commutes,
    compose,
    conjugate,
    image_clopen,
    invert,
    is_identity,
    localize,
    power,
    random_element,
    rsupp,
    validate,
)
from .words import RationalPoint, Signature, parse_point, parse_tuple, parse_word

__version__ = "0.1.0"
