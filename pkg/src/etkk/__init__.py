"""Exact K-theory, KK-groups and stable homotopy for one-dimensional NCCW complexes."""

__version__ = "0.1.0"

from .algebra import AlgebraPresentation, InvalidPresentation, k_theory, k0_positive, validate
from .diagram import (
    DiagramPair,
    KKClass,
    KKPresentation,
    check_diagram,
    diagram_group,
    kk_class,
    m_membership,
)
from .hom import (
    Cell,
    HomBlock,
    InvalidHom,
    MStandardHom,
    NotRealizable,
    StandardHom,
    direct_sum,
    induced_diagram,
    minimal_padding,
    point_evaluation_stabilizer,
    realize_diagram,
    validate_mstandard,
    validate_standard,
)
from .homotopy import (
    Decision,
    HomotopyCertificate,
    decide_stable_homotopy,
    property_h_witness,
    reduce_to_1_standard,
    verify_certificate,
)
from .paths import PLCell, PLHom, PLPath, classify, normalize
from .zlinalg import AbelianGroupPresentation, IntMatrix, SnfDecomposition, snf
