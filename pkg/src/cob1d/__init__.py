"""Exact computations for dotted 1-dimensional cobordisms with linear evaluation."""

from .category import (HomBasis, Morphism, bend, compose, glue, hom_basis, reduce,
                       unbend)
from .diagrams import (Cobordism, Component, Kind, NDiagram, OrbitSignature,
                       canonical_decode, canonical_encode, diagram_order, dual_diagram,
                       enumerate_diagrams, enumerate_orbits, orbit_cardinality, reflect,
                       signature)
from .errors import ConsistencyError, ResourceLimitError
from .evaluation import (ClosedDiagram, EvaluationSpec, LinearParams, evaluate_closed,
                         symbolic_linear_spec)
from .gram import (GramReport, build_gram, gram_det, pairing, state_space_rank,
                   twisted_pairing, verify_structure)
from .polyring import (Matrix, ModP, PolyZ4, det_fraction_free, det_modular,
                       permutation_sign, rank)

__version__ = "0.1.0"
