"""Exact symbolic computation with birational self-maps of projective space."""

from .fields import QQ, Cyclotomic, FieldElem, PrimeField, parse_field
from .poly import HomPoly
from .parse import parse_poly
from .ratmap import LinearMap, RatMap, compose, parse_map
from .words import Alphabet, GroupWord, evaluate, parse_word
from .constructions import REGISTRY, build, sigma, verify_identity, verify_suite
from .pan import PanSpec, birationality_criterion, blowdown_build, generic_fiber_size
from .freeness import certify_free_product, certify_free_subgroup

__version__ = "0.1.0"

__all__ = [
    "QQ", "Cyclotomic", "FieldElem", "PrimeField", "parse_field", "HomPoly", "parse_poly",
    "LinearMap", "RatMap", "compose", "parse_map", "Alphabet", "GroupWord", "evaluate",
    "parse_word", "REGISTRY", "build", "sigma", "verify_identity", "verify_suite", "PanSpec",
    "birationality_criterion", "blowdown_build", "generic_fiber_size", "certify_free_product",
    "certify_free_subgroup",
]
