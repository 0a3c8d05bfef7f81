"""Arc index of knots via grid diagrams built from DT codes."""

from .codec import DTCode, diagram_to_dt, parse_catalog, parse_dt, realize
from .diagram import Diagram, R3Site, boost_nonalt
from .invariants import (
    Fingerprint,
    arc_lower_bound,
    arc_upper_bound,
    fingerprint,
    jones,
    kauffman_F,
    kauffman_bracket,
    same_knot_evidence,
)
from .laurent import LaurentPoly1, LaurentPoly2

__all__ = [
    "DTCode",
    "Diagram",
    "Fingerprint",
    "LaurentPoly1",
    "LaurentPoly2",
    "R3Site",
    "arc_lower_bound",
    "arc_upper_bound",
    "boost_nonalt",
    "diagram_to_dt",
    "fingerprint",
    "jones",
    "kauffman_F",
    "kauffman_bracket",
    "parse_catalog",
    "parse_dt",
    "realize",
    "same_knot_evidence",
]

__version__ = "0.1.0"
