"""Diameters of endomorphism monoids of chains: chain terms, finite monoids,
shiftability rules with executable witnesses, and a diameter classifier."""
from .chains import normalize, attributes, compare, enumerate_element, min_element, max_element
from .dsl import parse_chain, format_chain, parse_element, format_element

__version__ = "0.1.0"

__all__ = [
    "normalize",
    "attributes",
    "compare",
    "enumerate_element",
    "min_element",
    "max_element",
    "parse_chain",
    "format_chain",
    "parse_element",
    "format_element",
]
