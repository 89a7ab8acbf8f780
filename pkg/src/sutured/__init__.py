"""Suture elements of sutured TQFT on discs, annuli and once-punctured tori."""

from .chord import ChordDiagram, basis_diagram, enumerate_diagrams, solve_table, suture_element
from .fock import FockElement, LaxElement

__version__ = "0.1.0"

__all__ = [
    "ChordDiagram",
    "FockElement",
    "LaxElement",
    "basis_diagram",
    "enumerate_diagrams",
    "solve_table",
    "suture_element",
]
