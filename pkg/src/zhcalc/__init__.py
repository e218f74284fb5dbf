"""zhcalc: an exact, ring-generic rewriting engine for the ZH-calculus.

Diagrams built from Z-spiders, labelled H-boxes, grey spiders and the
star scalar are evaluated to exact matrices over dyadic rationals,
integers, Z[1/sqrt(2)] or odd-prime modular rings; a catalogue of
soundness-checked rewrite rules supports matching and rewriting, and
diagram equality is decided through unique reduced normal forms.
"""

from . import circuits, diagram, document, normalform, render, ring, rules, semantics

__all__ = [
    "circuits",
    "diagram",
    "document",
    "normalform",
    "render",
    "ring",
    "rules",
    "semantics",
]

__version__ = "0.1.0"
