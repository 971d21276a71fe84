"""Propositional intuitionistic logic with its computability-logic game semantics.

Provability decision procedure, Kripke countermodels, affine proof
machinery, proof-to-strategy extraction, and the countermodel-to-
counterstrategy completeness pipeline.
"""

__version__ = "0.1.0"
