"""Decision procedures, Scott-sentence emitters, and construction
simulators for free groups, the infinite dihedral group, finitely
generated abelian groups, and rank-1 torsion-free abelian groups.

Importing the package registers every family enumeration, so formulas can
be rebuilt from their JSON form with no further setup.
"""

from . import formula, words, dihedral, fgab, rank1, limitsim, acceptance, cli

__all__ = ["formula", "words", "dihedral", "fgab", "rank1", "limitsim",
           "acceptance", "cli"]

__version__ = "0.1.0"
