"""Desk-scale toolkit for tensor-triangular geometry computations.

Layers, bottom up: exact fields and matrices, polynomial rings and
Groebner bases, presented modules, closed sets and finite site spaces,
finite group representations, equivariant modules over linear group
actions, split supercommutative modules, and support-data / spectrum
combinatorics, with a scenario-driven command line on top.
"""

__version__ = "0.1.0"
