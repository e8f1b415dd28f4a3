"""Nilpotent orbits of sl_n and sp_2n over p-adic fields.

Partition labels, Moy-Prasad lattices on the standard apartment, the matching
between the two, and a bounded evaluator for Denef-Pas formulas.
"""

__version__ = "0.1.0"
