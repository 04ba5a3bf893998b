"""Exact ratios of critical L-values of Hilbert modular cusp forms over Q(sqrt5) and Q(sqrt13).

The forms are never touched directly: classes in the parabolic second
cohomology of PSL(2, O_F) are represented by the values of a cocycle on two
relation words, the Hecke operator is computed on those values, and the
critical L-value ratios are read off the Hecke eigenvectors.
"""

from .cohomspace import ClassSpace, RatioReport, compute_report, hecke_element
from .exact import QuadElt, quad_field
from .symrep import WeightPair

__all__ = ["ClassSpace", "QuadElt", "RatioReport", "WeightPair", "compute_report",
           "hecke_element", "quad_field"]
