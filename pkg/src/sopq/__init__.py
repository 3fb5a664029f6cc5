"""Indefinite orthogonal groups SO(p,q), quasi-spheres and pi_1(SO+(p,q))."""

from .fg_abelian import FgAbelianGroup
from .homotopy_engine import pi1_so, pi1_so_plus
from .indefinite_group import GroupElement, Signature, is_member

__all__ = ["FgAbelianGroup", "GroupElement", "Signature", "is_member", "pi1_so", "pi1_so_plus"]
__version__ = "0.1.0"
