"""Finite-field computations for the ring of reciprocals of linear forms and
its compactifications."""

from .gfq import FieldDesc, FqElem, embed, frobenius, gf

__all__ = ["FieldDesc", "FqElem", "embed", "frobenius", "gf"]
__version__ = "0.1.0"
