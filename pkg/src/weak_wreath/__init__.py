"""
weak-wreath: exact arithmetic for weak distributive laws.

This package checks demimonads, weak bialgebras and weak distributive laws
over the rationals or a prime field, builds iterated weak wreath products
of compatible families of laws, and computes the observable algebras of
spin chains built from a weak bialgebra and its dual.
"""

__version__ = "1.0.0"
__all__ = [
    "Field",
    "LinMap",
    "Space",
    "WeakBialgebra",
    "WeakDistributiveLaw",
    "WdlNObject",
    "SpinChainSpec",
    "load_config",
    "setup_logging",
]

from weak_wreath.config import load_config
from weak_wreath.exactlinalg import Field
from weak_wreath.finvect import LinMap, Space
from weak_wreath.logger import setup_logging
from weak_wreath.spinchain import SpinChainSpec
from weak_wreath.wdl import WeakDistributiveLaw
from weak_wreath.wdln import WdlNObject
from weak_wreath.weakbialgebra import WeakBialgebra
