"""Exact Hochschild and cyclic homology, cyclic cocycles and Chern-Connes pairings."""

from cychom.fields import QQ, CyclotomicField, RationalFunctionField, field_from_spec
from cychom.algebra import (Algebra, BasedAlgebra, Element, validate_algebra, validate_trace,
                            validate_derivation, check_invariant_trace)

__version__ = "0.1.0"
