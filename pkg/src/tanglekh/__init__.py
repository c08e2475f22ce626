"""Khovanov homology of tangle diagrams and persistent Khovanov homology
over filtrations built from closures, cobordism generators, and clipped
3-D curves."""

from .algebra import GF2, QQ, LaurentPolynomial, PrimeField, field_from_name
from .complex import (BigradedHomology, GradedChainComplex, build_complex,
                      homology, verify_d_squared, verify_phi_homogeneous)
from .diagram import (Crossing, PlanarTangleSpec, TangleDiagram, apply_planar,
                      check_planar, resolve, validate)
from .invariants import (betti_polynomial, jones_from_homology, state_sum)
from .persistence import (ChainMap, ClosureMorphismSpec, Filtration,
                          MorphismError, build_psi, cap_map, cup_map,
                          saddle_map, verify_chain_map)

__all__ = [
    "GF2", "QQ", "LaurentPolynomial", "PrimeField", "field_from_name",
    "BigradedHomology", "GradedChainComplex", "build_complex", "homology",
    "verify_d_squared", "verify_phi_homogeneous",
    "Crossing", "PlanarTangleSpec", "TangleDiagram", "apply_planar",
    "check_planar", "resolve", "validate",
    "betti_polynomial", "jones_from_homology", "state_sum",
    "ChainMap", "ClosureMorphismSpec", "Filtration", "MorphismError",
    "build_psi", "cap_map", "cup_map", "saddle_map", "verify_chain_map",
]

__version__ = "0.1.0"
