"""Twisted group rings over finite rings, their module theory, and Mackey functors."""

from __future__ import annotations

from .algebra import AlgebraHom, StructureAlgebra, primitive_central_idempotents
from .burnside import GSet, burnside_hom_basis, burnside_product, cosets, orbit_decompose
from .fields import FiniteField
from .groups import (
    FiniteGroup,
    Subgroup,
    build_group,
    cyclic,
    dihedral,
    direct_product,
    double_coset_reps,
    enumerate_subgroups,
    symmetric,
)
from .linalg import rref, rref_solve
from .mackey import (
    AbMap,
    AbValue,
    MackeyData,
    burnside_mackey,
    check_axioms,
    constant_functor,
    dress_kuku_compare,
    endomorphism_mackey,
    k0_twisted_mackey,
    quillen_kn_instance,
    units_galois_mackey,
)
from .modules import AlgebraModule, k0_class, k0_induced_map, mackey_decomposition_witness
from .rings import FiniteRing, IntegersMod, ProductRing, build_ring
from .semilinear import SemilinearModule, from_twisted_module, semilinear_roundtrip, to_twisted_module
from .twisted import GRing, auslander_map, galois_gring, gamma, left_basis_decompose, rho, right_basis, tau_hom

__version__ = "0.1.0"

__all__ = [
    "AbMap",
    "AbValue",
    "AlgebraHom",
    "AlgebraModule",
    "FiniteField",
    "FiniteGroup",
    "FiniteRing",
    "GRing",
    "GSet",
    "IntegersMod",
    "MackeyData",
    "ProductRing",
    "SemilinearModule",
    "StructureAlgebra",
    "Subgroup",
    "annotations",
    "auslander_map",
    "build_group",
    "build_ring",
    "burnside_hom_basis",
    "burnside_mackey",
    "burnside_product",
    "check_axioms",
    "constant_functor",
    "cosets",
    "cyclic",
    "dihedral",
    "direct_product",
    "double_coset_reps",
    "dress_kuku_compare",
    "endomorphism_mackey",
    "enumerate_subgroups",
    "from_twisted_module",
    "galois_gring",
    "gamma",
    "k0_class",
    "k0_induced_map",
    "k0_twisted_mackey",
    "left_basis_decompose",
    "mackey_decomposition_witness",
    "orbit_decompose",
    "primitive_central_idempotents",
    "quillen_kn_instance",
    "rho",
    "right_basis",
    "rref",
    "rref_solve",
    "semilinear_roundtrip",
    "symmetric",
    "tau_hom",
    "to_twisted_module",
    "units_galois_mackey",
]
