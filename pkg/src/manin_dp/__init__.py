"""Exact lattice, cone and counting computations for del Pezzo surfaces and fibrations."""

from manin_dp.lattice import ClassVector, Model, PicardLattice, anticanonical_degree, pairing, self_intersection

__version__ = "0.1.0"

__all__ = [
    "ClassVector",
    "Model",
    "PicardLattice",
    "anticanonical_degree",
    "pairing",
    "self_intersection",
]
