"""Stabilizer-code simulation, decoding and fault-tolerance analysis."""
from . import codes, decode, densesim, ftsim, gf2, harness, noise, pauli, tableau
from .codes import CodeSpec, SubsystemCodeSpec, SurfaceLattice, builtin
from .pauli import PauliTerm, parse
from .tableau import StabilizerTableau

__version__ = "0.1.0"

__all__ = [
    "CodeSpec", "PauliTerm", "StabilizerTableau", "SubsystemCodeSpec", "SurfaceLattice", "builtin", "codes",
    "decode", "densesim", "ftsim", "gf2", "harness", "noise", "parse", "pauli", "tableau",
]
