from solvers.beam import solve_beam
from solvers.cache import cached_reference, solve_reference
from solvers.request import GridRequest
from solvers.spectral import allen_cahn_energy, schrodinger_mass, solve_allen_cahn, solve_burgers, solve_schrodinger

__all__ = [
    "GridRequest",
    "allen_cahn_energy",
    "cached_reference",
    "schrodinger_mass",
    "solve_allen_cahn",
    "solve_beam",
    "solve_burgers",
    "solve_reference",
    "solve_schrodinger",
]
