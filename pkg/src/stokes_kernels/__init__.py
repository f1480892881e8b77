"""Half-space Stokes Poisson kernels with Navier slip boundary condition.

Pointwise kernel evaluation, quadrature engines, Littlewood-Paley/Besov
machinery, field construction from boundary data, the 1D shear-flow
reduction, and a configuration-driven experiment CLI.
"""

from .backend import BACKEND, USE_NUMBA, set_threads
from .heat import (
    DomainError,
    MultiIndexDeriv,
    SpaceTimePoint,
    heat_kernel,
    heat_kernel_deriv,
)
from .elliptic import SingularityError, fundamental_solution
from .timetail import heat_time_tail

__all__ = [
    "BACKEND",
    "USE_NUMBA",
    "set_threads",
    "DomainError",
    "SingularityError",
    "MultiIndexDeriv",
    "SpaceTimePoint",
    "heat_kernel",
    "heat_kernel_deriv",
    "fundamental_solution",
    "heat_time_tail",
]

__version__ = "0.1.0"
