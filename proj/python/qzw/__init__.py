"""q-zw-measures on the double q-lattice.

Lattice points are strings: "+3" is zeta_plus q^3, "-0" is zeta_minus.
"""

from ._core import (
    BoundaryKernel,
    Ensemble,
    Error,
    F,
    Lattice,
    Params,
    h,
    link_row,
    reference_params,
    run_acceptance,
)

__all__ = [
    "BoundaryKernel",
    "Ensemble",
    "Error",
    "F",
    "Lattice",
    "Params",
    "h",
    "link_row",
    "reference_params",
    "run_acceptance",
]
