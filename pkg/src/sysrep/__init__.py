"""Exact analysis of discrete-time linear systems as representations of time groups."""

__version__ = "0.1.0"

from .errors import GuardError, MathPreconditionError, SysrepError  # noqa: E402
from .fields import QQ, ExtensionField, PrimeField, RationalField  # noqa: E402
from .matrix import Matrix, characteristic_polynomial, minimal_polynomial, smith_normal_form  # noqa: E402
from .poly import Poly, factor, is_irreducible, order_of_x_mod  # noqa: E402
from .representation import Representation, TimeGroup, check_homomorphism  # noqa: E402
from .decomposition import planar_blocks, primary_decomposition  # noqa: E402
from .module_structure import invariant_factors  # noqa: E402
from .dynamics import orbit_census_analytic, orbit_census_enumerate, order_of_matrix  # noqa: E402

__all__ = [
    "__version__",
    "SysrepError", "GuardError", "MathPreconditionError",
    "PrimeField", "ExtensionField", "RationalField", "QQ",
    "Poly", "factor", "is_irreducible", "order_of_x_mod",
    "Matrix", "minimal_polynomial", "characteristic_polynomial", "smith_normal_form",
    "TimeGroup", "Representation", "check_homomorphism",
    "primary_decomposition", "planar_blocks", "invariant_factors",
    "order_of_matrix", "orbit_census_analytic", "orbit_census_enumerate",
]
