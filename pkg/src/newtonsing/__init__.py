"""Newton polygons, ADE normal forms and oscillatory-integral decay for two-variable phases."""
from .errors import NewtonSingError
from .homog import FactoredForm, HeightData, factor_homogeneous, is_adapted
from .newton import NewtonData, Weight, newton_polyhedron, principal_part
from .normalform import (SingularityReport, a2_normal_form, adapted_shear, classify,
                         region_membership, region_params)
from .poly import Jet, Polynomial, real_root_multiplicities, root_jet, taylor_divide

__version__ = "0.1.0"

__all__ = [
    "NewtonSingError", "FactoredForm", "HeightData", "factor_homogeneous", "is_adapted",
    "NewtonData", "Weight", "newton_polyhedron", "principal_part", "SingularityReport",
    "a2_normal_form", "adapted_shear", "classify", "region_membership", "region_params",
    "Jet", "Polynomial", "real_root_multiplicities", "root_jet", "taylor_divide",
]
