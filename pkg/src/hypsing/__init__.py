"""Isolated singularities of conformal hyperbolic metrics.

Modules:

* ``mobius``: Mobius maps and their classification in the disk and half-plane;
* ``series``: truncated power series with a fractional leading exponent;
* ``schwarzian``: Schwarzian data and the associated second-order operator;
* ``frobenius``: series solutions at a regular singular point;
* ``metric``: model densities, curvature and distances;
* ``normalform``: singularity classification and normal coordinates.
"""

from .germ import DevelopingGerm, Log, Power
from .metric import Conical, Cusp, Divisor, gauss_bonnet_admissible, radial_distance
from .mobius import Kind, MobiusMap, Model, classify
from .normalform import (
    Inconsistency,
    NormalForm,
    Reason,
    analyze_schwarzian,
    classify_singularity,
    escape_witness,
    normal_coordinate,
    rotation_class,
    verify_normal_form,
)
from .schwarzian import SingularityData
from .series import TruncSeries

__all__ = [
    "Conical",
    "Cusp",
    "DevelopingGerm",
    "Divisor",
    "Inconsistency",
    "Kind",
    "Log",
    "MobiusMap",
    "Model",
    "NormalForm",
    "Power",
    "Reason",
    "SingularityData",
    "TruncSeries",
    "analyze_schwarzian",
    "classify",
    "classify_singularity",
    "escape_witness",
    "gauss_bonnet_admissible",
    "normal_coordinate",
    "radial_distance",
    "rotation_class",
    "verify_normal_form",
]
