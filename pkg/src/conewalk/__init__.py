"""Exact lattice and cone computations for nef cones of surfaces."""

__version__ = "0.1.0"

from .lattice import (
    LatticeError,
    LatticeSpace,
    Signature,
    determinant,
    inner_product,
    is_even,
    orthogonal_complement,
    reflect_in_root,
    signature,
)
from .enumeration import ClassQuery, MarkedLattice, RootSet, classes_of_norm, root_set, short_vectors_definite
from .cones import (
    ChamberWalkResult,
    RationalCone,
    chamber_walk,
    dual_cone,
    extremal_rays,
    in_positive_cone,
    is_nef_against,
)
from .isometry import (
    IsometryKind,
    LatticeIsometry,
    classify,
    make_isometry,
    order,
    parabolic_fixed_ray,
    preserves_positive_cone,
)
from .surfaces import (
    FibrationData,
    NonArithReport,
    SurfaceModel,
    blowup_plane,
    check_nonarithmetic,
    example_registry,
    mordell_weil_rank,
    verify_anticanonical_decomposition,
)
