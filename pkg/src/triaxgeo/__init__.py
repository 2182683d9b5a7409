"""Direct Cartesian/geodetic conversion on a triaxial ellipsoid."""

from .ellipsoid import (
    SURFACE_TOL,
    CartesianPoint,
    GeodeticCoord,
    NotOnSurfaceError,
    TriaxialEllipsoid,
    ellipsoid_residual,
    footpoint_to_geodetic_angles,
    geodetic_to_cartesian,
)
from .transform import (
    FootpointResult,
    OriginError,
    cartesian_to_geodetic,
    cartesian_to_geodetic_I,
    cartesian_to_geodetic_II,
    invert,
)

__version__ = "0.1.0"

__all__ = [
    "SURFACE_TOL",
    "CartesianPoint",
    "FootpointResult",
    "GeodeticCoord",
    "NotOnSurfaceError",
    "OriginError",
    "TriaxialEllipsoid",
    "cartesian_to_geodetic",
    "cartesian_to_geodetic_I",
    "cartesian_to_geodetic_II",
    "ellipsoid_residual",
    "footpoint_to_geodetic_angles",
    "geodetic_to_cartesian",
    "invert",
]
