"""Node geometry: positions, pointing angles, and link distances.

The reflecting surface hangs horizontally below the UAV and faces the
ground, so every served node must lie below it.  Pointing towards a node
is described by the per-axis direction angles (theta_x, theta_y) measured
in the x-z and y-z planes, from which the elevation and azimuth follow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError

__all__ = [
    "Position3D",
    "LinkAngles",
    "SystemGeometry",
    "nominal_angles",
    "fluctuated_angles",
    "link_distances",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Position3D:
    """Cartesian position in meters; z is altitude above ground."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for v in (self.x, self.y, self.z):
            if not math.isfinite(v):
                raise GeometryError(f"position coordinates must be finite, got {self!r}")
        if self.z < 0:
            raise GeometryError(f"altitude must be non-negative, got {self.z}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class LinkAngles:
    """Nominal pointing angles from the surface towards one node.

    theta_x / theta_y are the per-axis direction angles, theta the
    elevation off boresight and phi the azimuth in [0, 2*pi).  ``side``
    is 't' for the feeder (transmit) link and 'r' for the served node.
    """

    theta_x: float
    theta_y: float
    theta: float
    phi: float
    side: str

    def __post_init__(self):
        if self.side not in ("t", "r"):
            raise GeometryError(f"side must be 't' or 'r', got {self.side!r}")


def nominal_angles(irs: Position3D, target: Position3D, side: str) -> LinkAngles:
    """Pointing angles from the surface towards a node below it.

    The azimuth is resolved with the two-argument arctangent of the axis
    tangents, so nodes in any horizontal quadrant get the correct angle.
    A node exactly at boresight gets phi = 0 by convention.
    """
    drop = irs.z - target.z
    if drop <= 0:
        raise GeometryError(
            f"target must lie below the surface (drop={drop} m); it faces downwards"
        )
    theta_x = math.atan2(target.x - irs.x, drop)
    theta_y = math.atan2(target.y - irs.y, drop)
    tx, ty = math.tan(theta_x), math.tan(theta_y)
    theta = math.atan(math.hypot(tx, ty))
    phi = math.atan2(ty, tx) % _TWO_PI if (tx, ty) != (0.0, 0.0) else 0.0
    return LinkAngles(theta_x, theta_y, theta, phi, side)


def fluctuated_angles(nominal: LinkAngles, eps_x, eps_y):
    """Exact elevation/azimuth under per-axis angular offsets.

    Evaluates the exact (non-linearized) composition of the tilted axis
    angles; this is the reference path used by the Monte Carlo oracle.
    Accepts scalar or array offsets and returns matching shapes.

    Returns
    -------
    (theta_tilde, phi_tilde) with phi_tilde in [0, 2*pi).
    """
    ex = np.asarray(eps_x, dtype=float)
    ey = np.asarray(eps_y, dtype=float)
    ax = nominal.theta_x + ex
    ay = nominal.theta_y + ey
    if np.any(np.abs(ax) >= math.pi / 2) or np.any(np.abs(ay) >= math.pi / 2):
        raise DomainError("tilted axis angle reached the tangent pole at pi/2")
    tx, ty = np.tan(ax), np.tan(ay)
    theta = np.arctan(np.hypot(tx, ty))
    phi = np.mod(np.arctan2(ty, tx), _TWO_PI)
    if np.isscalar(eps_x) and np.isscalar(eps_y):
        return float(theta), float(phi)
    return theta, phi


def link_distances(bs: Position3D, irs: Position3D, ue: Position3D):
    """Euclidean distances surface<->feeder and surface<->served node."""
    d0 = float(np.linalg.norm(irs.as_array() - bs.as_array()))
    d1 = float(np.linalg.norm(irs.as_array() - ue.as_array()))
    if d0 == 0.0 or d1 == 0.0:
        raise GeometryError("nodes must not coincide with the surface")
    return d0, d1


@dataclass(frozen=True)
class SystemGeometry:
    """Positions of the three nodes plus derived angles and distances."""

    bs: Position3D
    irs: Position3D
    ue: Position3D
    t_angles: LinkAngles
    r_angles: LinkAngles
    d0: float
    d1: float

    @classmethod
    def from_positions(cls, bs: Position3D, irs: Position3D, ue: Position3D) -> "SystemGeometry":
        d0, d1 = link_distances(bs, irs, ue)
        return cls(
            bs=bs,
            irs=irs,
            ue=ue,
            t_angles=nominal_angles(irs, bs, "t"),
            r_angles=nominal_angles(irs, ue, "r"),
            d0=d0,
            d1=d1,
        )
