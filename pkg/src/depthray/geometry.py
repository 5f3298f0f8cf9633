"""3D primitives: passive rotations, the gimbal chain, ray-plane intersection.

All rotation matrices follow the passive convention: R expresses the
coordinates of a fixed point in a rotated frame, so rot_z(pi/2) maps
(1, 0, 0) to (0, -1, 0).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BehindCamera, ParallelRay

PARALLEL_EPS = 1e-12

# Axis permutation from a forward/right/down mount frame into the camera
# frame (x right, y down, z along the optical axis): X->Z, Y->X, Z->Y.
CAM_FROM_FORWARD = np.array(
    [
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
    ]
)


def _wrap_angle(a: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    a = math.remainder(a, math.tau)
    if a <= -math.pi:
        a += math.tau
    return a


def rot_x(angle: float) -> np.ndarray:
    """Passive elementary rotation about the x axis."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]])


def rot_y(angle: float) -> np.ndarray:
    """Passive elementary rotation about the y axis."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    """Passive elementary rotation about the z axis."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class EulerAngles:
    """Yaw-pitch-roll triple in radians, wrapped into (-pi, pi].

    Used both for the camera gimbal and for the vehicle body attitude.
    """

    yaw: float = 0.0
    pitch: float = 0.0
    roll: float = 0.0

    def __post_init__(self):
        for name in ("yaw", "pitch", "roll"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, _wrap_angle(v))

    @classmethod
    def from_degrees(cls, yaw: float, pitch: float, roll: float) -> "EulerAngles":
        return cls(math.radians(yaw), math.radians(pitch), math.radians(roll))

    def with_pitch_sign(self, sign: int) -> "EulerAngles":
        """Flip the pitch convention (vendor telemetry differs on nadir sign)."""
        if sign == 1:
            return self
        return EulerAngles(self.yaw, sign * self.pitch, self.roll)


def yaw_pitch_roll_matrix(angles: EulerAngles) -> np.ndarray:
    """Compose Rz(yaw) Ry(pitch) Rx(roll) from passive elementary rotations.

    Maps coordinates from the rotated frame back to the reference frame;
    the same composition serves gimbal-to-world and body-to-world.
    """
    return rot_z(angles.yaw) @ rot_y(angles.pitch) @ rot_x(angles.roll)


def gimbal_to_camera_rotation(gimbal: EulerAngles) -> np.ndarray:
    """Rotation taking world-ENU coordinates (origin at the optical
    center) into the camera frame (x right, y down, z forward).

    The gimbal angles orient an intermediate forward/right/down frame
    whose x axis is the optical axis; a fixed axis permutation then
    produces the z-forward camera frame. Pitch of -pi/2 points the
    camera at nadir.
    """
    return CAM_FROM_FORWARD @ yaw_pitch_roll_matrix(gimbal).T


@dataclass(frozen=True)
class Ray:
    """Parametric line: points are origin + direction * d."""

    origin: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        origin = np.asarray(self.origin, dtype=float)
        direction = np.asarray(self.direction, dtype=float)
        if origin.shape != (3,) or direction.shape != (3,):
            raise ValueError("ray origin and direction must be 3-vectors")
        if not np.linalg.norm(direction) > 0.0:
            raise ValueError("ray direction must be nonzero")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "direction", direction)


@dataclass(frozen=True)
class Plane:
    """Plane through `point` with unit `normal` (normalized on construction)."""

    point: np.ndarray
    normal: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        point = np.asarray(self.point, dtype=float)
        normal = np.asarray(self.normal, dtype=float)
        if point.shape != (3,) or normal.shape != (3,):
            raise ValueError("plane point and normal must be 3-vectors")
        norm = np.linalg.norm(normal)
        if not norm > 0.0:
            raise ValueError("plane normal must be nonzero")
        if abs(norm - 1.0) > 1e-12:
            normal = normal / norm
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "normal", normal)


def intersect_ray_plane(ray: Ray, plane: Plane) -> tuple[np.ndarray, float]:
    """Intersect a ray with a plane.

    Returns the intersection point and the scalar d along the ray
    direction, from d = (p0 - l0) . n / (l . n).

    Raises:
        ParallelRay: direction and plane are parallel within PARALLEL_EPS
            (measured on the normalized inner product).
        BehindCamera: the intersection lies at d <= 0.
    """
    ln = float(np.dot(ray.direction, plane.normal))
    if abs(ln) / np.linalg.norm(ray.direction) <= PARALLEL_EPS:
        raise ParallelRay("ray direction is parallel to the plane")
    d = float(np.dot(plane.point - ray.origin, plane.normal)) / ln
    if d <= 0.0:
        raise BehindCamera(f"intersection at d={d:.6g} behind the ray origin")
    return ray.origin + ray.direction * d, d
