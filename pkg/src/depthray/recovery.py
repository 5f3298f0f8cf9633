"""Recover the 3D position of a submerged target from one aerial view.

The altitude of the camera above the water and the target's pressure
depth together fix a horizontal plane in the camera-centered ENU frame.
Casting the (undistorted) pixel ray onto that plane resolves the scale
ambiguity of the single view; the hit is then expressed in the
vehicle-body ENU frame and, downstream, in geodetic coordinates.

Frames:
    {G}  ENU with origin at the camera optical center, z up.
    {C}  camera frame, x right, y down, z along the optical axis.
    {D}  ENU fixed to the UAV body (same axes as {G}, origin at the body).
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .camera import (
    CameraIntrinsics,
    DistortionCoeffs,
    PixelCoord,
    pixel_to_normalized,
    undistort,
)
from .errors import DegenerateGeometry, IllConditionedRay, ParallelRay
from .geodesy import GeodeticCoord
from .geometry import (
    CAM_FROM_FORWARD,
    EulerAngles,
    Plane,
    Ray,
    intersect_ray_plane,
    yaw_pitch_roll_matrix,
)

# Rays meeting the depth plane shallower than this (normalized inner
# product) produce fixes too noisy to aggregate.
CONDITIONING_MIN = 1e-3

GIMBAL_FRAMES = ("world", "body")


class CameraFramePoint(NamedTuple):
    """Position in {C}, meters; z > 0 for valid recoveries."""

    x: float
    y: float
    z: float


class EnuPoint(NamedTuple):
    """Position in a local ENU frame, meters."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class RigConfig:
    """Mounting geometry and telemetry conventions of the camera rig.

    cam_offset is the camera position in the UAV body frame with z up,
    so a camera hanging 0.2 m below the body is (0, 0, -0.2).
    gimbal_frame selects whether gimbal angles are reported against the
    world ENU frame or against the body; gimbal_pitch_sign absorbs
    vendors that report nadir as +90 instead of -90 degrees.
    """

    cam_offset: np.ndarray = field(default_factory=lambda: np.zeros(3))
    gimbal_pitch_sign: int = 1
    gimbal_frame: str = "world"

    def __post_init__(self):
        offset = np.asarray(self.cam_offset, dtype=float)
        if offset.shape != (3,):
            raise ValueError("cam_offset must be a 3-vector")
        if not np.linalg.norm(offset) < 10.0:
            raise ValueError("cam_offset exceeds the 10 m sanity bound")
        if self.gimbal_pitch_sign not in (1, -1):
            raise ValueError("gimbal_pitch_sign must be +1 or -1")
        if self.gimbal_frame not in GIMBAL_FRAMES:
            raise ValueError(f"gimbal_frame must be one of {GIMBAL_FRAMES}")
        object.__setattr__(self, "cam_offset", offset)


@dataclass(frozen=True)
class Observation:
    """One time-synced measurement bundle feeding a single recovery."""

    t: float
    px: PixelCoord
    a_uav: float  # altitude above the water surface, m, positive up
    d_uuv: float  # depth below the surface, m, positive down
    gimbal: EulerAngles
    body: EulerAngles
    ref_geo: GeodeticCoord

    def __post_init__(self):
        if not (math.isfinite(self.a_uav) and self.a_uav > 0):
            raise ValueError(f"altitude must be positive, got {self.a_uav}")
        if not (math.isfinite(self.d_uuv) and self.d_uuv >= 0):
            raise ValueError(f"depth must be non-negative, got {self.d_uuv}")


def camera_rotation(gimbal: EulerAngles, body: EulerAngles, rig: RigConfig) -> np.ndarray:
    """Full world-to-camera rotation for one observation.

    With world-referenced gimbal angles this is the plain gimbal chain;
    with body-referenced angles the body attitude is composed first.
    """
    g = gimbal.with_pitch_sign(rig.gimbal_pitch_sign)
    r_world_fwd = yaw_pitch_roll_matrix(g)
    if rig.gimbal_frame == "body":
        r_world_fwd = yaw_pitch_roll_matrix(body) @ r_world_fwd
    return CAM_FROM_FORWARD @ r_world_fwd.T


def build_plane(a_uav: float, d_uuv: float, rig: RigConfig) -> Plane:
    """Horizontal plane at the target depth in {G}.

    The camera sits a_uav + cam_offset_z above the surface and the
    target d_uuv below it, so the plane passes through
    (0, 0, -(a_uav + cam_offset_z + d_uuv)) with normal (0, 0, 1).

    Raises:
        DegenerateGeometry: camera at or below the target plane.
    """
    a_cam = a_uav + float(rig.cam_offset[2])
    depth_below_camera = a_cam + d_uuv
    if not depth_below_camera > 0:
        raise DegenerateGeometry(
            f"camera {a_cam:.3f} m above surface, target depth {d_uuv:.3f} m: "
            "no plane below the camera"
        )
    return Plane(point=np.array([0.0, 0.0, -depth_below_camera]), normal=np.array([0.0, 0.0, 1.0]))


def recover_camera_frame(
    obs: Observation,
    intr: CameraIntrinsics,
    dist: DistortionCoeffs,
    rig: RigConfig,
) -> tuple[CameraFramePoint, float]:
    """Recover the target position in the camera frame.

    The pixel is undistorted into a unit-plane ray (x, y, 1), the depth
    plane is rotated into {C}, and the ray-plane intersection gives the
    3D point and its scale d.

    Raises:
        ParallelRay, IllConditionedRay, BehindCamera, NonConvergence,
        DegenerateGeometry: per-sample geometric failures; callers
        running batches flag the sample and continue.
    """
    n = undistort(pixel_to_normalized(obs.px, intr), dist)
    direction = np.array([n.x, n.y, 1.0])
    plane_g = build_plane(obs.a_uav, obs.d_uuv, rig)
    r_cam_world = camera_rotation(obs.gimbal, obs.body, rig)
    plane_c = Plane(point=r_cam_world @ plane_g.point, normal=r_cam_world @ plane_g.normal)

    conditioning = abs(float(np.dot(direction, plane_c.normal))) / float(
        np.linalg.norm(direction)
    )
    if conditioning <= 1e-12:
        raise ParallelRay("pixel ray parallel to the depth plane")
    if conditioning < CONDITIONING_MIN:
        raise IllConditionedRay(
            f"ray grazes the depth plane (|l.n| = {conditioning:.2e})"
        )
    point, d = intersect_ray_plane(
        Ray(origin=np.zeros(3), direction=direction), plane_c
    )
    return CameraFramePoint(*map(float, point)), d


def camera_to_uav_enu(p_c, obs: Observation, rig: RigConfig) -> EnuPoint:
    """Express a camera-frame point in the body-fixed ENU frame {D}.

    The camera offset is rotated by the body attitude and added after
    rotating the point back out of the camera frame.
    """
    r_cam_world = camera_rotation(obs.gimbal, obs.body, rig)
    offset_d = yaw_pitch_roll_matrix(obs.body) @ rig.cam_offset
    p = r_cam_world.T @ np.asarray(p_c, dtype=float) + offset_d
    return EnuPoint(*map(float, p))


def recover_uav_enu(
    obs: Observation,
    intr: CameraIntrinsics,
    dist: DistortionCoeffs,
    rig: RigConfig,
) -> tuple[CameraFramePoint, EnuPoint, float]:
    """Run the camera-frame recovery and the ENU transform in one call."""
    p_c, d = recover_camera_frame(obs, intr, dist, rig)
    return p_c, camera_to_uav_enu(p_c, obs, rig), d
