"""Forward-model scene generator with known ground truth.

Projects true target trajectories through the exact camera and attitude
chain into pixel observations, optionally perturbed by seeded Gaussian
noise, and emits log rows in the same shapes the batch pipeline ingests.
Replaces field experiments for verification at desk scale.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .camera import (
    CameraIntrinsics,
    DistortionCoeffs,
    NormalizedCoord,
    PixelCoord,
    distort,
    normalized_to_pixel,
)
from .errors import BehindCamera, InfeasibleScene
from .geodesy import GeodeticCoord
from .geometry import EulerAngles
from .recovery import RigConfig, camera_rotation

MIN_CAMERA_Z = 1e-9


@dataclass(frozen=True)
class NoiseSpec:
    """Per-channel zero-mean Gaussian noise, seeded for reproducibility."""

    sigma_px: float = 0.0
    sigma_alt: float = 0.0
    sigma_depth: float = 0.0
    sigma_gimbal: float = 0.0  # radians, applied to each gimbal angle
    seed: int = 0

    def __post_init__(self):
        for name in ("sigma_px", "sigma_alt", "sigma_depth", "sigma_gimbal"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


@dataclass(frozen=True)
class Scenario:
    """True trajectory plus sensor channels for one simulated flight.

    positions are in the camera-centered ENU frame {G}; altitude, depth
    and attitude arrays run parallel to the timestamps.
    """

    t: np.ndarray
    positions: np.ndarray  # (n, 3) in {G}
    a_uav: np.ndarray
    d_uuv: np.ndarray
    gimbal: np.ndarray  # (n, 3) yaw/pitch/roll, radians
    body: np.ndarray  # (n, 3) yaw/pitch/roll, radians
    ref_geo: GeodeticCoord
    intrinsics: CameraIntrinsics
    distortion: DistortionCoeffs = field(default_factory=DistortionCoeffs)
    rig: RigConfig = field(default_factory=RigConfig)
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.ndim != 1 or len(t) == 0:
            raise ValueError("need at least one timestamp")
        if np.any(np.diff(t) <= 0):
            raise ValueError("timestamps must be strictly increasing")
        n = len(t)
        for name, cols in (("positions", 3), ("gimbal", 3), ("body", 3)):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n, cols):
                raise ValueError(f"{name} must have shape ({n}, {cols})")
            object.__setattr__(self, name, arr)
        for name in ("a_uav", "d_uuv"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n,):
                raise ValueError(f"{name} must have shape ({n},)")
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "t", t)

    def __len__(self):
        return len(self.t)


def project_point(
    p_g,
    gimbal: EulerAngles,
    intr: CameraIntrinsics,
    dist: DistortionCoeffs,
    rig: RigConfig,
    body: EulerAngles = EulerAngles(),
) -> PixelCoord:
    """Project a point in {G} through the attitude and lens chain.

    Exact forward composition of the recovery chain: rotate into the
    camera frame, perspective-divide, distort, scale to pixels.

    Raises:
        BehindCamera: camera-frame z at or below zero.
    """
    p_c = camera_rotation(gimbal, body, rig) @ np.asarray(p_g, dtype=float)
    if p_c[2] <= MIN_CAMERA_Z:
        raise BehindCamera(f"camera-frame z = {p_c[2]:.6g}")
    n = NormalizedCoord(float(p_c[0] / p_c[2]), float(p_c[1] / p_c[2]))
    return normalized_to_pixel(distort(n, dist), intr)


def generate_logs(scenario: Scenario):
    """Produce observation rows and exact ground-truth rows.

    Observation rows mirror the batch-pipeline input schema (pixel
    track, altitude, depth, attitudes, reference fix) with noise applied
    per channel; ground-truth rows are the exact {G} positions. The same
    seed always yields the same rows.

    Raises:
        InfeasibleScene: a noiseless projection falls outside the image
            or behind the camera (reported with its sample index).
    """
    rng = np.random.default_rng(scenario.noise.seed)
    noise = scenario.noise
    intr = scenario.intrinsics
    obs_rows = []
    gt_rows = []
    for i in range(len(scenario)):
        gimbal = EulerAngles(*scenario.gimbal[i])
        body = EulerAngles(*scenario.body[i])
        try:
            px = project_point(
                scenario.positions[i], gimbal, intr, scenario.distortion, scenario.rig, body
            )
        except BehindCamera as exc:
            raise InfeasibleScene(str(exc), index=i) from exc
        if not intr.contains(px):
            raise InfeasibleScene(
                f"projects to ({px.u:.1f}, {px.v:.1f}) outside "
                f"{intr.image_width}x{intr.image_height}",
                index=i,
            )
        u, v = px
        if noise.sigma_px > 0:
            u += rng.normal(0.0, noise.sigma_px)
            v += rng.normal(0.0, noise.sigma_px)
        a_uav = float(scenario.a_uav[i])
        if noise.sigma_alt > 0:
            a_uav += rng.normal(0.0, noise.sigma_alt)
        d_uuv = float(scenario.d_uuv[i])
        if noise.sigma_depth > 0:
            d_uuv += rng.normal(0.0, noise.sigma_depth)
        gy, gp, gr = scenario.gimbal[i]
        if noise.sigma_gimbal > 0:
            gy += rng.normal(0.0, noise.sigma_gimbal)
            gp += rng.normal(0.0, noise.sigma_gimbal)
            gr += rng.normal(0.0, noise.sigma_gimbal)
        obs_rows.append(
            {
                "t": float(scenario.t[i]),
                "u": float(u),
                "v": float(v),
                "a_uav": a_uav,
                "d_uuv": d_uuv,
                "gimbal_yaw_deg": math.degrees(gy),
                "gimbal_pitch_deg": math.degrees(gp),
                "gimbal_roll_deg": math.degrees(gr),
                "body_yaw_deg": math.degrees(scenario.body[i][0]),
                "body_pitch_deg": math.degrees(scenario.body[i][1]),
                "body_roll_deg": math.degrees(scenario.body[i][2]),
                "ref_lat_deg": math.degrees(scenario.ref_geo.lat),
                "ref_lon_deg": math.degrees(scenario.ref_geo.lon),
                "ref_alt_m": float(scenario.ref_geo.h),
            }
        )
        gt_rows.append(
            {
                "t": float(scenario.t[i]),
                "x": float(scenario.positions[i][0]),
                "y": float(scenario.positions[i][1]),
                "z": float(scenario.positions[i][2]),
            }
        )
    return obs_rows, gt_rows


def lawnmower_path(n: int, width: float, height: float, legs: int) -> np.ndarray:
    """Serpentine survey path over a width x height area centered on origin."""
    if legs < 1:
        raise ValueError("need at least one leg")
    s = np.linspace(0.0, float(legs), n)
    leg = np.minimum(s.astype(int), legs - 1)
    frac = s - leg
    x = np.where(leg % 2 == 0, frac, 1.0 - frac) * width - width / 2.0
    y = (leg + 0.5) / legs * height - height / 2.0
    return np.column_stack([x, y])


def circle_path(n: int, radius: float) -> np.ndarray:
    """One full circle of the given radius around the origin."""
    ang = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    return np.column_stack([radius * np.cos(ang), radius * np.sin(ang)])


def line_path(n: int, start, end) -> np.ndarray:
    """Straight segment from start to end (2-vectors, meters)."""
    s = np.linspace(0.0, 1.0, n)[:, None]
    return np.asarray(start, dtype=float) + s * (
        np.asarray(end, dtype=float) - np.asarray(start, dtype=float)
    )


def build_scenario(
    path_xy: np.ndarray,
    duration: float,
    altitude: float,
    depth_min: float,
    depth_max: float,
    ref_geo: GeodeticCoord,
    intrinsics: CameraIntrinsics,
    distortion: DistortionCoeffs = DistortionCoeffs(),
    rig: RigConfig = RigConfig(),
    noise: NoiseSpec = NoiseSpec(),
    gimbal: EulerAngles = EulerAngles(pitch=-math.pi / 2),
    body: EulerAngles = EulerAngles(),
) -> Scenario:
    """Assemble a hovering-camera scenario from a planar path.

    Depth sweeps linearly from depth_min to depth_max along the path and
    the vertical coordinate is derived from altitude, camera offset and
    depth so the depth channel and the geometry agree exactly.
    """
    path_xy = np.asarray(path_xy, dtype=float)
    n = len(path_xy)
    t = np.linspace(0.0, duration, n, endpoint=False) if n > 1 else np.array([0.0])
    depth = np.linspace(depth_min, depth_max, n)
    a_cam = altitude + float(rig.cam_offset[2])
    z = -(a_cam + depth)
    positions = np.column_stack([path_xy[:, 0], path_xy[:, 1], z])
    return Scenario(
        t=t,
        positions=positions,
        a_uav=np.full(n, float(altitude)),
        d_uuv=depth,
        gimbal=np.tile([gimbal.yaw, gimbal.pitch, gimbal.roll], (n, 1)),
        body=np.tile([body.yaw, body.pitch, body.roll], (n, 1)),
        ref_geo=ref_geo,
        intrinsics=intrinsics,
        distortion=distortion,
        rig=rig,
        noise=noise,
    )
