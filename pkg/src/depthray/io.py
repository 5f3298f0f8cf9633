"""File formats: CSV logs and YAML configuration.

All CSVs are UTF-8 with a required header, `.` decimal separator,
angles in degrees and distances in meters. Floats are written with
Python's shortest round-trip repr so a written value reads back
bit-identical, and identical runs produce byte-identical files.
"""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .camera import CameraIntrinsics, DistortionCoeffs
from .errors import ConfigError, SchemaError
from .evaluate import GroundTruthFrame
from .geodesy import ELLIPSOIDS, WGS84, Ellipsoid, GeodeticCoord
from .geometry import EulerAngles
from .recovery import RigConfig
from .synth import (
    NoiseSpec,
    Scenario,
    build_scenario,
    circle_path,
    lawnmower_path,
    line_path,
)

OBSERVATION_COLUMNS = [
    "t",
    "u",
    "v",
    "a_uav",
    "d_uuv",
    "gimbal_yaw_deg",
    "gimbal_pitch_deg",
    "gimbal_roll_deg",
    "body_yaw_deg",
    "body_pitch_deg",
    "body_roll_deg",
    "ref_lat_deg",
    "ref_lon_deg",
    "ref_alt_m",
]

GROUND_TRUTH_COLUMNS = ["t", "x", "y", "z"]

TRAJECTORY_COLUMNS = [
    "t",
    "cam_x",
    "cam_y",
    "cam_z",
    "enu_x",
    "enu_y",
    "enu_z",
    "lat_deg",
    "lon_deg",
    "alt_m",
    "flags",
]

EXCLUSION_COLUMNS = ["row", "t", "reason"]

TRACK_COLUMNS = ["t", "u", "v"]

CALIBRATION_KEYS = {"fx", "fy", "cx", "cy", "width", "height", "k1", "k2", "k3", "p1", "p2"}

RUN_CONFIG_KEYS = {
    "calibration",
    "cam_offset",
    "gimbal_frame",
    "gimbal_pitch_sign",
    "altitude_datum_offset",
    "ellipsoid",
    "sync_max_gap",
    "gt_frame_yaw_deg",
    "gt_frame_translation",
    "gt_rescale",
    "gt_rescale_a_cam",
    "gt_rescale_nadir",
}

SCENARIO_KEYS = {
    "pattern",
    "n_samples",
    "duration",
    "area",
    "legs",
    "radius",
    "start",
    "end",
    "altitude",
    "depth_min",
    "depth_max",
    "gimbal_yaw_deg",
    "gimbal_pitch_deg",
    "gimbal_roll_deg",
    "body_yaw_deg",
    "body_pitch_deg",
    "body_roll_deg",
    "ref_lat_deg",
    "ref_lon_deg",
    "ref_alt_m",
    "sigma_px",
    "sigma_alt",
    "sigma_depth",
    "sigma_gimbal_deg",
    "seed",
    "calibration",
    "cam_offset",
    "gimbal_frame",
    "gimbal_pitch_sign",
}


def fmt(value) -> str:
    """Shortest decimal string that reads back to the same double."""
    return repr(float(value))


# --- CSV ---


def _read_rows(path, columns, text_columns=()):
    """Read a strict-schema CSV into a list of dicts of floats.

    The header must match `columns` exactly; any non-numeric value in a
    numeric column is a SchemaError carrying the 1-based line number.
    """
    path = Path(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot open {path}: {exc}") from exc
    rows = []
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: missing header", line=1) from None
        if header != columns:
            raise SchemaError(
                f"{path}: expected columns {','.join(columns)}, got {','.join(header)}",
                line=1,
            )
        for lineno, raw in enumerate(reader, start=2):
            if not raw:
                continue
            if len(raw) != len(columns):
                raise SchemaError(
                    f"{path}: expected {len(columns)} fields, got {len(raw)}", line=lineno
                )
            row = {}
            for name, value in zip(columns, raw):
                if name in text_columns:
                    row[name] = value
                    continue
                try:
                    row[name] = float(value)
                except ValueError:
                    raise SchemaError(
                        f"{path}: column {name}: not a number: {value!r}", line=lineno
                    ) from None
                if not math.isfinite(row[name]):
                    raise SchemaError(
                        f"{path}: column {name}: non-finite value {value}", line=lineno
                    )
            rows.append(row)
    return rows


def _write_rows(path, columns, rows, text_columns=()):
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(
                [row[c] if c in text_columns else fmt(row[c]) for c in columns]
            )


def read_observations(path):
    return _read_rows(path, OBSERVATION_COLUMNS)


def write_observations(path, rows):
    _write_rows(path, OBSERVATION_COLUMNS, rows)


def read_ground_truth(path):
    return _read_rows(path, GROUND_TRUTH_COLUMNS)


def write_ground_truth(path, rows):
    _write_rows(path, GROUND_TRUTH_COLUMNS, rows)


def read_trajectory(path):
    return _read_rows(path, TRAJECTORY_COLUMNS, text_columns=("flags",))


def write_trajectory(path, rows):
    _write_rows(path, TRAJECTORY_COLUMNS, rows, text_columns=("flags",))


def read_track(path):
    return _read_rows(path, TRACK_COLUMNS)


def write_exclusions(path, rows):
    # row is an integer line reference, not a measurement
    _write_rows(path, EXCLUSION_COLUMNS, rows, text_columns=("row", "reason"))


# --- YAML configuration ---


def _load_mapping(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a key-value mapping at top level")
    return data


def _check_keys(data, allowed, path):
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown keys: {', '.join(unknown)}")


def _number(data, key, path, default=None):
    value = data.get(key, default)
    if value is None:
        raise ConfigError(f"{path}: missing required key {key}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: key {key} must be a number, got {value!r}")
    if not math.isfinite(float(value)):
        raise ConfigError(f"{path}: key {key} must be finite")
    return float(value)


def _vector(data, key, path, length, default):
    value = data.get(key, default)
    if (
        not isinstance(value, (list, tuple))
        or len(value) != length
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
    ):
        raise ConfigError(f"{path}: key {key} must be a list of {length} numbers")
    return np.asarray(value, dtype=float)


def load_calibration(path):
    """Read intrinsics and distortion from a calibration file."""
    path = Path(path)
    data = _load_mapping(path)
    _check_keys(data, CALIBRATION_KEYS, path)
    try:
        intr = CameraIntrinsics(
            fx=_number(data, "fx", path),
            fy=_number(data, "fy", path),
            cx=_number(data, "cx", path),
            cy=_number(data, "cy", path),
            image_width=int(_number(data, "width", path)),
            image_height=int(_number(data, "height", path)),
        )
        dist = DistortionCoeffs(
            k1=_number(data, "k1", path, 0.0),
            k2=_number(data, "k2", path, 0.0),
            k3=_number(data, "k3", path, 0.0),
            p1=_number(data, "p1", path, 0.0),
            p2=_number(data, "p2", path, 0.0),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return intr, dist


def _ellipsoid(data, path) -> Ellipsoid:
    value = data.get("ellipsoid", "wgs84")
    if isinstance(value, str):
        try:
            return ELLIPSOIDS[value.lower()]
        except KeyError:
            raise ConfigError(
                f"{path}: unknown ellipsoid {value!r}; use one of "
                f"{sorted(ELLIPSOIDS)} or [r_e, r_p]"
            ) from None
    radii = _vector({"ellipsoid": value}, "ellipsoid", path, 2, value)
    try:
        return Ellipsoid(r_e=radii[0], r_p=radii[1])
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _rig(data, path) -> RigConfig:
    frame = data.get("gimbal_frame", "world")
    sign = data.get("gimbal_pitch_sign", 1)
    try:
        return RigConfig(
            cam_offset=_vector(data, "cam_offset", path, 3, [0.0, 0.0, 0.0]),
            gimbal_pitch_sign=sign if isinstance(sign, int) else int(_number(data, "gimbal_pitch_sign", path)),
            gimbal_frame=frame,
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class RunConfig:
    """Everything the batch pipeline needs besides the input logs."""

    intrinsics: CameraIntrinsics
    distortion: DistortionCoeffs
    rig: RigConfig
    ellipsoid: Ellipsoid = WGS84
    altitude_datum_offset: float = 0.0
    sync_max_gap: float = 0.05
    gt_frame: GroundTruthFrame | None = None
    gt_rescale: bool = False
    gt_rescale_a_cam: float | None = None
    gt_rescale_nadir: np.ndarray = field(default_factory=lambda: np.zeros(2))


def load_run_config(path) -> RunConfig:
    path = Path(path)
    data = _load_mapping(path)
    _check_keys(data, RUN_CONFIG_KEYS, path)
    calib = data.get("calibration")
    if not isinstance(calib, str):
        raise ConfigError(f"{path}: key calibration must be a file path")
    intr, dist = load_calibration(path.parent / calib)
    gt_frame = None
    if "gt_frame_yaw_deg" in data or "gt_frame_translation" in data:
        try:
            gt_frame = GroundTruthFrame(
                yaw=math.radians(_number(data, "gt_frame_yaw_deg", path, 0.0)),
                translation=_vector(data, "gt_frame_translation", path, 3, [0.0, 0.0, 0.0]),
            )
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    gt_rescale = data.get("gt_rescale", False)
    if not isinstance(gt_rescale, bool):
        raise ConfigError(f"{path}: key gt_rescale must be true or false")
    rescale_a_cam = None
    if gt_rescale:
        rescale_a_cam = _number(data, "gt_rescale_a_cam", path)
        if rescale_a_cam <= 0:
            raise ConfigError(f"{path}: gt_rescale_a_cam must be positive")
    sync_max_gap = _number(data, "sync_max_gap", path, 0.05)
    if sync_max_gap < 0:
        raise ConfigError(f"{path}: sync_max_gap must be non-negative")
    return RunConfig(
        intrinsics=intr,
        distortion=dist,
        rig=_rig(data, path),
        ellipsoid=_ellipsoid(data, path),
        altitude_datum_offset=_number(data, "altitude_datum_offset", path, 0.0),
        sync_max_gap=sync_max_gap,
        gt_frame=gt_frame,
        gt_rescale=gt_rescale,
        gt_rescale_a_cam=rescale_a_cam,
        gt_rescale_nadir=_vector(data, "gt_rescale_nadir", path, 2, [0.0, 0.0]),
    )


def load_scenario_config(path, seed=None) -> Scenario:
    """Build a simulation scenario from a YAML description.

    `seed` overrides the file's seed when given (the --seed flag).
    """
    path = Path(path)
    data = _load_mapping(path)
    _check_keys(data, SCENARIO_KEYS, path)

    calib = data.get("calibration")
    if isinstance(calib, str):
        intr, dist = load_calibration(path.parent / calib)
    elif isinstance(calib, dict):
        _check_keys(calib, CALIBRATION_KEYS, path)
        try:
            intr = CameraIntrinsics(
                fx=_number(calib, "fx", path),
                fy=_number(calib, "fy", path),
                cx=_number(calib, "cx", path),
                cy=_number(calib, "cy", path),
                image_width=int(_number(calib, "width", path)),
                image_height=int(_number(calib, "height", path)),
            )
            dist = DistortionCoeffs(
                k1=_number(calib, "k1", path, 0.0),
                k2=_number(calib, "k2", path, 0.0),
                k3=_number(calib, "k3", path, 0.0),
                p1=_number(calib, "p1", path, 0.0),
                p2=_number(calib, "p2", path, 0.0),
            )
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    else:
        raise ConfigError(f"{path}: key calibration must be a path or a mapping")

    n = data.get("n_samples", 500)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ConfigError(f"{path}: n_samples must be a positive integer")
    pattern = data.get("pattern", "lawnmower")
    if pattern == "lawnmower":
        area = _vector(data, "area", path, 2, [16.0, 8.0])
        legs = data.get("legs", 6)
        if isinstance(legs, bool) or not isinstance(legs, int) or legs < 1:
            raise ConfigError(f"{path}: legs must be a positive integer")
        path_xy = lawnmower_path(n, area[0], area[1], legs)
    elif pattern == "circle":
        path_xy = circle_path(n, _number(data, "radius", path, 5.0))
    elif pattern == "line":
        path_xy = line_path(
            n,
            _vector(data, "start", path, 2, [0.0, 0.0]),
            _vector(data, "end", path, 2, [5.0, 0.0]),
        )
    else:
        raise ConfigError(f"{path}: unknown pattern {pattern!r}")

    if seed is None:
        seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"{path}: seed must be an integer")
    try:
        noise = NoiseSpec(
            sigma_px=_number(data, "sigma_px", path, 0.0),
            sigma_alt=_number(data, "sigma_alt", path, 0.0),
            sigma_depth=_number(data, "sigma_depth", path, 0.0),
            sigma_gimbal=math.radians(_number(data, "sigma_gimbal_deg", path, 0.0)),
            seed=seed,
        )
        return build_scenario(
            path_xy=path_xy,
            duration=_number(data, "duration", path, 100.0),
            altitude=_number(data, "altitude", path),
            depth_min=_number(data, "depth_min", path, 0.0),
            depth_max=_number(data, "depth_max", path, data.get("depth_min", 0.0)),
            ref_geo=GeodeticCoord.from_degrees(
                _number(data, "ref_lat_deg", path, 0.0),
                _number(data, "ref_lon_deg", path, 0.0),
                _number(data, "ref_alt_m", path, 0.0),
            ),
            intrinsics=intr,
            distortion=dist,
            rig=_rig(data, path),
            noise=noise,
            gimbal=EulerAngles.from_degrees(
                _number(data, "gimbal_yaw_deg", path, 0.0),
                _number(data, "gimbal_pitch_deg", path, -90.0),
                _number(data, "gimbal_roll_deg", path, 0.0),
            ),
            body=EulerAngles.from_degrees(
                _number(data, "body_yaw_deg", path, 0.0),
                _number(data, "body_pitch_deg", path, 0.0),
                _number(data, "body_roll_deg", path, 0.0),
            ),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
