"""Batch front-end: simulate, recover and evaluate trajectories.

Exit codes: 0 success, 1 input error (bad or empty logs, failed sync),
2 configuration error (bad config or calibration, infeasible scenario).
"""

import argparse
import json
import math
import sys

import numpy as np

from . import io
from .camera import PixelCoord
from .errors import (
    BehindCamera,
    ConfigError,
    DepthrayError,
    EmptyTrajectory,
    IllConditionedRay,
    InfeasibleScene,
    LengthMismatch,
    NonConvergence,
    ParallelRay,
    SchemaError,
)
from .evaluate import enu_to_ground_truth, rescale_grid_point, time_sync, trajectory_errors
from .geodesy import GeodeticCoord, ecef_to_geodetic, enu_to_ecef
from .geometry import EulerAngles
from .recovery import Observation, camera_to_uav_enu, recover_camera_frame
from .synth import generate_logs

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONFIG = 2


def _observation_from_row(row, config):
    """Build a validated observation from one CSV row.

    The altitude datum offset converts above-takeoff readings to
    above-water; raises ValueError when the corrected row is unusable.
    """
    return Observation(
        t=row["t"],
        px=PixelCoord(row["u"], row["v"]),
        a_uav=row["a_uav"] + config.altitude_datum_offset,
        d_uuv=row["d_uuv"],
        gimbal=EulerAngles.from_degrees(
            row["gimbal_yaw_deg"], row["gimbal_pitch_deg"], row["gimbal_roll_deg"]
        ),
        body=EulerAngles.from_degrees(
            row["body_yaw_deg"], row["body_pitch_deg"], row["body_roll_deg"]
        ),
        ref_geo=GeodeticCoord.from_degrees(
            row["ref_lat_deg"], row["ref_lon_deg"], row["ref_alt_m"]
        ),
    )


def _apply_origin_track(indexed_rows, track_rows, intr, max_gap):
    """Replace each pixel by the origin-relative vector re-anchored at
    the principal point, compensating hover drift.

    Returns (kept_indexed_rows, exclusions); rows without a time-matched
    origin sample are excluded.
    """
    idx, track_idx, _ = time_sync(
        [r["t"] for _, r in indexed_rows], [r["t"] for r in track_rows], max_gap
    )
    matched = dict(zip(idx.tolist(), track_idx.tolist()))
    kept, exclusions = [], []
    for i, (line, row) in enumerate(indexed_rows):
        if i not in matched:
            exclusions.append({"row": line, "t": row["t"], "reason": "no_origin_match"})
            continue
        origin = track_rows[matched[i]]
        adjusted = dict(row)
        adjusted["u"] = intr.cx + (row["u"] - origin["u"])
        adjusted["v"] = intr.cy + (row["v"] - origin["v"])
        kept.append((line, adjusted))
    return kept, exclusions


def cmd_recover(args) -> int:
    config = io.load_run_config(args.config)
    rows = io.read_observations(args.input)
    if not rows:
        raise EmptyTrajectory(f"{args.input}: no observation rows")
    n_input = len(rows)
    indexed = list(enumerate(rows, start=2))  # 1 header line precedes the data
    exclusions = []
    if args.origin_track:
        track = io.read_track(args.origin_track)
        if not track:
            raise EmptyTrajectory(f"{args.origin_track}: no track rows")
        indexed, origin_exclusions = _apply_origin_track(
            indexed, track, config.intrinsics, config.sync_max_gap
        )
        exclusions.extend(origin_exclusions)

    out_rows = []
    for line, row in indexed:
        t = row["t"]

        def exclude(reason):
            exclusions.append({"row": line, "t": t, "reason": reason})

        try:
            obs = _observation_from_row(row, config)
        except ValueError:
            exclude("degenerate")
            continue
        try:
            p_c, _ = recover_camera_frame(obs, config.intrinsics, config.distortion, config.rig)
        except ParallelRay:
            exclude("parallel_ray")
            continue
        except IllConditionedRay:
            exclude("ill_conditioned")
            continue
        except BehindCamera:
            exclude("behind_camera")
            continue
        except NonConvergence:
            exclude("undistort_nonconvergence")
            continue
        except DepthrayError:
            exclude("degenerate")
            continue
        p_d = camera_to_uav_enu(p_c, obs, config.rig)
        geo = ecef_to_geodetic(enu_to_ecef(p_d, obs.ref_geo, config.ellipsoid), config.ellipsoid)
        flags = []
        if not config.intrinsics.contains(obs.px):
            flags.append("out_of_frame")
        out_rows.append(
            {
                "t": t,
                "cam_x": p_c.x,
                "cam_y": p_c.y,
                "cam_z": p_c.z,
                "enu_x": p_d.x,
                "enu_y": p_d.y,
                "enu_z": p_d.z,
                "lat_deg": math.degrees(geo.lat),
                "lon_deg": math.degrees(geo.lon),
                "alt_m": geo.h,
                "flags": ";".join(flags),
            }
        )
    io.write_trajectory(args.output, out_rows)
    io.write_exclusions(str(args.output) + ".exclusions.csv", exclusions)
    print(
        f"recovered {len(out_rows)} of {n_input} samples "
        f"({len(exclusions)} excluded)"
    )
    return EXIT_OK


def cmd_evaluate(args) -> int:
    config = io.load_run_config(args.config)
    est_rows = io.read_trajectory(args.input)
    gt_rows = io.read_ground_truth(args.gt)
    if not est_rows:
        raise EmptyTrajectory(f"{args.input}: no trajectory rows")
    if not gt_rows:
        raise EmptyTrajectory(f"{args.gt}: no ground-truth rows")

    est_idx, gt_idx, n_dropped = time_sync(
        [r["t"] for r in est_rows], [r["t"] for r in gt_rows], config.sync_max_gap
    )
    if len(est_idx) == 0:
        raise LengthMismatch(
            f"no timestamps match within {config.sync_max_gap} s "
            f"({len(est_rows)} estimates, {len(gt_rows)} ground-truth samples)"
        )

    est = np.array(
        [[est_rows[i]["enu_x"], est_rows[i]["enu_y"], est_rows[i]["enu_z"]] for i in est_idx]
    )
    gt = np.array([[gt_rows[j]["x"], gt_rows[j]["y"], gt_rows[j]["z"]] for j in gt_idx])

    if config.gt_frame is not None:
        est = np.array([enu_to_ground_truth(p, config.gt_frame) for p in est])
    if config.gt_rescale:
        a_cam = config.gt_rescale_a_cam
        depth = np.maximum(-gt[:, 2] - a_cam, 0.0)
        gt = gt.copy()
        for k in range(len(gt)):
            gt[k, :2] = rescale_grid_point(gt[k, :2], config.gt_rescale_nadir, a_cam, depth[k])

    report = trajectory_errors(est[:, :2], gt[:, :2], n_excluded=n_dropped)
    payload = {
        "mae": report.mae,
        "rmse": report.rmse,
        "n_samples": report.n_samples,
        "n_excluded": report.n_excluded,
        "z_mae": float(np.mean(np.abs(est[:, 2] - gt[:, 2]))),
    }
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    print(text, end="")
    return EXIT_OK


def cmd_simulate(args) -> int:
    scenario = io.load_scenario_config(args.config, seed=args.seed)
    obs_rows, gt_rows = generate_logs(scenario)
    io.write_observations(args.output, obs_rows)
    io.write_ground_truth(args.gt, gt_rows)
    print(f"simulated {len(obs_rows)} samples")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="depthray",
        description="Recover and evaluate submerged-vehicle trajectories from aerial tracks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recover", help="observations CSV to trajectory CSV")
    p.add_argument("--config", required=True, help="run configuration (YAML)")
    p.add_argument("--input", required=True, help="observation log CSV")
    p.add_argument("--output", required=True, help="trajectory CSV to write")
    p.add_argument(
        "--origin-track", default=None, help="optional origin pixel track CSV (t,u,v)"
    )
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("evaluate", help="compare a trajectory against ground truth")
    p.add_argument("--config", required=True, help="run configuration (YAML)")
    p.add_argument("--input", required=True, help="trajectory CSV")
    p.add_argument("--gt", required=True, help="ground-truth CSV")
    p.add_argument("--output", default=None, help="report file (default: stdout only)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("simulate", help="generate synthetic observation and truth logs")
    p.add_argument("--config", required=True, help="scenario description (YAML)")
    p.add_argument("--output", required=True, help="observation CSV to write")
    p.add_argument("--gt", required=True, help="ground-truth CSV to write")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InfeasibleScene) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SchemaError, EmptyTrajectory, LengthMismatch, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entrypoint() -> None:
    sys.exit(main())
