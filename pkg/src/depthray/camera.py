"""Pinhole projection and radial-tangential lens distortion.

Pixel coordinates (u, v) relate to normalized camera coordinates
(x, y) = (X/Z, Y/Z) through the focal lengths and principal point:

    u = fx * x + cx
    v = fy * y + cy

Lens distortion follows the standard five-coefficient Brown-Conrady
model (three radial terms k1..k3, two tangential terms p1, p2) applied
in normalized coordinates.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import NonConvergence

UNDISTORT_MAX_ITER = 50
UNDISTORT_TOL = 1e-10


class PixelCoord(NamedTuple):
    """Image position in pixels: u rightward, v downward.

    May lie outside the image bounds; trackers legitimately report
    near-edge or overshooting boxes.
    """

    u: float
    v: float


class NormalizedCoord(NamedTuple):
    """Dimensionless image-plane coordinates after perspective division."""

    x: float
    y: float


@dataclass(frozen=True)
class CameraIntrinsics:
    """Focal lengths and principal point, all in pixels."""

    fx: float
    fy: float
    cx: float
    cy: float
    image_width: int
    image_height: int

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise ValueError(f"focal lengths must be positive, got fx={self.fx}, fy={self.fy}")
        if not (0 <= self.cx < self.image_width and 0 <= self.cy < self.image_height):
            raise ValueError(
                f"principal point ({self.cx}, {self.cy}) outside image "
                f"{self.image_width}x{self.image_height}"
            )

    def contains(self, px: PixelCoord) -> bool:
        """True if the pixel falls inside the image bounds."""
        return 0 <= px.u < self.image_width and 0 <= px.v < self.image_height


@dataclass(frozen=True)
class DistortionCoeffs:
    """Radial (k1, k2, k3) and tangential (p1, p2) coefficients."""

    k1: float = 0.0
    k2: float = 0.0
    k3: float = 0.0
    p1: float = 0.0
    p2: float = 0.0

    def __post_init__(self):
        for name in ("k1", "k2", "k3", "p1", "p2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"distortion coefficient {name} must be finite")

    @classmethod
    def zero(cls) -> "DistortionCoeffs":
        """Identity distortion."""
        return cls()

    def is_zero(self) -> bool:
        return self.k1 == self.k2 == self.k3 == self.p1 == self.p2 == 0.0


def normalized_to_pixel(n: NormalizedCoord, intr: CameraIntrinsics) -> PixelCoord:
    """Scale normalized coordinates into pixels."""
    x, y = n
    return PixelCoord(intr.fx * x + intr.cx, intr.fy * y + intr.cy)


def pixel_to_normalized(px: PixelCoord, intr: CameraIntrinsics) -> NormalizedCoord:
    """Invert the intrinsic scaling, pixels to normalized coordinates."""
    u, v = px
    if not (math.isfinite(u) and math.isfinite(v)):
        raise ValueError(f"non-finite pixel coordinate ({u}, {v})")
    return NormalizedCoord((u - intr.cx) / intr.fx, (v - intr.cy) / intr.fy)


def distort(n: NormalizedCoord, d: DistortionCoeffs) -> NormalizedCoord:
    """Apply Brown-Conrady distortion to an ideal normalized point."""
    x, y = n
    r2 = x * x + y * y
    radial = 1.0 + r2 * (d.k1 + r2 * (d.k2 + r2 * d.k3))
    xd = x * radial + 2.0 * d.p1 * x * y + d.p2 * (r2 + 2.0 * x * x)
    yd = y * radial + d.p1 * (r2 + 2.0 * y * y) + 2.0 * d.p2 * x * y
    return NormalizedCoord(xd, yd)


def _distortion_jacobian(x, y, d):
    """Partial derivatives of the distorted point w.r.t. (x, y)."""
    r2 = x * x + y * y
    radial = 1.0 + r2 * (d.k1 + r2 * (d.k2 + r2 * d.k3))
    # derivative of the radial factor w.r.t. r2
    dr = d.k1 + r2 * (2.0 * d.k2 + r2 * 3.0 * d.k3)
    jxx = radial + 2.0 * x * x * dr + 2.0 * d.p1 * y + 6.0 * d.p2 * x
    jxy = 2.0 * x * y * dr + 2.0 * d.p1 * x + 2.0 * d.p2 * y
    jyy = radial + 2.0 * y * y * dr + 6.0 * d.p1 * y + 2.0 * d.p2 * x
    return jxx, jxy, jxy, jyy


def undistort(
    n_d: NormalizedCoord,
    d: DistortionCoeffs,
    max_iter: int = UNDISTORT_MAX_ITER,
    tol: float = UNDISTORT_TOL,
) -> NormalizedCoord:
    """Invert the distortion model.

    Starts at the distorted point and iterates a damped Newton update on
    the residual distort(x) - n_d until its max-norm drops below `tol`.
    A plain fixed-point update is not contractive for strong distortion
    near the edge of the field, so each step solves the 2x2 distortion
    Jacobian and backtracks when the residual would grow.

    Raises:
        NonConvergence: residual still above `tol` after `max_iter`
            iterations, or the iterate escapes the model's invertible
            region around the input.
    """
    xd, yd = n_d
    if not (math.isfinite(xd) and math.isfinite(yd)):
        raise ValueError(f"non-finite distorted coordinate ({xd}, {yd})")
    if d.is_zero():
        return NormalizedCoord(xd, yd)

    # iterates wandering far outside the input radius have left the
    # invertible region; any root found there is on a folded sheet
    bound = 4.0 * (1.0 + math.hypot(xd, yd))

    x, y = xd, yd
    fx, fy = distort(NormalizedCoord(x, y), d)
    rx, ry = fx - xd, fy - yd
    res = max(abs(rx), abs(ry))
    for _ in range(max_iter):
        if res < tol:
            return NormalizedCoord(x, y)
        jxx, jxy, jyx, jyy = _distortion_jacobian(x, y, d)
        det = jxx * jyy - jxy * jyx
        if abs(det) > 1e-14:
            sx = (jyy * rx - jxy * ry) / det
            sy = (-jyx * rx + jxx * ry) / det
        else:
            sx, sy = rx, ry  # fall back to the undamped fixed-point step
        lam = 1.0
        while True:
            xn, yn = x - lam * sx, y - lam * sy
            fxn, fyn = distort(NormalizedCoord(xn, yn), d)
            rxn, ryn = fxn - xd, fyn - yd
            resn = max(abs(rxn), abs(ryn))
            if resn < res or lam < 1.0 / 64.0:
                break
            lam *= 0.5
        x, y, rx, ry, res = xn, yn, rxn, ryn, resn
        if math.hypot(x, y) > bound:
            raise NonConvergence(
                f"undistort iterate left the invertible region for ({xd}, {yd})"
            )
    if res < tol:
        return NormalizedCoord(x, y)
    raise NonConvergence(
        f"undistort residual {res:.3e} above {tol:.1e} after {max_iter} iterations"
    )
