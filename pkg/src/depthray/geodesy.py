"""Geodetic, ECEF and local-ENU coordinate conversions.

Latitude and longitude are radians internally; file I/O converts from
decimal degrees at the boundary. All operations accept scalars or
equal-shaped numpy arrays in the coordinate fields and vectorize
elementwise.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NearSingularAxis

# Region around the rotation axis where the closed-form conversion is
# replaced by iterative refinement.
AXIS_GUARD_M = 1.0


@dataclass(frozen=True)
class Ellipsoid:
    """Reference ellipsoid given by equatorial and polar radii, meters."""

    r_e: float
    r_p: float

    def __post_init__(self):
        if not (self.r_e >= self.r_p > 0):
            raise ValueError(f"require r_e >= r_p > 0, got {self.r_e}, {self.r_p}")

    @property
    def e2(self) -> float:
        """First eccentricity squared."""
        return 1.0 - (self.r_p / self.r_e) ** 2

    @property
    def ep2(self) -> float:
        """Second eccentricity squared."""
        return (self.r_e / self.r_p) ** 2 - 1.0


WGS84 = Ellipsoid(r_e=6378137.0, r_p=6356752.314245)

ELLIPSOIDS = {"wgs84": WGS84}


def _wrap_lon(lon):
    wrapped = np.remainder(np.asarray(lon, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    return np.where(wrapped == -np.pi, np.pi, wrapped)


def _scalar_or_array(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class GeodeticCoord:
    """Latitude (rad), longitude (rad), height above the ellipsoid (m)."""

    lat: float
    lon: float
    h: float

    def __post_init__(self):
        lat = np.asarray(self.lat, dtype=float)
        if not np.all(np.isfinite(lat)) or np.any(np.abs(lat) > np.pi / 2 + 1e-12):
            raise ValueError("latitude must be finite and within [-pi/2, pi/2]")
        if not np.all(np.isfinite(np.asarray(self.h, dtype=float))):
            raise ValueError("height must be finite")
        object.__setattr__(self, "lat", _scalar_or_array(lat))
        object.__setattr__(self, "lon", _scalar_or_array(_wrap_lon(self.lon)))
        object.__setattr__(self, "h", _scalar_or_array(self.h))

    @classmethod
    def from_degrees(cls, lat_deg, lon_deg, h) -> "GeodeticCoord":
        return cls(np.radians(lat_deg), np.radians(lon_deg), h)


@dataclass(frozen=True)
class EcefCoord:
    """Earth-centered, earth-fixed Cartesian coordinates, meters."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        z = np.asarray(self.z, dtype=float)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.all(np.isfinite(z))):
            raise ValueError("ECEF coordinates must be finite")
        r = np.sqrt(x * x + y * y + z * z)
        if np.any(r < WGS84.r_p - 1e5) or np.any(r > WGS84.r_e + 1e5):
            warnings.warn(
                "ECEF point more than 100 km from the reference surface",
                RuntimeWarning,
                stacklevel=3,
            )
        object.__setattr__(self, "x", _scalar_or_array(x))
        object.__setattr__(self, "y", _scalar_or_array(y))
        object.__setattr__(self, "z", _scalar_or_array(z))


def prime_vertical_radius(lat, ell: Ellipsoid = WGS84):
    """Distance from the surface to the rotation axis along the normal:

        N = r_e^2 / sqrt(r_e^2 cos^2(lat) + r_p^2 sin^2(lat))
    """
    lat = np.asarray(lat, dtype=float)
    c, s = np.cos(lat), np.sin(lat)
    return _scalar_or_array(ell.r_e**2 / np.sqrt((ell.r_e * c) ** 2 + (ell.r_p * s) ** 2))


def geodetic_to_ecef(g: GeodeticCoord, ell: Ellipsoid = WGS84) -> EcefCoord:
    """Closed-form geodetic to ECEF conversion."""
    n = prime_vertical_radius(g.lat, ell)
    clat, slat = np.cos(g.lat), np.sin(g.lat)
    x = (n + g.h) * clat * np.cos(g.lon)
    y = (n + g.h) * clat * np.sin(g.lon)
    z = ((ell.r_p / ell.r_e) ** 2 * n + g.h) * slat
    return EcefCoord(_scalar_or_array(x), _scalar_or_array(y), _scalar_or_array(z))


def enu_to_ecef_rotation(ref: GeodeticCoord) -> np.ndarray:
    """Rotation block taking local ENU offsets at `ref` into ECEF axes."""
    clat, slat = math.cos(ref.lat), math.sin(ref.lat)
    clon, slon = math.cos(ref.lon), math.sin(ref.lon)
    return np.array(
        [
            [-slon, -slat * clon, clat * clon],
            [clon, -slat * slon, clat * slon],
            [0.0, clat, slat],
        ]
    )


def enu_to_ecef(p, ref: GeodeticCoord, ell: Ellipsoid = WGS84) -> EcefCoord:
    """Transform a local ENU point (3-vector, meters) anchored at `ref`."""
    p = np.asarray(p, dtype=float)
    origin = geodetic_to_ecef(ref, ell)
    r = enu_to_ecef_rotation(ref)
    x, y, z = r @ p + np.array([origin.x, origin.y, origin.z])
    return EcefCoord(float(x), float(y), float(z))


def _geodetic_closed_form(x, y, z, ell):
    """Closed-form ECEF to geodetic solution (array-valued)."""
    a, b = ell.r_e, ell.r_p
    e2, ep2 = ell.e2, ell.ep2
    p = np.hypot(x, y)
    f = 54.0 * b * b * z * z
    g = p * p + (1.0 - e2) * z * z - e2 * (a * a - b * b)
    c = e2 * e2 * f * p * p / (g * g * g)
    s = np.cbrt(1.0 + c + np.sqrt(c * c + 2.0 * c))
    k = s + 1.0 + 1.0 / s
    pp = f / (3.0 * k * k * g * g)
    q = np.sqrt(1.0 + 2.0 * e2 * e2 * pp)
    r0 = -pp * e2 * p / (1.0 + q) + np.sqrt(
        np.maximum(
            0.5 * a * a * (1.0 + 1.0 / q)
            - pp * (1.0 - e2) * z * z / (q * (1.0 + q))
            - 0.5 * pp * p * p,
            0.0,
        )
    )
    t = p - e2 * r0
    u = np.sqrt(t * t + z * z)
    v = np.sqrt(t * t + (1.0 - e2) * z * z)
    z0 = b * b * z / (a * v)
    h = u * (1.0 - b * b / (a * v))
    lat = np.arctan2(z + ep2 * z0, p)
    lon = np.arctan2(y, x)
    return lat, lon, h


def _geodetic_iterative(x, y, z, ell, iterations=30):
    """Parametric-latitude fixed point, used near the rotation axis."""
    a, b = ell.r_e, ell.r_p
    e2, ep2 = ell.e2, ell.ep2
    p = np.hypot(x, y)
    beta = np.arctan2(a * z, b * p)
    lat = np.zeros_like(p)
    for _ in range(iterations):
        lat = np.arctan2(z + ep2 * b * np.sin(beta) ** 3, p - e2 * a * np.cos(beta) ** 3)
        beta = np.arctan2(b * np.sin(lat), a * np.cos(lat))
    n = ell.r_e**2 / np.sqrt((a * np.cos(lat)) ** 2 + (b * np.sin(lat)) ** 2)
    # height from whichever axis is better conditioned at this latitude
    h = np.where(
        np.abs(lat) < np.pi / 4,
        p / np.maximum(np.cos(lat), 1e-300) - n,
        z / np.where(np.sin(lat) == 0.0, 1.0, np.sin(lat)) - (b / a) ** 2 * n,
    )
    if not np.all(np.isfinite(lat)):
        raise NearSingularAxis("iterative geodetic refinement did not converge")
    return lat, np.arctan2(y, x), h


def ecef_to_geodetic(e: EcefCoord, ell: Ellipsoid = WGS84) -> GeodeticCoord:
    """Convert ECEF to geodetic coordinates.

    Uses the closed-form solution everywhere except a guard band around
    the rotation axis (|x| and |y| both below AXIS_GUARD_M), where it
    falls back to an iterative parametric-latitude refinement.
    """
    x = np.atleast_1d(np.asarray(e.x, dtype=float))
    y = np.atleast_1d(np.asarray(e.y, dtype=float))
    z = np.atleast_1d(np.asarray(e.z, dtype=float))
    lat, lon, h = _geodetic_closed_form(x, y, z, ell)
    near = (np.abs(x) < AXIS_GUARD_M) & (np.abs(y) < AXIS_GUARD_M)
    if np.any(near):
        lat_i, lon_i, h_i = _geodetic_iterative(x[near], y[near], z[near], ell)
        lat[near], lon[near], h[near] = lat_i, lon_i, h_i
    scalar = np.asarray(e.x).ndim == 0
    if scalar:
        return GeodeticCoord(float(lat[0]), float(lon[0]), float(h[0]))
    return GeodeticCoord(lat, lon, h)
