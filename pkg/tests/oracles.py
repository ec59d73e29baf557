"""Independent reference implementations used to check the engine.

Everything here is deliberately written with plain Python loops and
hand-rolled linear algebra so that agreement with the numpy-based
package code is meaningful.
"""

from __future__ import annotations

import math

import numpy as np

from leonav.geometry import SiteObservation


def gauss_jordan_inverse(matrix: list[list[float]]) -> list[list[float]]:
    """Inverts a small dense matrix by Gauss-Jordan with partial pivoting."""
    n = len(matrix)
    aug = [list(row) + [1.0 if i == j else 0.0 for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if abs(aug[pivot][col]) == 0.0:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [v / scale for v in aug[col]]
        for row in range(n):
            if row == col:
                continue
            factor = aug[row][col]
            if factor != 0.0:
                aug[row] = [a - factor * b for a, b in zip(aug[row], aug[col])]
    return [row[n:] for row in aug]


def dop_oracle(observations) -> tuple[float, float, float, float, float]:
    """(gdop, pdop, hdop, vdop, tdop) from first principles, no numpy."""
    rows = [[-o.los_east, -o.los_north, -o.los_up, 1.0] for o in observations]
    normal = [[sum(r[i] * r[j] for r in rows) for j in range(4)] for i in range(4)]
    q = gauss_jordan_inverse(normal)
    d = [q[i][i] for i in range(4)]
    return (
        math.sqrt(d[0] + d[1] + d[2] + d[3]),
        math.sqrt(d[0] + d[1] + d[2]),
        math.sqrt(d[0] + d[1]),
        math.sqrt(d[2]),
        math.sqrt(d[3]),
    )


def observation_from_angles(az_deg: float, el_deg: float,
                            range_km: float = 2000.0) -> SiteObservation:
    """Builds a unit-LOS observation straight from pointing angles."""
    az = math.radians(az_deg)
    el = math.radians(el_deg)
    return SiteObservation(
        elevation_deg=el_deg,
        azimuth_deg=az_deg,
        range_km=range_km,
        los_east=math.cos(el) * math.sin(az),
        los_north=math.cos(el) * math.cos(az),
        los_up=math.sin(el),
    )


def random_observations(rng: np.random.Generator, n_sats: int,
                        min_elevation_deg: float = 5.0) -> list[SiteObservation]:
    """n_sats observations with uniform azimuth and elevation above the mask."""
    out = []
    for _ in range(n_sats):
        az = float(rng.uniform(0.0, 360.0))
        el = float(rng.uniform(min_elevation_deg, 85.0))
        out.append(observation_from_angles(az, el, float(rng.uniform(500.0, 25000.0))))
    return out


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform-ish proper rotation matrix from the QR of a Gaussian sample."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0.0:
        q[:, 0] = -q[:, 0]
    return q


def satellite_above(site_ecef: np.ndarray, az_deg: float, el_deg: float,
                    range_km: float) -> np.ndarray:
    """ECEF point at the given topocentric angles and range from a site."""
    r = np.linalg.norm(site_ecef)
    lat = math.asin(site_ecef[2] / r)
    lon = math.atan2(site_ecef[1], site_ecef[0])
    east = np.array([-math.sin(lon), math.cos(lon), 0.0])
    north = np.array(
        [-math.sin(lat) * math.cos(lon), -math.sin(lat) * math.sin(lon), math.cos(lat)]
    )
    up = site_ecef / r
    az = math.radians(az_deg)
    el = math.radians(el_deg)
    los = (
        math.cos(el) * math.sin(az) * east
        + math.cos(el) * math.cos(az) * north
        + math.sin(el) * up
    )
    return site_ecef + range_km * los
