"""4D point clouds: detection records, world-frame reconstruction, export.

Reconstruction places each detection at bs_position + R * look_direction
(see the array module for the angle convention) and carries the radial
velocity as the fourth coordinate. CSV and ASCII PLY exports are
deterministic: points are written sorted by their provenance bins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import SteeringAngles, look_direction
from .scene import DEFAULT_BS_POSITION

CSV_HEADER = "x,y,z,v"


@dataclass(frozen=True)
class Detection:
    """One resolved target: physical values plus detector provenance."""

    range_m: float
    velocity_ms: float
    angles: SteeringAngles
    alpha: int
    beta: int
    peak: float


@dataclass(frozen=True)
class PointCloud4D:
    """points is (n, 4): x, y, z in meters, radial velocity in m/s.

    provenance, when present, holds one Detection per point in the same
    order; imported clouds have provenance None.
    """

    points: np.ndarray
    provenance: tuple[Detection, ...] | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.size == 0:
            pts = pts.reshape(0, 4)
        if pts.ndim != 2 or pts.shape[1] != 4:
            raise ValueError("points must be (n, 4), got %s" % (pts.shape,))
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if self.provenance is not None and len(self.provenance) != pts.shape[0]:
            raise ValueError("provenance length does not match point count")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def positions(self) -> np.ndarray:
        return self.points[:, :3]

    @property
    def velocities(self) -> np.ndarray:
        return self.points[:, 3]


def reconstruct(detections, bs_position=DEFAULT_BS_POSITION) -> PointCloud4D:
    """Spherical detections to world-frame 4D points."""
    bs = np.asarray(bs_position, dtype=float)
    rows = []
    for det in detections:
        if det.range_m <= 0:
            raise ValueError("detection range must be positive, got %s" % (det.range_m,))
        pos = bs + det.range_m * look_direction(det.angles)
        rows.append((pos[0], pos[1], pos[2], det.velocity_ms))
    return PointCloud4D(np.array(rows, dtype=float).reshape(len(rows), 4), tuple(detections))


def _export_order(cloud: PointCloud4D):
    if cloud.provenance is None:
        return range(len(cloud))
    keys = [
        (d.alpha, d.beta, d.angles.theta_deg, d.angles.phi_deg, d.peak)
        for d in cloud.provenance
    ]
    return sorted(range(len(cloud)), key=keys.__getitem__)


def export_cloud_csv(cloud: PointCloud4D, path) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for i in _export_order(cloud):
            fh.write(",".join(repr(float(v)) for v in cloud.points[i]) + "\n")


def import_cloud_csv(path) -> PointCloud4D:
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError("%s: expected header %r, got %r" % (path, CSV_HEADER, header))
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.split(",")])
    return PointCloud4D(np.array(rows, dtype=float).reshape(len(rows), 4), None)


def export_cloud_ply(cloud: PointCloud4D, path) -> None:
    """ASCII PLY with velocity as a per-vertex scalar property."""
    with open(path, "w") as fh:
        fh.write("ply\n")
        fh.write("format ascii 1.0\n")
        fh.write("comment 4D radar point cloud, velocity in m/s\n")
        fh.write("element vertex %d\n" % len(cloud))
        for name in ("x", "y", "z"):
            fh.write("property float %s\n" % name)
        fh.write("property float velocity\n")
        fh.write("end_header\n")
        for i in _export_order(cloud):
            fh.write(" ".join(repr(float(v)) for v in cloud.points[i]) + "\n")
