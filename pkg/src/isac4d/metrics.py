"""Imaging deviation: projection Hausdorff terms, density, velocity NMSE.

spatial = mean of the three axis-plane Hausdorff distances, each normalized
by the truth bounding-box diagonal (floored at 1 m), plus the relative
point-count difference. kinematic = velocity NMSE over nearest-neighbor
matches within a radius. overall = equal-weight sum of both after clamping
each to [0, 1]; an empty estimate saturates everything, so overall = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .pointcloud import PointCloud4D
from .scene import Scene

# wide enough to absorb the range quantization of the coarse test grid
DEFAULT_MATCH_RADIUS_M = 2.5
MIN_DIAGONAL_M = 1.0

_PROJECTIONS = (("xy", (0, 1)), ("xz", (0, 2)), ("yz", (1, 2)))


@dataclass(frozen=True)
class DeviationReport:
    hausdorff_xy_m: float
    hausdorff_xz_m: float
    hausdorff_yz_m: float
    density_diff: float
    velocity_nmse: float
    spatial_deviation: float
    kinematic_deviation: float
    overall: float

    def as_dict(self) -> dict:
        return {
            "hausdorff_xy_m": self.hausdorff_xy_m,
            "hausdorff_xz_m": self.hausdorff_xz_m,
            "hausdorff_yz_m": self.hausdorff_yz_m,
            "density_diff": self.density_diff,
            "velocity_nmse": self.velocity_nmse,
            "spatial_deviation": self.spatial_deviation,
            "kinematic_deviation": self.kinematic_deviation,
            "overall_deviation": self.overall,
        }


def hausdorff_2d(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two nonempty 2D point sets."""
    a = np.asarray(a, dtype=float).reshape(-1, 2)
    b = np.asarray(b, dtype=float).reshape(-1, 2)
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise ValueError("hausdorff_2d needs nonempty point sets")
    d = cdist(a, b)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def bounding_diagonal(points: np.ndarray, floor_m: float = MIN_DIAGONAL_M) -> float:
    points = np.asarray(points, dtype=float)
    extent = points.max(axis=0) - points.min(axis=0)
    return max(float(np.linalg.norm(extent)), floor_m)


def spatial_deviation(est: PointCloud4D, truth: Scene) -> tuple[float, dict]:
    """Normalized projection-Hausdorff mean plus density difference.

    An empty estimate saturates: every Hausdorff term reports the
    normalization diagonal and the density term is 1.
    """
    truth_pos = truth.positions
    diag = bounding_diagonal(truth_pos)
    n_truth = truth_pos.shape[0]
    if len(est) == 0:
        components = {"hausdorff_%s_m" % name: diag for name, _ in _PROJECTIONS}
        components["density_diff"] = 1.0
        return 2.0, components  # normalized hausdorff mean 1 + density 1

    components = {}
    normalized = []
    for name, cols in _PROJECTIONS:
        h = hausdorff_2d(est.positions[:, cols], truth_pos[:, cols])
        components["hausdorff_%s_m" % name] = h
        normalized.append(h / diag)
    density = abs(len(est) - n_truth) / n_truth
    components["density_diff"] = density
    return float(np.mean(normalized) + density), components


def velocity_nmse(
    est: PointCloud4D, truth: Scene, match_radius_m: float = DEFAULT_MATCH_RADIUS_M
) -> float:
    """NMSE of matched velocities; 1.0 when nothing matches.

    Each estimated point is paired with its nearest truth scatterer within
    the radius. Normalization is the matched truth velocity power; when the
    matched truths are all static this degrades to a plain MSE.
    """
    if len(est) == 0:
        return 1.0
    d = cdist(est.positions, truth.positions)
    nearest = d.argmin(axis=1)
    in_range = d[np.arange(len(est)), nearest] <= match_radius_m
    if not np.any(in_range):
        return 1.0
    v_est = est.velocities[in_range]
    v_true = truth.velocities[nearest[in_range]]
    err = float(np.sum((v_est - v_true) ** 2))
    norm = float(np.sum(v_true**2))
    if norm > 0.0:
        return err / norm
    return err / v_est.size


def overall_deviation(spatial: float, kinematic: float) -> float:
    """Equal-weight combination, each component clamped to [0, 1]."""
    return 0.5 * min(spatial, 1.0) + 0.5 * min(kinematic, 1.0)


def deviation_report(
    est: PointCloud4D, truth: Scene, match_radius_m: float = DEFAULT_MATCH_RADIUS_M
) -> DeviationReport:
    spatial, parts = spatial_deviation(est, truth)
    nmse = velocity_nmse(est, truth, match_radius_m)
    return DeviationReport(
        hausdorff_xy_m=parts["hausdorff_xy_m"],
        hausdorff_xz_m=parts["hausdorff_xz_m"],
        hausdorff_yz_m=parts["hausdorff_yz_m"],
        density_diff=parts["density_diff"],
        velocity_nmse=nmse,
        spatial_deviation=spatial,
        kinematic_deviation=min(nmse, 1.0),
        overall=overall_deviation(spatial, nmse),
    )
