import math

import numpy as np
import pytest

from isac4d.metrics import (
    DEFAULT_MATCH_RADIUS_M,
    bounding_diagonal,
    deviation_report,
    hausdorff_2d,
    overall_deviation,
    spatial_deviation,
    velocity_nmse,
)
from isac4d.pointcloud import PointCloud4D
from isac4d.scene import Scatterer, Scene


def _cloud(rows):
    return PointCloud4D(np.asarray(rows, dtype=float).reshape(-1, 4))


def _scene(rows):
    return Scene(tuple(Scatterer(*row) for row in rows))


def naive_hausdorff(a, b):
    def directed(p, q):
        return max(
            min(math.sqrt((x1 - x2) ** 2 + (y1 - y2) ** 2) for x2, y2 in q)
            for x1, y1 in p
        )

    return max(directed(a, b), directed(b, a))


def test_hausdorff_frozen_example():
    assert hausdorff_2d([[0.0, 0.0]], [[3.0, 4.0]]) == 5.0


def test_hausdorff_matches_double_loop_exactly():
    rng = np.random.default_rng(13)
    for _ in range(5):
        a = rng.normal(size=(50, 2)) * 10
        b = rng.normal(size=(40, 2)) * 10
        assert hausdorff_2d(a, b) == naive_hausdorff(a.tolist(), b.tolist())


def test_hausdorff_properties():
    rng = np.random.default_rng(14)
    a = rng.normal(size=(20, 2))
    assert hausdorff_2d(a, a) == 0.0
    b = rng.normal(size=(30, 2))
    assert hausdorff_2d(a, b) == hausdorff_2d(b, a)
    with pytest.raises(ValueError):
        hausdorff_2d(np.zeros((0, 2)), a)


def test_bounding_diagonal_floor():
    assert bounding_diagonal(np.array([[0.0, 0.0, 0.0], [3.0, 4.0, 0.0]])) == 5.0
    assert bounding_diagonal(np.array([[1.0, 1.0, 1.0]])) == 1.0  # floored


def test_spatial_deviation_perfect_match_is_zero():
    truth = _scene([(0, 10, 0, 1), (20, 30, 2, 1), (5, 60, 1, 1)])
    est = _cloud([(0, 10, 0, 1), (20, 30, 2, 1), (5, 60, 1, 1)])
    value, parts = spatial_deviation(est, truth)
    assert value == pytest.approx(0.0, abs=1e-12)
    assert parts["density_diff"] == 0.0
    assert parts["hausdorff_xy_m"] == 0.0


def test_spatial_deviation_empty_estimate_saturates():
    truth = _scene([(0, 10, 0, 1), (20, 30, 2, 1)])
    value, parts = spatial_deviation(_cloud(np.zeros((0, 4))), truth)
    assert value == 2.0
    assert parts["density_diff"] == 1.0
    assert parts["hausdorff_xy_m"] == bounding_diagonal(truth.positions)


def test_spatial_deviation_density_term():
    # same geometry, half the points: density contributes |1-2|/2
    truth = _scene([(0, 10, 0, 1), (0, 10, 0, 1)])
    est = _cloud([(0, 10, 0, 1)])
    value, parts = spatial_deviation(est, truth)
    assert parts["density_diff"] == 0.5
    assert value == pytest.approx(0.5)


def test_spatial_deviation_translation():
    # points spaced far apart so a 1 m x-shift moves every projection
    # except y-z by exactly 1 m
    rows = [(0, 10, 0, 0), (10, 40, 3, 0), (25, 80, 1, 0)]
    truth = _scene(rows)
    est = _cloud([(x + 1.0, y, z, v) for x, y, z, v in rows])
    _, parts = spatial_deviation(est, truth)
    assert parts["hausdorff_xy_m"] == pytest.approx(1.0)
    assert parts["hausdorff_xz_m"] == pytest.approx(1.0)
    assert parts["hausdorff_yz_m"] == pytest.approx(0.0)
    assert parts["density_diff"] == 0.0


def test_velocity_nmse_matched_pair():
    truth = _scene([(0, 10, 0, 10.0)])
    est = _cloud([(0.5, 10, 0, 8.0)])  # within the match radius
    assert velocity_nmse(est, truth) == pytest.approx((10.0 - 8.0) ** 2 / 10.0**2)


def test_velocity_nmse_sentinels_and_fallback():
    truth = _scene([(0, 10, 0, 10.0)])
    far = _cloud([(50, 90, 0, 8.0)])  # nothing within the radius
    assert velocity_nmse(far, truth) == 1.0
    assert velocity_nmse(_cloud(np.zeros((0, 4))), truth) == 1.0
    static_truth = _scene([(0, 10, 0, 0.0)])
    est = _cloud([(0, 10, 0, 0.5)])
    # all-static truth: plain mean square error, not normalized
    assert velocity_nmse(est, static_truth) == pytest.approx(0.25)
    assert DEFAULT_MATCH_RADIUS_M == 2.5


def test_overall_deviation_caps_components():
    assert overall_deviation(2.0, 3.0) == 1.0
    assert overall_deviation(0.4, 0.2) == pytest.approx(0.3)
    assert overall_deviation(0.0, 0.0) == 0.0


def test_deviation_report_composition():
    truth = _scene([(0, 10, 0, 10.0), (20, 30, 2, -2.0)])
    est = _cloud([(0, 10, 0, 9.0), (20, 30, 2, -2.0)])
    rep = deviation_report(est, truth)
    assert rep.velocity_nmse == pytest.approx(1.0 / 104.0)
    assert rep.kinematic_deviation == pytest.approx(rep.velocity_nmse)
    assert rep.spatial_deviation == pytest.approx(0.0, abs=1e-12)
    assert rep.overall == pytest.approx(0.5 * rep.kinematic_deviation)
    d = rep.as_dict()
    assert d["overall_deviation"] == rep.overall
    assert set(d) == {
        "hausdorff_xy_m",
        "hausdorff_xz_m",
        "hausdorff_yz_m",
        "density_diff",
        "velocity_nmse",
        "spatial_deviation",
        "kinematic_deviation",
        "overall_deviation",
    }


def test_deviation_grows_with_error():
    truth = _scene([(0, 10, 0, 10.0), (20, 30, 2, -2.0), (5, 60, 1, 0.0)])
    close = _cloud([(0.2, 10, 0, 9.5), (20, 30.2, 2, -2.2), (5, 60, 1.2, 0.3)])
    worse = _cloud([(2.0, 12, 1, 4.0), (23, 33, 0, -8.0), (9, 55, 3, 6.0)])
    assert deviation_report(close, truth).overall < deviation_report(worse, truth).overall
