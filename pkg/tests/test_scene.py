import numpy as np
import pytest

from isac4d.arrays import SteeringAngles, look_direction
from isac4d.errors import SceneError
from isac4d.scene import (
    DEFAULT_BS_POSITION,
    Scatterer,
    Scene,
    generate_demo_scene,
    load_scene,
    save_scene,
    scatterer_truth,
)


def test_scene_accessors():
    sc = Scene((Scatterer(1, 2, 3, 4.0), Scatterer(5, 6, 7, -8.0, gain=2.0)))
    assert sc.positions.shape == (2, 3)
    assert sc.velocities.tolist() == [4.0, -8.0]
    assert sc.bs_position == DEFAULT_BS_POSITION
    assert sc.scatterers[0].gain == 1.0


def test_scene_csv_round_trip(tmp_path):
    sc = Scene(
        (
            Scatterer(1.25, 2.5, 3.75, 4.0),
            Scatterer(-5.0, 60.0, 0.5, -8.0, gain=1.4),
        )
    )
    path = tmp_path / "scene.csv"
    save_scene(sc, path)
    back = load_scene(path)
    assert np.allclose(back.positions, sc.positions)
    assert np.allclose(back.velocities, sc.velocities)
    assert [s.gain for s in back.scatterers] == [1.0, 1.4]


def test_load_scene_defaults_and_comments(tmp_path):
    path = tmp_path / "scene.csv"
    path.write_text("# x,y,z,v\n\n1,2,3,4\n5,6,7,8,1.5\n")
    sc = load_scene(path)
    assert len(sc.scatterers) == 2
    assert sc.scatterers[0].gain == 1.0  # four columns: gain defaulted
    assert sc.scatterers[1].gain == 1.5


@pytest.mark.parametrize(
    "row, fragment",
    [
        ("1,2,3", ":3:"),  # too few fields, reported with its line number
        ("1,2,three,4", "non-numeric"),
        ("1,2,3,4,0", "gain must be positive"),
        ("1,2,3,4,5,6", ":3:"),
    ],
)
def test_load_scene_errors(tmp_path, row, fragment):
    path = tmp_path / "scene.csv"
    path.write_text("# header\n1,2,3,4\n%s\n" % row)
    with pytest.raises(SceneError, match=fragment):
        load_scene(path)


def test_truth_boresight_example():
    sc = Scene((Scatterer(14.0, 0.0, 20.0, 0.0),), bs_position=(14.0, 100.0, 20.0))
    (truth,) = scatterer_truth(sc)
    assert truth.range_m == pytest.approx(100.0, abs=1e-12)
    assert truth.angles.theta_deg == pytest.approx(90.0)
    assert truth.angles.phi_deg == pytest.approx(90.0)
    assert truth.velocity_ms == 0.0
    assert np.allclose(truth.position, (14.0, 0.0, 20.0))


def test_truth_inverts_look_direction():
    bs = np.array(DEFAULT_BS_POSITION)
    rng = np.random.default_rng(11)
    for _ in range(50):
        angles = SteeringAngles(rng.uniform(10, 170), rng.uniform(95, 170))
        r = rng.uniform(5, 300)
        pos = bs + r * look_direction(angles)
        sc = Scene((Scatterer(pos[0], pos[1], pos[2], 1.0),))
        (truth,) = scatterer_truth(sc)
        assert truth.range_m == pytest.approx(r, abs=1e-9)
        assert truth.angles.theta_deg == pytest.approx(angles.theta_deg, abs=1e-9)
        assert truth.angles.phi_deg == pytest.approx(angles.phi_deg, abs=1e-9)


def test_truth_gain_modes():
    pos = np.array(DEFAULT_BS_POSITION) + 50.0 * look_direction(SteeringAngles(80, 120))
    sc = Scene((Scatterer(pos[0], pos[1], pos[2], 0.0, gain=2.0),))
    (fixed,) = scatterer_truth(sc, gain_mode="fixed")
    (falloff,) = scatterer_truth(sc, gain_mode="inverse_square")
    assert fixed.gain == 2.0
    assert falloff.gain == pytest.approx(2.0 * (100.0 / 50.0) ** 2)
    with pytest.raises(SceneError):
        scatterer_truth(sc, gain_mode="free_space")


def test_truth_rejects_bad_geometry():
    with pytest.raises(SceneError, match="coincides"):
        scatterer_truth(Scene((Scatterer(*DEFAULT_BS_POSITION, 0.0),)))
    behind = Scene((Scatterer(14.0, 200.0, 20.0, 0.0),))
    with pytest.raises(SceneError):
        scatterer_truth(behind)
    far = Scene((Scatterer(14.0, -900.0, 20.0, 0.0),))
    with pytest.raises(SceneError):
        scatterer_truth(far, max_range_m=624.0)


def test_demo_scene_is_deterministic():
    a = generate_demo_scene()
    b = generate_demo_scene()
    assert a == b
    assert len(a.scatterers) == 15
    assert a.bs_position == DEFAULT_BS_POSITION


def test_demo_scene_class_structure():
    sc = generate_demo_scene()
    speeds = sorted(set(s.velocity for s in sc.scatterers))
    assert speeds == [-10.0, -2.0, 0.0, 2.0, 10.0]  # vehicles, pedestrians, static
    truths = scatterer_truth(sc)
    assert all(t.range_m < 125.0 for t in truths)
    # five well-separated clusters, each a handful of contour points
    ranges = sorted(set(round(t.range_m, 3) for t in truths))
    assert len(ranges) == 5
    assert min(np.diff(ranges)) > 19.0
    # the static cluster is the bright one
    for s in sc.scatterers:
        assert (s.gain > 1.0) == (s.velocity == 0.0)
