import numpy as np
import pytest

from isac4d.arrays import (
    SteeringAngles,
    UpaLayout,
    angles_from_direction,
    build_virtual_array,
    look_direction,
    row_col_manifolds,
    steering_matrix,
    steering_phase,
)
from isac4d.errors import ConfigError


def test_layout_validation():
    with pytest.raises(ConfigError):
        UpaLayout(0, 4)
    with pytest.raises(ConfigError):
        UpaLayout(4, 4, spacing=0.0)
    with pytest.raises(ConfigError):
        UpaLayout(4, 4, role="bistatic")
    assert UpaLayout(3, 5).size == 15


def test_angles_validation():
    with pytest.raises(ConfigError):
        SteeringAngles(0.0, 90.0)
    with pytest.raises(ConfigError):
        SteeringAngles(90.0, 180.0)
    SteeringAngles(0.5, 179.5)  # open interval, endpoints excluded


def test_virtual_array_dimensions():
    tx = UpaLayout(2, 2, spacing=4.0, role="tx")
    rx = UpaLayout(4, 4, spacing=1.0, role="rx")
    v = build_virtual_array(tx, rx)
    assert (v.rows, v.cols) == (8, 8)
    assert v.spacing == rx.spacing
    assert v.role == "virtual"

    full = build_virtual_array(
        UpaLayout(2, 2, spacing=8.0, role="tx"), UpaLayout(8, 8, spacing=1.0, role="rx")
    )
    assert (full.rows, full.cols) == (16, 16)


def test_virtual_array_rejects_gapped_grid():
    # Tx pitch must equal the Rx span per axis or the product grid has holes
    tx = UpaLayout(2, 2, spacing=5.0, role="tx")
    rx = UpaLayout(4, 4, spacing=1.0, role="rx")
    with pytest.raises(ConfigError):
        build_virtual_array(tx, rx)


def test_steering_phase_indices_are_one_based():
    with pytest.raises(ConfigError):
        steering_phase(0, 1, SteeringAngles(90, 90), 1.0, 2.0)


def test_steering_phase_frozen_values():
    # half-wavelength pitch; values derived from the direction-cosine phases
    a = SteeringAngles(60.0, 30.0)
    b = SteeringAngles(120.0, 30.0)
    v12a = steering_phase(1, 2, a, 1.0, 2.0)
    v12b = steering_phase(1, 2, b, 1.0, 2.0)
    v21a = steering_phase(2, 1, a, 1.0, 2.0)
    v21b = steering_phase(2, 1, b, 1.0, 2.0)
    assert v12a == pytest.approx(-0.7071067811865475 - 0.7071067811865476j, abs=1e-12)
    # the column term depends on sin(theta): equal under the theta mirror
    assert v12b == pytest.approx(v12a, abs=1e-12)
    # the row term depends on cos(theta): conjugate under the theta mirror
    assert v21a == pytest.approx(0.20889686677619376 - 0.977937676465678j, abs=1e-12)
    assert v21b == pytest.approx(np.conj(v21a), abs=1e-12)


def test_steering_matrix_elements_and_rank():
    layout = UpaLayout(3, 4, spacing=1.0)
    angles = SteeringAngles(75.0, 115.0)
    mat = steering_matrix(layout, angles)
    assert mat.shape == (3, 4)
    lam = 2.0 * layout.spacing  # ratio d/lambda = spacing/2
    for p in range(1, 4):
        for q in range(1, 5):
            expect = steering_phase(p, q, angles, layout.spacing, lam)
            assert mat[p - 1, q - 1] == pytest.approx(expect, abs=1e-12)
    assert np.linalg.matrix_rank(mat) == 1
    assert np.allclose(np.abs(mat), 1.0)


def test_row_col_manifolds_recover_the_matrix():
    layout = UpaLayout(4, 6, spacing=1.0)
    angles = SteeringAngles(52.0, 131.0)
    mat = steering_matrix(layout, angles)
    col, row = row_col_manifolds(layout, angles)
    assert col.shape == (4,)
    assert row.shape == (6,)
    assert np.allclose(np.outer(col, row), mat, atol=1e-12)


def test_virtual_steering_is_the_kronecker_product():
    tx = UpaLayout(2, 2, spacing=4.0, role="tx")
    rx = UpaLayout(4, 4, spacing=1.0, role="rx")
    virtual = build_virtual_array(tx, rx)
    for theta, phi in ((90.0, 90.0), (35.0, 120.0), (144.0, 61.0)):
        angles = SteeringAngles(theta, phi)
        combined = np.kron(steering_matrix(tx, angles), steering_matrix(rx, angles))
        assert np.allclose(combined, steering_matrix(virtual, angles), atol=1e-12)


def test_look_direction_is_unit_and_boresight_points_forward():
    assert np.allclose(look_direction(SteeringAngles(90.0, 90.0)), [0.0, -1.0, 0.0])
    rng = np.random.default_rng(3)
    for _ in range(50):
        theta = rng.uniform(1, 179)
        phi = rng.uniform(1, 179)
        u = look_direction(SteeringAngles(theta, phi))
        assert np.linalg.norm(u) == pytest.approx(1.0, abs=1e-12)
        assert u[1] < 0  # always into the scene half-space


def test_angles_from_direction_round_trip():
    rng = np.random.default_rng(4)
    for _ in range(200):
        theta = rng.uniform(1, 179)
        phi = rng.uniform(1, 179)
        if abs(phi - 90.0) < 0.01:
            continue  # level direction: pitch quadrant undefined by design
        back = angles_from_direction(look_direction(SteeringAngles(theta, phi)))
        assert back.theta_deg == pytest.approx(theta, abs=1e-9)
        assert back.phi_deg == pytest.approx(phi, abs=1e-9)


def test_angles_from_direction_boresight_and_errors():
    b = angles_from_direction(np.array([0.0, -1.0, 0.0]))
    assert (b.theta_deg, b.phi_deg) == (90.0, 90.0)
    with pytest.raises(ConfigError):
        angles_from_direction(np.zeros(3))
    with pytest.raises(ConfigError):
        angles_from_direction(np.array([0.0, 1.0, 0.0]))  # behind the array
    with pytest.raises(ConfigError):
        angles_from_direction(np.array([0.6, -0.8, 0.0]))  # level, quadrant undefined
