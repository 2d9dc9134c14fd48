import numpy as np
import pytest

from isac4d.arrays import SteeringAngles, UpaLayout, build_virtual_array, steering_matrix
from isac4d.waveform import OfdmConfig


@pytest.fixture(scope="session")
def ofdm_test():
    """Reduced numerology used throughout the suite: 256 subcarriers, 4 slots."""
    return OfdmConfig(n_subcarriers=256, n_slots=4)


@pytest.fixture(scope="session")
def layout_test():
    """8x8 virtual aperture: Tx 2x2 at 4 half-wavelengths over Rx 4x4 at 1."""
    tx = UpaLayout(2, 2, spacing=4.0, role="tx")
    rx = UpaLayout(4, 4, spacing=1.0, role="rx")
    return build_virtual_array(tx, rx)


@pytest.fixture(scope="session")
def layout_full():
    """16x16 virtual aperture of the full configuration."""
    tx = UpaLayout(2, 2, spacing=8.0, role="tx")
    rx = UpaLayout(8, 8, spacing=1.0, role="rx")
    return build_virtual_array(tx, rx)


@pytest.fixture
def make_cell():
    """Builds a noisy sum of steering matrices, the input of the DoA stages."""

    def build(layout, angle_pairs, amplitudes=None, noise=0.0, seed=0):
        rng = np.random.default_rng(seed)
        if amplitudes is None:
            amplitudes = [1.0] * len(angle_pairs)
        cell = np.zeros((layout.rows, layout.cols), dtype=complex)
        for (theta, phi), amp in zip(angle_pairs, amplitudes):
            cell += amp * steering_matrix(layout, SteeringAngles(theta, phi))
        if noise > 0.0:
            cell += noise * (
                rng.standard_normal(cell.shape) + 1j * rng.standard_normal(cell.shape)
            )
        return cell

    return build
