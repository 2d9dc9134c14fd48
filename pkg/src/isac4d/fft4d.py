"""FFT-based angle estimation: the resolution baseline for the MUSIC path.

The 2D DFT of a cell manifold peaks at the spatial frequencies
u = cos(theta)cos(phi) (row axis) and w = sin(theta)cos(phi) (column axis);
with the steering sign convention the bin-to-cosine map is
u = -2 * fftfreq / spacing. Bins outside the unit disk u^2 + w^2 <= 1 are
non-physical and dropped. Together with the shared RDM front end this forms
the comparison imager.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import SteeringAngles, UpaLayout
from .cfar import CfarConfig, ca_cfar_2d, peak_cells
from .pointcloud import Detection, PointCloud4D, reconstruct
from .rangedoppler import (
    bin_to_physical,
    detect_rdm_cells,
    extract_cell_manifold,
    integrate_elements,
)
from .scene import DEFAULT_BS_POSITION
from .waveform import OfdmConfig

DEFAULT_PAD = 4

SPECTRUM_CFAR_DEFAULT = CfarConfig(window=9, guard=2, p_fa=1e-3)


@dataclass(frozen=True)
class AngleSpectrumFft:
    """Zero-padded 2D DFT magnitudes with their spatial-frequency axes."""

    values: np.ndarray
    u_axis: np.ndarray
    w_axis: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.u_axis.size, self.w_axis.size):
            raise ValueError("spectrum shape does not match axes")


def fft_angle_spectrum(cell: np.ndarray, spacing: float = 1.0, pad: int = DEFAULT_PAD) -> AngleSpectrumFft:
    cell = np.asarray(cell)
    if cell.ndim != 2:
        raise ValueError("cell manifold must be 2D")
    if pad < 1:
        raise ValueError("pad factor must be >= 1")
    shape = (cell.shape[0] * pad, cell.shape[1] * pad)
    values = np.abs(np.fft.fft2(cell, s=shape))
    u_axis = -2.0 * np.fft.fftfreq(shape[0]) / spacing
    w_axis = -2.0 * np.fft.fftfreq(shape[1]) / spacing
    return AngleSpectrumFft(values, u_axis, w_axis)


def angles_from_cosines(u: float, w: float) -> SteeringAngles | None:
    """Invert (u, w) to (theta, phi); None outside the unit disk.

    sin(theta) > 0 on (0, 180) forces sign(cos(phi)) = sign(w); phi then
    lies in (0, 180) with sin(phi) >= 0 and theta follows from atan2.
    """
    rho_sq = u * u + w * w
    if rho_sq > 1.0:
        return None
    rho = math.sqrt(rho_sq)
    if rho < 1e-12:
        return SteeringAngles(90.0, 90.0)
    cos_phi = math.copysign(rho, w)
    phi = math.degrees(math.acos(cos_phi))
    theta = math.degrees(math.atan2(w / cos_phi, u / cos_phi))
    if not (0.0 < theta < 180.0 and 0.0 < phi < 180.0):
        return None
    return SteeringAngles(theta, phi)


def cell_detections_fft(
    cell: np.ndarray,
    alpha: int,
    beta: int,
    cfg: OfdmConfig,
    spacing: float = 1.0,
    pad: int = DEFAULT_PAD,
    spectrum_cfar: CfarConfig = SPECTRUM_CFAR_DEFAULT,
) -> list[Detection]:
    """All angle detections of one RDM cell under the FFT estimator."""
    spectrum = fft_angle_spectrum(cell, spacing, pad)
    mask = ca_cfar_2d(spectrum.values, spectrum_cfar)
    range_m, velocity_ms = bin_to_physical(alpha, beta, cfg)
    out = []
    for i, j in peak_cells(mask, spectrum.values):
        angles = angles_from_cosines(float(spectrum.u_axis[i]), float(spectrum.w_axis[j]))
        if angles is None:
            continue
        out.append(
            Detection(range_m, velocity_ms, angles, alpha, beta, float(spectrum.values[i, j]))
        )
    return out


def fft4d_image(
    s_g: np.ndarray,
    cfg: OfdmConfig,
    layout: UpaLayout,
    rdm_cfar: CfarConfig,
    spectrum_cfar: CfarConfig = SPECTRUM_CFAR_DEFAULT,
    pad: int = DEFAULT_PAD,
    bs_position=DEFAULT_BS_POSITION,
    rdm_window: str | None = "hann",
) -> PointCloud4D:
    """Standalone baseline imager: RDM detection, per-cell FFT DoA, rebuild.

    Cells at zero range (the DC range bin) are skipped; they sit on the
    transmitter itself. Detection runs on a windowed magnitude by default,
    for the same leakage reasons as the pipeline front end.
    """
    det = integrate_elements(s_g, cfg, window=rdm_window)
    _, cells = detect_rdm_cells(det.magnitude, rdm_cfar)
    detections = []
    for alpha, beta in cells:
        cell = extract_cell_manifold(s_g, alpha, beta)
        detections.extend(
            cell_detections_fft(cell, alpha, beta, cfg, layout.spacing, pad, spectrum_cfar)
        )
    return reconstruct(detections, bs_position)
