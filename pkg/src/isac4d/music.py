"""Smoothed 2D MUSIC direction finding on a detected range-Doppler cell.

A cell manifold is the (rows, cols) complex matrix of one RDM cell across
the virtual array. Its columns act as snapshots of the row-axis array and
vice versa; each axis is decorrelated by forward/backward spatial smoothing,
eigendecomposed, and scanned with 1D subarray steering vectors over a common
2D angle grid. Both axis spectra depend on both angles (through
cos(theta)cos(phi) and sin(theta)cos(phi)), so the Hadamard product of the
max-normalized spectra localizes the pair; candidates are the local maxima
inside the 2D CA-CFAR mask, beam-validated, capped at the estimated source
count and refined by quadratic interpolation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .arrays import SteeringAngles
from .cfar import CfarConfig, ca_cfar_1d, ca_cfar_2d

SPECTRUM_CFAR_DEFAULT = CfarConfig(window=9, guard=2, p_fa=1e-3)
EIGEN_CFAR_DEFAULT = CfarConfig(window=9, guard=1, p_fa=1e-3)
BEAM_GATE_DEFAULT = 0.5

NULL_FLOOR_DEFAULT = 1e-4

_DENOM_FLOOR = 1e-15


@dataclass(frozen=True)
class SmoothingConfig:
    """Forward/backward spatial smoothing: subarray length and backward flag."""

    subarray_len: int = 8
    use_backward: bool = True

    def __post_init__(self):
        if self.subarray_len < 1:
            raise ValueError("subarray_len must be >= 1")


@dataclass(frozen=True)
class PseudoSpectrum:
    values: np.ndarray
    theta_deg: np.ndarray
    phi_deg: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.theta_deg.size, self.phi_deg.size):
            raise ValueError("spectrum shape does not match angle grids")


@dataclass(frozen=True)
class ScanGrid:
    """Angle grid plus precomputed subarray manifolds, built once per run.

    row_manifold scans the row-axis direction cosine cos(theta)cos(phi),
    col_manifold the column-axis sin(theta)cos(phi); both are
    (subarray_len, n_theta, n_phi) complex tensors.
    """

    theta_deg: np.ndarray
    phi_deg: np.ndarray
    row_manifold: np.ndarray
    col_manifold: np.ndarray
    spacing: float = 1.0

    @property
    def step_deg(self) -> float:
        return float(self.theta_deg[1] - self.theta_deg[0])


@dataclass(frozen=True)
class DoaResult:
    angles: tuple[SteeringAngles, ...]
    peaks: tuple[float, ...]  # combined-spectrum value per angle pair
    spectrum: PseudoSpectrum
    n_sources: int


def angle_grid(step_deg: float = 0.5) -> np.ndarray:
    """Grid over the open interval (0, 180), endpoints excluded."""
    n = round(180.0 / step_deg)
    return np.arange(1, n) * step_deg


def scan_grid(subarray_len: int, spacing: float = 1.0, step_deg: float = 0.5) -> ScanGrid:
    theta = angle_grid(step_deg)
    phi = angle_grid(step_deg)
    cos_phi = np.cos(np.radians(phi))
    u_row = np.cos(np.radians(theta))[:, None] * cos_phi[None, :]
    u_col = np.sin(np.radians(theta))[:, None] * cos_phi[None, :]
    sensor = np.arange(subarray_len)[:, None, None]
    ratio = 0.5 * spacing  # element pitch over wavelength
    row_manifold = np.exp(-2j * np.pi * ratio * sensor * u_row[None])
    col_manifold = np.exp(-2j * np.pi * ratio * sensor * u_col[None])
    return ScanGrid(theta, phi, row_manifold, col_manifold, spacing)


def smooth_covariance(snapshots: np.ndarray, cfg: SmoothingConfig) -> np.ndarray:
    """Forward/backward smoothed covariance of a (sensors, snapshots) matrix."""
    x = np.asarray(snapshots)
    if x.ndim != 2:
        raise ValueError("expected a (sensors, snapshots) matrix")
    sensors, n_snap = x.shape
    l_sub = cfg.subarray_len
    if l_sub > sensors:
        raise ValueError("subarray_len %d exceeds sensor count %d" % (l_sub, sensors))
    n_sub = sensors - l_sub + 1
    r_f = np.zeros((l_sub, l_sub), dtype=complex)
    for start in range(n_sub):
        sub = x[start : start + l_sub]
        r_f += sub @ sub.conj().T
    r_f /= n_sub * n_snap
    if not cfg.use_backward:
        return r_f
    exchange = np.eye(l_sub)[::-1]
    r_b = exchange @ r_f.conj() @ exchange
    return 0.5 * (r_f + r_b)


def noise_subspace(r_x: np.ndarray, cfar_cfg: CfarConfig = EIGEN_CFAR_DEFAULT) -> np.ndarray:
    """Eigenvectors of the smallest L - N_x eigenvalues, N_x CFAR-counted.

    The source count comes from a 1D CA-CFAR pass over the descending
    eigenvalues, clamped to [1, L-1] so the noise subspace is never empty.
    """
    r = np.asarray(r_x)
    l_dim = r.shape[0]
    if not np.all(np.isfinite(r)):
        warnings.warn("degenerate covariance matrix; forcing a single source")
        r = np.where(np.isfinite(r), r, 0.0)
        eigvals, eigvecs = np.linalg.eigh(r)
        return eigvecs[:, : l_dim - 1]
    eigvals, eigvecs = np.linalg.eigh(r)  # ascending
    n_x = ca_cfar_1d(eigvals[::-1], cfar_cfg)
    n_x = min(max(n_x, 1), l_dim - 1)
    return eigvecs[:, : l_dim - n_x]


def pseudo_spectrum(noise_basis: np.ndarray, manifold: np.ndarray) -> np.ndarray:
    """S = 1 / ||U_N^H a||^2 over the manifold's trailing grid axes."""
    proj = np.tensordot(noise_basis.conj().T, manifold, axes=1)
    denom = np.sum(np.abs(proj) ** 2, axis=0)
    return 1.0 / np.maximum(denom, _DENOM_FLOOR)


def _beam_score(cell: np.ndarray, theta_deg: float, phi_deg: float, spacing: float) -> float:
    """Full-aperture conventional beamformer response |a_p^H cell a_q*|.

    The product pseudo-spectrum carries ridges along the iso-cosine curves
    of each 1D factor; a purely local detector fires on them because they
    are genuinely above their local floor. The beam score separates true
    angle pairs (full array gain in both axes) from ridge points (at least
    one axis far off its beam, losing a sidelobe factor), so candidates are
    gated on it relative to the best candidate of the cell.
    """
    ratio = 0.5 * spacing
    u_row = math.cos(math.radians(theta_deg)) * math.cos(math.radians(phi_deg))
    u_col = math.sin(math.radians(theta_deg)) * math.cos(math.radians(phi_deg))
    a_row = np.exp(-2j * np.pi * ratio * np.arange(cell.shape[0]) * u_row)
    a_col = np.exp(-2j * np.pi * ratio * np.arange(cell.shape[1]) * u_col)
    return float(np.abs(a_row.conj() @ cell @ a_col.conj()))


_LOCAL_MAX_RADIUS = 2


def _detected_local_maxima(values: np.ndarray, detected: np.ndarray, radius: int = _LOCAL_MAX_RADIUS):
    """Detected cells that are also maxima of their (2r+1)^2 neighborhood.

    One CFAR blob can cover several genuine peaks: two targets sharing an
    iso-cosine ridge stay connected through an above-threshold saddle, so
    keeping one cell per blob would drop all but the strongest. Conversely,
    ridge flanks inside a blob are not peaks at all. Peak candidates are
    therefore the local maxima within the mask, not the blob maxima.
    """
    neighborhood = ndimage.maximum_filter(values, size=2 * radius + 1, mode="nearest")
    keep = detected & (values >= neighborhood)
    return [(int(i), int(j)) for i, j in np.argwhere(keep)]


def _refine_peak(log_map: np.ndarray, i: int, j: int) -> tuple[float, float]:
    """Quadratic 3x3 sub-bin offsets, clamped to half a bin; 0 at borders."""

    def axis_offset(fm, f0, fp):
        denom = fm - 2.0 * f0 + fp
        if denom >= 0.0:  # not concave, keep the grid point
            return 0.0
        return float(np.clip(0.5 * (fm - fp) / denom, -0.5, 0.5))

    di = dj = 0.0
    if 0 < i < log_map.shape[0] - 1:
        di = axis_offset(log_map[i - 1, j], log_map[i, j], log_map[i + 1, j])
    if 0 < j < log_map.shape[1] - 1:
        dj = axis_offset(log_map[i, j - 1], log_map[i, j], log_map[i, j + 1])
    return di, dj


def estimate_doas(
    cell: np.ndarray,
    smoothing: SmoothingConfig,
    scan: ScanGrid,
    spectrum_cfar: CfarConfig = SPECTRUM_CFAR_DEFAULT,
    eigen_cfar: CfarConfig = EIGEN_CFAR_DEFAULT,
    beam_gate: float = BEAM_GATE_DEFAULT,
    null_floor: float = NULL_FLOOR_DEFAULT,
) -> DoaResult:
    """Angle pairs present in one cell manifold.

    cell is the (rows, cols) matrix from extract_cell_manifold; scan must be
    built with the matching subarray length and element spacing. Candidates
    come from 2D CA-CFAR on the Hadamard product of the two axis spectra;
    they survive only as genuine local maxima of the product map with a
    beamformer score within beam_gate of the cell's best, and the strongest
    n_sources of them (eigenvalue count, the larger of the two axes) are
    returned, strongest first.

    null_floor regularizes each axis spectrum as 1/(denominator + floor*L):
    at high SNR the raw nulls are far narrower than the scan grid, so no
    grid point samples the true peak and the product argmax is decided by
    accidental grid alignments along the iso-cosine curves. Saturating the
    null depth bounds each factor's dynamic range (40 dB at the default),
    which keeps the intersection dominant and the peak wide enough for the
    quadratic refinement, while leaving each factor's argmax untouched.
    """
    cell = np.asarray(cell)
    if cell.ndim != 2:
        raise ValueError("cell manifold must be 2D")

    spectra = []
    n_sources = 1
    for snapshots, manifold in (
        (cell, scan.row_manifold),  # columns as snapshots of the row axis
        (cell.T, scan.col_manifold),
    ):
        r_x = smooth_covariance(snapshots, smoothing)
        basis = noise_subspace(r_x, eigen_cfar)
        n_sources = max(n_sources, basis.shape[0] - basis.shape[1])
        s = pseudo_spectrum(basis, manifold)
        if null_floor > 0.0:
            s = 1.0 / (1.0 / s + null_floor * basis.shape[0])
        spectra.append(s / s.max())
    combined = spectra[0] * spectra[1]

    mask = ca_cfar_2d(combined, spectrum_cfar)
    peaks = _detected_local_maxima(combined, mask.detected)
    scores = [
        _beam_score(cell, float(scan.theta_deg[i]), float(scan.phi_deg[j]), scan.spacing)
        for i, j in peaks
    ]
    best = max(scores, default=0.0)
    survivors = [
        (float(combined[i, j]), i, j)
        for (i, j), score in zip(peaks, scores)
        if best > 0.0 and score >= beam_gate * best
    ]
    survivors.sort(key=lambda t: (-t[0], t[1], t[2]))

    log_map = np.log10(np.maximum(combined, _DENOM_FLOOR))
    step = scan.step_deg
    angles = []
    peak_values = []
    for value, i, j in survivors[:n_sources]:
        di, dj = _refine_peak(log_map, i, j)
        angles.append(
            SteeringAngles(
                float(scan.theta_deg[i] + di * step), float(scan.phi_deg[j] + dj * step)
            )
        )
        peak_values.append(value)
    spectrum_out = PseudoSpectrum(combined, scan.theta_deg, scan.phi_deg)
    return DoaResult(tuple(angles), tuple(peak_values), spectrum_out, n_sources)


def export_spectrum_csv(spectrum: PseudoSpectrum, path) -> None:
    """CSV matrix: phi axis header row, then theta value + spectrum row."""
    with open(path, "w") as fh:
        fh.write("phi_deg," + ",".join(repr(float(p)) for p in spectrum.phi_deg) + "\n")
        for i, theta in enumerate(spectrum.theta_deg):
            row = ",".join(repr(float(x)) for x in spectrum.values[i])
            fh.write(repr(float(theta)) + "," + row + "\n")
