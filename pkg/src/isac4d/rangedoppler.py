"""Range-Doppler map formation.

The received grid is divided element-wise by the known transmitted symbols,
then an IDFT along the subcarrier axis (scaled 1/n_c) resolves range and an
unnormalized DFT along the symbol axis resolves Doppler. Peak bin laws:

    alpha = floor(2 * R * delta_f * n_c / c)
    beta  = floor(2 * v * f_c * T_sym * n_sym / c)  mod n_sym

Doppler bins are kept in natural FFT order internally; negative velocities
live in the upper half and are unwrapped by bin_to_physical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cfar import CfarConfig, DetectionMask, osca_cfar_2d, peak_cells
from .channel import VirtualArraySnapshot
from .constants import C0
from .waveform import OfdmConfig, SymbolGrid


@dataclass(frozen=True)
class Rdm:
    """Range-Doppler map.

    magnitude is always present. complex_map is kept for single-element maps
    and is None for non-coherently integrated maps, where phase is meaningless.
    range_bin_m / velocity_bin_ms are the physical widths of one bin.
    """

    magnitude: np.ndarray
    complex_map: np.ndarray | None
    range_bin_m: float
    velocity_bin_ms: float

    def __post_init__(self):
        if self.complex_map is not None:
            if self.complex_map.shape != self.magnitude.shape:
                raise ValueError("complex_map shape does not match magnitude")

    @property
    def range_axis_m(self) -> np.ndarray:
        return np.arange(self.magnitude.shape[0]) * self.range_bin_m

    @property
    def velocity_axis_ms(self) -> np.ndarray:
        """Signed velocity per Doppler bin, natural (unshifted) order."""
        n_sym = self.magnitude.shape[1]
        beta = np.arange(n_sym)
        signed = np.where(beta < n_sym / 2, beta, beta - n_sym)
        return signed * self.velocity_bin_ms


def divide_grid(rx: VirtualArraySnapshot, grid: SymbolGrid) -> np.ndarray:
    """Remove the known transmitted symbols: s_g = rx / tx per element."""
    if rx.values.shape[:2] != grid.values.shape:
        raise ValueError(
            "snapshot grid %s does not match symbol grid %s"
            % (rx.values.shape[:2], grid.values.shape)
        )
    # unit-modulus QPSK everywhere by construction, so division is safe
    assert np.all(grid.values != 0)
    return rx.values / grid.values[:, :, None, None]


def _window_2d(shape, kind):
    if kind is None:
        return None
    if kind != "hann":
        raise ValueError("unknown window kind %r" % (kind,))
    return np.outer(np.hanning(shape[0]), np.hanning(shape[1]))


def _transform(element: np.ndarray) -> np.ndarray:
    return np.fft.fft(np.fft.ifft(element, axis=0), axis=1)


def compute_rdm(s_g_element: np.ndarray, cfg: OfdmConfig, window=None) -> Rdm:
    """Range-Doppler map of a single virtual element's quotient grid."""
    x = np.asarray(s_g_element)
    if x.ndim != 2:
        raise ValueError("expected a 2D per-element grid, got shape %s" % (x.shape,))
    taper = _window_2d(x.shape, window)
    if taper is not None:
        x = x * taper
    cm = _transform(x)
    return Rdm(np.abs(cm), cm, cfg.range_bin_m, cfg.velocity_bin_ms)


def integrate_elements(s_g: np.ndarray, cfg: OfdmConfig, window=None) -> Rdm:
    """Non-coherent combination: mean of per-element RDM magnitudes.

    Loops over elements to avoid materializing a second full-size complex
    tensor; per-element transforms are cheap.
    """
    if s_g.ndim != 4:
        raise ValueError("expected (n_c, n_sym, rows, cols) tensor, got shape %s" % (s_g.shape,))
    taper = _window_2d(s_g.shape[:2], window)
    acc = np.zeros(s_g.shape[:2])
    for p in range(s_g.shape[2]):
        for q in range(s_g.shape[3]):
            element = s_g[:, :, p, q]
            if taper is not None:
                element = element * taper
            acc += np.abs(_transform(element))
    acc /= s_g.shape[2] * s_g.shape[3]
    return Rdm(acc, None, cfg.range_bin_m, cfg.velocity_bin_ms)


def range_peak_bin(range_m: float, cfg: OfdmConfig) -> int:
    """Predicted range bin of a scatterer at the given range."""
    return math.floor(2.0 * range_m * cfg.delta_f_hz * cfg.n_subcarriers / C0)


def velocity_peak_bin(velocity_ms: float, cfg: OfdmConfig) -> int:
    """Predicted Doppler bin (natural order, negative velocities wrap)."""
    raw = math.floor(2.0 * velocity_ms * cfg.fc_hz * cfg.t_symbol_s * cfg.n_symbols / C0)
    return raw % cfg.n_symbols


def bin_to_physical(alpha: int, beta: int, cfg: OfdmConfig) -> tuple[float, float]:
    """Invert the peak-bin laws; upper-half Doppler bins map to negative v."""
    n_sym = cfg.n_symbols
    if not (0 <= alpha < cfg.n_subcarriers and 0 <= beta < n_sym):
        raise ValueError("bin (%s, %s) outside the map" % (alpha, beta))
    signed_beta = beta if beta < n_sym / 2 else beta - n_sym
    return alpha * cfg.range_bin_m, signed_beta * cfg.velocity_bin_ms


def extract_cell_manifold(s_g: np.ndarray, alpha: int, beta: int) -> np.ndarray:
    """Complex RDM value at (alpha, beta) for every virtual element.

    Single-bin evaluation of the same transforms as compute_rdm, returned as
    a (rows, cols) matrix. For targets sharing the cell this is the sum of
    their scaled steering matrices, which is what the DoA stages consume.
    """
    n_c, n_sym = s_g.shape[:2]
    ka = np.exp(2j * np.pi * np.arange(n_c) * alpha / n_c) / n_c
    kb = np.exp(-2j * np.pi * np.arange(n_sym) * beta / n_sym)
    return np.einsum("n,m,nmpq->pq", ka, kb, s_g)


def detect_rdm_cells(
    magnitude: np.ndarray, cfar_cfg: CfarConfig, drop_zero_range: bool = True
) -> tuple[DetectionMask, tuple]:
    """Detector mask and merged peak cells of an integrated magnitude map.

    The Doppler axis is cyclic, so slow targets sit in bin 0 where a clipped
    detector window would see only half its reference columns and a much
    larger threshold factor; their own straddle leakage then pushes the
    threshold above the peak. Detection therefore runs on the fftshifted map
    (unambiguous velocity interval centred), leaving the remaining Doppler
    borders at +-v_max, and the mask and cell indices are shifted back to
    natural bin order. Range bin 0 is the transmitter itself and is dropped
    by default.
    """
    mag = np.asarray(magnitude)
    n_dop = mag.shape[1]
    shifted = np.fft.fftshift(mag, axes=1)
    mask_s = osca_cfar_2d(shifted, cfar_cfg)
    mask = DetectionMask(
        np.fft.ifftshift(mask_s.detected, axes=1),
        np.fft.ifftshift(mask_s.threshold, axes=1),
    )
    cells = []
    for i, j in peak_cells(mask_s, shifted):
        if drop_zero_range and i == 0:
            continue
        cells.append((int(i), int((j - n_dop // 2) % n_dop)))
    return mask, tuple(cells)


def export_rdm_csv(rdm: Rdm, path) -> None:
    """CSV matrix with physical axis headers, Doppler fft-shifted for display.

    Row 1: velocity_ms header then the shifted velocity axis. Following rows:
    range in meters then the magnitude values for that range bin.
    """
    order = np.fft.fftshift(np.arange(rdm.magnitude.shape[1]))
    vel = rdm.velocity_axis_ms[order]
    mag = rdm.magnitude[:, order]
    rng = rdm.range_axis_m
    with open(path, "w") as fh:
        fh.write("velocity_ms," + ",".join(repr(float(v)) for v in vel) + "\n")
        for i in range(mag.shape[0]):
            fh.write(repr(float(rng[i])) + "," + ",".join(repr(float(x)) for x in mag[i]) + "\n")
