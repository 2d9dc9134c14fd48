"""Echo synthesis over the virtual receive aperture.

Each scatterer k delays and Doppler-shifts the transmitted grid:

    rx(n, m) = G_k * tx(n, m) * exp(-j*2*pi*f_n*2*R_k/c) * exp(+j*2*pi*f_d*m*T_sym)

with f_n = n * delta_f, f_d = 2 * v_k * f_c / c (v positive receding), and
the per-element phase given by the steering matrix of the virtual layout.
Noise is circular complex white, scaled so the mean per-resource-element
SNR of the summed echo signal matches the request.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import UpaLayout, steering_matrix
from .constants import C0
from .errors import CapacityError
from .scene import ScattererTruth
from .waveform import OfdmConfig, SymbolGrid

DEFAULT_TENSOR_CAP_BYTES = 2 * 1024**3


@dataclass(frozen=True)
class SnrSpec:
    """Per-resource-element SNR of the reflected signal; None disables noise."""

    snr_db: float | None = None


@dataclass(frozen=True)
class VirtualArraySnapshot:
    """Received grid per virtual element: (n_subcarriers, n_symbols, rows, cols)."""

    values: np.ndarray
    layout: UpaLayout


def doppler_shift_hz(velocity_ms: float, cfg: OfdmConfig) -> float:
    """Two-way Doppler of a radial velocity (positive = receding)."""
    return 2.0 * velocity_ms * cfg.fc_hz / C0


def received_symbol(tx_value: complex, n: int, m: int, truth: ScattererTruth, cfg: OfdmConfig) -> complex:
    """Single resource element echoed by a single scatterer (element (1,1))."""
    range_phase = -2.0 * np.pi * (n * cfg.delta_f_hz) * 2.0 * truth.range_m / C0
    doppler_phase = 2.0 * np.pi * doppler_shift_hz(truth.velocity_ms, cfg) * m * cfg.t_symbol_s
    return truth.gain * tx_value * complex(np.exp(1j * (range_phase + doppler_phase)))


def tensor_bytes(cfg: OfdmConfig, layout: UpaLayout) -> int:
    """Memory footprint of the full received tensor in bytes (complex128)."""
    return cfg.n_subcarriers * cfg.n_symbols * layout.size * 16


def synthesize_rx(
    grid: SymbolGrid,
    truths,
    layout: UpaLayout,
    cfg: OfdmConfig,
    snr: SnrSpec = SnrSpec(),
    seed=None,
    max_bytes: int = DEFAULT_TENSOR_CAP_BYTES,
) -> VirtualArraySnapshot:
    """Sum scatterer echoes over the virtual aperture and add noise.

    Raises CapacityError before allocating anything when the received tensor
    would exceed max_bytes; reduce n_subcarriers / n_symbols or the array
    size (or raise the cap) in that case.
    """
    need = tensor_bytes(cfg, layout)
    if need > max_bytes:
        raise CapacityError(
            "received tensor needs %.2f GiB > cap %.2f GiB; decimate the grid "
            "(fewer subcarriers/symbols) or use a smaller virtual array, or raise max_bytes"
            % (need / 1024**3, max_bytes / 1024**3)
        )
    shape = (cfg.n_subcarriers, cfg.n_symbols, layout.rows, layout.cols)
    values = np.zeros(shape, dtype=complex)
    n_idx = np.arange(cfg.n_subcarriers)
    m_idx = np.arange(cfg.n_symbols)
    for truth in truths:
        k_range = np.exp(-1j * 2.0 * np.pi * (n_idx * cfg.delta_f_hz) * 2.0 * truth.range_m / C0)
        k_doppler = np.exp(
            1j * 2.0 * np.pi * doppler_shift_hz(truth.velocity_ms, cfg) * m_idx * cfg.t_symbol_s
        )
        steer = steering_matrix(layout, truth.angles)
        values += truth.gain * np.einsum("n,m,pq->nmpq", k_range, k_doppler, steer)
    values *= grid.values[:, :, None, None]

    if snr.snr_db is not None:
        signal_power = float(np.mean(np.abs(values) ** 2))
        if signal_power > 0.0:
            noise_var = signal_power / 10.0 ** (snr.snr_db / 10.0)
            rng = np.random.default_rng(seed)
            scale = np.sqrt(noise_var / 2.0)
            values += scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return VirtualArraySnapshot(values=values, layout=layout)
