"""Constant false-alarm rate detectors.

Three detectors share one threshold law: with N reference values r_1..r_N,

    T = threshold_factor(p_fa, N) * sum(r)    where  T_f = p_fa**(-1/N) - 1

which for exponentially distributed reference cells gives exactly
P_fa = (1 + T_f)**(-N) = p_fa under cell averaging.

* osca_cfar_2d: per cell-under-test, each column of the sliding window
  contributes its order statistic (index floor(os_fraction * count), at
  least 1); the CUT itself is excluded from its own column. N = number of
  window columns.
* ca_cfar_2d: reference cells are the window minus a centered guard block.
* ca_cfar_1d: same cell-averaging policy on a vector, returns the number of
  detections; used for eigenvalue-based source counting.

Border policy: windows are clipped at the map edges and both N and the
threshold factor are recomputed per cell from the cells actually available,
so every cell receives a threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import ndimage


@dataclass(frozen=True)
class CfarConfig:
    """Sliding-window detector parameters.

    window: odd extent per dimension. guard: cells excluded on each side of
    the CUT (cell-averaging detectors only). os_fraction: order-statistic
    fraction for the column statistic of the OSCA detector.
    """

    window: int = 9
    guard: int = 0
    p_fa: float = 1e-4
    os_fraction: float = 0.75

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError("window must be an odd integer >= 3, got %s" % (self.window,))
        if self.guard < 0 or self.window < 2 * self.guard + 3:
            raise ValueError(
                "guard must satisfy 0 <= guard <= (window - 3) / 2, got %s" % (self.guard,)
            )
        if not 0.0 < self.p_fa < 1.0:
            raise ValueError("p_fa must be in (0, 1), got %s" % (self.p_fa,))
        if not 0.0 < self.os_fraction <= 1.0:
            raise ValueError("os_fraction must be in (0, 1], got %s" % (self.os_fraction,))


@dataclass(frozen=True)
class DetectionMask:
    detected: np.ndarray
    threshold: np.ndarray

    def __post_init__(self):
        if self.detected.shape != self.threshold.shape:
            raise ValueError("detected and threshold shapes differ")


def threshold_factor(p_fa: float, n_ref) -> float:
    """T_f = p_fa**(-1/N) - 1; exact for CA on square-law (exponential) noise."""
    n = np.asarray(n_ref)
    if np.any(n < 1):
        raise ValueError("n_ref must be >= 1")
    if not 0.0 < p_fa <= 1.0:
        raise ValueError("p_fa must be in (0, 1]")
    out = p_fa ** (-1.0 / n) - 1.0
    return float(out) if out.ndim == 0 else out


def _order_index(count: int, fraction: float) -> int:
    """1-based order-statistic index for a column of `count` references."""
    return max(1, math.floor(fraction * count))


def _osca_threshold_at(values, i, j, cfg: CfarConfig) -> float:
    """Clipped-window OSCA threshold for one CUT; also the border path."""
    rows, cols = values.shape
    h = cfg.window // 2
    r0, r1 = max(0, i - h), min(rows, i + h + 1)
    total = 0.0
    n_cols = 0
    for c in range(max(0, j - h), min(cols, j + h + 1)):
        col = values[r0:r1, c]
        if c == j:
            col = np.delete(col, i - r0)
        gamma = _order_index(col.size, cfg.os_fraction)
        total += np.partition(col, gamma - 1)[gamma - 1]
        n_cols += 1
    return threshold_factor(cfg.p_fa, n_cols) * total


def osca_cfar_2d(values: np.ndarray, cfg: CfarConfig) -> DetectionMask:
    """Order-statistic/cell-averaging 2D detector (column statistics summed)."""
    values = np.asarray(values, dtype=float)
    rows, cols = values.shape
    w = cfg.window
    h = w // 2
    if rows < w or cols < w:
        raise ValueError("map %s smaller than window %s" % (values.shape, w))

    threshold = np.empty_like(values)

    # interior: per-column vertical sliding order statistics, then a
    # horizontal sliding sum with the CUT column swapped for its
    # CUT-excluded variant
    k_full = _order_index(w, cfg.os_fraction) - 1
    k_excl = _order_index(w - 1, cfg.os_fraction) - 1
    sw = sliding_window_view(values, w, axis=0)  # (rows-w+1, cols, w)
    full_stat = np.partition(sw, k_full, axis=2)[:, :, k_full]
    tmp = sw.copy()
    tmp[:, :, h] = np.inf  # CUT removed; inf never reaches index k_excl <= w-2
    excl_stat = np.partition(tmp, k_excl, axis=2)[:, :, k_excl]
    win_sum = sliding_window_view(full_stat, w, axis=1).sum(axis=2)
    stat_sum = win_sum - full_stat[:, h : cols - h] + excl_stat[:, h : cols - h]
    threshold[h : rows - h, h : cols - h] = threshold_factor(cfg.p_fa, w) * stat_sum

    for i in range(rows):
        border_row = i < h or i >= rows - h
        for j in range(cols):
            if border_row or j < h or j >= cols - h:
                threshold[i, j] = _osca_threshold_at(values, i, j, cfg)

    return DetectionMask(values > threshold, threshold)


def _area_table(values: np.ndarray) -> np.ndarray:
    s = np.zeros((values.shape[0] + 1, values.shape[1] + 1))
    s[1:, 1:] = values.cumsum(axis=0).cumsum(axis=1)
    return s


def _box_sums(table, i0, i1, j0, j1):
    return table[i1, j1] - table[i0, j1] - table[i1, j0] + table[i0, j0]


def ca_cfar_2d(values: np.ndarray, cfg: CfarConfig) -> DetectionMask:
    """Cell-averaging 2D detector with a centered guard block."""
    values = np.asarray(values, dtype=float)
    rows, cols = values.shape
    if rows < cfg.window or cols < cfg.window:
        raise ValueError("map %s smaller than window %s" % (values.shape, cfg.window))
    h, g = cfg.window // 2, cfg.guard

    table = _area_table(values)
    i = np.arange(rows)[:, None]
    j = np.arange(cols)[None, :]
    wi0, wi1 = np.clip(i - h, 0, rows), np.clip(i + h + 1, 0, rows)
    wj0, wj1 = np.clip(j - h, 0, cols), np.clip(j + h + 1, 0, cols)
    gi0, gi1 = np.clip(i - g, 0, rows), np.clip(i + g + 1, 0, rows)
    gj0, gj1 = np.clip(j - g, 0, cols), np.clip(j + g + 1, 0, cols)

    ref_sum = _box_sums(table, wi0, wi1, wj0, wj1) - _box_sums(table, gi0, gi1, gj0, gj1)
    n_ref = (wi1 - wi0) * (wj1 - wj0) - (gi1 - gi0) * (gj1 - gj0)
    threshold = threshold_factor(cfg.p_fa, n_ref) * ref_sum
    return DetectionMask(values > threshold, threshold)


def ca_cfar_1d(values, cfg: CfarConfig) -> int:
    """Detection count of a 1D cell-averaging pass (source counting)."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a vector")
    n = x.size
    h, g = cfg.window // 2, cfg.guard
    count = 0
    for i in range(n):
        r0, r1 = max(0, i - h), min(n, i + h + 1)
        idx = np.arange(r0, r1)
        refs = x[idx[np.abs(idx - i) > g]]
        if refs.size == 0:
            continue
        if x[i] > threshold_factor(cfg.p_fa, refs.size) * refs.sum():
            count += 1
    return count


def peak_cells(mask: DetectionMask, values: np.ndarray):
    """Merge 8-connected detection blobs to their strongest cell each.

    Returns a list of (row, col) tuples in label order; one physical target
    detected across adjacent cells yields a single entry.
    """
    labels, n = ndimage.label(mask.detected, structure=np.ones((3, 3), dtype=bool))
    if n == 0:
        return []
    positions = ndimage.maximum_position(values, labels, index=range(1, n + 1))
    return [(int(i), int(j)) for i, j in positions]
