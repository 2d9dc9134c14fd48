"""OFDM resource grid with comb-type positioning pilots.

The downlink frame is n_slots slots of 14 symbols. Every prs_slot_interval-th
slot carries pilots on 12 of its symbols (indices 2..13 within the slot,
0-based); pilot subcarriers follow a comb-4 pattern whose per-symbol offset
cycles through [0, 2, 1, 3]. Pilot values are unit-modulus QPSK points drawn
from a Gold sequence keyed by the absolute symbol index, so they are
deterministic across runs; every other resource element carries unit-power
QPSK payload drawn from the run seed. The sensing receiver is assumed to
know the full transmitted grid, payload included.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from functools import lru_cache

import numpy as np

from .constants import C0
from .errors import ConfigError

GOLD_WARMUP = 1600  # LFSR warm-up steps discarded before output

_SQRT1_2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class OfdmConfig:
    """Waveform numerology. Defaults reproduce the full simulation profile."""

    fc_hz: float = 70e9
    delta_f_hz: float = 240e3
    n_subcarriers: int = 2048
    n_slots: int = 16
    symbols_per_slot: int = 14
    cp_ratio: float = 0.25
    suffix_ratio: float = 1.0 / 32.0
    suffix_in_symbol: bool = False
    comb: int = 4
    prs_slot_interval: int = 4
    prs_symbol_start: int = 2
    prs_symbols_per_slot: int = 12

    def __post_init__(self):
        if self.fc_hz <= 0 or self.delta_f_hz <= 0:
            raise ConfigError("carrier and subcarrier spacing must be positive")
        if self.n_subcarriers < 1 or self.n_slots < 1 or self.symbols_per_slot < 1:
            raise ConfigError("grid dimensions must be positive")
        if self.cp_ratio < 0 or self.suffix_ratio < 0:
            raise ConfigError("guard-interval ratios must be non-negative")
        if self.comb != 4:
            raise ConfigError("only the comb-4 pilot pattern is implemented, got comb=%d" % self.comb)
        if self.n_subcarriers % self.comb != 0:
            raise ConfigError(
                "n_subcarriers (%d) must be a multiple of the comb factor (%d)"
                % (self.n_subcarriers, self.comb)
            )
        if self.prs_slot_interval < 1:
            raise ConfigError("prs_slot_interval must be >= 1")
        if self.prs_symbol_start < 0 or self.prs_symbols_per_slot < 0:
            raise ConfigError("pilot symbol placement must be non-negative")
        if self.prs_symbol_start + self.prs_symbols_per_slot > self.symbols_per_slot:
            raise ConfigError(
                "pilot symbols %d..%d do not fit in a %d-symbol slot"
                % (
                    self.prs_symbol_start,
                    self.prs_symbol_start + self.prs_symbols_per_slot - 1,
                    self.symbols_per_slot,
                )
            )

    # -- derived quantities ------------------------------------------------

    @property
    def n_symbols(self) -> int:
        return self.n_slots * self.symbols_per_slot

    @property
    def bandwidth_hz(self) -> float:
        return self.n_subcarriers * self.delta_f_hz

    @property
    def wavelength_m(self) -> float:
        return C0 / self.fc_hz

    @property
    def t_useful_s(self) -> float:
        return 1.0 / self.delta_f_hz

    @property
    def t_symbol_s(self) -> float:
        """Total OFDM symbol duration including the cyclic prefix.

        The cyclic suffix is excluded by default; set suffix_in_symbol to
        include it.
        """
        ratio = 1.0 + self.cp_ratio + (self.suffix_ratio if self.suffix_in_symbol else 0.0)
        return ratio * self.t_useful_s

    @property
    def range_bin_m(self) -> float:
        return C0 / (2.0 * self.bandwidth_hz)

    @property
    def velocity_bin_ms(self) -> float:
        return C0 / (2.0 * self.fc_hz * self.t_symbol_s * self.n_symbols)

    @property
    def max_range_m(self) -> float:
        """Unambiguous range span of the subcarrier-wise IDFT."""
        return C0 / (2.0 * self.delta_f_hz)

    @property
    def max_abs_velocity_ms(self) -> float:
        """Half the unambiguous velocity span (symmetric about zero)."""
        return 0.5 * self.n_symbols * self.velocity_bin_ms


def load_ofdm_config(path, base: OfdmConfig | None = None) -> OfdmConfig:
    """Read numerology overrides from a key = value text file.

    Lines are `key = value`; '#' starts a comment; blank lines are skipped.
    Keys must be OfdmConfig field names. Unknown keys and unparsable values
    raise ConfigError naming the offending line.
    """
    field_types = {f.name: f.type for f in fields(OfdmConfig)}
    base_kwargs = {}
    if base is not None:
        base_kwargs = {f.name: getattr(base, f.name) for f in fields(OfdmConfig)}
    overrides = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("%s:%d: expected key = value, got %r" % (path, lineno, raw.rstrip()))
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in field_types:
                raise ConfigError("%s:%d: unknown key %r" % (path, lineno, key))
            try:
                overrides[key] = _parse_field(field_types[key], value)
            except ValueError as exc:
                raise ConfigError("%s:%d: bad value for %s: %s" % (path, lineno, key, exc)) from exc
    base_kwargs.update(overrides)
    return OfdmConfig(**base_kwargs)


def _parse_field(type_name, value: str):
    name = str(type_name)
    if "bool" in name:
        low = value.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError("expected a boolean, got %r" % value)
    if "int" in name:
        return int(value)
    return float(value)


# -- pilot comb ------------------------------------------------------------


def prs_subcarrier_offset(m: int, comb: int = 4) -> int:
    """Comb offset n0 of OFDM symbol m (absolute index).

    n0 = (m mod K)/2 + (3/4)*(1 - (-1)^(m mod K)) for K = 4, which cycles
    through [0, 2, 1, 3].
    """
    if comb != 4:
        raise ConfigError("only the comb-4 offset law is implemented")
    r = m % comb
    return int(r / 2 + (3.0 / 4.0) * (1 - (-1) ** r))


def prs_symbol_indices(cfg: OfdmConfig) -> np.ndarray:
    """Absolute indices of all pilot-bearing OFDM symbols in the frame."""
    out = []
    for slot in range(0, cfg.n_slots, cfg.prs_slot_interval):
        start = slot * cfg.symbols_per_slot + cfg.prs_symbol_start
        out.extend(range(start, start + cfg.prs_symbols_per_slot))
    return np.asarray(out, dtype=int)


def prs_subcarrier_set(m: int, cfg: OfdmConfig) -> np.ndarray:
    """Pilot subcarrier indices {n*K + n0(m)} for symbol m (any m)."""
    n0 = prs_subcarrier_offset(m, cfg.comb)
    return np.arange(0, cfg.n_subcarriers, cfg.comb) + n0


# -- Gold sequence ---------------------------------------------------------


@lru_cache(maxsize=4)
def _x1_bits(total: int) -> bytes:
    """First LFSR (x^31 + x^3 + 1), fixed init 000...001; independent of seed."""
    x = np.zeros(total + 31, dtype=np.uint8)
    x[0] = 1
    for n in range(total):
        x[n + 31] = x[n + 3] ^ x[n]
    return x.tobytes()


def gold_sequence(length: int, init: int) -> np.ndarray:
    """Length-`length` +/-1 Gold sequence for a 31-bit initial state.

    Generator pair x^31 + x^3 + 1 and x^31 + x^3 + x^2 + x + 1 with a
    1600-step warm-up; bit c maps to 1 - 2c.
    """
    if length < 1:
        raise ConfigError("sequence length must be positive")
    if not 0 < init < 2**31:
        raise ConfigError("init must be a non-zero 31-bit integer")
    total = GOLD_WARMUP + length
    x1 = np.frombuffer(_x1_bits(total), dtype=np.uint8)
    x2 = np.zeros(total + 31, dtype=np.uint8)
    for i in range(31):
        x2[i] = (init >> i) & 1
    for n in range(total):
        x2[n + 31] = x2[n + 3] ^ x2[n + 2] ^ x2[n + 1] ^ x2[n]
    c = x1[GOLD_WARMUP:total] ^ x2[GOLD_WARMUP:total]
    return 1 - 2 * c.astype(int)


def _pilot_init(m: int) -> int:
    # symbol-indexed pilot key; any fixed non-zero 31-bit mapping works
    return (1021 * (m + 1)) % 0x7FFFFFFF or 1


def pilot_values(m: int, cfg: OfdmConfig) -> np.ndarray:
    """Unit-modulus QPSK pilot values for the comb of symbol m."""
    n_pilots = cfg.n_subcarriers // cfg.comb
    bits = gold_sequence(2 * n_pilots, _pilot_init(m))
    return _SQRT1_2 * (bits[0::2] + 1j * bits[1::2])


# -- grid ------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolGrid:
    """Transmitted frequency-time grid (n_subcarriers x n_symbols) and pilot mask."""

    values: np.ndarray
    prs_mask: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.prs_mask.shape:
            raise ConfigError("grid values and pilot mask shapes differ")


def build_resource_grid(cfg: OfdmConfig, seed) -> SymbolGrid:
    """Assemble the transmitted grid: QPSK payload plus comb pilots.

    The payload depends on the seed; pilot positions and values do not.
    Every entry has unit modulus, so the grid's mean power is exactly 1.
    """
    rng = np.random.default_rng(seed)
    shape = (cfg.n_subcarriers, cfg.n_symbols)
    symbols = rng.integers(0, 4, size=shape)
    values = _SQRT1_2 * ((1 - 2 * (symbols & 1)) + 1j * (1 - 2 * (symbols >> 1)))
    mask = np.zeros(shape, dtype=bool)
    for m in prs_symbol_indices(cfg):
        comb = prs_subcarrier_set(m, cfg)
        values[comb, m] = pilot_values(m, cfg)
        mask[comb, m] = True
    return SymbolGrid(values=values, prs_mask=mask)
