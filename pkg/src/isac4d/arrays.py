"""Uniform planar arrays, MIMO virtual aperture and steering geometry.

Conventions used throughout the package: arrays are uniform planar grids
indexed (p, q), 1-based, with the p axis along world x and the q axis along
world z. Element pitch is expressed in multiples of the base spacing
d = lambda/2. Angles (theta, phi) are in degrees, both on the open interval
(0, 180); a target on boresight sits at theta = phi = 90. The look direction
for a pair of angles is

    u = (cos(theta)*cos(phi), -sin(phi), sin(theta)*cos(phi))

so the scene side of the array is y < y_array and the quadrant signs are
carried by the trigonometric terms themselves, which keeps the steering
phase continuous across theta = 90 and phi = 90.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

ARRAY_ROLES = ("tx", "rx", "virtual")


@dataclass(frozen=True)
class UpaLayout:
    """Uniform planar array of rows x cols elements.

    spacing is the element pitch in multiples of d = lambda/2 (the same
    pitch applies to both axes).
    """

    rows: int
    cols: int
    spacing: float = 1.0
    role: str = "virtual"

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ConfigError(
                "array dimensions must be positive, got %dx%d" % (self.rows, self.cols)
            )
        if not self.spacing > 0:
            raise ConfigError("element spacing must be positive, got %r" % (self.spacing,))
        if self.role not in ARRAY_ROLES:
            raise ConfigError("unknown array role %r, expected one of %s" % (self.role, ARRAY_ROLES))

    @property
    def size(self) -> int:
        return self.rows * self.cols


@dataclass(frozen=True)
class SteeringAngles:
    """Azimuth (theta) / pitch (phi) pair in degrees, strictly inside (0, 180)."""

    theta_deg: float
    phi_deg: float

    def __post_init__(self):
        for name, value in (("theta_deg", self.theta_deg), ("phi_deg", self.phi_deg)):
            if not 0.0 < value < 180.0:
                raise ConfigError("%s must lie strictly inside (0, 180), got %r" % (name, value))


def build_virtual_array(tx: UpaLayout, rx: UpaLayout) -> UpaLayout:
    """Combine Tx and Rx UPAs into the equivalent virtual receive aperture.

    Virtual element positions are the pairwise sums of Tx and Rx element
    positions, so the result is a uniform (TxRows*RxRows) x (TxCols*RxCols)
    grid exactly when the Tx pitch equals the Rx pitch times the Rx extent
    along every axis the Tx actually spans. Raises ConfigError otherwise.
    """
    for axis, tx_dim, rx_dim in (("rows", tx.rows, rx.rows), ("cols", tx.cols, rx.cols)):
        if tx_dim > 1 and abs(tx.spacing - rx.spacing * rx_dim) > 1e-9:
            raise ConfigError(
                "virtual aperture is non-uniform along %s: tx pitch %g d, "
                "expected rx pitch x rx %s = %g d"
                % (axis, tx.spacing, axis, rx.spacing * rx_dim)
            )
    return UpaLayout(
        rows=tx.rows * rx.rows,
        cols=tx.cols * rx.cols,
        spacing=rx.spacing,
        role="virtual",
    )


def _direction_cosines(angles: SteeringAngles):
    """Spatial frequencies (u_p, u_q) seen by the p and q array axes."""
    theta = np.deg2rad(angles.theta_deg)
    phi = np.deg2rad(angles.phi_deg)
    cos_phi = np.cos(phi)
    return np.cos(theta) * cos_phi, np.sin(theta) * cos_phi


def steering_phase(p: int, q: int, angles: SteeringAngles, d: float, lam: float) -> complex:
    """Phase factor of element (p, q), 1-based, for pitch d and wavelength lam.

    The exponent is -j*2*pi*(d/lam) * [(p-1)*cos(theta) + (q-1)*sin(theta)] * cos(phi).
    The cos/sin terms carry the quadrant signs, so mirroring theta about 90
    degrees conjugates the p-axis factor while leaving the q-axis factor
    unchanged, and the expression is continuous at theta = 90 and phi = 90.
    """
    if p < 1 or q < 1:
        raise ConfigError("element indices are 1-based, got (%d, %d)" % (p, q))
    u_p, u_q = _direction_cosines(angles)
    return complex(np.exp(-1j * 2.0 * np.pi * (d / lam) * ((p - 1) * u_p + (q - 1) * u_q)))


def steering_matrix(layout: UpaLayout, angles: SteeringAngles) -> np.ndarray:
    """rows x cols matrix of element phase factors for one arrival direction.

    Separable by construction: the matrix is the outer product of its first
    column and first row, hence rank 1.
    """
    u_p, u_q = _direction_cosines(angles)
    ratio = 0.5 * layout.spacing  # pitch over wavelength, spacing is in units of d = lam/2
    col = np.exp(-1j * 2.0 * np.pi * ratio * u_p * np.arange(layout.rows))
    row = np.exp(-1j * 2.0 * np.pi * ratio * u_q * np.arange(layout.cols))
    return np.outer(col, row)


def row_col_manifolds(layout: UpaLayout, angles: SteeringAngles):
    """First column and first row of the steering matrix.

    These are the two 1D search manifolds: the column manifold varies along
    the p axis (length rows), the row manifold along the q axis (length
    cols). Both depend on both angles.
    """
    mat = steering_matrix(layout, angles)
    return mat[:, 0].copy(), mat[0, :].copy()


def look_direction(angles: SteeringAngles) -> np.ndarray:
    """Unit vector from the array phase center toward (theta, phi)."""
    u_p, u_q = _direction_cosines(angles)
    return np.array([u_p, -np.sin(np.deg2rad(angles.phi_deg)), u_q])


def angles_from_direction(direction) -> SteeringAngles:
    """Invert look_direction for a vector pointing into the scene half-space.

    Requires u_y < 0 (scene side). Targets exactly level with the array
    plane's horizontal axis (u_z = 0 with u_x != 0) have an undefined pitch
    quadrant and raise ConfigError; the boresight direction maps to
    (90, 90).
    """
    u = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(u)
    if norm == 0.0:
        raise ConfigError("cannot derive angles from a zero direction")
    ux, uy, uz = u / norm
    sin_phi = -uy
    if sin_phi <= 0.0:
        raise ConfigError("direction points away from the scene half-space (u_y >= 0)")
    planar = float(np.hypot(ux, uz))
    if planar < 1e-12:
        return SteeringAngles(90.0, 90.0)
    if uz == 0.0:
        raise ConfigError("direction lies level with the array (u_z = 0): pitch quadrant undefined")
    cos_phi = planar if uz > 0.0 else -planar
    theta = float(np.degrees(np.arctan2(uz / cos_phi, ux / cos_phi)))
    phi = float(np.degrees(np.arctan2(sin_phi, cos_phi)))
    return SteeringAngles(theta, phi)
