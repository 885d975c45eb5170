"""Beat-signal forward model and geometric validity checks."""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np

from nfsar import kernels
from nfsar.geometry import (
    C,
    ApertureGrid,
    PointScatterer,
    RadarParams,
    Scene,
    SignalCube,
    build_wavenumber_grid,
)

log = logging.getLogger(__name__)

#: Default tolerance coefficient of the monostatic bound (quarter-wave path error).
DEFAULT_ALPHA = 0.25


def point_response(k: float, x_a: float, y_a: float, target: PointScatterer) -> complex:
    """Ideal beat-signal sample ``p * exp(-2j*k*R)`` for one scatterer.

    No spreading loss or antenna pattern is applied.
    """
    if not k > 0:
        raise ValueError(f"wavenumber must be positive, got {k!r}")
    r = math.sqrt((x_a - target.x) ** 2 + (y_a - target.y) ** 2 + target.z**2)
    return target.reflectivity * cmath.exp(-2j * k * r)


def simulate_cube(radar: RadarParams, aperture: ApertureGrid, scene: Scene) -> SignalCube:
    """Superpose the point responses of every scatterer over the aperture.

    Returns a cube of shape ``(num_k, ny, nx)``; an empty scene gives zeros.
    Each sample is computed independently and scatterers are accumulated in
    scene order.
    """
    k = build_wavenumber_grid(radar).k_values
    samples = kernels.simulate(
        k, aperture.x, aperture.y, scene.positions(), scene.reflectivities()
    )
    return SignalCube(radar, aperture, samples)


def add_noise(cube: SignalCube, sigma: float, seed: int = 0) -> SignalCube:
    """Add circular complex white Gaussian noise of standard deviation ``sigma``.

    Test utility; not part of the ideal model. Deterministic for a given seed.
    """
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    rng = np.random.default_rng(seed)
    shape = cube.samples.shape
    noise = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * (sigma / math.sqrt(2))
    return SignalCube(cube.radar, cube.aperture, cube.samples + noise)


@dataclass(frozen=True)
class MonostaticCheck:
    """Inputs of the monostatic-approximation bound.

    Attributes
    ----------
    d : float
        TX-RX antenna separation (m).
    fc : float
        Center frequency (Hz).
    range : float
        Distance from the TX/RX midpoint to the target (m).
    alpha : float
        Dimensionless tolerance coefficient.
    """

    d: float
    fc: float
    range: float
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self) -> None:
        for name in ("d", "fc", "range", "alpha"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and positive, got {v!r}")


@dataclass(frozen=True)
class ValidityReport:
    threshold: float
    ratio: float
    valid: bool


def monostatic_validity(check: MonostaticCheck) -> ValidityReport:
    """Compare the antenna separation with ``sqrt(4*alpha*(c/fc)*R)``.

    The approximation is accepted when the separation is strictly below the
    threshold.
    """
    threshold = math.sqrt(4.0 * check.alpha * (C / check.fc) * check.range)
    ratio = check.d / threshold
    return ValidityReport(threshold=threshold, ratio=ratio, valid=ratio < 1.0)


def fresnel_distance(aperture: ApertureGrid, fc: float) -> float:
    """Far-field boundary ``2*D**2/lambda`` with ``D`` the aperture diagonal.

    The extent along each axis counts one pitch per sample. Depths below the
    returned value are in the near field.
    """
    if not (math.isfinite(fc) and fc > 0):
        raise ValueError(f"fc must be finite and positive, got {fc!r}")
    if aperture.nx == 1 and aperture.ny == 1:
        raise ValueError("a single-sample aperture has no defined Fresnel distance")
    diag = math.hypot(aperture.extent_x, aperture.extent_y)
    return 2.0 * diag**2 / (C / fc)


def is_near_field(aperture: ApertureGrid, fc: float, depth: float) -> bool:
    return depth < fresnel_distance(aperture, fc)


@dataclass(frozen=True)
class NyquistReport:
    limit: float
    x_ok: bool
    y_ok: bool

    @property
    def flagged_axes(self) -> tuple[str, ...]:
        return tuple(a for a, ok in (("x", self.x_ok), ("y", self.y_ok)) if not ok)


def nyquist_check(aperture: ApertureGrid, radar: RadarParams) -> NyquistReport:
    """Flag aperture axes sampled coarser than a quarter of the shortest wavelength.

    A spacing equal to the limit passes. Flagged axes are logged as warnings;
    this never raises.
    """
    limit = (C / radar.stop_frequency) / 4.0
    report = NyquistReport(limit=limit, x_ok=aperture.dx <= limit, y_ok=aperture.dy <= limit)
    for axis in report.flagged_axes:
        spacing = aperture.dx if axis == "x" else aperture.dy
        log.warning(
            "aperture %s spacing %.4g m exceeds lambda_min/4 = %.4g m; expect spatial aliasing",
            axis, spacing, limit,
        )
    return report
