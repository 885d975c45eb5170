"""Coordinate systems, grids and radar parameterization.

Conventions used throughout the package:

* wavenumber ``k = 2*pi*f/c`` paired with a round-trip phase ``-2*k*R``,
  so the longitudinal spatial frequency of a propagating component is
  ``kz = sqrt(4*k**2 - kx**2 - ky**2)``;
* the synthetic aperture lies in the ``z = 0`` plane, targets at ``z > 0``;
* signal arrays are indexed ``(ik, iy, ix)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

#: Speed of light in vacuum (m/s), exact.
C = 299_792_458.0


def _require_positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be finite and positive, got {value!r}")


@dataclass(frozen=True)
class RadarParams:
    """FMCW chirp configuration.

    Parameters
    ----------
    f0 : float
        Start frequency (Hz).
    bandwidth : float
        Swept bandwidth (Hz).
    chirp_duration : float
        Chirp length (s).
    num_k : int
        Number of wavenumber samples spread uniformly over the sweep.
    """

    f0: float
    bandwidth: float
    chirp_duration: float
    num_k: int = 64

    def __post_init__(self) -> None:
        _require_positive("f0", self.f0)
        _require_positive("bandwidth", self.bandwidth)
        _require_positive("chirp_duration", self.chirp_duration)
        if int(self.num_k) != self.num_k or self.num_k < 1:
            raise ValueError(f"num_k must be an integer >= 1, got {self.num_k!r}")
        if not math.isfinite(self.chirp_rate):
            raise ValueError("chirp rate bandwidth/chirp_duration is not finite")

    @property
    def chirp_rate(self) -> float:
        """Chirp rate in Hz/s."""
        return self.bandwidth / self.chirp_duration

    @property
    def center_frequency(self) -> float:
        return self.f0 + 0.5 * self.bandwidth

    @property
    def stop_frequency(self) -> float:
        return self.f0 + self.bandwidth


@dataclass(frozen=True)
class WavenumberGrid:
    k_values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        k = np.asarray(self.k_values, dtype=np.float64)
        if k.ndim != 1 or k.size == 0:
            raise ValueError("k_values must be a non-empty 1D array")
        if not np.all(np.isfinite(k)) or np.any(k <= 0):
            raise ValueError("k_values must be finite and positive")
        if k.size > 1 and np.any(np.diff(k) <= 0):
            raise ValueError("k_values must be strictly increasing")
        k.setflags(write=False)
        object.__setattr__(self, "k_values", k)

    def __len__(self) -> int:
        return self.k_values.size


@dataclass(frozen=True)
class ApertureGrid:
    """Regular 2D sampling lattice of the synthetic aperture (z = 0).

    Sample ``(ix, iy)`` sits at ``(x0 + ix*dx, y0 + iy*dy, 0)``.
    """

    nx: int
    ny: int
    dx: float
    dy: float
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self) -> None:
        for name in ("nx", "ny"):
            n = getattr(self, name)
            if int(n) != n or n < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {n!r}")
        _require_positive("dx", self.dx)
        _require_positive("dy", self.dy)
        if not (math.isfinite(self.x0) and math.isfinite(self.y0)):
            raise ValueError("x0 and y0 must be finite")

    @classmethod
    def centered(cls, nx: int, ny: int, dx: float, dy: float) -> "ApertureGrid":
        """Grid whose sample cloud is centered on the origin."""
        return cls(nx, ny, dx, dy, -0.5 * (nx - 1) * dx, -0.5 * (ny - 1) * dy)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + np.arange(self.nx) * self.dx

    @property
    def y(self) -> np.ndarray:
        return self.y0 + np.arange(self.ny) * self.dy

    @property
    def span_x(self) -> float:
        """Distance between the first and last sample in x."""
        return (self.nx - 1) * self.dx

    @property
    def span_y(self) -> float:
        return (self.ny - 1) * self.dy

    @property
    def extent_x(self) -> float:
        """Physical length covered in x, one pitch per sample."""
        return self.nx * self.dx

    @property
    def extent_y(self) -> float:
        return self.ny * self.dy

    @property
    def center(self) -> tuple[float, float]:
        return (self.x0 + 0.5 * self.span_x, self.y0 + 0.5 * self.span_y)


@dataclass(frozen=True)
class PointScatterer:
    x: float
    y: float
    z: float
    reflectivity: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise ValueError("scatterer position must be finite")
        if not self.z > 0:
            raise ValueError(f"scatterer must lie in front of the aperture (z > 0), got z={self.z!r}")
        p = complex(self.reflectivity)
        if not (math.isfinite(p.real) and math.isfinite(p.imag)):
            raise ValueError("reflectivity must be finite")
        object.__setattr__(self, "reflectivity", p)


@dataclass(frozen=True)
class Scene:
    """Ordered collection of point scatterers; may be empty."""

    scatterers: tuple[PointScatterer, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "scatterers", tuple(self.scatterers))

    def __len__(self) -> int:
        return len(self.scatterers)

    def __iter__(self):
        return iter(self.scatterers)

    def __add__(self, other: "Scene") -> "Scene":
        return Scene(self.scatterers + other.scatterers)

    def positions(self) -> np.ndarray:
        """``(n, 3)`` array of scatterer coordinates."""
        if not self.scatterers:
            return np.zeros((0, 3))
        return np.array([(s.x, s.y, s.z) for s in self.scatterers], dtype=np.float64)

    def reflectivities(self) -> np.ndarray:
        return np.array([s.reflectivity for s in self.scatterers], dtype=np.complex128)


@dataclass(frozen=True)
class SignalCube:
    """Beat-signal samples ``s(k, y, x)`` with shape ``(num_k, ny, nx)``."""

    radar: RadarParams
    aperture: ApertureGrid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        s = np.asarray(self.samples, dtype=np.complex128)
        expected = (self.radar.num_k, self.aperture.ny, self.aperture.nx)
        if s.shape != expected:
            raise ValueError(f"samples shape {s.shape} does not match {expected}")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples contain non-finite values")
        object.__setattr__(self, "samples", s)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.samples.shape

    @property
    def k_values(self) -> np.ndarray:
        return build_wavenumber_grid(self.radar).k_values


def build_wavenumber_grid(radar: RadarParams) -> WavenumberGrid:
    """Wavenumbers ``2*pi*f/c`` for ``num_k`` frequencies uniform on ``[f0, f0 + b]``."""
    if radar.num_k == 1:
        freqs = np.array([radar.f0])
    else:
        freqs = radar.f0 + np.arange(radar.num_k) * (radar.bandwidth / (radar.num_k - 1))
    return WavenumberGrid(2.0 * np.pi * freqs / C)


def aperture_coordinate(grid: ApertureGrid, ix: int, iy: int) -> tuple[float, float]:
    if not (0 <= ix < grid.nx and 0 <= iy < grid.ny):
        raise IndexError(f"aperture index ({ix}, {iy}) outside {grid.nx}x{grid.ny} grid")
    return (grid.x0 + ix * grid.dx, grid.y0 + iy * grid.dy)


def paper_preset(num_k: int = 64) -> tuple[RadarParams, ApertureGrid]:
    """The 77 GHz / 3.84 GHz / 60 us configuration with a 69 x 596 aperture.

    x is sampled every 0.5 mm (596 columns), y every 2 mm (69 rows), both
    centered on the origin.
    """
    radar = RadarParams(f0=77e9, bandwidth=3.84e9, chirp_duration=60e-6, num_k=num_k)
    aperture = ApertureGrid.centered(nx=596, ny=69, dx=0.5e-3, dy=2e-3)
    return radar, aperture
