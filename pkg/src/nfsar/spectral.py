"""2D spatial transforms over the aperture axes.

Normalization: the forward transform is a plain sum, the inverse carries
``1/N`` (numpy's default ``"backward"`` convention). Spatial-frequency axes
are kept in transform-native (unshifted) order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import windows

from nfsar.geometry import ApertureGrid, SignalCube

DEFAULT_PAD_FACTOR = 2
WINDOWS = ("none", "cosine")


@dataclass(frozen=True)
class SpectrumCube:
    """Per-wavenumber 2D spatial spectra ``S(k, ky, kx)``.

    ``samples`` has shape ``(num_k, ny * pad_factor, nx * pad_factor)``.
    """

    samples: np.ndarray = field(repr=False)
    kx_axis: np.ndarray = field(repr=False)
    ky_axis: np.ndarray = field(repr=False)
    k_values: np.ndarray = field(repr=False)
    pad_factor: int
    aperture: ApertureGrid

    def __post_init__(self) -> None:
        nk, ny, nx = self.samples.shape
        if (ny, nx) != (self.aperture.ny * self.pad_factor, self.aperture.nx * self.pad_factor):
            raise ValueError("spectrum dimensions inconsistent with aperture and padding")
        if self.kx_axis.shape != (nx,) or self.ky_axis.shape != (ny,) or self.k_values.shape != (nk,):
            raise ValueError("axis lengths inconsistent with spectrum dimensions")

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.samples.shape


def spatial_frequencies(n: int, spacing: float) -> np.ndarray:
    """Angular spatial frequencies (rad/m) of an ``n``-point transform."""
    return 2.0 * np.pi * np.fft.fftfreq(n, d=spacing)


def taper(aperture: ApertureGrid, window: str = "none") -> np.ndarray | None:
    """Separable aperture taper of shape ``(ny, nx)``, or None for no window."""
    if window == "none":
        return None
    if window == "cosine":
        return np.outer(windows.cosine(aperture.ny), windows.cosine(aperture.nx))
    raise ValueError(f"unknown window {window!r}; expected one of {WINDOWS}")


def spatial_fft2(
    cube: SignalCube, pad_factor: int = DEFAULT_PAD_FACTOR, window: str = "none"
) -> SpectrumCube:
    """Zero-pad every k-slab to ``pad_factor`` times its size and transform it."""
    if int(pad_factor) != pad_factor or pad_factor < 1:
        raise ValueError(f"pad_factor must be an integer >= 1, got {pad_factor!r}")
    pad_factor = int(pad_factor)
    ap = cube.aperture
    data = cube.samples
    w = taper(ap, window)
    if w is not None:
        data = data * w[None, :, :]
    ny_pad, nx_pad = ap.ny * pad_factor, ap.nx * pad_factor
    spec = np.fft.fft2(data, s=(ny_pad, nx_pad), axes=(-2, -1))
    return SpectrumCube(
        samples=spec,
        kx_axis=spatial_frequencies(nx_pad, ap.dx),
        ky_axis=spatial_frequencies(ny_pad, ap.dy),
        k_values=cube.k_values,
        pad_factor=pad_factor,
        aperture=ap,
    )


def spatial_ifft2(slab: np.ndarray, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Inverse of the per-slab forward transform (carries the ``1/N`` factor)."""
    slab = np.asarray(slab)
    if shape is not None and slab.shape[-2:] != tuple(shape):
        raise ValueError(f"slab shape {slab.shape[-2:]} does not match expected {tuple(shape)}")
    return np.fft.ifft2(slab, axes=(-2, -1))


def dispersion_kz(k, kx, ky):
    """Longitudinal wavenumber ``sqrt(4k^2 - kx^2 - ky^2)``.

    Evanescent components (``kx^2 + ky^2 >= 4k^2``) are marked with NaN.
    Accepts scalars or broadcastable arrays.
    """
    t = 4.0 * np.square(k) - np.square(kx) - np.square(ky)
    if np.ndim(t) == 0:
        return math.sqrt(t) if t > 0 else math.nan
    out = np.full(np.shape(t), np.nan)
    prop = t > 0
    out[prop] = np.sqrt(t[prop])
    return out
