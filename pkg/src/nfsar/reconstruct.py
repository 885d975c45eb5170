"""Wavenumber-domain image formation, backprojection reference and PSF metrics."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from nfsar import kernels
from nfsar.geometry import ApertureGrid, SignalCube
from nfsar.spectral import DEFAULT_PAD_FACTOR, SpectrumCube, spatial_ifft2


@dataclass(frozen=True)
class ComplexImage:
    """Reflectivity estimate on one plane ``z = z_d``.

    Pixel ``(iy, ix)`` sits at ``(x_origin + ix*dx, y_origin + iy*dy)``.
    """

    values: np.ndarray = field(repr=False)
    dx: float
    dy: float
    x_origin: float
    y_origin: float
    z_d: float

    def __post_init__(self) -> None:
        if not self.z_d > 0:
            raise ValueError(f"z_d must be positive, got {self.z_d!r}")
        if np.ndim(self.values) != 2:
            raise ValueError("image values must be 2D")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def x(self) -> np.ndarray:
        return self.x_origin + np.arange(self.shape[1]) * self.dx

    @property
    def y(self) -> np.ndarray:
        return self.y_origin + np.arange(self.shape[0]) * self.dy

    @property
    def grid(self) -> ApertureGrid:
        ny, nx = self.shape
        return ApertureGrid(nx, ny, self.dx, self.dy, self.x_origin, self.y_origin)

    def pixel_of(self, x: float, y: float) -> tuple[int, int]:
        """Index ``(iy, ix)`` of the pixel nearest to ``(x, y)``."""
        ix = int(round((x - self.x_origin) / self.dx))
        iy = int(round((y - self.y_origin) / self.dy))
        return iy, ix


@dataclass(frozen=True)
class Volume:
    planes: tuple[ComplexImage, ...]

    def __post_init__(self) -> None:
        planes = tuple(self.planes)
        if not planes:
            raise ValueError("a volume needs at least one plane")
        z = [p.z_d for p in planes]
        if any(b <= a for a, b in zip(z, z[1:])):
            raise ValueError("plane depths must be strictly increasing")
        ref = planes[0]
        for p in planes[1:]:
            if p.shape != ref.shape or (p.dx, p.dy) != (ref.dx, ref.dy):
                raise ValueError("all planes must share grid dimensions and spacings")
        object.__setattr__(self, "planes", planes)

    @property
    def depths(self) -> list[float]:
        return [p.z_d for p in self.planes]

    def as_array(self) -> np.ndarray:
        """Stack of plane values, shape ``(nz, ny, nx)``."""
        return np.stack([p.values for p in self.planes])


def _center_shift(n_pad: int, n: int) -> int:
    # places the aperture's central sample at pixel n_pad // 2
    return n_pad // 2 - (n - 1) // 2


def image_grid(aperture: ApertureGrid, pad_factor: int = DEFAULT_PAD_FACTOR) -> ApertureGrid:
    """Pixel lattice of reconstructed images for a given aperture and padding.

    The lattice shares the aperture pitch and nodes, is ``pad_factor`` times
    larger, and puts the aperture center at the central pixel.
    """
    nx, ny = aperture.nx * pad_factor, aperture.ny * pad_factor
    sx, sy = _center_shift(nx, aperture.nx), _center_shift(ny, aperture.ny)
    return ApertureGrid(
        nx, ny, aperture.dx, aperture.dy,
        aperture.x0 - sx * aperture.dx, aperture.y0 - sy * aperture.dy,
    )


def rma_plane(spectrum: SpectrumCube, z_d: float, sign: float = 1.0) -> ComplexImage:
    """Focus the spectrum on the plane ``z = z_d``.

    Every k-slab is multiplied by ``exp(1j*sign*z_d*kz)`` (zero where
    evanescent) and the slabs are summed with unit weights, in ascending k
    order, before the inverse spatial transform. The inverse transform is
    linear, so this equals summing the per-slab inverse transforms.
    ``sign=-1`` flips the matched filter (used for conjugate data).
    """
    if not (math.isfinite(z_d) and z_d > 0):
        raise ValueError(f"z_d must be finite and positive, got {z_d!r}")
    focused = kernels.focus(
        spectrum.samples, spectrum.k_values, spectrum.kx_axis, spectrum.ky_axis, z_d, sign
    )
    raw = spatial_ifft2(focused, shape=spectrum.shape[1:])
    grid = image_grid(spectrum.aperture, spectrum.pad_factor)
    ap = spectrum.aperture
    shifts = (_center_shift(grid.ny, ap.ny), _center_shift(grid.nx, ap.nx))
    values = np.roll(raw, shifts, axis=(0, 1))
    return ComplexImage(values, grid.dx, grid.dy, grid.x0, grid.y0, float(z_d))


def rma_volume(spectrum: SpectrumCube, z_list, workers: int = 1) -> Volume:
    """One independently focused plane per depth.

    Planes may be computed on ``workers`` threads; results do not depend on
    the worker count.
    """
    z_list = [float(z) for z in z_list]
    if not z_list:
        raise ValueError("z_list must not be empty")
    if any(not z > 0 for z in z_list):
        raise ValueError("all depths must be positive")
    if any(b <= a for a, b in zip(z_list, z_list[1:])):
        raise ValueError("depths must be strictly increasing")
    if workers > 1 and len(z_list) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            planes = list(pool.map(lambda z: rma_plane(spectrum, z), z_list))
    else:
        planes = [rma_plane(spectrum, z) for z in z_list]
    return Volume(tuple(planes))


def backprojection_oracle(
    cube: SignalCube, z_d: float, out_grid: ApertureGrid | None = None
) -> ComplexImage:
    """Brute-force conjugate-phase image, ``sum s * exp(+2j*k*R)``.

    Cost is O(pixels * aperture * num_k); meant for small reference cases.
    Defaults to the grid :func:`rma_plane` would produce with the default
    padding.
    """
    if not (math.isfinite(z_d) and z_d > 0):
        raise ValueError(f"z_d must be finite and positive, got {z_d!r}")
    if out_grid is None:
        out_grid = image_grid(cube.aperture)
    ap = cube.aperture
    values = kernels.backproject(
        cube.samples, cube.k_values, ap.x, ap.y, out_grid.x, out_grid.y, z_d
    )
    return ComplexImage(values, out_grid.dx, out_grid.dy, out_grid.x0, out_grid.y0, float(z_d))


@dataclass(frozen=True)
class PsfMetrics:
    peak_index: tuple[int, int]
    peak_value: complex
    width_x_3db: float
    width_y_3db: float
    peak_sidelobe_ratio: float


def _half_power_width(cut: np.ndarray, i: int) -> float:
    """-3 dB width in samples around index ``i``, linearly interpolated."""
    level = cut[i] / math.sqrt(2.0)
    n = cut.size
    left = 0.0
    for j in range(i - 1, -1, -1):
        if cut[j] < level:
            left = j + (level - cut[j]) / (cut[j + 1] - cut[j])
            break
    right = float(n - 1)
    for j in range(i + 1, n):
        if cut[j] < level:
            right = j - (level - cut[j]) / (cut[j - 1] - cut[j])
            break
    return right - left


def _main_lobe_bounds(cut: np.ndarray, i: int) -> tuple[int, int]:
    # walk downhill from the peak; the first local minimum on each side ends the lobe
    lo = i
    while lo > 0 and cut[lo - 1] < cut[lo]:
        lo -= 1
    hi = i
    while hi < cut.size - 1 and cut[hi + 1] < cut[hi]:
        hi += 1
    return lo, hi


def _largest_sidelobe(cut: np.ndarray, i: int) -> float:
    lo, hi = _main_lobe_bounds(cut, i)
    best = 0.0
    for j in range(cut.size):
        if lo <= j <= hi:
            continue
        left = cut[j - 1] if j > 0 else -np.inf
        right = cut[j + 1] if j < cut.size - 1 else -np.inf
        if cut[j] > 0 and cut[j] >= left and cut[j] >= right:
            best = max(best, cut[j])
    return best


def psf_metrics(image: ComplexImage) -> PsfMetrics:
    """Resolution and sidelobe level of a point-target image.

    The peak is the global magnitude maximum (lowest linear index on ties).
    Widths and the peak sidelobe ratio are measured on the row and column
    through the peak. Lobes narrower than one pixel are reported as one
    pixel; with no sidelobe the ratio is ``-inf``.
    """
    mag = np.abs(image.values)
    if mag.size == 0 or np.all(mag == mag.flat[0]):
        raise ValueError("cannot measure a PSF on a flat image")
    iy, ix = np.unravel_index(int(np.argmax(mag)), mag.shape)
    row, col = mag[iy, :], mag[:, ix]
    wx = max(_half_power_width(row, ix), 1.0) * image.dx
    wy = max(_half_power_width(col, iy), 1.0) * image.dy
    side = max(_largest_sidelobe(row, ix), _largest_sidelobe(col, iy))
    peak = mag[iy, ix]
    pslr = 20.0 * math.log10(side / peak) if side > 0 else -math.inf
    pslr = min(pslr, 0.0)
    return PsfMetrics(
        peak_index=(int(iy), int(ix)),
        peak_value=complex(image.values[iy, ix]),
        width_x_3db=float(wx),
        width_y_3db=float(wy),
        peak_sidelobe_ratio=pslr,
    )


def normalize_db(image: ComplexImage, floor_db: float = -40.0) -> np.ndarray:
    """Magnitude in dB relative to the image maximum, clamped at ``floor_db``."""
    if not floor_db < 0:
        raise ValueError(f"floor_db must be negative, got {floor_db!r}")
    mag = np.abs(image.values)
    peak = mag.max() if mag.size else 0.0
    if not peak > 0:
        raise ValueError("cannot normalize an all-zero image")
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag / peak)
    return np.maximum(db, floor_db)


def main_lobe_correlation(a: ComplexImage, b: ComplexImage, level_db: float = -10.0) -> float:
    """Normalized correlation of two magnitude images over b's main-lobe region.

    The region is the set of pixels where ``|b|`` is within ``level_db`` of
    its own peak. Scale-invariant in both images.
    """
    ma, mb = np.abs(a.values), np.abs(b.values)
    if ma.shape != mb.shape:
        raise ValueError("images must have the same shape")
    mask = mb >= mb.max() * 10.0 ** (level_db / 20.0)
    va, vb = ma[mask], mb[mask]
    return float(np.dot(va, vb) / math.sqrt(np.dot(va, va) * np.dot(vb, vb)))
