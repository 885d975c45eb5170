"""Pure numpy implementations of the numerical kernels.

Signatures mirror the compiled ``_core`` extension exactly; see
:mod:`nfsar.kernels` for the selection logic.
"""
import numpy as np


def simulate(k, xa, ya, positions, reflectivity):
    """Sum of ``p * exp(-2j*k*R)`` over scatterers, shape ``(len(k), len(ya), len(xa))``."""
    out = np.zeros((k.size, ya.size, xa.size), dtype=np.complex128)
    kk = k[:, None, None]
    for (x, y, z), p in zip(positions, reflectivity):
        r = np.sqrt((xa[None, :] - x) ** 2 + (ya[:, None] - y) ** 2 + z * z)
        out += p * np.exp(-2j * kk * r[None, :, :])
    return out


def focus(spectrum, k, kx, ky, z, sign):
    """Phase-compensate every k-slab at depth ``z`` and sum the slabs.

    Evanescent bins (``4k^2 <= kx^2 + ky^2``) contribute nothing. Slabs are
    accumulated in ascending k order.
    """
    nk, ny, nx = spectrum.shape
    q = kx[None, :] ** 2 + ky[:, None] ** 2
    out = np.zeros((ny, nx), dtype=np.complex128)
    for ik in range(nk):
        t = 4.0 * k[ik] * k[ik] - q
        prop = t > 0
        kz = np.sqrt(np.where(prop, t, 0.0))
        out += np.where(prop, spectrum[ik] * np.exp(1j * (sign * z) * kz), 0.0)
    return out


def backproject(samples, k, xa, ya, xo, yo, z):
    """Conjugate-phase sum ``sum s * exp(+2j*k*R)`` onto the output pixels."""
    out = np.zeros((yo.size, xo.size), dtype=np.complex128)
    kk = k[:, None, None, None]
    for iy, yp in enumerate(yo):
        r = np.sqrt(
            (xa[None, None, :] - xo[:, None, None]) ** 2
            + (ya[None, :, None] - yp) ** 2
            + z * z
        )
        phasor = np.exp(2j * kk * r[None, ...])
        out[iy] = np.einsum("kyx,kpyx->p", samples, phasor)
    return out
