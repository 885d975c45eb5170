# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numerical kernels.

Same signatures and semantics as ``nfsar._pycore``. All loops run without
the GIL so callers may evaluate independent planes on threads.
"""
import numpy as np

from libc.math cimport sqrt, cos, sin


def simulate(const double[::1] k, const double[::1] xa, const double[::1] ya,
             const double[:, ::1] positions, const double complex[::1] reflectivity):
    cdef Py_ssize_t nk = k.shape[0], ny = ya.shape[0], nx = xa.shape[0]
    cdef Py_ssize_t ns = positions.shape[0]
    out = np.zeros((nk, ny, nx), dtype=np.complex128)
    cdef double[:, :, :, ::1] o = out.view(np.float64).reshape(nk, ny, nx, 2)
    cdef Py_ssize_t s, ik, iy, ix
    cdef double px, py, pz, pr, pi, r, ph, c, sn, ddx, ddy
    with nogil:
        for s in range(ns):
            px = positions[s, 0]
            py = positions[s, 1]
            pz = positions[s, 2]
            pr = reflectivity[s].real
            pi = reflectivity[s].imag
            for iy in range(ny):
                ddy = ya[iy] - py
                for ix in range(nx):
                    ddx = xa[ix] - px
                    r = sqrt(ddx * ddx + ddy * ddy + pz * pz)
                    for ik in range(nk):
                        ph = -2.0 * k[ik] * r
                        c = cos(ph)
                        sn = sin(ph)
                        o[ik, iy, ix, 0] += pr * c - pi * sn
                        o[ik, iy, ix, 1] += pr * sn + pi * c
    return out


def focus(const double complex[:, :, ::1] spectrum, const double[::1] k,
          const double[::1] kx, const double[::1] ky, double z, double sign):
    cdef Py_ssize_t nk = spectrum.shape[0], ny = spectrum.shape[1], nx = spectrum.shape[2]
    out = np.zeros((ny, nx), dtype=np.complex128)
    cdef double[:, :, ::1] o = out.view(np.float64).reshape(ny, nx, 2)
    cdef Py_ssize_t ik, iy, ix
    cdef double k4, t, ph, c, sn, sr, si, szs = sign * z
    with nogil:
        for ik in range(nk):
            k4 = 4.0 * k[ik] * k[ik]
            for iy in range(ny):
                for ix in range(nx):
                    t = k4 - kx[ix] * kx[ix] - ky[iy] * ky[iy]
                    if t > 0:
                        ph = szs * sqrt(t)
                        c = cos(ph)
                        sn = sin(ph)
                        sr = spectrum[ik, iy, ix].real
                        si = spectrum[ik, iy, ix].imag
                        o[iy, ix, 0] += sr * c - si * sn
                        o[iy, ix, 1] += sr * sn + si * c
    return out


def backproject(const double complex[:, :, ::1] samples, const double[::1] k,
                const double[::1] xa, const double[::1] ya,
                const double[::1] xo, const double[::1] yo, double z):
    cdef Py_ssize_t nk = samples.shape[0], ny = samples.shape[1], nx = samples.shape[2]
    cdef Py_ssize_t my = yo.shape[0], mx = xo.shape[0]
    out = np.zeros((my, mx), dtype=np.complex128)
    cdef double[:, :, ::1] o = out.view(np.float64).reshape(my, mx, 2)
    cdef Py_ssize_t py, px, ik, iy, ix
    cdef double r, ph, c, sn, sr, si, ddx, ddy, accr, acci
    with nogil:
        for py in range(my):
            for px in range(mx):
                accr = 0.0
                acci = 0.0
                for iy in range(ny):
                    ddy = ya[iy] - yo[py]
                    for ix in range(nx):
                        ddx = xa[ix] - xo[px]
                        r = sqrt(ddx * ddx + ddy * ddy + z * z)
                        for ik in range(nk):
                            ph = 2.0 * k[ik] * r
                            c = cos(ph)
                            sn = sin(ph)
                            sr = samples[ik, iy, ix].real
                            si = samples[ik, iy, ix].imag
                            accr += sr * c - si * sn
                            acci += sr * sn + si * c
                o[py, px, 0] = accr
                o[py, px, 1] = acci
    return out
