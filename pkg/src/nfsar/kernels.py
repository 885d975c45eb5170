"""Kernel backend selection.

The compiled ``_core`` extension is used when it is importable; otherwise
the numpy implementations in ``_pycore`` are used. Setting the environment
variable ``NFSAR_PURE_PYTHON=1`` forces the numpy backend.
"""
import logging
import os

import numpy as np

from nfsar import _pycore

log = logging.getLogger(__name__)

_core = None
if os.environ.get("NFSAR_PURE_PYTHON", "").strip() not in ("1", "true", "yes"):
    try:
        from nfsar import _core
    except ImportError:  # extension not built
        log.debug("compiled kernels unavailable, using numpy fallback")

BACKEND = "cython" if _core is not None else "python"
_impl = _core if _core is not None else _pycore


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _c128(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def simulate(k, xa, ya, positions, reflectivity, impl=None):
    impl = impl or _impl
    positions = _f64(positions).reshape(-1, 3)
    return impl.simulate(_f64(k), _f64(xa), _f64(ya), positions, _c128(reflectivity))


def focus(spectrum, k, kx, ky, z, sign=1.0, impl=None):
    impl = impl or _impl
    return impl.focus(_c128(spectrum), _f64(k), _f64(kx), _f64(ky), float(z), float(sign))


def backproject(samples, k, xa, ya, xo, yo, z, impl=None):
    impl = impl or _impl
    return impl.backproject(
        _c128(samples), _f64(k), _f64(xa), _f64(ya), _f64(xo), _f64(yo), float(z)
    )
