"""Time the compiled and pure-numpy kernels on representative problem sizes.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from nfsar import _pycore
from nfsar.geometry import ApertureGrid, PointScatterer, Scene, build_wavenumber_grid, paper_preset
from nfsar.spectral import spatial_frequencies

try:
    from nfsar import _core
except ImportError:
    _core = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    radar, _ = paper_preset(num_k=64)
    k = build_wavenumber_grid(radar).k_values
    ap = ApertureGrid.centered(128, 128, 1e-3, 1e-3)
    rng = np.random.default_rng(0)
    scene = Scene(tuple(
        PointScatterer(rng.uniform(-0.03, 0.03), rng.uniform(-0.03, 0.03), rng.uniform(0.2, 0.4))
        for _ in range(8)
    ))
    pos, refl = scene.positions(), scene.reflectivities()
    spec = rng.standard_normal((64, 256, 256)) + 1j * rng.standard_normal((64, 256, 256))
    kx = ky = spatial_frequencies(256, 1e-3)

    small_k = k[::8].copy()
    small = ApertureGrid.centered(16, 16, 1e-3, 1e-3)
    samples = _pycore.simulate(small_k, small.x, small.y, pos, refl)
    xo = yo = np.arange(-16, 16) * 1e-3

    return [
        ("simulate 64x128x128, 8 targets", lambda m: m.simulate(k, ap.x, ap.y, pos, refl)),
        ("focus 64x256x256", lambda m: m.focus(spec, k, kx, ky, 0.3, 1.0)),
        ("backproject 8x16x16 -> 32x32", lambda m: m.backproject(samples, small_k, small.x, small.y, xo, yo, 0.3)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    print(f"{'kernel':34s} {'numpy (s)':>10s} {'cython (s)':>11s} {'speedup':>8s}")
    for name, call in cases():
        t_py = best_of(lambda: call(_pycore), args.repeat)
        if _core is None:
            print(f"{name:34s} {t_py:10.4f} {'n/a':>11s} {'':>8s}")
            continue
        t_c = best_of(lambda: call(_core), args.repeat)
        print(f"{name:34s} {t_py:10.4f} {t_c:11.4f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
