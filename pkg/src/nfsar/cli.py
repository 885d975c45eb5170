"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 input-format error, 3 numeric or
invariant failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time

from nfsar import __version__, kernels
from nfsar import io as nio
from nfsar.forward import (
    DEFAULT_ALPHA,
    MonostaticCheck,
    fresnel_distance,
    monostatic_validity,
    nyquist_check,
    simulate_cube,
)
from nfsar.reconstruct import backprojection_oracle, image_grid, normalize_db, psf_metrics, rma_plane, rma_volume
from nfsar.spectral import spatial_fft2

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_NUMERIC = 0, 1, 2, 3
ORACLE_LIMIT = (16, 32, 32)  # num_k, ny, nx


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _emit(lines, stream=None):
    stream = stream or sys.stdout
    for key, value in lines:
        stream.write(f"{key}={_fmt(value)}\n")


def _config(path) -> nio.Config:
    return nio.load_config(path) if path else nio.parse_config("")


def _depths(args) -> list[float]:
    if args.z_stop is None:
        if args.z_step is not None:
            raise UsageError("--z-step requires --z-stop")
        return [args.z]
    if args.z_step is None or not args.z_step > 0:
        raise UsageError("--z-stop requires a positive --z-step")
    if args.z_stop < args.z:
        raise UsageError("--z-stop must not be smaller than --z")
    n = int(math.floor((args.z_stop - args.z) / args.z_step + 1e-9)) + 1
    return [args.z + i * args.z_step for i in range(n)]


class _Run:
    """Collects manifest fields for one invocation."""

    def __init__(self, command: str, argv):
        self.command = command
        self.argv = list(argv)
        self.start = time.perf_counter()
        self.entries: list[tuple[str, object]] = []

    def add(self, key, value):
        self.entries.append((key, value))

    def sidecar(self, artifact, **extra):
        entries = [("command", self.command), ("argv", " ".join(self.argv)),
                   ("version", __version__), ("backend", kernels.BACKEND)]
        entries += self.entries
        entries += list(extra.items())
        entries += [("output", artifact), ("duration_s", time.perf_counter() - self.start)]
        nio.write_manifest(f"{artifact}.manifest", entries)


def _write_plane(run, image, prefix, fmt, floor_db, **extra):
    db = normalize_db(image, floor_db)
    formats = ("pgm", "csv") if fmt == "both" else (fmt,)
    written = []
    for f in formats:
        path = f"{prefix}_z{image.z_d:.4f}.{f}"
        nio.write_image(db, path, f, floor_db)
        run.sidecar(path, z_m=image.z_d, format=f, **extra)
        written.append(path)
    return written


def cmd_simulate(args, run):
    cfg = _config(args.config)
    scene = nio.load_scene(args.scene)
    nyquist_check(cfg.aperture, cfg.radar)
    cube = simulate_cube(cfg.radar, cfg.aperture, scene)
    nbytes = nio.write_cube(cube, args.out)
    for key, value in cfg.items():
        run.add(key, value)
    run.add("config", args.config or "")
    run.add("scene", args.scene)
    run.add("scatterers", len(scene))
    run.sidecar(args.out, bytes=nbytes)
    print(f"wrote {args.out} ({nbytes} bytes, shape {cube.shape})")
    return EXIT_OK


def _recon_inputs(args, run):
    cfg = _config(args.config)
    cube = nio.read_cube(args.input)
    for key, value in cfg.items()[-3:]:
        run.add(key, value)
    run.add("config", args.config or "")
    run.add("input", args.input)
    return cfg, cube


def cmd_reconstruct(args, run):
    depths = _depths(args)
    cfg, cube = _recon_inputs(args, run)
    opts = cfg.options
    spectrum = spatial_fft2(cube, opts.pad_factor, opts.window)
    volume = rma_volume(spectrum, depths, workers=args.workers)
    for plane in volume.planes:
        for path in _write_plane(run, plane, args.out_prefix, args.format, opts.floor_db):
            print(f"wrote {path}")
    return EXIT_OK


def cmd_oracle(args, run):
    cfg, cube = _recon_inputs(args, run)
    if not args.force and any(n > lim for n, lim in zip(cube.shape, ORACLE_LIMIT)):
        raise UsageError(
            f"cube {cube.shape} exceeds oracle limit {ORACLE_LIMIT} (num_k, ny, nx); pass --force to run anyway"
        )
    grid = image_grid(cube.aperture, cfg.options.pad_factor)
    image = backprojection_oracle(cube, args.z, grid)
    for path in _write_plane(run, image, args.out_prefix, args.format, cfg.options.floor_db, method="backprojection"):
        print(f"wrote {path}")
    return EXIT_OK


def cmd_psf(args, run):
    cfg = _config(args.config)
    cube = nio.read_cube(args.input)
    spectrum = spatial_fft2(cube, cfg.options.pad_factor, cfg.options.window)
    image = rma_plane(spectrum, args.z)
    m = psf_metrics(image)
    iy, ix = m.peak_index
    _emit([
        ("z_m", image.z_d),
        ("peak_iy", iy),
        ("peak_ix", ix),
        ("peak_x_m", float(image.x[ix])),
        ("peak_y_m", float(image.y[iy])),
        ("peak_abs", abs(m.peak_value)),
        ("peak_re", m.peak_value.real),
        ("peak_im", m.peak_value.imag),
        ("width_x_3db_m", m.width_x_3db),
        ("width_y_3db_m", m.width_y_3db),
        ("peak_sidelobe_ratio_db", m.peak_sidelobe_ratio),
    ])
    return EXIT_OK


def cmd_check(args, run):
    cfg = _config(args.config)
    radar, ap = cfg.radar, cfg.aperture
    fc = radar.center_frequency
    zf = fresnel_distance(ap, fc)
    ny_rep = nyquist_check(ap, radar)
    mono = monostatic_validity(MonostaticCheck(d=args.d, fc=fc, range=args.range, alpha=args.alpha))
    _emit([
        ("fc_hz", fc),
        ("depth_m", args.range),
        ("fresnel_distance_m", zf),
        ("near_field", args.range < zf),
        ("nyquist_limit_m", ny_rep.limit),
        ("nyquist_x", "pass" if ny_rep.x_ok else "flagged"),
        ("nyquist_y", "pass" if ny_rep.y_ok else "flagged"),
        ("monostatic_d_m", args.d),
        ("monostatic_alpha", args.alpha),
        ("monostatic_threshold_m", mono.threshold),
        ("monostatic_ratio", mono.ratio),
        ("monostatic_valid", mono.valid),
    ])
    return EXIT_OK


def cmd_info(args, run):
    hdr = nio.read_cube_header(args.input)
    with open(args.input, "rb") as fh:
        fh.seek(0, 2)
        actual = fh.tell()
    if actual != hdr.file_size:
        raise nio.TruncatedCubeError(hdr.file_size, actual)
    _emit([
        ("magic", hdr.magic.rstrip(b"\x00").decode("ascii")),
        ("num_k", hdr.num_k), ("ny", hdr.ny), ("nx", hdr.nx),
        ("f0_hz", hdr.f0), ("bandwidth_hz", hdr.bandwidth), ("chirp_s", hdr.chirp_duration),
        ("dx_m", hdr.dx), ("dy_m", hdr.dy), ("x0_m", hdr.x0), ("y0_m", hdr.y0),
        ("file_bytes", actual),
    ])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nfsar", description="Near-field FMCW-SAR simulation and imaging.")
    parser.add_argument("--version", action="version", version=f"nfsar {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("simulate", help="synthesize a beat-signal cube from a scene")
    p.add_argument("--config")
    p.add_argument("--scene", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reconstruct", help="wavenumber-domain image formation")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--z-stop", type=float)
    p.add_argument("--z-step", type=float)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--format", choices=("pgm", "csv", "both"), default="pgm")
    p.add_argument("--config", help="reconstruction options (pad_factor, window, floor_db)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("oracle", help="brute-force backprojection reference image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--format", choices=("pgm", "csv", "both"), default="pgm")
    p.add_argument("--config")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("psf", help="point-spread-function metrics of a reconstructed plane")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_psf)

    p = sub.add_parser("check", help="near-field, sampling and monostatic checks")
    p.add_argument("--config")
    p.add_argument("--d", type=float, default=0.01, help="TX-RX separation (m)")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--range", type=float, default=0.30, help="target range / depth (m)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("info", help="print cube header fields")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_info)
    return parser


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage())
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s")
        return args.func(args, _Run(args.command, argv))
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except nio.InvariantError as exc:
        sys.stderr.write(f"nfsar: {exc}\n")
        return EXIT_NUMERIC
    except (nio.ParseError, nio.CubeFormatError, OSError) as exc:
        sys.stderr.write(f"nfsar: {exc}\n")
        return EXIT_FORMAT
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"nfsar: {exc}\n")
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
