"""Cube files, scene and configuration parsing, image export.

Cube file layout (all little-endian)::

    offset  size  field
    0       8     magic b"NFSAR1\\0\\0"
    8       4     num_k   (uint32)
    12      4     ny      (uint32)
    16      4     nx      (uint32)
    20      8     f0 (Hz)             float64
    28      8     bandwidth (Hz)      float64
    36      8     chirp_duration (s)  float64
    44      8     dx (m)              float64
    52      8     dy (m)              float64
    60      4     x0 (m)              float32
    64      4     y0 (m)              float32
    68      ...   num_k*ny*nx complex samples, (re, im) float32 pairs,
                  ix fastest, then iy, then ik

Samples are stored at 32-bit precision; this is the only lossy step of the
pipeline. The origin coordinates are stored as float32 to keep the header at
68 bytes.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field, fields, replace

import numpy as np

from nfsar.geometry import (
    ApertureGrid,
    PointScatterer,
    RadarParams,
    Scene,
    SignalCube,
    paper_preset,
)
from nfsar.spectral import DEFAULT_PAD_FACTOR, WINDOWS

MAGIC = b"NFSAR1\x00\x00"
HEADER = struct.Struct("<8s3I5d2f")
HEADER_SIZE = HEADER.size  # 68
SAMPLE_DTYPE = np.dtype("<c8")


class CubeFormatError(ValueError):
    """Base class for malformed cube files."""


class BadMagicError(CubeFormatError):
    pass


class TruncatedCubeError(CubeFormatError):
    """File length differs from what the header demands."""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"cube file length mismatch: expected {expected} bytes, got {actual}")


class InvalidHeaderError(CubeFormatError):
    pass


class ParseError(ValueError):
    """Malformed scene or configuration text; carries the 1-based line number."""

    def __init__(self, message: str, line: int, path=None):
        self.line = line
        self.path = path
        where = f"{path}:{line}" if path is not None else f"line {line}"
        super().__init__(f"{where}: {message}")


class InvariantError(ParseError):
    """Configuration parsed but the assembled values violate an invariant."""


@dataclass(frozen=True)
class CubeFileHeader:
    num_k: int
    ny: int
    nx: int
    f0: float
    bandwidth: float
    chirp_duration: float
    dx: float
    dy: float
    x0: float
    y0: float
    magic: bytes = MAGIC

    @property
    def payload_size(self) -> int:
        return self.num_k * self.ny * self.nx * SAMPLE_DTYPE.itemsize

    @property
    def file_size(self) -> int:
        return HEADER_SIZE + self.payload_size

    def pack(self) -> bytes:
        return HEADER.pack(
            self.magic, self.num_k, self.ny, self.nx, self.f0, self.bandwidth,
            self.chirp_duration, self.dx, self.dy, self.x0, self.y0,
        )

    @classmethod
    def unpack(cls, raw: bytes) -> "CubeFileHeader":
        if len(raw) < HEADER_SIZE:
            raise TruncatedCubeError(HEADER_SIZE, len(raw))
        magic, nk, ny, nx, f0, b, t, dx, dy, x0, y0 = HEADER.unpack_from(raw)
        if magic != MAGIC:
            raise BadMagicError(f"bad magic {magic!r}, expected {MAGIC!r}")
        hdr = cls(nk, ny, nx, f0, b, t, dx, dy, x0, y0, magic)
        hdr.validate()
        return hdr

    def validate(self) -> None:
        if 0 in (self.num_k, self.ny, self.nx):
            raise InvalidHeaderError(f"zero dimension in header ({self.num_k}, {self.ny}, {self.nx})")
        for name in ("f0", "bandwidth", "chirp_duration", "dx", "dy"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidHeaderError(f"header field {name} must be finite and positive, got {v!r}")
        for name in ("x0", "y0"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InvalidHeaderError(f"header field {name} must be finite, got {v!r}")

    @classmethod
    def for_cube(cls, cube: SignalCube) -> "CubeFileHeader":
        r, a = cube.radar, cube.aperture
        return cls(r.num_k, a.ny, a.nx, r.f0, r.bandwidth, r.chirp_duration, a.dx, a.dy, a.x0, a.y0)

    def radar(self) -> RadarParams:
        return RadarParams(self.f0, self.bandwidth, self.chirp_duration, self.num_k)

    def aperture(self) -> ApertureGrid:
        return ApertureGrid(self.nx, self.ny, self.dx, self.dy, self.x0, self.y0)


def encode_cube(cube: SignalCube) -> bytes:
    header = CubeFileHeader.for_cube(cube)
    return header.pack() + cube.samples.astype(SAMPLE_DTYPE).tobytes(order="C")


def decode_cube(raw: bytes) -> SignalCube:
    header = CubeFileHeader.unpack(raw)
    if len(raw) != header.file_size:
        raise TruncatedCubeError(header.file_size, len(raw))
    samples = np.frombuffer(raw, dtype=SAMPLE_DTYPE, offset=HEADER_SIZE)
    samples = samples.reshape(header.num_k, header.ny, header.nx).astype(np.complex128)
    if not np.all(np.isfinite(samples)):
        raise CubeFormatError("cube payload contains non-finite samples")
    return SignalCube(header.radar(), header.aperture(), samples)


def write_cube(cube: SignalCube, destination) -> int:
    """Serialize ``cube`` to a path or binary file object; returns bytes written."""
    raw = encode_cube(cube)
    if hasattr(destination, "write"):
        destination.write(raw)
    else:
        with open(destination, "wb") as fh:
            fh.write(raw)
    return len(raw)


def read_cube(source) -> SignalCube:
    if hasattr(source, "read"):
        raw = source.read()
    else:
        with open(source, "rb") as fh:
            raw = fh.read()
    return decode_cube(raw)


def read_cube_header(source) -> CubeFileHeader:
    """Parse and validate only the header (does not check the payload length)."""
    with open(source, "rb") as fh:
        return CubeFileHeader.unpack(fh.read(HEADER_SIZE))


def _content_lines(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_scene(text: str, path=None) -> Scene:
    """Parse ``x_m, y_m, z_m, amplitude, phase_deg`` lines into a Scene."""
    scatterers = []
    for lineno, line in _content_lines(text):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 5:
            raise ParseError(f"expected 5 comma-separated fields, got {len(parts)}", lineno, path)
        try:
            x, y, z, amp, phase = (float(p) for p in parts)
        except ValueError:
            raise ParseError(f"non-numeric field in {line!r}", lineno, path) from None
        if not all(math.isfinite(v) for v in (x, y, z, amp, phase)):
            raise ParseError("non-finite value", lineno, path)
        if z <= 0:
            raise ParseError(f"scatterer depth must be positive, got z={z}", lineno, path)
        p = amp * complex(math.cos(math.radians(phase)), math.sin(math.radians(phase)))
        scatterers.append(PointScatterer(x, y, z, p))
    return Scene(tuple(scatterers))


def load_scene(path) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return parse_scene(fh.read(), path)


@dataclass(frozen=True)
class ReconOptions:
    pad_factor: int = DEFAULT_PAD_FACTOR
    window: str = "none"
    floor_db: float = -40.0


@dataclass(frozen=True)
class Config:
    """Resolved configuration: radar, aperture and reconstruction options."""

    radar: RadarParams
    aperture: ApertureGrid
    options: ReconOptions = field(default_factory=ReconOptions)

    def items(self) -> list[tuple[str, object]]:
        """All configuration keys with their resolved values, in grammar order."""
        r, a, o = self.radar, self.aperture, self.options
        return [
            ("f0_hz", r.f0), ("bandwidth_hz", r.bandwidth), ("chirp_s", r.chirp_duration),
            ("num_k", r.num_k), ("nx", a.nx), ("ny", a.ny), ("dx_m", a.dx), ("dy_m", a.dy),
            ("x0_m", a.x0), ("y0_m", a.y0), ("pad_factor", o.pad_factor),
            ("window", o.window), ("floor_db", o.floor_db),
        ]

    def __iter__(self):
        return iter((self.radar, self.aperture, self.options))


def _int(text: str) -> int:
    v = float(text)
    if not v.is_integer():
        raise ValueError(f"{text!r} is not an integer")
    return int(v)


def _window(text: str) -> str:
    if text not in WINDOWS:
        raise ValueError(f"window must be one of {WINDOWS}, got {text!r}")
    return text


# key -> (section, attribute, parser)
CONFIG_KEYS = {
    "f0_hz": ("radar", "f0", float),
    "bandwidth_hz": ("radar", "bandwidth", float),
    "chirp_s": ("radar", "chirp_duration", float),
    "num_k": ("radar", "num_k", _int),
    "nx": ("aperture", "nx", _int),
    "ny": ("aperture", "ny", _int),
    "dx_m": ("aperture", "dx", float),
    "dy_m": ("aperture", "dy", float),
    "x0_m": ("aperture", "x0", float),
    "y0_m": ("aperture", "y0", float),
    "pad_factor": ("options", "pad_factor", _int),
    "window": ("options", "window", _window),
    "floor_db": ("options", "floor_db", float),
}


def parse_config(text: str, path=None) -> Config:
    """Parse ``key = value`` lines; missing keys take the preset values.

    When ``nx``/``dx_m`` (or ``ny``/``dy_m``) change and no origin is given,
    the aperture stays centered on the origin.
    """
    values: dict[str, object] = {}
    where: dict[str, int] = {}
    for lineno, line in _content_lines(text):
        key, sep, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno, path)
        if key not in CONFIG_KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, path)
        if key in values:
            raise ParseError(f"duplicate key {key!r} (first set on line {where[key]})", lineno, path)
        try:
            values[key] = CONFIG_KEYS[key][2](raw)
        except ValueError as exc:
            raise ParseError(f"bad value for {key}: {exc}", lineno, path) from None
        where[key] = lineno

    radar0, ap0 = paper_preset()
    sections = {"radar": {}, "aperture": {}, "options": {}}
    for key, v in values.items():
        section, attr, _ = CONFIG_KEYS[key]
        sections[section][attr] = v

    def build(section, factory):
        try:
            return factory(**sections[section])
        except (TypeError, ValueError) as exc:
            keys = [k for k in values if CONFIG_KEYS[k][0] == section]
            line = min((where[k] for k in keys), default=0)
            bad = [k for k in keys if CONFIG_KEYS[k][1] in str(exc)]
            if bad:
                line = where[bad[0]]
            raise InvariantError(f"invalid {section} configuration: {exc}", line, path) from None

    def make_radar(**kw):
        return replace(radar0, **kw)

    def make_aperture(**kw):
        a = {f.name: kw.get(f.name, getattr(ap0, f.name)) for f in fields(ApertureGrid)}
        if "x0" not in kw:
            a["x0"] = -0.5 * (a["nx"] - 1) * a["dx"]
        if "y0" not in kw:
            a["y0"] = -0.5 * (a["ny"] - 1) * a["dy"]
        return ApertureGrid(**a)

    def make_options(**kw):
        opts = ReconOptions(**kw)
        if opts.pad_factor < 1:
            raise ValueError(f"pad_factor must be >= 1, got {opts.pad_factor}")
        if not (math.isfinite(opts.floor_db) and opts.floor_db < 0):
            raise ValueError(f"floor_db must be negative, got {opts.floor_db}")
        return opts

    return Config(build("radar", make_radar), build("aperture", make_aperture), build("options", make_options))


def load_config(path) -> Config:
    """Read a configuration file; unpacks as ``(radar, aperture, options)``."""
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), path)


def db_to_pgm(image_db: np.ndarray, floor_db: float) -> np.ndarray:
    """Map ``[floor_db, 0]`` dB linearly onto ``[0, 65535]``."""
    scaled = (np.clip(image_db, floor_db, 0.0) - floor_db) / (-floor_db)
    return np.rint(scaled * 65535.0).astype(np.uint16)


def write_image(image_db: np.ndarray, path, format: str = "pgm", floor_db: float = -40.0) -> None:
    """Write a dB image as 16-bit binary PGM or CSV.

    Row 0 of ``image_db`` is the smallest y. CSV keeps that order; PGM puts
    the largest y on the top row so the file displays upright.
    """
    image_db = np.asarray(image_db, dtype=np.float64)
    if image_db.ndim != 2:
        raise ValueError("image must be 2D")
    if format == "pgm":
        h, w = image_db.shape
        pixels = db_to_pgm(image_db, floor_db)[::-1].astype(">u2")
        with open(path, "wb") as fh:
            fh.write(f"P5\n{w} {h}\n65535\n".encode("ascii"))
            fh.write(pixels.tobytes())
    elif format == "csv":
        np.savetxt(path, image_db, delimiter=",", fmt="%.17g")
    else:
        raise ValueError(f"unknown image format {format!r}")


def read_pgm(path) -> np.ndarray:
    """Read a 16-bit binary PGM written by :func:`write_image` (top row first)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while raw[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while not raw[pos:pos + 1].isspace():
            pos += 1
        tokens.append(raw[start:pos])
    pos += 1
    if tokens[0] != b"P5" or int(tokens[3]) != 65535:
        raise ValueError("not a 16-bit binary PGM")
    w, h = int(tokens[1]), int(tokens[2])
    return np.frombuffer(raw, dtype=">u2", count=w * h, offset=pos).reshape(h, w)


def write_manifest(path, entries) -> None:
    """Write ``key=value`` lines; values are rendered with ``repr`` for floats."""
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in entries:
            text = repr(float(value)) if isinstance(value, float) else str(value)
            fh.write(f"{key}={text}\n")


def read_manifest(path) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            key, _, value = line.rstrip("\n").partition("=")
            out[key] = value
    return out
