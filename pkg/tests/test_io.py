import io
import math
import struct

import numpy as np
import pytest

from nfsar import io as nio
from nfsar.forward import simulate_cube
from nfsar.geometry import ApertureGrid, PointScatterer, RadarParams, Scene, SignalCube, paper_preset


@pytest.fixture
def cube234(rng):
    radar = RadarParams(77e9, 3.84e9, 60e-6, num_k=2)
    ap = ApertureGrid(nx=4, ny=3, dx=0.5e-3, dy=2e-3, x0=-0.75e-3, y0=-2e-3)
    samples = rng.standard_normal((2, 3, 4)) + 1j * rng.standard_normal((2, 3, 4))
    return SignalCube(radar, ap, samples)


def test_header_size_is_68():
    assert nio.HEADER_SIZE == 68


def test_file_size(cube234, tmp_path):
    path = tmp_path / "c.cube"
    n = nio.write_cube(cube234, path)
    # 68 + 8 * 24
    assert n == 260
    assert path.stat().st_size == 260


def test_magic_bytes(cube234):
    raw = nio.encode_cube(cube234)
    assert raw[:8] == bytes([0x4E, 0x46, 0x53, 0x41, 0x52, 0x31, 0x00, 0x00])


def test_header_layout(cube234):
    raw = nio.encode_cube(cube234)
    assert struct.unpack_from("<3I", raw, 8) == (2, 3, 4)
    assert struct.unpack_from("<5d", raw, 20) == (77e9, 3.84e9, 60e-6, 0.5e-3, 2e-3)
    x0, y0 = struct.unpack_from("<2f", raw, 60)
    assert x0 == pytest.approx(-0.75e-3, rel=1e-7)
    assert y0 == pytest.approx(-2e-3, rel=1e-7)


def test_sample_order_ix_fastest(cube234):
    raw = nio.encode_cube(cube234)
    re, im = struct.unpack_from("<2f", raw, 68 + 8 * (1 * 12 + 2 * 4 + 3))
    v = cube234.samples[1, 2, 3]
    assert re == pytest.approx(v.real, rel=1e-7)
    assert im == pytest.approx(v.imag, rel=1e-7)


def test_roundtrip(cube234):
    back = nio.decode_cube(nio.encode_cube(cube234))
    assert back.shape == (2, 3, 4)
    assert back.radar == cube234.radar
    assert back.aperture.nx == 4 and back.aperture.dy == 2e-3
    a, b = cube234.samples, back.samples
    assert np.all(np.abs(b.real - a.real) <= 1.2e-7 * np.abs(a.real))
    assert np.all(np.abs(b.imag - a.imag) <= 1.2e-7 * np.abs(a.imag))


def test_write_read_write_byte_identical(cube234, tmp_path):
    p1, p2 = tmp_path / "a.cube", tmp_path / "b.cube"
    nio.write_cube(cube234, p1)
    nio.write_cube(nio.read_cube(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_file_objects(cube234):
    buf = io.BytesIO()
    nio.write_cube(cube234, buf)
    buf.seek(0)
    assert nio.read_cube(buf).shape == (2, 3, 4)


def test_bad_magic(cube234):
    raw = b"XXXXXX\x00\x00" + nio.encode_cube(cube234)[8:]
    with pytest.raises(nio.BadMagicError):
        nio.decode_cube(raw)


def test_truncated_payload(cube234):
    raw = nio.encode_cube(cube234)[:-1]
    with pytest.raises(nio.TruncatedCubeError) as exc:
        nio.decode_cube(raw)
    assert exc.value.expected == 260 and exc.value.actual == 259
    assert "260" in str(exc.value) and "259" in str(exc.value)


def test_trailing_bytes(cube234):
    with pytest.raises(nio.TruncatedCubeError):
        nio.decode_cube(nio.encode_cube(cube234) + b"\x00")


def test_truncated_header():
    with pytest.raises(nio.TruncatedCubeError) as exc:
        nio.decode_cube(nio.MAGIC + b"\x00" * 10)
    assert exc.value.expected == 68


@pytest.mark.parametrize("offset,fmt,value", [(20, "<d", math.nan), (28, "<d", math.inf), (44, "<d", -1.0), (60, "<f", math.inf)])
def test_non_finite_header(cube234, offset, fmt, value):
    raw = bytearray(nio.encode_cube(cube234))
    struct.pack_into(fmt, raw, offset, value)
    with pytest.raises(nio.InvalidHeaderError):
        nio.decode_cube(bytes(raw))


def test_zero_count_header(cube234):
    raw = bytearray(nio.encode_cube(cube234))
    struct.pack_into("<I", raw, 8, 0)
    with pytest.raises(nio.InvalidHeaderError):
        nio.decode_cube(bytes(raw))


def test_error_classes_distinct():
    assert len({nio.BadMagicError, nio.TruncatedCubeError, nio.InvalidHeaderError}) == 3
    for cls in (nio.BadMagicError, nio.TruncatedCubeError, nio.InvalidHeaderError):
        assert issubclass(cls, nio.CubeFormatError)


def test_scene_parse():
    s = nio.parse_scene("0, 0, 0.3, 1.0, 0\n")
    assert len(s) == 1
    t = s.scatterers[0]
    assert (t.x, t.y, t.z) == (0.0, 0.0, 0.3)
    assert t.reflectivity == 1 + 0j


def test_scene_quarter_phase():
    p = nio.parse_scene("0, 0, 0.3, 1.0, 90").scatterers[0].reflectivity
    assert abs(p - 1j) < 1e-12


def test_scene_comments_only():
    assert len(nio.parse_scene("# header\n\n   # another\n")) == 0


def test_scene_order_and_inline_comments(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("# targets\n0.01, 0, 0.2, 2, 180  # first\n\n-0.01, 0.005, 0.25, 0.5, -90\n")
    s = nio.load_scene(path)
    assert [t.x for t in s] == [0.01, -0.01]
    assert abs(s.scatterers[0].reflectivity + 2) < 1e-12
    assert abs(s.scatterers[1].reflectivity + 0.5j) < 1e-12


@pytest.mark.parametrize(
    "text,line",
    [("0, 0, 0.3, 1.0\n", 1), ("# c\n0, 0, 0.3, 1, 0\n0, 0, x, 1, 0\n", 3), ("\n0, 0, 0, 1, 0", 2), ("0,0,-1,1,0", 1)],
)
def test_scene_errors_carry_line(text, line):
    with pytest.raises(nio.ParseError) as exc:
        nio.parse_scene(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_config_empty_is_preset():
    radar, ap, opts = nio.parse_config("")
    assert (radar, ap) == paper_preset()
    assert opts == nio.ReconOptions(pad_factor=2, window="none", floor_db=-40.0)


def test_config_values(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text(
        "# test\nf0_hz = 77e9\nnum_k = 8\nnx = 16\nny = 16  # square\n"
        "dx_m = 1e-3\ndy_m = 1e-3\npad_factor = 3\nwindow = cosine\nfloor_db = -30\n"
    )
    cfg = nio.load_config(path)
    assert cfg.radar.f0 == 77e9
    assert cfg.radar.num_k == 8
    assert cfg.aperture == ApertureGrid.centered(16, 16, 1e-3, 1e-3)
    assert cfg.options == nio.ReconOptions(3, "cosine", -30.0)


def test_config_explicit_origin():
    cfg = nio.parse_config("nx = 4\nx0_m = 0\ny0_m = -0.068")
    assert cfg.aperture.x0 == 0.0 and cfg.aperture.y0 == -0.068


def test_config_items_cover_grammar():
    assert [k for k, _ in nio.parse_config("").items()] == list(nio.CONFIG_KEYS)


@pytest.mark.parametrize(
    "text,line,cls",
    [
        ("mystery = 1", 1, nio.ParseError),
        ("nx = ten", 1, nio.ParseError),
        ("num_k = 2.5", 1, nio.ParseError),
        ("window = hann", 1, nio.ParseError),
        ("\nf0_hz", 2, nio.ParseError),
        ("nx = 4\nnx = 5", 2, nio.ParseError),
        ("dx_m = 1e-3\n\nnx = 0", 3, nio.InvariantError),
        ("f0_hz = -1", 1, nio.InvariantError),
        ("pad_factor = 0", 1, nio.InvariantError),
        ("floor_db = 5", 1, nio.InvariantError),
    ],
)
def test_config_errors_carry_line(text, line, cls):
    with pytest.raises(cls) as exc:
        nio.parse_config(text)
    assert exc.value.line == line


def test_unknown_key_named():
    with pytest.raises(nio.ParseError, match="mystery"):
        nio.parse_config("mystery = 1")


def test_pgm_mapping(tmp_path):
    img = np.array([[0.0, -40.0, -20.0]])
    path = tmp_path / "i.pgm"
    nio.write_image(img, path, "pgm", floor_db=-40.0)
    raw = path.read_bytes()
    assert raw.startswith(b"P5\n3 1\n65535\n")
    px = nio.read_pgm(path)
    assert px[0, 0] == 65535
    assert px[0, 1] == 0
    assert abs(int(px[0, 2]) - 32768) <= 1
    # big-endian 16-bit
    assert raw[-6:-4] == b"\xff\xff"


def test_pgm_single_pixel(tmp_path):
    path = tmp_path / "one.pgm"
    nio.write_image(np.zeros((1, 1)), path, "pgm")
    assert nio.read_pgm(path)[0, 0] == 65535


def test_pgm_top_row_is_largest_y(tmp_path):
    img = np.full((3, 2), -40.0)
    img[2, 0] = 0.0
    path = tmp_path / "o.pgm"
    nio.write_image(img, path, "pgm")
    px = nio.read_pgm(path)
    assert px[0, 0] == 65535 and px[2, 0] == 0


def test_csv_full_precision(tmp_path):
    img = np.array([[0.0, -1 / 3], [-12.345678901234567, -40.0]])
    path = tmp_path / "i.csv"
    nio.write_image(img, path, "csv")
    back = np.loadtxt(path, delimiter=",")
    assert np.array_equal(back, img)
    assert path.read_text().splitlines()[0].startswith("0,")


def test_unknown_image_format(tmp_path):
    with pytest.raises(ValueError):
        nio.write_image(np.zeros((1, 1)), tmp_path / "x", "png")


def test_manifest_roundtrip(tmp_path):
    path = tmp_path / "m.manifest"
    nio.write_manifest(path, [("command", "simulate"), ("f0_hz", 77e9), ("nx", 3)])
    assert nio.read_manifest(path) == {"command": "simulate", "f0_hz": "77000000000.0", "nx": "3"}


def test_simulated_cube_roundtrip(tmp_path):
    radar = RadarParams(77e9, 3.84e9, 60e-6, num_k=4)
    ap = ApertureGrid.centered(8, 6, 1e-3, 2e-3)
    cube = simulate_cube(radar, ap, Scene((PointScatterer(0, 0, 0.3),)))
    path = tmp_path / "s.cube"
    nio.write_cube(cube, path)
    back = nio.read_cube(path)
    np.testing.assert_allclose(back.samples, cube.samples, rtol=0, atol=2e-7)
