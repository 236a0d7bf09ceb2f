import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwlct.errors import (BadMagic, BadVersion, DuplicatePoint, FormatError, MissingPoint,
                          NonFiniteSample, ParseError, TruncatedPayload)
from qwlct.field import Grid2D, QField2D
from qwlct.io import (FIELD_HEADER, MAP_HEADER, export_csv, export_magnitude_pgm,
                      field_from_bytes, field_to_bytes, import_csv, map_from_bytes,
                      map_to_bytes, read_field, read_map, write_field, write_map)
from qwlct.qwlct import QWLCTMap

from conftest import finite, random_field

GRID = Grid2D((-1.0, 0.5), (0.25, 0.75), (3, 2))


@settings(max_examples=30, deadline=None)
@given(st.lists(finite, min_size=24, max_size=24))
def test_field_round_trip_bit_exact(values):
    f = QField2D(GRID, np.array(values).reshape(3, 2, 4))
    back = field_from_bytes(field_to_bytes(f))
    assert back.grid == f.grid
    assert back.data.tobytes() == f.data.tobytes()


def test_field_file_round_trip(tmp_path, rng):
    f = random_field(GRID, rng)
    write_field(f, tmp_path / "f.qf2d")
    raw = (tmp_path / "f.qf2d").read_bytes()
    assert raw[:4] == b"QF2D"
    assert len(raw) == FIELD_HEADER.size + 3 * 2 * 4 * 8
    back = read_field(tmp_path / "f.qf2d")
    assert np.array_equal(back.data, f.data)


def test_map_round_trip(tmp_path, rng):
    wg = Grid2D((-2.0, -1.0), (0.5, 0.4), (3, 2))
    ug = Grid2D.symmetric(1.0, (3, 2))
    G = QWLCTMap(wg, ug, rng.standard_normal((3, 2, 3, 2, 4)))
    write_map(G, tmp_path / "g.qwm4")
    back = read_map(tmp_path / "g.qwm4")
    assert back.wgrid == wg and back.ugrid == ug
    assert back.data.tobytes() == G.data.tobytes()
    assert len(map_to_bytes(G)) == MAP_HEADER.size + G.data.size * 8


def test_field_header_errors(rng):
    buf = field_to_bytes(random_field(GRID, rng))
    with pytest.raises(BadMagic):
        field_from_bytes(b"XF2D" + buf[4:])
    with pytest.raises(BadMagic):
        map_from_bytes(buf)
    with pytest.raises(BadVersion):
        field_from_bytes(buf[:4] + struct.pack("<H", 2) + buf[6:])
    with pytest.raises(TruncatedPayload):
        field_from_bytes(buf[:20])
    with pytest.raises(TruncatedPayload):
        field_from_bytes(buf[:-8])
    with pytest.raises(FormatError, match="trailing"):
        field_from_bytes(buf + b"\0" * 8)


def test_nonfinite_payload_rejected(rng):
    f = random_field(GRID, rng)
    buf = bytearray(field_to_bytes(f))
    buf[FIELD_HEADER.size:FIELD_HEADER.size + 8] = struct.pack("<d", float("nan"))
    with pytest.raises(NonFiniteSample):
        field_from_bytes(bytes(buf))
    G = QWLCTMap(GRID, Grid2D.symmetric(1.0, 2), rng.standard_normal((3, 2, 2, 2, 4)))
    mbuf = bytearray(map_to_bytes(G))
    mbuf[-8:] = struct.pack("<d", float("inf"))
    with pytest.raises(NonFiniteSample):
        map_from_bytes(bytes(mbuf))


def test_csv_round_trip(tmp_path, rng):
    f = random_field(GRID, rng)
    export_csv(f, tmp_path / "f.csv")
    back = import_csv(tmp_path / "f.csv", GRID)
    assert np.array_equal(back.data, f.data)


def write_rows(path, rows):
    path.write_text("\n".join(rows) + "\n")
    return path


def full_rows(skip=()):
    return [f"{i},{j},1,0,0,0" for i in range(3) for j in range(2) if (i, j) not in skip]


def test_csv_without_header_and_blank_lines(tmp_path):
    p = write_rows(tmp_path / "a.csv", full_rows()[:3] + [""] + full_rows()[3:])
    f = import_csv(p, GRID)
    assert np.array_equal(f.data[..., 0], np.ones((3, 2)))


@pytest.mark.parametrize("bad,err", [
    ("0,0,1,0,0", ParseError),
    ("0,0,1,0,0,zero", ParseError),
    ("0,5,1,0,0,0", ParseError),
    ("-1,0,1,0,0,0", ParseError),
    ("0,0,nan,0,0,0", NonFiniteSample),
    ("0,0,1,inf,0,0", NonFiniteSample),
])
def test_csv_bad_rows(tmp_path, bad, err):
    p = write_rows(tmp_path / "bad.csv", [bad] + full_rows(skip={(0, 0)}))
    with pytest.raises(err):
        import_csv(p, GRID)


def test_csv_duplicate_and_missing(tmp_path):
    with pytest.raises(DuplicatePoint):
        import_csv(write_rows(tmp_path / "d.csv", full_rows() + ["2,1,0,0,0,0"]), GRID)
    with pytest.raises(MissingPoint):
        import_csv(write_rows(tmp_path / "m.csv", full_rows(skip={(1, 1)})), GRID)


def read_pgm(path):
    raw = path.read_bytes()
    lines = raw.split(b"\n", 4)
    assert lines[0] == b"P5"
    w, h = map(int, lines[2].split())
    assert lines[3] == b"65535"
    return lines[1].decode(), np.frombuffer(lines[4], dtype=">u2").reshape(h, w)


def test_pgm_scaling(tmp_path):
    lo, hi = export_magnitude_pgm([[0.0, 1.0], [2.0, 3.0]], tmp_path / "a.pgm")
    assert (lo, hi) == (0.0, 3.0)
    comment, pix = read_pgm(tmp_path / "a.pgm")
    assert comment == "# min=0.0 max=3.0"
    np.testing.assert_array_equal(pix, [[0, 21845], [43690, 65535]])


def test_pgm_shape_and_constant(tmp_path):
    export_magnitude_pgm(np.full((2, 3), 4.5), tmp_path / "c.pgm")
    _, pix = read_pgm(tmp_path / "c.pgm")
    assert pix.shape == (2, 3) and not pix.any()


def test_pgm_errors(tmp_path):
    with pytest.raises(FormatError):
        export_magnitude_pgm(np.zeros((0, 3)), tmp_path / "e.pgm")
    with pytest.raises(FormatError):
        export_magnitude_pgm(np.zeros(3), tmp_path / "e.pgm")
    with pytest.raises(NonFiniteSample):
        export_magnitude_pgm([[1.0, float("nan")]], tmp_path / "e.pgm")
