import json

import numpy as np
import pytest

from qwlct import io
from qwlct.cli import EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_VALIDATION, main
from qwlct.field import Grid2D
from qwlct.oracle import gaussian_signal

SMALL = "-3.75,-3.75,0.5,0.5,16,16"


@pytest.fixture
def gauss(tmp_path):
    path = str(tmp_path / "g.qf2d")
    assert main(["gen", "--grid", SMALL, "--alpha", "0.5,0.5", "--out", path]) == EXIT_OK
    return path


def test_gen_kinds(tmp_path):
    for kind in ("gaussian", "haar", "noise"):
        out = tmp_path / f"{kind}.qf2d"
        assert main(["gen", "--kind", kind, "--grid", SMALL, "--out", str(out)]) == EXIT_OK
        f = io.read_field(out)
        assert f.grid == Grid2D((-3.75, -3.75), (0.5, 0.5), (16, 16))
    haar = io.read_field(tmp_path / "haar.qf2d").data[..., 0]
    assert set(np.unique(haar)) == {-1.0, 0.0, 1.0}


def test_gen_noise_is_seeded(tmp_path):
    a, b = tmp_path / "a.qf2d", tmp_path / "b.qf2d"
    main(["gen", "--kind", "noise", "--grid", SMALL, "--seed", "7", "--out", str(a)])
    main(["gen", "--kind", "noise", "--grid", SMALL, "--seed", "7", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_qlct_round_trip_through_files(tmp_path, gauss, capsys):
    spectrum = tmp_path / "spectrum.qf2d"
    back = tmp_path / "back.qf2d"
    chirpy = ["--A1", "2,1,1,1", "--A2", "1,1,0,1"]
    assert main(["qlct", "forward", "--in", gauss, "--out", str(spectrum)] + chirpy) == EXIT_OK
    code = main(["qlct", "inverse", "--in", str(spectrum), "--out", str(back),
                 "--reference", gauss] + chirpy)
    assert code == EXIT_OK
    assert "PASS" in capsys.readouterr().out


def test_qlct_reference_failure_exits_1(tmp_path, gauss):
    spectrum = tmp_path / "spectrum.qf2d"
    main(["qlct", "forward", "--in", gauss, "--out", str(spectrum)])
    # inverse with the wrong parameters does not reproduce the input
    code = main(["qlct", "inverse", "--in", str(spectrum), "--A1", "2,1,1,1", "--reference", gauss])
    assert code == EXIT_PROPERTY


def test_csv_format(tmp_path, gauss):
    csv_out = tmp_path / "spectrum.csv"
    assert main(["qlct", "forward", "--in", gauss, "--out", str(csv_out), "--format", "csv"]) == 0
    assert csv_out.read_text().startswith("i1,i2,s,x,y,z")
    # reading a CSV needs its grid
    assert main(["qlct", "inverse", "--in", str(csv_out), "--xgrid", SMALL]) == EXIT_USAGE


def test_qwlct_map_slice_inverse(tmp_path, gauss, capsys):
    mp, sl, pgm, back = (str(tmp_path / n) for n in ("m.qwm4", "s.qf2d", "s.pgm", "b.qf2d"))
    ugrid = "-6,-6,1,1,13,13"
    assert main(["qwlct", "map", "--in", gauss, "--ugrid", ugrid, "--sigma", "1.5",
                 "--out", mp, "--workers", "2"]) == EXIT_OK
    G = io.read_map(mp)
    assert G.ugrid.n == (13, 13)
    assert main(["qwlct", "slice", "--map", mp, "--u", "1,-2", "--out", sl, "--pgm", pgm]) == EXIT_OK
    np.testing.assert_array_equal(io.read_field(sl).data, G.data[:, :, 7, 4])
    assert open(pgm, "rb").read(2) == b"P5"
    assert main(["qwlct", "slice", "--map", mp, "--u", "0.5,0"]) == EXIT_USAGE
    code = main(["qwlct", "inverse", "--map", mp, "--xgrid", SMALL, "--sigma", "1.5",
                 "--out", back, "--reference", gauss, "--tol", "1e-3"])
    assert code == EXIT_OK


def test_qwlct_missing_arguments(gauss):
    assert main(["qwlct", "map"]) == EXIT_USAGE
    assert main(["qwlct", "slice"]) == EXIT_USAGE
    assert main(["qwlct", "map", "--in", gauss, "--ugrid", "-3,-3,0.3,0.3,5,5"]) == EXIT_VALIDATION


def test_uncertainty_json(gauss, capsys):
    assert main(["uncertainty", "--in", gauss, "--windowed", "--json"]) == EXIT_OK
    records = json.loads(capsys.readouterr().out)
    assert [r["kind"] for r in records] == ["qlct", "qlct", "qwlct", "qwlct"]
    assert all(r["satisfied"] for r in records)


def test_oracle_compare(capsys):
    assert main(["oracle-compare", "--json"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert len(out["rows"]) == 25 and out["worst"] <= 1e-6
    assert main(["oracle-compare", "--A1", "0,-1,1,0"]) == EXIT_VALIDATION


def test_verify_on_field(tmp_path, capsys):
    # big enough that nothing aliases or leaves the grid under shift
    gauss = str(tmp_path / "wide.qf2d")
    io.write_field(gaussian_signal(Grid2D.centered(8, 48), 0.5), gauss)
    assert main(["verify", "--in", gauss, "--json"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert all(r["passed"] for r in out["records"])
    noise = str(tmp_path / "n.qf2d")
    main(["gen", "--kind", "noise", "--grid", SMALL, "--out", noise])
    assert main(["verify", "--in", noise]) == EXIT_PROPERTY


@pytest.mark.parametrize("argv", [
    [],
    ["verify", "--A1", "1,0"],
    ["verify", "--A1", "a,b,c,d"],
    ["qlct", "forward"],
    ["gen", "--out", "x", "--grid", "0,0,1,1,2.5,3"],
    ["nonsense"],
])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_validation_errors(tmp_path, gauss, capsys):
    assert main(["verify", "--A1", "1,0,0,1"]) == EXIT_VALIDATION
    assert "DegenerateB" in capsys.readouterr().err
    assert main(["verify", "--A1", "1,1,1,1"]) == EXIT_VALIDATION
    assert main(["qlct", "forward", "--in", str(tmp_path / "missing.qf2d")]) == EXIT_VALIDATION
    bad = tmp_path / "bad.qf2d"
    bad.write_bytes(b"XXXX" + b"\0" * 60)
    assert main(["qlct", "forward", "--in", str(bad)]) == EXIT_VALIDATION


def test_oversized_map_is_refused(tmp_path, capsys):
    path = str(tmp_path / "big.qf2d")
    assert main(["gen", "--out", path]) == EXIT_OK
    assert main(["uncertainty", "--in", path, "--windowed"]) == EXIT_VALIDATION
    assert "MapTooLarge" in capsys.readouterr().err


@pytest.mark.slow
def test_verify_default_is_deterministic(capsys):
    assert main(["verify"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["verify"]) == EXIT_OK
    assert capsys.readouterr().out == first
    assert "seed: 20240611" in first
