import csv
import json

import pytest

from gztoda.cli import main, parse_gamma, parse_xgrid
from gztoda.errors import UsageError


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def _strip_volatile(d):
    d = dict(d)
    d.pop("timestamp", None)
    d.pop("wall_time_s", None)
    return d


def test_parse_gamma():
    assert parse_gamma("0.5,-0.5") == (0.5, -0.5)
    with pytest.raises(UsageError):
        parse_gamma("0.5", 2)


def test_parse_xgrid_product():
    pts = parse_xgrid("-1:1:3,0")
    assert pts == [(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]
    pts = parse_xgrid("0;1,2")
    assert pts == [(0.0, 2.0), (1.0, 2.0)]
    with pytest.raises(UsageError):
        parse_xgrid("0:1")
    with pytest.raises(UsageError):
        parse_xgrid("0:1:0")


def test_verify_algebra_roundtrip(tmp_path):
    out = tmp_path / "algebra.json"
    rc = main(["verify", "algebra", "--n", "3", "--seed", "7", "--trials", "4",
               "--out", str(out)])
    assert rc == 0
    d = _load(out)
    assert d["schema"] == 1
    assert d["pass"] is True
    assert d["seed"] == 7
    assert {c["name"] for c in d["checks"]} == {"chevalley", "serre", "full-grid"}
    assert all(c["max_error"] < c["threshold"] for c in d["checks"])


def test_toda_csv_row_count(tmp_path):
    out = tmp_path / "wave.json"
    csv_path = tmp_path / "wave.csv"
    rc = main(["toda", "--n", "2", "--gamma", "0.5,-0.5", "--x", "-1:1:21,0",
               "--csv", str(csv_path), "--out", str(out)])
    assert rc == 0
    with open(csv_path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x_1", "x_2", "re", "im", "err_estimate"]
    assert len(rows) == 22  # header + 21 grid points


def test_oracle_n2_toda(tmp_path):
    out = tmp_path / "oracle.json"
    rc = main(["oracle", "n2", "toda", "--gamma", "0.5,-0.5", "--out", str(out)])
    assert rc == 0
    d = _load(out)
    assert d["checks"][0]["name"] == "macdonald-closed-form"
    assert d["checks"][0]["max_error"] < 1e-6


def test_eigencheck_toda(tmp_path):
    out = tmp_path / "eig.json"
    rc = main(["eigencheck", "toda", "--n", "2", "--gamma", "0.5,-0.5",
               "--x", "0.3,-0.2", "--out", str(out)])
    assert rc == 0
    d = _load(out)
    assert {c["name"] for c in d["checks"]} == {"h1", "h2", "lax-family"}


def test_determinism_identical_runs(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "whittaker", "--n", "2", "--seed", "3", "--trials", "4"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert _strip_volatile(_load(a)) == _strip_volatile(_load(b))


def test_csv_determinism(tmp_path):
    pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["toda", "--n", "2", "--gamma", "1.3,0.2", "--x", "-0.5:0.5:5,0.1"]
    assert main(args + ["--csv", str(pa), "--out", str(tmp_path / "ra.json")]) == 0
    assert main(args + ["--csv", str(pb), "--out", str(tmp_path / "rb.json")]) == 0
    assert pa.read_bytes() == pb.read_bytes()


def test_exit_status_on_failure(tmp_path):
    # an absurd tolerance forces a numerical-failure exit of 1
    out = tmp_path / "fail.json"
    rc = main(["verify", "algebra", "--n", "2", "--trials", "2",
               "--tolerance", "1e-30", "--out", str(out)])
    assert rc == 1
    assert _load(out)["pass"] is False


def test_exit_status_on_usage_error(capsys):
    assert main(["verify", "nonsense"]) == 2
    capsys.readouterr()
    assert main(["toda", "--n", "2", "--gamma", "0.5,-0.5", "--x", "0:1"]) == 2


def test_verify_orbit(tmp_path):
    out = tmp_path / "orbit.json"
    rc = main(["verify", "orbit", "--n", "3", "--seed", "1", "--out", str(out)])
    assert rc == 0
    d = _load(out)
    names = {c["name"] for c in d["checks"]}
    assert "roundtrip-gamma" in names and "matrix-bracket-grid" in names


def test_verify_pairing(tmp_path):
    out = tmp_path / "pairing.json"
    rc = main(["verify", "pairing", "--n", "2", "--trials", "2",
               "--gamma", "0.5,-0.5", "--out", str(out)])
    assert rc == 0
    assert _load(out)["pass"] is True
