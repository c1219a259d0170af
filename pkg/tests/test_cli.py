import csv
import io
import os

import pytest

from gcsimplex.cli import main
from gcsimplex.scan import SCAN_HEADER, grid_coords, scan_csv, scan_rows
from gcsimplex.simplex import Region, SimplexPoint, classify
from gcsimplex.species_io import SpeciesRecord, write_catalog

CATALOG = [
    SpeciesRecord.absolute("fixture", 6, 1, -100.0, -99.0, -90.0),
    SpeciesRecord.absolute("symmetric", 8, 1, -50.0, -47.0, -47.0),
    SpeciesRecord.descriptor("fixture-d", 6, 1, -100.0, 10.0, -1.0),
]


@pytest.fixture
def catalog(tmp_path):
    path = tmp_path / "catalog.json"
    path.write_bytes(write_catalog(CATALOG, "json"))
    return str(path)


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_weights_by_ratio():
    assert run("weights", "--x", "0.5", "--omega-n", "0.4") == (0, "0.050000 0.400000 0.550000 InteriorAcceptor\n")


def test_weights_vertex():
    assert run("weights", "--x", "0", "--omega-n", "1") == (0, "0.000000 1.000000 0.000000 VertexNeutral\n")


def test_weights_by_charge():
    assert run("weights", "--nu", "1.0", "--nu0", "1.2", "--q", "2") == (
        0, "0.050000 0.400000 0.550000 InteriorAcceptor\n")


@pytest.mark.parametrize("argv", [
    ("weights", "--x", "0.8", "--omega-n", "0.5"),
    ("weights", "--x", "0.5"),
    ("weights", "--x", "0.5", "--omega-n", "0.4", "--nu", "0.1", "--nu0", "0.2"),
    ("weights", "--nu", "0.7", "--nu0", "0.6"),
])
def test_weights_invalid(argv, capsys):
    assert run(*argv)[0] == 2
    assert "error" in capsys.readouterr().err


def test_classify():
    assert run("classify", "--x", "-0.25", "--omega-n", "0.5") == (0, "InteriorDonor\n")
    assert run("classify", "--x", "2", "--omega-n", "0.5") == (0, "Outside\n")


def test_descriptors(catalog, capsys):
    assert run("descriptors", "--domain", catalog, "--label", "fixture") == (
        0, "I_q=10 A_q=-1 mu0=-4.5 eta0=5.5 Ebar=-94.5\n")
    assert run("descriptors", "--domain", catalog, "--label", "fixture-d")[1] == (
        "I_q=10 A_q=-1 mu0=-4.5 eta0=5.5 Ebar=-94.5\n")
    code, text = run("descriptors", "--domain", catalog, "--label", "symmetric")
    assert code == 0 and "mu0=0 " in text
    assert "ConvexityWarning" in capsys.readouterr().err


def test_descriptors_errors(catalog, tmp_path):
    assert run("descriptors", "--domain", catalog, "--label", "missing")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert run("descriptors", "--domain", str(bad), "--label", "fixture")[0] == 1
    assert run("descriptors", "--domain", str(tmp_path / "nope.json"), "--label", "x")[0] == 1


def test_state(catalog):
    code, text = run("state", "--domain", catalog, "--label", "fixture", "--nu", "0", "--nu0", "0.6")
    assert code == 0
    assert text.splitlines() == [
        "sector 5 0.300000", "sector 6 0.400000", "sector 7 0.300000",
        "region NeutralAxis", "mean_particle_number 6.000000", "purity 0.340000",
    ]


def test_energy(catalog):
    code, text = run("energy", "--domain", catalog, "--label", "fixture",
                     "--nu", "0.3", "--nu0", "0.6", "--nu0-prime", "0.4")
    assert code == 0
    assert text.splitlines() == [
        "energy -98.050000", "edge_energy -99.400000", "delta_h 1.350000", "delta_u -1.100000"]
    code, text = run("energy", "--domain", catalog, "--label", "fixture", "--x", "0.5", "--omega-n", "0.4")
    assert "delta_h 0.450000" in text


def test_scan_small(catalog, tmp_path):
    out = tmp_path / "scan.csv"
    assert run("scan", "--domain", catalog, "--label", "fixture", "--grid", "2", "--output", str(out))[0] == 0
    rows = list(csv.DictReader(out.open(newline="")))
    assert list(rows[0]) == list(SCAN_HEADER)
    assert len(rows) == 9
    inside = [r for r in rows if r["region"] != "Outside"]
    # lattice points with w <= 1 - |x| on x in {-1,0,1}, w in {0,0.5,1}
    assert len(inside) == 5
    assert all(r["energy"] == "" and r["w_minus"] == "" for r in rows if r["region"] == "Outside")
    assert [(r["x"], r["omega_n"]) for r in rows[:3]] == [("-1.0", "0.0"), ("0.0", "0.0"), ("1.0", "0.0")]
    origin = rows[1]
    assert origin["region"] == "Origin" and float(origin["energy"]) == -94.5


def test_scan_rows_agree_with_classify_and_trend(fixture_domain):
    grid = 40
    rows = scan_rows(fixture_domain, grid)
    assert len(rows) == (grid + 1) ** 2
    for k, r in enumerate(rows):
        j, i = divmod(k, grid + 1)
        assert (r.x, r.w_zero) == grid_coords(grid, i, j)
        assert r.region is classify(SimplexPoint(r.x, r.w_zero))
        if r.region in (Region.EdgeAcceptor, Region.EdgeDonor, Region.VertexNeutral,
                        Region.VertexAnion, Region.VertexCation, Region.Outside):
            assert r.delta_h is None
        else:
            assert r.delta_h >= 0.0
    for j in range(grid + 1):
        line = [r.energy for r in rows[j * (grid + 1):(j + 1) * (grid + 1)] if r.energy is not None]
        assert all(a >= b for a, b in zip(line, line[1:]))


def test_scan_symmetry(fixture_domain):
    rows = scan_rows(fixture_domain, 200)
    plus = sum(r.region is Region.InteriorAcceptor for r in rows)
    minus = sum(r.region is Region.InteriorDonor for r in rows)
    assert plus == minus > 0


def test_scan_workers_deterministic(fixture_domain):
    assert scan_csv(scan_rows(fixture_domain, 30)) == scan_csv(scan_rows(fixture_domain, 30, workers=3))


def test_scan_write_failure_leaves_no_file(catalog, tmp_path):
    target = tmp_path / "missing-dir" / "scan.csv"
    assert run("scan", "--domain", catalog, "--label", "fixture", "--grid", "2", "--output", str(target))[0] == 1
    assert not target.exists()
    assert run("scan", "--domain", catalog, "--label", "fixture", "--grid", "1", "--output", str(target))[0] == 2


def test_scan_byte_identical(catalog, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run("scan", "--domain", catalog, "--label", "fixture", "--grid", "20", "--output", str(a))
    run("scan", "--domain", catalog, "--label", "fixture", "--grid", "20", "--output", str(b), "--workers", "2")
    assert a.read_bytes() == b.read_bytes()
    assert not [p for p in os.listdir(tmp_path) if p.startswith(".tmp-")]


def test_verify_rejects_invalid_catalog(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_bytes(write_catalog([SpeciesRecord.descriptor("neg", 6, 1, -100.0, -2.0, 0.0)], "csv"))
    assert run("verify", "--domain", str(bad))[0] == 1


def test_verify_failure_exit_code(catalog, monkeypatch):
    from gcsimplex import verification
    monkeypatch.setattr(verification, "PROPERTIES", [
        ("always_fails", lambda ctx: (False, "forced")),
        ("needs_convex", verification.check_trend),
    ])
    code, text = run("verify", "--domain", catalog, "--synthetic", "0")
    assert code == 3
    assert "FAIL always_fails: forced" in text


def test_verify_skips_without_convex_domains(tmp_path, monkeypatch):
    from gcsimplex import verification
    path = tmp_path / "sym.json"
    path.write_bytes(write_catalog([CATALOG[1]], "json"))
    monkeypatch.setattr(verification, "PROPERTIES", [("trend_chain", verification.check_trend)])
    code, text = run("verify", "--domain", str(path))
    assert code == 0 and text.splitlines()[1].startswith("SKIP trend_chain")
