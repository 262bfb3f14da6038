import json
import subprocess
import sys
from pathlib import Path

import pytest

from equivapprox.cli import main
from equivapprox.pipeline import jsonable

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "equivapprox" / "fixtures"


def _write(tmp_path: Path, name: str, data: object) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def _report(path: Path) -> dict:
    return json.loads(path.read_text())


def _no_floats(value: object) -> bool:
    if isinstance(value, float):
        return False
    if isinstance(value, dict):
        return all(_no_floats(v) for v in value.values())
    if isinstance(value, list):
        return all(_no_floats(v) for v in value)
    return True


def test_triangulate_disk(tmp_path: Path) -> None:
    out = tmp_path / "disk.json"
    assert main(["--mode", "triangulate", "--complex", str(FIXTURES / "disk.json"), "--out", str(out)]) == 0
    result = _report(out)["result"]
    assert result["tau"] == ["-2", "-1", "0", "1", "2"]
    assert result["polyhedra_by_dimension"]["2"] == 10
    assert result["simplices_by_dimension"]["2"] == 64


def test_triangulate_with_gluing(tmp_path: Path) -> None:
    out = tmp_path / "glued.json"
    args = ["--mode", "triangulate", "--complex", str(FIXTURES / "disk.json"), "--group", str(FIXTURES / "dihedral8.json"), "--out", str(out)]
    assert main(args) == 0
    assert _report(out)["result"]["glued"]["triangles"] % 8 == 0


def test_homology_square_boundary_m1(tmp_path: Path) -> None:
    params = _write(tmp_path, "params.json", {"m": 1, "r": "2"})
    out = tmp_path / "square.json"
    assert main(["--mode", "homology", "--formula", str(FIXTURES / "square_boundary.json"), "--params", params, "--out", str(out)]) == 0
    report = _report(out)
    assert report["result"]["S"]["betti"][:2] == [1, 1]
    assert report["result"]["T"]["1"]["betti"][:2] == [1, 1]
    assert "surrogate" in report["result"]


def test_homology_hexagon_table(tmp_path: Path) -> None:
    out = tmp_path / "hex.json"
    assert main(["--mode", "homology", "--complex", str(FIXTURES / "hexagon.json"), "--out", str(out)]) == 0
    report = _report(out)
    assert report["passed"]
    text = json.dumps(report["result"])
    assert '"0:[3]": 1' in text and '"1:[1, 1, 1]": 1' in text


def test_violating_table_exits_one_with_witness(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    table = _write(tmp_path, "table.json", {"n": 3, "d": 2, "table": {"0:[1,1,1]": 1}})
    out = tmp_path / "bad.json"
    assert main(["--mode", "homology", "--complex", table, "--out", str(out)]) == 1
    check = _report(out)["checks"][0]
    assert not check["passed"] and check["witness"] is not None
    assert "FAILED" in capsys.readouterr().err


def test_missing_file_exits_two(tmp_path: Path) -> None:
    assert main(["--mode", "triangulate", "--complex", str(tmp_path / "nope.json")]) == 2


def test_bad_rational_exits_two(tmp_path: Path) -> None:
    params = _write(tmp_path, "params.json", {"m": 1, "r": "1/0"})
    assert main(["--mode", "approximate", "--formula", str(FIXTURES / "diamond_interior.json"), "--params", params]) == 2


def test_ordering_violation_names_pair(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    params = _write(tmp_path, "params.json", {"m": 1, "r": "2", "eps": ["1/4", "1/2"], "delta": ["1/8", "3/4"]})
    assert main(["--mode", "approximate", "--formula", str(FIXTURES / "diamond_interior.json"), "--params", params]) == 2
    err = capsys.readouterr().err
    assert "eps[0]" in err and "delta[0]" in err


def test_unwritable_output_exits_two(tmp_path: Path) -> None:
    target = tmp_path / "missing_dir" / "out.json"
    assert main(["--mode", "approximate", "--formula", str(FIXTURES / "diamond_interior.json"), "--out", str(target)]) == 2


def test_reports_are_deterministic_and_exact(tmp_path: Path) -> None:
    outs = []
    for i in range(2):
        out = tmp_path / f"run{i}.json"
        assert main(["--mode", "approximate", "--formula", str(FIXTURES / "diamond_boundary.json"), "--out", str(out)]) == 0
        report = _report(out)
        assert _no_floats(report)
        report.pop("timing")
        outs.append(json.dumps(report, sort_keys=True))
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["result"]["p_prime"]["discrepancy"] is True


def test_jsonable_rejects_floats() -> None:
    with pytest.raises(Exception):
        jsonable(0.5)


def test_console_entry_point(tmp_path: Path) -> None:
    out = tmp_path / "entry.json"
    proc = subprocess.run(
        [sys.executable, "-m", "equivapprox.cli", "--mode", "approximate", "--formula", str(FIXTURES / "diamond_interior.json"), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert _report(out)["mode"] == "approximate"
