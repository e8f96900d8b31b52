import pytest

from cloudfi import cli
from cloudfi.mutation import read_catalog


def test_scan_then_coverage_gives_subset(tmp_path, capsys):
    catalog, covered = tmp_path / "points.jsonl", tmp_path / "covered.txt"
    assert cli.main(["scan", "--out", str(catalog)]) == 0
    points = read_catalog(str(catalog))
    assert f"{len(points)} injection points" in capsys.readouterr().out
    assert cli.main(["coverage", "--points", str(catalog), "--out", str(covered)]) == 0
    ids = covered.read_text().split()
    assert ids and set(ids) <= {p.id for p in points}
    assert len(ids) < len(points)


def test_scan_validate_reports_counts(capsys):
    assert cli.main(["scan", "--validate"]) == 0
    out = capsys.readouterr().out
    assert "valid mutants:" in out


def test_campaign_analyze_report(tmp_path, capsys):
    ds = tmp_path / "ds"
    assert cli.main(["campaign", "--out", str(ds), "--limit", "3", "--seed", "2"]) == 0
    assert "completed 3" in capsys.readouterr().out
    assert cli.main(["analyze", str(ds)]) == 0
    assert "failure classes" in capsys.readouterr().out
    rows = (ds / "report" / "verdicts.csv").read_text().splitlines()
    assert len(rows) == 4
    assert cli.main(["report", str(ds), "--out", str(tmp_path / "rep")]) == 0
    assert (tmp_path / "rep" / "summary.txt").exists()


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["campaign"],  # --out is required
    ["scan", "--jobs", "many"],
])
def test_usage_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 1


def test_bad_config_value_exits_1(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[campaign]\nclock = lunar\n")
    assert cli.main(["scan", "--config", str(cfg)]) == 1


def test_missing_dataset_exits_2(tmp_path):
    assert cli.main(["analyze", str(tmp_path / "nowhere")]) == 2
    (tmp_path / "empty").mkdir()
    assert cli.main(["report", str(tmp_path / "empty")]) == 2


def test_resume_with_other_seed_exits_2(tmp_path):
    ds = tmp_path / "ds"
    assert cli.main(["campaign", "--out", str(ds), "--limit", "1", "--seed", "1"]) == 0
    assert cli.main(["resume", "--out", str(ds), "--seed", "2"]) == 2


def test_unparsable_target_exits_2(tmp_path):
    target = tmp_path / "t" / "compute"
    target.mkdir(parents=True)
    (target / "api.py").write_text("def broken(:\n")
    assert cli.main(["scan", "--target", str(tmp_path / "t")]) == 2
