import json
from pathlib import Path

import pytest

from topolabel.cli import main
from topolabel.experiment import RESULTS_HEADER

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_persistence_emits_json(capsys, blobs_csv):
    code, out, _ = run(capsys, "persistence", blobs_csv, "--label", "1")
    assert code == 0
    rows = json.loads(out)
    assert {r["dim"] for r in rows} <= {0, 1}
    assert all(r["death"] != "inf" for r in rows)


def test_persistence_keep_essential(capsys, blobs_csv):
    _, out, _ = run(capsys, "persistence", blobs_csv, "--essential", "keep")
    assert sum(r["death"] == "inf" for r in json.loads(out)) == 1


def test_distance_identical_files(capsys, tmp_path, blobs_csv):
    diag = tmp_path / "d.json"
    assert run(capsys, "persistence", blobs_csv, "-o", diag)[0] == 0
    for metric in ("bottleneck", "wasserstein"):
        code, out, _ = run(capsys, "distance", diag, diag, "--metric", metric)
        assert code == 0 and float(out) == 0.0


def test_distance_value(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps([{"dim": 0, "birth": 0.0, "death": 2.0}, {"dim": 1, "birth": 1.0, "death": 3.0}]))
    b.write_text("[]")
    assert float(run(capsys, "distance", a, b, "--metric", "wasserstein", "--agg", "sum")[1]) == 2.0
    assert float(run(capsys, "distance", a, b, "--agg", "single:1")[1]) == 1.0


def test_distance_infinite_needs_policy(capsys, tmp_path):
    a = tmp_path / "a.json"
    a.write_text(json.dumps([{"dim": 0, "birth": 0.0, "death": "inf"}]))
    code, _, err = run(capsys, "distance", a, a)
    assert code == 2 and err.startswith("error: InfiniteCoordinate")
    assert run(capsys, "distance", a, a, "--essential", "drop")[0] == 0


def test_annotate_figure_two_fixture(capsys):
    code, out, _ = run(capsys, "annotate", DATA / "figure2.csv", "--threshold", "0.6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "f1,f2,label,assigned,d1,d2"
    last = lines[-1].split(",")
    assert last[3] == "1"
    assert float(last[4]) <= 0.6 and float(last[4]) < float(last[5])
    assert all(line.split(",")[3] in ("1", "2") for line in lines[1:-1])


def test_sweep_grid_shape(capsys, tmp_path, blobs_csv):
    cfg = tmp_path / "exp.toml"
    cfg.write_text(f'dataset = "{blobs_csv.name}"\nholdout = 0.5\nseed = 1\n', encoding="utf-8")
    out_csv = tmp_path / "results.csv"
    assert run(capsys, "sweep", cfg, "-o", out_csv)[0] == 0
    rows = out_csv.read_text().splitlines()
    assert rows[0] == ",".join(RESULTS_HEADER)
    assert len(rows) - 1 == 2 * 5
    assert out_csv.with_suffix(".json").exists()


def test_oracle_subcommand(capsys):
    code, out, _ = run(capsys, "oracle", 5, 0)
    assert code == 0 and "0 failures" in out


@pytest.mark.parametrize("argv", [[], ["distance", "only-one.json"], ["annotate", "x.csv", "--metric", "cosine"]])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("error: usage:")


def test_runtime_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,label\noops,1\n", encoding="utf-8")
    code, _, err = run(capsys, "annotate", bad)
    assert code == 2
    assert err.startswith("error: IngestError") and "row 2" in err
