import json

import pytest
from click.testing import CliRunner

from tself import __version__
from tself.cli import cli, main
from tself.selftest import CheckResult


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, [str(a) for a in args], catch_exceptions=False)


def train(runner, csv, out, *extra):
    return invoke(
        runner, "train", "--data", csv, "--label", "y", "--positive", "pos",
        "--folds", 3, "--trees", 3, "--tree-size", 7, "--jobs", 1, "--out", out, *extra,
    )


def test_version(runner):
    result = invoke(runner, "--version")
    assert result.exit_code == 0
    assert __version__ in result.output


def test_train_is_deterministic(runner, dataset_csv, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert train(runner, dataset_csv, a).exit_code == 0
    assert train(runner, dataset_csv, b).exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_full_pipeline(runner, dataset_csv, tmp_path):
    model, mdts = tmp_path / "model.json", tmp_path / "mdt.json"
    layout, layout_t = tmp_path / "layout.json", tmp_path / "layout_t.json"
    report = tmp_path / "cv.yml"

    result = train(runner, dataset_csv, model, "--report", report)
    assert result.exit_code == 0, result.output
    assert "paired t-test" in result.output
    doc = json.loads(model.read_text(encoding="utf-8"))
    assert doc["format"] == "tself.model" and doc["schema_version"] == 1
    assert [e["fold"] for e in doc["ensembles"]] == [0, 1, 2]
    assert len(doc["assignments"]) == 120
    assert "paired_t_test_p" in report.read_text(encoding="utf-8")

    result = invoke(runner, "eval", "--data", dataset_csv, "--model", model)
    assert result.exit_code == 0, result.output
    for e in doc["ensembles"]:
        assert f"fold {e['fold']}: DT test error {e['dt_error']:.2f}%" in result.output

    result = invoke(runner, "eval", "--data", dataset_csv, "--model", model, "--as-mdt", "--fold", 1)
    assert result.exit_code == 0, result.output
    assert f"fold 1: MDT test error {doc['ensembles'][1]['mdt_error']:.2f}%" in result.output
    assert "fold 0" not in result.output

    assert invoke(runner, "mdt", "--model", model, "--out", mdts).exit_code == 0
    mdt_doc = json.loads(mdts.read_text(encoding="utf-8"))
    assert mdt_doc["format"] == "tself.mdt" and len(mdt_doc["trees"]) == 3

    result = invoke(runner, "embed", "--mdt", mdts, "--tree", 0, "--out", layout)
    assert result.exit_code == 0, result.output
    assert "rho" in result.output

    result = invoke(runner, "layout-tself", "--layout", layout, "--t", 0.5, "--out", layout_t)
    assert result.exit_code == 0, result.output
    assert json.loads(layout_t.read_text(encoding="utf-8"))["t"] == 0.5

    result = invoke(runner, "render", "--layout", layout, "--mdt", mdts, "--isolines", "0.5,0.7,0.9", "--leverage")
    assert result.exit_code == 0, result.output
    assert "p=0.5" in result.output
    assert (tmp_path / "layout_tree0_t1.svg").exists()

    result = invoke(runner, "render", "--layout", layout_t, "--mdt", mdts)
    assert result.exit_code == 0, result.output
    assert (tmp_path / "layout_t_tree0_t0.5.svg").exists()


def test_single_fold_training(runner, dataset_csv, tmp_path):
    model = tmp_path / "all.json"
    result = invoke(
        runner, "train", "--data", dataset_csv, "--label", "y", "--positive", "pos",
        "--folds", 1, "--trees", 2, "--tree-size", 5, "--jobs", 1, "--out", model,
    )
    assert result.exit_code == 0, result.output
    doc = json.loads(model.read_text(encoding="utf-8"))
    assert doc["assignments"] is None and len(doc["ensembles"]) == 1
    assert invoke(runner, "eval", "--data", dataset_csv, "--model", model).exit_code == 0


def test_selftest_core(runner):
    result = invoke(runner, "selftest", "--suite", "core")
    assert result.exit_code == 0, result.output
    assert "checks passed" in result.output


def test_selftest_failure_exit_code(runner, monkeypatch):
    monkeypatch.setattr(
        "tself.scripts.selftest.run_suites",
        lambda names, seed: [CheckResult("core", "volterra", False, "off by 1")],
    )
    result = runner.invoke(cli, ["selftest", "--suite", "core"])
    assert result.exit_code == 3
    assert "core.volterra" in result.output


def test_missing_label_column_is_a_data_error(runner, dataset_csv, tmp_path):
    result = runner.invoke(cli, [
        "train", "--data", str(dataset_csv), "--label", "nope", "--positive", "pos", "--out", str(tmp_path / "m.json"),
    ])
    assert result.exit_code == 2
    assert "nope" in result.output


def test_schema_mismatch_is_a_data_error(runner, tmp_path):
    model = tmp_path / "old.json"
    model.write_text(json.dumps({"format": "tself.model", "schema_version": 99}), encoding="utf-8")
    result = runner.invoke(cli, ["mdt", "--model", str(model), "--out", str(tmp_path / "mdt.json")])
    assert result.exit_code == 2
    assert "schema_version" in result.output

    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"format": "tself.layout", "schema_version": 1}), encoding="utf-8")
    assert runner.invoke(cli, ["mdt", "--model", str(wrong)]).exit_code == 2


def test_usage_errors_exit_with_one(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["--bogus"])
    assert exc.value.code == 1

    bad = tmp_path / "bad.yml"
    bad.write_text("train: [unclosed\n", encoding="utf-8")
    with pytest.raises(SystemExit) as exc:
        main(["--config", str(bad), "selftest", "--suite", "core"])
    assert exc.value.code == 1

    with pytest.raises(SystemExit) as exc:
        main(["embed", "--mdt", str(tmp_path / "m.json"), "--fan", "0"])
    assert exc.value.code == 1


def test_config_file_supplies_defaults(runner, dataset_csv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / ".tself.yml").write_text(
        "train:\n  trees: 2\n  tree-size: 3\n  folds: 1\n  jobs: 1\n", encoding="utf-8"
    )
    result = invoke(runner, "train", "--data", dataset_csv, "--label", "y", "--positive", "pos", "--out", "m.json")
    assert result.exit_code == 0, result.output
    doc = json.loads((tmp_path / "m.json").read_text(encoding="utf-8"))
    assert (doc["trees"], doc["tree_size"], doc["folds"]) == (2, 3, 1)

    result = invoke(runner, "train", "--data", dataset_csv, "--label", "y", "--positive", "pos",
                    "--trees", 1, "--out", "m1.json")
    assert json.loads((tmp_path / "m1.json").read_text(encoding="utf-8"))["trees"] == 1
