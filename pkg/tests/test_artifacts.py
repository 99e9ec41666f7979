import json

import pytest

from tself.boosting import BoostedEnsemble, boost, ensemble_margins
from tself.errors import ArtifactError
from tself.layout import DiskLayout, sarkar_layout
from tself.mdt import MonotonicDecisionTree, create_mdt, mdt_predict
from tself.utils import load_yaml, read_artifact, write_artifact
from tself.utils.load import dumps_artifact


def through_json(tmp_path, kind, payload):
    path = write_artifact(tmp_path / "artifact.json", kind, payload)
    return read_artifact(path, kind)


def test_artifact_header_and_determinism():
    text = dumps_artifact("tself.test", {"b": 1, "a": [1.5, 2]})
    doc = json.loads(text)
    assert doc == {"format": "tself.test", "schema_version": 1, "a": [1.5, 2], "b": 1}
    assert text == dumps_artifact("tself.test", {"a": [1.5, 2], "b": 1})
    with pytest.raises(ValueError):
        dumps_artifact("tself.test", {"x": float("nan")})


def test_read_artifact_rejects_foreign_documents(tmp_path):
    path = tmp_path / "doc.json"
    with pytest.raises(ArtifactError, match="no such file"):
        read_artifact(path, "tself.model")

    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ArtifactError, match="not valid JSON"):
        read_artifact(path, "tself.model")

    path.write_text(json.dumps({"format": "tself.mdt", "schema_version": 1}), encoding="utf-8")
    with pytest.raises(ArtifactError, match="expected a tself.model"):
        read_artifact(path, "tself.model")

    path.write_text(json.dumps({"format": "tself.model", "schema_version": 2}), encoding="utf-8")
    with pytest.raises(ArtifactError, match="schema_version 2"):
        read_artifact(path, "tself.model")

    path.write_text(json.dumps([1, 2]), encoding="utf-8")
    with pytest.raises(ArtifactError):
        read_artifact(path, "tself.model")


def test_model_round_trip(tmp_path, sample):
    ens = boost(sample, T=3, max_nodes=7)
    doc = through_json(tmp_path, "tself.model", {"ensemble": ens.to_dict()})
    back = BoostedEnsemble.from_dict(doc["ensemble"])
    assert back.leverages == ens.leverages
    assert (ensemble_margins(back, sample) == ensemble_margins(ens, sample)).all()


def test_mdt_round_trip(tmp_path, sample):
    mdt = boost(sample, T=1, max_nodes=15).mdts[0]
    doc = through_json(tmp_path, "tself.mdt", {"mdt": mdt.to_dict()})
    back = MonotonicDecisionTree.from_dict(doc["mdt"])
    assert back.to_dict() == mdt.to_dict()
    assert all(mdt_predict(back, x) == mdt_predict(mdt, x) for x in sample.rows())


def test_layout_round_trip(tmp_path, sample):
    mdt = create_mdt(boost(sample, T=1, max_nodes=15).trees[0])
    layout = sarkar_layout(mdt, tree=0)
    doc = through_json(tmp_path, "tself.layout", layout.to_dict())
    back = DiskLayout.from_dict(doc)
    assert back.to_dict() == layout.to_dict()
    assert back.rho == layout.rho


def test_load_yaml(tmp_path):
    assert load_yaml(tmp_path / "absent.yml") == {}
    path = tmp_path / "cfg.yml"
    path.write_text("embed:\n  fan: 2.5\n", encoding="utf-8")
    assert load_yaml(path) == {"embed": {"fan": 2.5}}
