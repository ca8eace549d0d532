# Copyright 2026 The uiqa Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""File-level contract with an external learned model.

The trainer is not built here; these tests play its part with plain Python
and check that the harness accepts what it would write.
"""

import csv
import json
import os
import subprocess

import pytest

import uiqa


def cli(*args):
    code, out, err = uiqa.run_cli([str(a) for a in args])
    assert code == 0, err
    return out


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    d = tmp_path_factory.mktemp("ds")
    cli("synth", "--targets", 6, "--nontargets", 2, "--width", 40, "--height", 40, "--out", d / "refs")
    cli("distort", "--refs", d / "refs/refs.json", "--types", "2,4", "--seed", 5, "--out", d / "dist")
    cli("simulate-ratings", "--manifest", d / "dist/manifest.json", "--subjects", 11, "--out", d / "rate")
    cli("mos", "--ratings", d / "rate/ratings.csv", "--out", d / "mos")
    cli("split", "--manifest", d / "dist/manifest.json", "--folds", 3, "--out", d / "split")
    return d


def test_manifest_json_is_readable(dataset):
    text = (dataset / "dist/manifest.json").read_text()
    manifest = json.loads(text)
    entries = manifest["entries"]
    assert len(entries) == 8 + 6 * 8
    for e in entries:
        assert set(e) >= {"image_id", "file_path", "content_group_id", "is_reference", "is_target", "distortion",
                          "reference_id"}
        assert (dataset / "dist" / e["file_path"]).exists()
        if e["is_reference"]:
            assert e["distortion"] is None
        else:
            assert e["distortion"]["kind"] in (2, 4)
            assert 1 <= e["distortion"]["level"] <= 4
    assert uiqa.normalize_manifest(text) == text
    broken = dict(manifest, entries=entries + [dict(entries[0])])
    with pytest.raises(ValueError):
        uiqa.normalize_manifest(json.dumps(broken))


def test_mos_csv_matches_binding(dataset):
    with open(dataset / "mos/mos.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == ["image_id", "mos", "raw_mean", "variance", "n_raters", "iqr"]
    table = uiqa.load_mos(dataset / "mos/mos.csv")
    assert len(rows) == len(table) == 56
    for r in rows:
        rec = table[r["image_id"]]
        assert float(r["mos"]) == rec["mos"]
        assert rec["mos"] == pytest.approx((rec["raw_mean"] - 1) / 4 * 100)
        assert int(r["n_raters"]) == rec["n_raters"] == 11


def test_external_score_table_evaluates_without_warnings(dataset):
    # stand-in for a trained model: noisy MOS written with the csv module
    mos = uiqa.load_mos(dataset / "mos/mos.csv")
    path = dataset / "learned.csv"
    written = {image_id: rec["mos"] + (i % 7) - 3 for i, (image_id, rec) in enumerate(sorted(mos.items()))}
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["model", "image_id", "score"])
        for image_id, score in written.items():
            w.writerow(["learned", image_id, repr(score)])
    assert uiqa.load_scores(path)["learned"] == written
    out = cli("evaluate", "--scores", path, "--mos", dataset / "mos/mos.csv", "--splits",
              dataset / "split/splits.json", "--out", dataset / "eval")
    assert "warning" not in out
    report = json.loads((dataset / "eval/report.json").read_text())
    assert report["warnings"] == []
    mean = report["models"][0]["mean"]
    assert mean["srcc"] > 0.9
    assert mean["c0"] > 0.8
    scores = uiqa.load_scores(path)["learned"]
    assert uiqa.c0(scores, dataset / "mos/mos.csv") > 0.8


def test_save_scores_round_trip(tmp_path):
    scores = {"a": 1.5, "b": float("inf"), "c": -2.0}
    uiqa.save_scores(tmp_path / "s.csv", "m", scores)
    assert uiqa.load_scores(tmp_path / "s.csv") == {"m": scores}


def test_cli_binary(tmp_path):
    exe = os.environ.get("UIQA_CLI")
    if not exe:
        pytest.skip("UIQA_CLI not set")
    done = subprocess.run([exe, "synth", "--targets", "1", "--width", "32", "--height", "32", "--out",
                           str(tmp_path)], capture_output=True, text=True)
    assert done.returncode == 0, done.stderr
    assert (tmp_path / "refs.json").exists()
