"""Smoke tests for the python bindings.

Runs either against an installed `meetsense` package or, under ctest,
against the freshly built extension pointed at by MEETSENSE_CORE_DIR.
"""

import json
import math
import os
import sys

import pytest

core_dir = os.environ.get("MEETSENSE_CORE_DIR")
if core_dir:
    sys.path.insert(0, core_dir)
    import _core as ms
else:
    ms = pytest.importorskip("meetsense")


def test_normalize_peak():
    assert ms.normalize([0.5, -0.25]) == [1.0, -0.5]
    assert ms.normalize([0.0, 0.0]) == [0.0, 0.0]


def test_ccep_impulse():
    out = ms.ccep([1.0] + [0.0] * 127)
    assert len(out) == 128
    assert max(abs(v) for v in out) < 1e-12

    scaled = ms.ccep([2.0] + [0.0] * 127)
    assert abs(scaled[0] - math.log(2.0)) < 1e-9


def test_ccep_rejects_silence():
    with pytest.raises(ValueError):
        ms.ccep([0.0] * 64)


def test_bandpass_rejects_bad_edges():
    with pytest.raises(ValueError):
        ms.bandpass([0.1] * 100, 8000, 3400.0, 300.0)


def test_estimate_drift_identity():
    fs = 8000
    sig = [math.sin(2 * math.pi * 440 * i / fs) * (1 + 0.3 * math.sin(2 * math.pi * 3 * i / fs))
           for i in range(4 * fs)]
    shift, corr = ms.estimate_drift(sig, sig, fs, 1.0)
    assert shift == pytest.approx(0.0)
    assert corr == pytest.approx(1.0)


def test_acoustic_similarity_self():
    fs = 8000
    sig = [math.sin(2 * math.pi * 200 * i / fs) + 0.4 * math.sin(2 * math.pi * 400 * i / fs)
           for i in range(2 * fs)]
    values = ms.acoustic_similarity(sig, sig, fs, 1.0)
    assert len(values) == 2
    for _, v in values:
        assert v == pytest.approx(1.0)


def test_pair_distance():
    assert ms.pair_distance({"A": -50, "B": -60}, {"A": -54, "B": -70}) == pytest.approx(7.0)
    assert ms.pair_distance({"A": -50}, {"B": -40}) is None


def test_proximity_similarity():
    log_i = [(10.0, {"A": -50.0})]
    log_j = [(12.0, {"A": -50.0})]
    values = ms.proximity_similarity(log_i, log_j, 60.0, 30.0)
    assert values[0][1] == pytest.approx(1.0)


def test_feature_construct():
    r = ms.feature_construct([0.8] * 9 + [0.1], 0.05)
    assert r["mean_value"] == pytest.approx(0.8)
    assert r["used_count"] == 9
    assert not r["single_cluster"]


def test_communities_two_cliques():
    nodes = ["a", "b", "c", "d", "e", "f"]
    edges = []
    for grp in (nodes[:3], nodes[3:]):
        for i in range(3):
            for j in range(i + 1, 3):
                edges.append((grp[i], grp[j], 1.0))
    communities, modularity = ms.detect_communities(nodes, edges)
    assert sorted(sorted(c) for c in communities) == [["a", "b", "c"], ["d", "e", "f"]]
    assert modularity == pytest.approx(0.5)

    assignment = {n: (0 if n in "abc" else 1) for n in nodes}
    assert ms.modularity(nodes, edges, assignment) == pytest.approx(0.5)


def test_f1():
    assert ms.f1_pair({"a", "b", "c"}, {"a", "b"}) == pytest.approx(0.8)
    assert ms.f1_overall([{"a", "b", "c", "d"}], [{"a", "b"}, {"c", "d"}]) == pytest.approx(2 / 3)


def test_end_to_end_dataset(tmp_path):
    out = str(tmp_path / "ds")
    ms.generate_dataset("S1", out, 3)
    assert os.path.exists(os.path.join(out, "u1.wav"))
    assert os.path.exists(os.path.join(out, "scans.csv"))

    cfg = json.loads(ms.default_config_json())
    cfg["proximity"]["time_bucket_s"] = 10.0
    result = json.loads(ms.detect_dataset(out, "", json.dumps(cfg)))
    truth = json.loads(open(os.path.join(out, "truth.json")).read())
    detected = [set(g) for g in result["groups"]]
    expected = [set(g) for g in truth["groups"]]
    assert all(g in detected for g in expected)
    assert result["decision_path"] != "rejected"
