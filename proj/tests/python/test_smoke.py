import math
import os

import numpy as np
import pytest

import mwdisc

DATA = os.path.join(os.path.dirname(__file__), "..", "..", "data")

DEMO = np.array([[4, 4, 1, 1], [4, 4, 1, 1], [1, 1, 4, 4], [1, 1, 4, 4]], dtype=float)


def k4():
    return np.ones((4, 4)) - np.eye(4)


def test_svd_matches_numpy():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(5, 3))
    values, left, right = mwdisc.svd(a)
    assert np.allclose(values, np.linalg.svd(a, compute_uv=False), atol=1e-12)
    assert np.allclose(left @ np.diag(values) @ right.T, a, atol=1e-12)


def test_block_table_has_zero_discrepancy():
    res = mwdisc.min_disc(DEMO, 2)
    assert res["certificate"]["alpha"] == 0.0
    assert res["certificate"]["exactness"] == "exact"
    spec = mwdisc.normalized_spectrum(DEMO)
    assert spec["trivial_index"] == 0
    assert abs(spec["values"][2]) < 1e-12


def test_complete_graph_bound():
    rep = mwdisc.verify(k4(), 1, graph=True)
    assert rep["s_k"] == pytest.approx(1 / 3)
    assert rep["disc"]["alpha"] == pytest.approx(0.25)
    assert rep["verdict"] == "satisfied"
    assert rep["eml"]["holds"]
    mu = mwdisc.modularity_spectrum(k4())["mu"]
    assert np.allclose(mu, [-1 / 3] * 3)


def test_thresholds():
    assert mwdisc.relevance_threshold(1) == pytest.approx(1.866e-3, rel=5e-3)
    assert mwdisc.theorem1_rhs(0.0, 2) == 0.0
    assert mwdisc.butler_rhs(8.868e-5) == pytest.approx(1.0, rel=1e-2)
    assert mwdisc.monotonicity_limit(1) == pytest.approx(math.exp(-2 / 3))


def test_trace_on_noisy_table():
    raw, rows, cols = mwdisc.block_table(8, 8, 2, [0.5, 0.5], [0.5, 0.5], np.array([[4.0, 1.0], [1.0, 4.0]]), 1e-3, 7)
    tr = mwdisc.trace(raw, rows, cols, 2)
    assert tr["min_slack"] >= -1e-9
    assert tr["s_k"] <= tr["final_bound"]


def test_step_approx_real_phases():
    rng = np.random.default_rng(1)
    x = rng.normal(size=10)
    x /= np.linalg.norm(x)
    d = np.exp(rng.uniform(-3, 3, size=10))
    y, terms = mwdisc.step_approx(x, d)
    assert np.linalg.norm(x - d * y) <= 1 / 3
    assert {ell for _, _, ell in terms} <= {0, 14}


def test_clustering_and_generators():
    w, labels = mwdisc.biregular(6, 4, 2, 3, 1)
    res = mwdisc.spectral_clustering(w, 2, graph=True)
    assert res["s_row"] <= 1e-9
    g, labels, warnings = mwdisc.random_graph(20, [0.5, 0.5], np.array([[0.9, 0.1], [0.1, 0.9]]), 3)
    assert g.shape == (20, 20)
    assert warnings == []


def test_errors_are_raised():
    with pytest.raises(mwdisc.Error, match="NegativeEntry"):
        mwdisc.min_disc(-DEMO, 1)


def test_cli_round_trip():
    code, report, _ = mwdisc.run_cli(["disc", "--input", os.path.join(DATA, "block_demo.csv"), "--k", "2"])
    assert code == 0
    assert report["status"] == "ok"
    assert report["payload"]["certificate"]["alpha"] == 0.0
    code, report, _ = mwdisc.run_cli(["nope"])
    assert code == 2
