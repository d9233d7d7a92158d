import json

import numpy as np
import pytest

from glg import bench
from glg import datasets as ds
from glg.gfk import gfk_kernel
from glg.lmm import LmmPair
from glg.mlkit import accuracy, zscore
from glg.optim import adapt_glg
from conftest import needs_data


def domains(seed=0, N=60, m=6, n=4):
    rng = np.random.default_rng(seed)
    return zscore(rng.standard_normal((N, m))), zscore(rng.standard_normal((N + 5, n)))


@pytest.mark.parametrize("kind", ["DG", "RMG", "RLG"])
def test_baselines_output_common_dimension(kind):
    Xs, Xt = domains()
    Zs, Zt = bench.adapt_baseline(kind, Xs, Xt, seed=1)
    assert Zs.shape == (60, 4) and Zt.shape == (65, 4)


def test_dg_reduces_only_the_wider_domain():
    Xs, Xt = domains(5)
    Hs, Ht = bench.homogeneous_pair("DG", Xs, Xt, seed=0)
    assert Ht is Xt and Hs.shape == (60, 4)
    # scores on the leading principal directions keep the most variance
    assert np.var(Hs, axis=0, ddof=1).sum() >= np.var(Xs[:, :4], axis=0, ddof=1).sum()


def test_rlg_maps_positive_rmg_signed():
    Xs, Xt = domains()
    Hs, _ = bench.homogeneous_pair("RLG", np.eye(6), np.eye(4), seed=2)
    assert np.all(Hs > 0)  # rows of the identity expose the map entries
    Hs, _ = bench.homogeneous_pair("RMG", np.eye(6), np.eye(4), seed=2)
    assert np.any(Hs < 0)
    with pytest.raises(ValueError):
        bench.adapt_baseline("GLG", Xs, Xt, 0)


def test_dg_on_equal_dims_is_plain_gfk():
    Xs, Xt = domains(3, m=4, n=4)
    Zs, Zt = bench.adapt_baseline("DG", Xs, Xt, seed=0)
    kern = gfk_kernel(Xs, Xt)
    np.testing.assert_allclose(Zs @ Zt.T, Xs @ kern.G @ Xt.T, atol=1e-8)


def test_adapt_glg_identity_maps_reduce_to_gfk():
    Xs, Xt = domains(4, m=3, n=3)
    Zs, Zt = adapt_glg(Xs, Xt, maps=LmmPair.identity(3))
    kern = gfk_kernel(zscore(Xs), zscore(Xt))
    np.testing.assert_allclose(Zs @ Zt.T, zscore(Xs) @ kern.G @ zscore(Xt).T, atol=1e-8)


def test_a1_accuracy_equals_positive_fraction():
    y = -np.ones(10000, dtype=int)
    y[:6501] = 1
    pred = bench.predict_nontransfer("A1", np.zeros((len(y), 2)), seed=0)
    assert accuracy(pred, y) == 0.6501


def test_cm_is_seeded():
    X = np.random.default_rng(0).standard_normal((40, 3))
    np.testing.assert_array_equal(bench.predict_nontransfer("CM", X, 5), bench.predict_nontransfer("CM", X, 5))
    with pytest.raises(ValueError):
        bench.predict_nontransfer("RLG", X, 0)


def test_report_aggregates_are_consistent():
    accs = [0.5, 0.75, 0.625]
    rep = bench.TaskReport.from_runs("CD2CO", "RLG", [0, 1, 2], accs, {}, {}, ["b", "a", "b"])
    d = json.loads(rep.to_json())
    assert d["avg"] == np.mean(d["accuracies"]) and d["std"] == np.std(d["accuracies"], ddof=1)
    assert d["min"] <= d["avg"] <= d["max"] and d["warnings"] == ["a", "b"]
    assert bench.TaskReport.from_runs("G2A", "A1", [0], [0.5], {}, {}, []).std == 0.0


def test_run_config_validation(tmp_path):
    with pytest.raises(ValueError):
        bench.RunConfig(runs=0)
    with pytest.raises(ValueError):
        bench.RunConfig(models=())
    with pytest.raises(ValueError):
        bench.RunConfig(models=("SVM",))
    with pytest.raises(KeyError):
        bench.RunConfig(tasks=("X2Y",))
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"tasks": ["cd2co"], "models": ["glg"], "runs": 2, "glg": {"max_iter": 3}}))
    cfg = bench.RunConfig.from_json(p)
    assert cfg.tasks == ("CD2CO",) and cfg.models == ("GLG",)
    assert cfg.glg_config(9).seed == 9 and cfg.glg_config(9).max_iter == 3
    p.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ValueError):
        bench.RunConfig.from_json(p)


@needs_data
def test_run_all_writes_reports_and_summary_in_registry_order(tmp_path, data_dir):
    cfg = bench.RunConfig(
        tasks=("CD2CO", "G2A"), models=("A1", "CM", "RLG"), runs=2, data_dir=str(data_dir), out=str(tmp_path)
    )
    assert bench.run_all(cfg) == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert len(files) == 7 and "summary.txt" in files
    lines = (tmp_path / "summary.txt").read_text().splitlines()
    assert lines[2].split()[2] == "G2A" and "CD2CO" in lines[3]
    a1 = json.loads((tmp_path / "G2A_A1.json").read_text())
    assert a1["std"] == 0.0 and a1["avg"] == 0.5 and a1["samples"] == {"source": 600, "target": 600}
    assert set(a1) >= {"task", "model", "runs", "seeds", "accuracies", "avg", "std", "max", "min", "config", "warnings"}


@needs_data
def test_cancer_a1_is_target_positive_fraction(data_dir):
    cfg = bench.RunConfig(tasks=("CD2CO",), models=("A1",), runs=1, data_dir=str(data_dir))
    rep = bench.run_task("CD2CO", "A1", cfg)
    assert rep.avg == ds.load_dataset("co", data_dir).positive_fraction()


@needs_data
def test_failed_cell_gives_nonzero_exit(tmp_path, data_dir):
    cfg = bench.RunConfig(tasks=("Ope2Opl",), models=("A1",), runs=1, data_dir=str(data_dir), out=str(tmp_path))
    if all(s == "ok" for s in ds.verify(data_dir).values()):
        pytest.skip("text data present")
    assert bench.run_all(cfg) == 1
    assert "error" in json.loads((tmp_path / "Ope2Opl_A1.json").read_text())
    assert "error" in (tmp_path / "summary.txt").read_text()
