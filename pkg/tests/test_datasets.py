import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from glg import datasets as ds
from conftest import needs_data


def write(tmp_path, text, name="t.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_csv_header_label_by_name_and_missing_rows(tmp_path):
    p = write(tmp_path, "id,a,b,cls\n1,0.5,2,yes\n2,?,3,no\n3,1.5,NA,no\n4,2.5,1,no\n")
    D = ds.load_csv(p, label_column="cls", label_map={"yes": 1, "no": -1}, header=True, drop_columns=["id"])
    assert D.shape == (2, 2) and D.dropped_rows == 2
    np.testing.assert_array_equal(D.y, [1, -1])


def test_whitespace_and_negative_index(tmp_path):
    p = write(tmp_path, "1 2 3  1\n4 5 6  2\n")
    D = ds.load_csv(p, label_column=-1, label_map={"1": 1, "2": -1}, delimiter=None)
    np.testing.assert_array_equal(D.X, [[1, 2, 3], [4, 5, 6]])


def test_parse_errors_name_location(tmp_path):
    p = write(tmp_path, "1,2,1\n3,abc,-1\n")
    with pytest.raises(ds.CsvParseError, match=r":2: column 2: non-numeric cell 'abc'"):
        ds.load_csv(p, label_column=-1)
    p = write(tmp_path, "1,2,1\n3,4,7\n", "u.csv")
    with pytest.raises(ds.CsvParseError, match="unknown label value '7'"):
        ds.load_csv(p, label_column=-1, label_map={"1": 1})
    p = write(tmp_path, "1,2,1\n3,4\n", "v.csv")
    with pytest.raises(ds.CsvParseError, match="expected 3 cells"):
        ds.load_csv(p, label_column=-1)


def test_labeled_domain_invariants():
    with pytest.raises(ValueError):
        ds.LabeledDomain(np.ones((3, 2)), np.array([1, 0, 1]))
    with pytest.raises(ValueError):
        ds.LabeledDomain(np.ones((3, 2)), np.array([1, -1]))


def test_svd_reduce_full_fraction_preserves_inner_products(rng):
    X = rng.standard_normal((12, 20))
    Z = ds.svd_reduce_text(X, 1.0)
    np.testing.assert_allclose(Z @ Z.T, X @ X.T, atol=1e-8)


def test_svd_reduce_count_rule_and_tail_energy(rng):
    X = rng.standard_normal((10, 2)) @ rng.standard_normal((2, 6))  # rank 2
    assert ds.svd_reduce_text(X, 0.5).shape == (10, 1)
    Y = rng.standard_normal((15, 8))
    Z = ds.svd_reduce_text(Y, 0.5)
    s = np.linalg.svd(Y, compute_uv=False)
    _, _, Vt = np.linalg.svd(Y, full_matrices=False)
    err = np.linalg.norm(Y - Z @ Vt[: Z.shape[1]]) ** 2
    assert err == pytest.approx(np.sum(s[Z.shape[1]:] ** 2), rel=1e-10)
    assert ds.svd_reduce_text(Y, 0.5, mode="energy").shape[1] <= 8
    with pytest.raises(ValueError):
        ds.svd_reduce_text(Y, 0.0)


def toy_domain(n_pos=30, n_neg=50, k=4, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n_pos + n_neg, k))
    y = np.r_[np.ones(n_pos, int), -np.ones(n_neg, int)]
    return ds.LabeledDomain(X, y, "toy")


@given(st.integers(0, 10_000), st.sampled_from([2, 10, 40, 60]))
def test_sample_unbiased_balance(seed, n):
    D = toy_domain()
    S = ds.sample_unbiased(D, n, seed)
    assert S.y.sum() == 0 and len(S.y) == n
    rows = {tuple(r): l for r, l in zip(D.X, D.y)}
    assert all(rows[tuple(r)] == l for r, l in zip(S.X, S.y))
    np.testing.assert_array_equal(S.X, ds.sample_unbiased(D, n, seed).X)


def test_sample_unbiased_errors():
    with pytest.raises(ValueError):
        ds.sample_unbiased(toy_domain(), 62, 0)
    with pytest.raises(ValueError):
        ds.sample_unbiased(toy_domain(), 7, 0)


@given(st.integers(0, 10_000))
def test_permute_keeps_entries_and_pairing(seed):
    D = toy_domain()
    P = ds.permute(D, seed)
    assert sorted(P.X.ravel()) == sorted(D.X.ravel())
    pairs = {tuple(sorted(r)): l for r, l in zip(D.X, D.y)}
    assert all(pairs[tuple(sorted(r))] == l for r, l in zip(P.X, P.y))


def test_permute_shuffles_sorted_columns():
    D = ds.LabeledDomain(np.tile(np.arange(10.0), (5, 1)), None, "cols")
    moved = sum(not np.all(np.diff(ds.permute(D, s).X[0]) > 0) for s in range(20))
    assert moved == 20


def test_task_registry():
    reg = ds.task_registry()
    assert [t.code for t in reg] == [
        "G2A", "A2G", "Ope2Opl", "Opl2Ope", "Opl2Ppl", "Ppl2Opl", "Ppl2Ope", "Ope2Ppl", "CO2CD", "CD2CO",
    ]
    cd2co = ds.get_task("cd2co")
    assert cd2co.source_title == "Breast Cancer Wisconsin (Diagnostic)"
    assert ds.get_task("G2A").positive_meaning == "Good"
    assert ds.get_task("Opl2Ppl").labels == "-1: Places"
    with pytest.raises(KeyError):
        ds.get_task("X2Y")


@needs_data
@pytest.mark.parametrize("key", ["german", "australian", "co", "cd"])
def test_ingested_shapes_match_catalog(key, data_dir):
    D = ds.load_dataset(key, data_dir)
    assert list(D.shape) == ds.dataset_catalog()[key]["shape"]
    assert set(np.unique(D.y)) == {-1, 1}


@needs_data
def test_co_drops_sixteen_incomplete_rows(data_dir):
    assert ds.load_dataset("co", data_dir).dropped_rows == 16


def test_missing_data_error_points_to_prepare(tmp_path):
    with pytest.raises(ds.DataMissingError, match="glg prepare"):
        ds.load_dataset("german", tmp_path)
