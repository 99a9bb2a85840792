import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from classpower import ClassPowerScanner
from classpower.catalogue import get_entry

from conftest import analysed


def test_params_and_clone():
    est = ClassPowerScanner(max_n=5, seed=7)
    assert est.get_params()["max_n"] == 5
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est
    est.set_params(max_n=4)
    assert est.max_n == 4


def test_fit_group():
    G = analysed("A4")[0]
    est = ClassPowerScanner().fit(G)
    assert est.max_n_ == 8 and est.n_classes_ == 4
    pairs = est.all_pairs()
    assert pairs.shape == (3 * 7, 2)
    assert est.score() == 1.0
    assert est.findings_ == []


def test_default_max_n_for_larger_groups():
    est = ClassPowerScanner().fit(analysed("(Z7:Z9):Z2")[0])
    assert est.max_n_ == 6


def test_predict_and_transform_a4():
    G, dec, _ = analysed("A4")
    est = ClassPowerScanner(max_n=4).fit(G)
    x = int(np.flatnonzero((dec.sizes == 4))[0])
    assert est.predict([[x, 3]])[0] == "TrivialPlusClass"
    row = est.transform([x, 3])
    assert row.tolist() == [[False, True, False]]
    assert est.fit_transform(G).shape == (3 * 3, 3)


def test_fit_table():
    T = get_entry("M11").table
    est = ClassPowerScanner().fit(T)
    assert est.group_ is None and est.max_n_ == 6
    assert np.isnan(est.score())
    assert set(est.predict(est.all_pairs())) == {"Other"}
    assert not est.transform(est.all_pairs()).any()


def test_table_predict_matches_group_predict():
    G = analysed("M16")[0]
    a = ClassPowerScanner(max_n=4).fit(G)
    b = ClassPowerScanner(max_n=4).fit(a.table_)
    pairs = a.all_pairs()
    assert (a.transform(pairs) == b.transform(pairs)).all()


def test_validation_errors():
    G = analysed("S3")[0]
    with pytest.raises(TypeError):
        ClassPowerScanner().fit("S3")
    with pytest.raises(ValueError):
        ClassPowerScanner(max_n=1).fit(G)
    with pytest.raises(ValueError):
        ClassPowerScanner(tolerance=0.5).fit(G)
    est = ClassPowerScanner(max_n=3).fit(G)
    with pytest.raises(ValueError):
        est.predict([[0, 2]])
    with pytest.raises(ValueError):
        est.predict([[1, 4]])
    with pytest.raises(ValueError):
        est.predict([[1.5, 2]])
    with pytest.raises(NotFittedError):
        ClassPowerScanner().predict([[1, 2]])


def test_refit_is_deterministic():
    G = analysed("SL(2,3)")[0]
    a = ClassPowerScanner(max_n=4).fit(G)
    b = ClassPowerScanner(max_n=4).fit(G)
    assert [r.to_dict() for r in a.reports_] == [r.to_dict() for r in b.reports_]
