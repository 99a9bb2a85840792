import json
from pathlib import Path

import numpy as np
import pytest

from classpower.chartable import (
    DEFAULT_SEED,
    central_character_residual,
    class_matrices,
    class_of_power,
    compute_character_table,
    dumps_table,
    export_table,
    import_table,
    is_nonabelian_simple,
    orthogonality_residuals,
    table_from_dict,
    table_to_dict,
    tables_match,
    validate_table,
)
from classpower.classalg import structure_constants
from classpower.exceptions import MissingPowerMap, ParseError, ValidationFailed

from conftest import analysed, group_names

ROOT = Path(__file__).resolve().parents[1]


def test_s3_degrees():
    _, _, T = analysed("S3")
    assert T.degrees.tolist() == [1.0, 1.0, 2.0]
    assert np.allclose(T.values[0], 1)


@pytest.mark.parametrize("name", ["A4", "A5", "SL(2,3)", "AGammaL(1,8)"])
def test_known_degrees(name):
    expected = {
        "A4": [1, 1, 1, 3],
        "A5": [1, 3, 3, 4, 5],
        "SL(2,3)": [1, 1, 1, 2, 2, 2, 3],
        "AGammaL(1,8)": [1, 1, 1, 3, 3, 7, 7, 7],
    }[name]
    _, _, T = analysed(name)
    assert sorted(int(d) for d in T.degrees) == expected


@pytest.mark.parametrize("name", group_names())
def test_engine_invariants(name):
    G, dec, T = analysed(name)
    row, col = orthogonality_residuals(T)
    assert row < 1e-8 and col < 1e-8
    assert np.all(T.degrees == np.round(T.degrees))
    assert int((T.degrees**2).sum()) == G.order
    assert central_character_residual(T, structure_constants(dec)) < 1e-8
    assert tuple(T.inverse_class) == tuple(int(i) for i in dec.inverse_class)


def test_class_matrix_convention():
    _, dec, T = analysed("S4")
    sc = structure_constants(dec)
    M = class_matrices(sc)
    for i in range(dec.k):
        for j in range(dec.k):
            for l in range(dec.k):
                assert M[i][l, j] == sc.c[i, j, l]


def test_deterministic_for_fixed_seed():
    G, dec, T = analysed("SL(2,3)")
    again = compute_character_table(G, dec, seed=DEFAULT_SEED)
    assert dumps_table(again) == dumps_table(T)


def test_other_seed_same_table_up_to_rows():
    G, dec, T = analysed("AGammaL(1,8)")
    other = compute_character_table(G, dec, seed=12345)
    ok, detail = tables_match(T, other, tol=1e-8)
    assert ok, detail


def test_export_import_round_trip(tmp_path):
    _, _, T = analysed("M16")
    path = tmp_path / "m16.json"
    export_table(T, path)
    back = import_table(path)
    assert np.abs(back.values - T.values).max() < 1e-12
    assert back.power_maps == T.power_maps
    assert dumps_table(back) == path.read_text()


def test_corrupted_table_fails_validation():
    _, _, T = analysed("A4")
    data = table_to_dict(T)
    data["irreducibles"][3][1] = [5.0, 0.0]
    with pytest.raises(ValidationFailed):
        table_from_dict(data)
    data = table_to_dict(T)
    data["class_sizes"][1] = 2
    with pytest.raises(ValidationFailed):
        table_from_dict(data)
    data = table_to_dict(T)
    data["power_maps"]["2"][0] = 1
    with pytest.raises(ValidationFailed):
        table_from_dict(data)


def test_malformed_table_is_parse_error(tmp_path):
    with pytest.raises(ParseError):
        table_from_dict({"name": "x"})
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ParseError):
        import_table(bad)


def test_class_of_power_matches_group():
    G, dec, T = analysed("(Z7:Z9):Z2")
    for l in range(dec.k):
        for n in range(1, 17):
            assert class_of_power(T, l, n) == dec.power_class(l, n)


def test_class_of_power_missing_map():
    _, _, T = analysed("A5")
    data = table_to_dict(T)
    data["power_maps"].pop("2")
    stripped = table_from_dict(data, tolerance=1e-8)
    five = next(l for l in range(T.k) if T.element_orders[l] == 5)
    with pytest.raises(MissingPowerMap):
        class_of_power(stripped, five, 2)


def test_simplicity_from_table(m11):
    assert is_nonabelian_simple(analysed("A5")[2])
    assert is_nonabelian_simple(m11)
    for name in ("S4", "SL(2,3)", "Z5", "AGammaL(1,8)"):
        assert not is_nonabelian_simple(analysed(name)[2])


def test_m11_fixture(m11):
    assert m11.k == 10 and m11.group_order == 7920
    validate_table(m11)
    assert "ATLAS" in m11.header
    shipped = (ROOT / "fixtures" / "M11.json").read_text()
    packaged = (ROOT / "src" / "classpower" / "data" / "M11.json").read_text()
    assert shipped == packaged
    assert json.loads(shipped)["order"] == 7920
