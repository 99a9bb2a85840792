import pytest

from classpower.catalogue import (
    CatalogueEntry,
    Fact,
    build_catalogue,
    catalogue_names,
    check_entry,
    entry_from_dict,
    get_entry,
    select_class,
)
from classpower.exceptions import CatalogueError, ParseError

from conftest import analysed

S3_DOC = {
    "name": "MyS3",
    "degree": 3,
    "generators": [[1, 2, 0], [1, 0, 2]],
    "expected_facts": [
        {"name": "order", "expected": 6},
        {"name": "class_sizes", "expected": [1, 2, 3]},
    ],
}


def test_names_are_unique_and_complete():
    names = catalogue_names()
    assert len(names) == len(set(names))
    for required in ("Z3:Z4", "A4", "(Z7:Z9):Z2", "SL(2,3)", "M16", "Z2x(Z7:Z3)", "AGammaL(1,8)", "A5", "M11"):
        assert required in names


@pytest.mark.parametrize("entry", build_catalogue(), ids=lambda e: e.name)
def test_every_entry_meets_its_facts(entry):
    check_entry(entry)
    assert entry.expected_facts


def test_orders_cover_small_groups():
    orders = {e.name: (e.table.group_order if e.is_table_only else e.group.order) for e in build_catalogue()}
    assert orders["(Z7:Z9):Z2"] == 126
    assert orders["AGammaL(1,8)"] == 168
    assert orders["M11"] == 7920
    assert all(orders[f"Z{n}"] == n for n in range(1, 13))


def test_m11_is_table_only():
    e = get_entry("M11")
    assert e.is_table_only and e.group is None and e.table.k == 10


def test_unknown_entry():
    with pytest.raises(KeyError):
        get_entry("nope")


def test_entry_from_dict_round_trip():
    e = entry_from_dict(S3_DOC)
    check_entry(e)
    assert e.group.order == 6
    assert e.to_dict()["name"] == "MyS3"


def test_wrong_fact_raises_catalogue_error():
    doc = dict(S3_DOC, expected_facts=[{"name": "order", "expected": 7}])
    with pytest.raises(CatalogueError) as info:
        check_entry(entry_from_dict(doc))
    assert "MyS3" in str(info.value)


def test_unknown_fact_and_broken_construction():
    e = CatalogueEntry("X", {"degree": 3, "generators": [[1, 2, 0]]}, [Fact("colour", {}, "red")])
    with pytest.raises(CatalogueError):
        check_entry(e)
    broken = CatalogueEntry("Y", {"degree": 3, "generators": [[0, 0, 1]]}, [Fact("order", {}, 3)])
    with pytest.raises(CatalogueError):
        check_entry(broken)


def test_entry_needs_name():
    with pytest.raises(ParseError):
        entry_from_dict({"degree": 1, "generators": [[0]]})


def test_select_class():
    G, dec, _ = analysed("A4")
    c = select_class(G, dec, {"order": 3, "size": 4})
    assert dec.sizes[c] == 4 and dec.element_order_of_class[c] == 3
    G, dec, _ = analysed("Z3:Z4")
    b = select_class(G, dec, {"word": "b"})
    assert dec.sizes[b] == 3
