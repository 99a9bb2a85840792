import numpy as np
import pytest

from classpower.classalg import (
    Shape,
    class_power,
    class_product,
    classify_support,
    is_real_class,
    make_multiset,
    multiset_product,
    structure_constants,
    support_size,
)

from conftest import analysed, group_names


def test_s3_square_of_transpositions():
    _, dec, _ = analysed("S3")
    t = next(i for i in range(dec.k) if dec.sizes[i] == 3)
    c3 = next(i for i in range(dec.k) if dec.sizes[i] == 2)
    sq = class_power(dec, t, 2)
    assert sq.multiplicities == {0: 3, c3: 3}
    assert sq.total_mass == 9


@pytest.mark.parametrize("name", ["S3", "A4", "SL(2,3)", "M16", "A5", "Z2x(Z7:Z3)"])
def test_structure_constants_match_pair_enumeration(name):
    _, dec, _ = analysed(name)
    sc = structure_constants(dec)
    for i in range(dec.k):
        for j in range(dec.k):
            ms = class_product(dec, i, j)
            assert [ms[l] for l in range(dec.k)] == sc.c[i, j].tolist()


@pytest.mark.parametrize("name", group_names())
def test_structure_constant_invariants(name):
    _, dec, _ = analysed(name)
    c = structure_constants(dec).c
    sizes = np.asarray(dec.sizes)
    assert np.array_equal(c, c.transpose(1, 0, 2))
    assert np.array_equal((c * sizes).sum(axis=2), np.outer(sizes, sizes))
    inv = np.asarray(dec.inverse_class)
    assert np.array_equal(c, c[np.ix_(inv, inv, inv)])


def test_trivial_class_is_identity():
    _, dec, _ = analysed("A4")
    for i in range(dec.k):
        assert class_product(dec, 0, i).multiplicities == {i: 1}


def test_powers_are_memoized_and_consistent():
    _, dec, _ = analysed("SL(2,3)")
    for i in range(dec.k):
        p3 = class_power(dec, i, 3)
        assert p3 is class_power(dec, i, 3)
        assert multiset_product(dec, class_power(dec, i, 2), class_power(dec, i, 1)) == p3
        assert p3.total_mass == int(dec.sizes[i]) ** 3
    with pytest.raises(ValueError):
        class_power(dec, 1, 0)


def test_large_powers_stay_exact():
    _, dec, _ = analysed("AGammaL(1,8)")
    big = class_power(dec, dec.k - 1, 16)
    assert big.total_mass == int(dec.sizes[-1]) ** 16
    assert big.total_mass > 2**63


def test_classify_support_shapes():
    _, dec, _ = analysed("M16")
    a = next(i for i in range(dec.k) if dec.sizes[i] == 2 and dec.element_order_of_class[i] == 8)
    shape = classify_support(dec, a, class_power(dec, a, 2))
    assert shape.tag is Shape.CLASS_PLUS_INVERSE
    assert dec.sizes[shape.companion] == 1
    assert shape.is_hit

    _, dec4, _ = analysed("A4")
    x = next(i for i in range(dec4.k) if dec4.sizes[i] == 4)
    assert classify_support(dec4, x, class_power(dec4, x, 3)).tag is Shape.TRIVIAL_PLUS_CLASS

    _, dec5, _ = analysed("A5")
    other = classify_support(dec5, 1, class_power(dec5, 1, 2))
    assert other.tag is Shape.OTHER and other.companion is None and not other.is_hit


def test_self_plus_inverse_in_agammal():
    _, dec, _ = analysed("AGammaL(1,8)")
    x = next(i for i in range(dec.k) if dec.element_order_of_class[i] == 7)
    shape = classify_support(dec, x, class_power(dec, x, 2))
    assert shape.tag is Shape.SELF_PLUS_INVERSE
    assert shape.companion == x
    assert not is_real_class(dec, x)


def test_make_multiset_rejects_negative():
    _, dec, _ = analysed("S3")
    with pytest.raises(ValueError):
        make_multiset(dec, {1: -1})
    assert support_size(dec, make_multiset(dec, {1: 2, 2: 5})) == 5
