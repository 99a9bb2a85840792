"""Exact arithmetic with class sums.

Products of class sums are kept as ``class id -> multiplicity`` maps with
Python integers, so powers never overflow.  The structure constant
``c[i, j, l]`` is the coefficient of the class sum of ``D_l`` in
``K_i * K_j``.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .group import ClassDecomposition


@dataclass(frozen=True)
class ClassMultiset:
    multiplicities: Mapping[int, int]
    total_mass: int

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.multiplicities)

    def __getitem__(self, class_id: int) -> int:
        return self.multiplicities.get(class_id, 0)

    def to_dict(self) -> dict[str, int]:
        return {str(c): int(m) for c, m in self.multiplicities.items()}


def make_multiset(dec: ClassDecomposition, mults: Mapping[int, int] | Iterable) -> ClassMultiset:
    items = mults.items() if isinstance(mults, Mapping) else enumerate(mults)
    clean = {int(c): int(m) for c, m in sorted(items) if m}
    if any(m < 0 for m in clean.values()):
        raise ValueError("multiplicities must be non-negative")
    mass = sum(m * int(dec.sizes[c]) for c, m in clean.items())
    return ClassMultiset(clean, mass)


def class_sum(dec: ClassDecomposition, i: int) -> ClassMultiset:
    return make_multiset(dec, {i: 1})


def class_product(dec: ClassDecomposition, i: int, j: int) -> ClassMultiset:
    """``K_i * K_j`` by enumerating all ``|K_i| |K_j|`` products.

    The multiplicity of class ``l`` is the number of pairs landing on its
    representative.
    """
    G = dec.group
    prods = G.mult[np.ix_(dec.members(i), dec.members(j))].ravel()
    hits = np.bincount(prods, minlength=G.order)
    reps = np.array([c.rep for c in dec.classes])
    return make_multiset(dec, {l: int(hits[r]) for l, r in enumerate(reps)})


@dataclass(frozen=True, eq=False)
class StructureConstants:
    c: np.ndarray
    sizes: np.ndarray

    @property
    def k(self) -> int:
        return self.c.shape[0]

    def __getitem__(self, key):
        return self.c[key]


_constants_cache: "weakref.WeakKeyDictionary[ClassDecomposition, StructureConstants]" = (
    weakref.WeakKeyDictionary()
)


def structure_constants(dec: ClassDecomposition) -> StructureConstants:
    """Full ``c[i, j, l]`` table.

    For each target representative ``d`` every ``a`` in ``G`` pairs with the
    unique ``b = a^-1 d``; tallying ``(class(a), class(b))`` gives one slice in
    ``O(|G|)``.
    """
    cached = _constants_cache.get(dec)
    if cached is not None:
        return cached
    G = dec.group
    k = dec.k
    c = np.zeros((k, k, k), dtype=np.int64)
    class_of = np.asarray(dec.class_of)
    for l, cls in enumerate(dec.classes):
        partner = class_of[G.mult[G.inv, cls.rep]]
        np.add.at(c[:, :, l], (class_of, partner), 1)
    c.setflags(write=False)
    sc = StructureConstants(c, np.asarray(dec.sizes))
    _constants_cache[dec] = sc
    return sc


def multiset_product(dec: ClassDecomposition, a: ClassMultiset, b: ClassMultiset) -> ClassMultiset:
    sc = structure_constants(dec)
    acc = [0] * dec.k
    for i, mi in a.multiplicities.items():
        for j, mj in b.multiplicities.items():
            weight = mi * mj
            for l in np.flatnonzero(sc.c[i, j]):
                acc[l] += weight * int(sc.c[i, j, l])
    return make_multiset(dec, acc)


@dataclass
class _PowerCache:
    powers: list = field(default_factory=list)


_power_cache: "weakref.WeakKeyDictionary[ClassDecomposition, dict[int, _PowerCache]]" = (
    weakref.WeakKeyDictionary()
)


def class_power(dec: ClassDecomposition, i: int, n: int) -> ClassMultiset:
    """``K_i^n`` as a class multiset; memoized per decomposition and class."""
    if n < 1:
        raise ValueError("n must be >= 1")
    per_dec = _power_cache.setdefault(dec, {})
    cache = per_dec.setdefault(i, _PowerCache([class_sum(dec, i)]))
    base = cache.powers[0]
    while len(cache.powers) < n:
        cache.powers.append(multiset_product(dec, cache.powers[-1], base))
    return cache.powers[n - 1]


def support_mask(dec: ClassDecomposition, ms: ClassMultiset) -> np.ndarray:
    """Element-level set underlying a multiset."""
    return dec.mask(ms.support)


def support_size(dec: ClassDecomposition, ms: ClassMultiset) -> int:
    return int(sum(dec.sizes[c] for c in ms.support))


class Shape(str, Enum):
    SINGLE_CLASS = "SingleClass"
    TRIVIAL_PLUS_CLASS = "TrivialPlusClass"
    CLASS_PLUS_INVERSE = "ClassPlusInverse"
    SELF_PLUS_INVERSE = "SelfPlusInverse"
    OTHER = "Other"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SupportShape:
    tag: Shape
    support: tuple[int, ...]
    companion: int | None = None

    @property
    def is_hit(self) -> bool:
        return self.tag is not Shape.OTHER


def is_real_class(dec: ClassDecomposition, i: int) -> bool:
    return int(dec.inverse_class[i]) == i


def classify_support(dec: ClassDecomposition, base: int, ms: ClassMultiset) -> SupportShape:
    """Shape of a power of class ``base``.

    ``companion`` is the class ``D`` of the shape: the single class, the
    non-trivial class next to ``{1}``, or for the inverse-pair shapes the
    smaller id of ``{D, D^-1}`` (``base`` itself for ``K u K^-1``).
    """
    support = tuple(sorted(ms.support))
    inv = dec.inverse_class
    if len(support) == 1:
        return SupportShape(Shape.SINGLE_CLASS, support, support[0])
    if len(support) == 2:
        a, b = support
        if a == 0:
            return SupportShape(Shape.TRIVIAL_PLUS_CLASS, support, b)
        if int(inv[a]) == b:
            if base in support:
                return SupportShape(Shape.SELF_PLUS_INVERSE, support, base)
            return SupportShape(Shape.CLASS_PLUS_INVERSE, support, a)
    return SupportShape(Shape.OTHER, support, None)
