"""Fully enumerated finite permutation groups and their subgroup machinery.

Every algorithm here works on the full element list: elements are indexed
``0..|G|-1`` (index 0 is the identity) and all arithmetic goes through the
precomputed Cayley table.  Products are read left to right: ``p * q`` applies
``p`` first, then ``q``.  Conjugation is ``x^g = g^-1 x g`` and the
commutator is ``[x, g] = x^-1 x^g``.
"""

from __future__ import annotations

import hashlib
import math
import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .exceptions import CapExceeded, DegreeMismatch, NotNormal, SeriesBoundExceeded
from .numbers import prime_factorization

DEFAULT_CAP = 5040
SERIES_STEP_BOUND = 64
CACHE_ENV = "CLASSPOWER_CACHE_DIR"


class Perm:
    """A permutation of ``0..degree-1`` stored by its image list."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Perm:
        images = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, tuple(cycle[1:]) + (cycle[0],)):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: Perm) -> Perm:
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
        return Perm(other.images[i] for i in self.images)

    def inverse(self) -> Perm:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def __pow__(self, n: int) -> Perm:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Perm.identity(self.degree), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        seen = [False] * self.degree
        result = 1
        for start in range(self.degree):
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                length += 1
            if length:
                result = math.lcm(result, length)
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other: Perm) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Perm({list(self.images)})"


def _row_keys(rows: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # Wrapping uint64 arithmetic is intended: the key is a hash, uniqueness is checked.
    return (rows.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)


class FiniteGroup:
    """An enumerated permutation group with an index-based Cayley table.

    ``mult[i, j]`` is the index of ``elements[i] * elements[j]`` and
    ``inv[i]`` the index of the inverse.  Generators keep their original
    order and names so that words can be evaluated.
    """

    def __init__(
        self,
        elements: np.ndarray,
        name: str = "",
        generator_indices: Sequence[int] = (),
        generator_names: Sequence[str] = (),
    ):
        elements = np.asarray(elements, dtype=np.int64)
        if elements.ndim != 2 or elements.shape[0] == 0:
            raise ValueError("elements must be a non-empty 2-d array")
        if not np.array_equal(elements[0], np.arange(elements.shape[1])):
            raise ValueError("element 0 must be the identity")
        self.elements = elements
        self.elements.setflags(write=False)
        self.name = name
        self.generator_indices = tuple(int(i) for i in generator_indices)
        self.generator_names = tuple(generator_names) or tuple(
            _default_names(len(self.generator_indices))
        )
        self.mult, self.inv = self._cayley_table()

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    @property
    def degree(self) -> int:
        return self.elements.shape[1]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def _cayley_table(self):
        n, d = self.elements.shape
        rng = np.random.default_rng(0x5EED)
        weights = rng.integers(1, 2**63, size=d, dtype=np.uint64)
        keys = _row_keys(self.elements, weights)
        order = np.argsort(keys, kind="stable")
        sorted_keys = keys[order]
        if n > 1 and np.any(sorted_keys[1:] == sorted_keys[:-1]):
            return self._cayley_table_by_dict()
        dtype = np.int16 if n < 2**15 else np.int32
        mult = np.empty((n, n), dtype=dtype)
        for i in range(n):
            prods = _row_keys(self.elements[:, self.elements[i]], weights)
            pos = np.searchsorted(sorted_keys, prods)
            mult[i] = order[pos]
        inv = np.argmax(mult == 0, axis=1).astype(dtype)
        mult.setflags(write=False)
        inv.setflags(write=False)
        return mult, inv

    def _cayley_table_by_dict(self):
        n = self.order
        index = {row.tobytes(): i for i, row in enumerate(self.elements)}
        dtype = np.int16 if n < 2**15 else np.int32
        mult = np.empty((n, n), dtype=dtype)
        for i in range(n):
            prods = self.elements[:, self.elements[i]]
            mult[i] = [index[row.tobytes()] for row in prods]
        inv = np.argmax(mult == 0, axis=1).astype(dtype)
        return mult, inv

    def perm(self, i: int) -> Perm:
        return Perm(self.elements[i])

    def index_of(self, perm: Perm) -> int:
        hits = np.flatnonzero((self.elements == np.asarray(perm.images)).all(axis=1))
        if hits.size == 0:
            raise KeyError(perm)
        return int(hits[0])

    def power(self, i: int, n: int) -> int:
        o = int(self.element_orders[i])
        n %= o
        result, base = 0, int(i)
        while n:
            if n & 1:
                result = int(self.mult[result, base])
            base = int(self.mult[base, base])
            n >>= 1
        return result

    def conjugate(self, i, g):
        """``i^g = g^-1 i g``; vectorized over ``i``."""
        return self.mult[self.mult[self.inv[g], i], g]

    def commutator(self, i, g):
        return self.mult[self.inv[i], self.conjugate(i, g)]

    def evaluate(self, word: Sequence[tuple[int, int]]) -> int:
        """Evaluate a parsed word of ``(generator position, exponent)`` pairs."""
        result = 0
        for gen, exp in word:
            result = int(self.mult[result, self.power(self.generator_indices[gen], exp)])
        return result

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        current = np.arange(n)
        step = 1
        while True:
            hit = (current == 0) & (orders == 0)
            orders[hit] = step
            if orders.all():
                break
            current = self.mult[current, np.arange(n)]
            step += 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def small_generators(self) -> tuple[int, ...]:
        gens = tuple(i for i in self.generator_indices if i != 0)
        if gens and closure_mask(self, gens).all():
            return gens
        return small_generating_set(self, np.arange(self.order))

    @cached_property
    def _class_decomposition(self) -> ClassDecomposition:
        return _compute_classes(self)


def _default_names(count: int) -> list[str]:
    return [chr(ord("a") + i) if i < 26 else f"g{i}" for i in range(count)]


def _cache_path(generators: Sequence[Perm], cap: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    digest = hashlib.sha256(
        repr((cap, [g.images for g in generators])).encode()
    ).hexdigest()[:32]
    return Path(root) / f"group-{digest}.npy"


def enumerate_group(
    generators: Sequence[Perm],
    cap: int = DEFAULT_CAP,
    name: str = "",
    names: Sequence[str] | None = None,
) -> FiniteGroup:
    """Close ``generators`` under composition.

    Elements are indexed breadth-first from the identity, multiplying on the
    right by the generators in sorted order, so indexing is reproducible.

    Raises:
        CapExceeded: the closure has more than ``cap`` elements.
        DegreeMismatch: generators act on different numbers of points.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("at least one generator is required")
    degree = generators[0].degree
    if any(g.degree != degree for g in generators):
        raise DegreeMismatch("generators have inconsistent degrees")

    cache = _cache_path(generators, cap)
    if cache is not None and cache.exists():
        elements = np.load(cache)
    else:
        elements = _bfs_closure(generators, degree, cap)
        if cache is not None:
            cache.parent.mkdir(parents=True, exist_ok=True)
            np.save(cache, elements)

    lookup = {row.tobytes(): i for i, row in enumerate(elements)}
    gen_indices = [lookup[np.asarray(g.images, dtype=np.int64).tobytes()] for g in generators]
    return FiniteGroup(elements, name=name, generator_indices=gen_indices, generator_names=names or ())


def _bfs_closure(generators, degree, cap) -> np.ndarray:
    identity = tuple(range(degree))
    gens = sorted({g.images for g in generators} - {identity})
    seen = {identity: 0}
    elements = [identity]
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in gens:
            product = tuple(g[i] for i in current)
            if product not in seen:
                seen[product] = len(elements)
                elements.append(product)
                if len(elements) > cap:
                    raise CapExceeded(f"closure exceeds cap {cap}")
                queue.append(product)
    return np.array(elements, dtype=np.int64)


def element_order(G: FiniteGroup, i: int) -> int:
    return int(G.element_orders[i])


# --- subgroups -------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupInfo:
    member_indices: tuple[int, ...]
    order: int
    is_normal: bool
    derived_length: int | None
    is_nilpotent: bool

    @property
    def is_solvable(self) -> bool:
        return self.derived_length is not None

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def is_abelian(self) -> bool:
        return self.derived_length is not None and self.derived_length <= 1

    def mask(self, G: FiniteGroup) -> np.ndarray:
        m = np.zeros(G.order, dtype=bool)
        m[list(self.member_indices)] = True
        return m

    def __contains__(self, i) -> bool:
        return int(i) in set(self.member_indices)


def closure_mask(G: FiniteGroup, seed: Iterable[int]) -> np.ndarray:
    """Boolean mask of the subgroup generated by ``seed``."""
    seed = np.unique(np.asarray(list(seed), dtype=np.int64))
    gens = seed[seed != 0]
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    while frontier.size and gens.size:
        prods = G.mult[np.ix_(frontier, gens)].ravel()
        new = np.unique(prods[~mask[prods]])
        mask[new] = True
        frontier = new
    return mask


def small_generating_set(G: FiniteGroup, members: np.ndarray) -> tuple[int, ...]:
    gens: list[int] = []
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for m in np.asarray(members):
        if not mask[m]:
            gens.append(int(m))
            mask = closure_mask(G, gens)
    return tuple(gens)


def is_closed_subgroup(G: FiniteGroup, members: Iterable[int]) -> bool:
    members = np.unique(np.asarray(list(members), dtype=np.int64))
    if members.size == 0 or members[0] != 0:
        return False
    mask = np.zeros(G.order, dtype=bool)
    mask[members] = True
    return bool(mask[G.mult[np.ix_(members, members)]].all())


def normalizes(G: FiniteGroup, members: np.ndarray, conjugators: Iterable[int]) -> bool:
    mask = np.zeros(G.order, dtype=bool)
    mask[members] = True
    return all(mask[G.conjugate(members, g)].all() for g in conjugators)


def normal_closure_mask(G: FiniteGroup, seed: Iterable[int], conjugators: Sequence[int]) -> np.ndarray:
    """Smallest subgroup containing ``seed`` that is normalized by ``conjugators``."""
    gens = list(seed)
    mask = closure_mask(G, gens)
    while True:
        members = np.flatnonzero(mask)
        images = np.unique(np.concatenate([G.conjugate(members, g) for g in conjugators] or [members]))
        outside = images[~mask[images]]
        if outside.size == 0:
            return mask
        gens.extend(int(i) for i in outside)
        mask = closure_mask(G, gens)


def _commutator_subgroup(G: FiniteGroup, a_gens: Sequence[int], h_gens: Sequence[int]) -> np.ndarray:
    """``[A, H]`` as a sorted member array, for ``A = <a_gens>`` normal in ``H = <h_gens>``."""
    comms = {int(G.commutator(a, h)) for a in a_gens for h in h_gens}
    return np.flatnonzero(normal_closure_mask(G, comms or {0}, h_gens))


def _derived_terms(G: FiniteGroup, members: np.ndarray) -> tuple[list[np.ndarray], bool]:
    terms = [members]
    for _ in range(SERIES_STEP_BOUND):
        current = terms[-1]
        gens = small_generating_set(G, current)
        nxt = _commutator_subgroup(G, gens, gens)
        if nxt.size == current.size:
            return terms, current.size == 1
        terms.append(nxt)
    raise SeriesBoundExceeded("derived series")


def _lower_central_terms(G: FiniteGroup, members: np.ndarray) -> tuple[list[np.ndarray], bool]:
    terms = [members]
    h_gens = small_generating_set(G, members)
    for _ in range(SERIES_STEP_BOUND):
        current = terms[-1]
        nxt = _commutator_subgroup(G, small_generating_set(G, current), h_gens)
        if nxt.size == current.size:
            return terms, current.size == 1
        terms.append(nxt)
    raise SeriesBoundExceeded("lower central series")


def make_subgroup(G: FiniteGroup, members: Iterable[int] | np.ndarray) -> SubgroupInfo:
    members = np.unique(np.asarray(list(members) if not isinstance(members, np.ndarray) else members))
    derived, solvable = _derived_terms(G, members)
    _, nilpotent = _lower_central_terms(G, members)
    return SubgroupInfo(
        member_indices=tuple(int(i) for i in members),
        order=int(members.size),
        is_normal=normalizes(G, members, G.small_generators),
        derived_length=len(derived) - 1 if solvable else None,
        is_nilpotent=nilpotent,
    )


def whole_group(G: FiniteGroup) -> SubgroupInfo:
    return make_subgroup(G, np.arange(G.order))


def subgroup_closure(G: FiniteGroup, seed: Iterable[int]) -> SubgroupInfo:
    seed = list(seed)
    if not seed:
        raise ValueError("seed must be non-empty")
    return make_subgroup(G, np.flatnonzero(closure_mask(G, seed)))


def centralizer(G: FiniteGroup, i: int) -> SubgroupInfo:
    members = np.flatnonzero(G.mult[:, i] == G.mult[i, :])
    return make_subgroup(G, members)


def centralizer_order(G: FiniteGroup, i: int) -> int:
    return int(np.count_nonzero(G.mult[:, i] == G.mult[i, :]))


@dataclass(frozen=True)
class CommutatorStructures:
    commutator_set: frozenset[int]
    commutator_subgroup: SubgroupInfo
    set_is_subgroup: bool


def commutator_set(G: FiniteGroup, i: int) -> np.ndarray:
    """The raw set ``{[x, g] : g in G}`` as a sorted index array."""
    return np.unique(G.commutator(i, np.arange(G.order)))


def commutator_structures(G: FiniteGroup, i: int) -> CommutatorStructures:
    raw = commutator_set(G, i)
    sub = subgroup_closure(G, raw)
    return CommutatorStructures(
        commutator_set=frozenset(int(j) for j in raw),
        commutator_subgroup=sub,
        set_is_subgroup=sub.order == raw.size,
    )


def derived_series(G: FiniteGroup, H: SubgroupInfo) -> list[SubgroupInfo]:
    """``H >= H' >= H'' >= ...`` up to (and including) the first repeated term."""
    terms, _ = _derived_terms(G, np.asarray(H.member_indices))
    return [H] + [make_subgroup(G, t) for t in terms[1:]]


def lower_central_series(G: FiniteGroup, H: SubgroupInfo) -> tuple[list[SubgroupInfo], bool]:
    terms, nilpotent = _lower_central_terms(G, np.asarray(H.member_indices))
    return [H] + [make_subgroup(G, t) for t in terms[1:]], nilpotent


def is_pi_number(n: int, pi: Iterable[int]) -> bool:
    """True iff every prime factor of ``n`` lies in ``pi``."""
    pi = set(pi)
    return all(p in pi for p in prime_factorization(n))


def largest_normal_pi_prime(G: FiniteGroup, pi: Iterable[int]) -> SubgroupInfo:
    """O_pi'(G): join of the normal closures of classes that generate pi'-groups."""
    pi = set(pi)
    if not pi:
        raise ValueError("pi must be non-empty")
    dec = conjugacy_classes(G)
    seed = [0]
    for cls in dec.classes[1:]:
        if any(int(G.element_orders[cls.rep]) % p == 0 for p in pi):
            continue
        size = int(closure_mask(G, cls.members).sum())
        if not any(size % p == 0 for p in pi):
            seed.extend(cls.members)
    return subgroup_closure(G, seed)


def quotient_group(G: FiniteGroup, N: SubgroupInfo, name: str | None = None) -> FiniteGroup:
    """``G/N`` realized by the right-multiplication action of ``G`` on cosets of ``N``."""
    members = np.asarray(N.member_indices)
    if not normalizes(G, members, G.small_generators):
        raise NotNormal(f"subgroup of order {N.order} is not normal")
    label = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in range(G.order):
        if label[x] < 0:
            label[G.mult[members, x]] = len(reps)
            reps.append(x)
    reps = np.asarray(reps)
    gens = [Perm(label[G.mult[reps, g]]) for g in G.small_generators]
    if not gens:
        gens = [Perm.identity(len(reps))]
    return enumerate_group(gens, cap=max(G.order, 1), name=name or f"{G.name}/N{N.order}")


def p_part_decomposition(G: FiniteGroup, i: int) -> list[tuple[int, int]]:
    """Commuting prime-power parts of ``x``: ``[(p, index of x_p), ...]``.

    The parts are powers ``x^e`` with ``e = 1 mod p^a`` and ``e = 0`` modulo the
    complementary part of ``o(x)``; their product is ``x``.
    """
    o = element_order(G, i)
    parts = []
    for p, a in sorted(prime_factorization(o).items()):
        q = p**a
        m = o // q
        e = m * pow(m, -1, q) if q > 1 else 0
        parts.append((p, G.power(i, e)))
    return parts


def is_p_element(G: FiniteGroup, i: int) -> bool:
    return len(p_part_decomposition(G, i)) <= 1


# --- conjugacy classes -----------------------------------------------------


@dataclass(frozen=True)
class ConjugacyClass:
    rep: int
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class ClassDecomposition:
    group: FiniteGroup
    classes: tuple[ConjugacyClass, ...]
    class_of: np.ndarray
    inverse_class: np.ndarray
    element_order_of_class: np.ndarray

    @property
    def k(self) -> int:
        return len(self.classes)

    @cached_property
    def sizes(self) -> np.ndarray:
        s = np.array([c.size for c in self.classes], dtype=np.int64)
        s.setflags(write=False)
        return s

    def members(self, i: int) -> np.ndarray:
        return np.asarray(self.classes[i].members)

    def rep(self, i: int) -> int:
        return self.classes[i].rep

    def class_of_element(self, g: int) -> int:
        return int(self.class_of[g])

    def power_class(self, i: int, n: int) -> int:
        """Class of ``x^n`` for ``x`` a representative of class ``i``."""
        return int(self.class_of[self.group.power(self.rep(i), n)])

    def mask(self, class_ids: Iterable[int]) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        for c in class_ids:
            m[self.members(c)] = True
        return m


def conjugacy_classes(G: FiniteGroup) -> ClassDecomposition:
    return G._class_decomposition


def _compute_classes(G: FiniteGroup) -> ClassDecomposition:
    n = G.order
    idx = np.arange(n)
    rows, cols = [], []
    for g in G.small_generators:
        rows.append(idx)
        cols.append(np.asarray(G.conjugate(idx, g), dtype=np.int64))
    if rows:
        graph = coo_matrix(
            (np.ones(n * len(rows), dtype=np.int8), (np.concatenate(rows), np.concatenate(cols))),
            shape=(n, n),
        )
        _, labels = connected_components(graph, directed=True, connection="weak")
    else:
        labels = np.zeros(n, dtype=np.int64)

    orbits: dict[int, list[int]] = {}
    for x, lab in enumerate(labels):
        orbits.setdefault(int(lab), []).append(x)
    ordered = sorted(orbits.values(), key=lambda m: (m[0] != 0, len(m), m[0]))
    classes = tuple(ConjugacyClass(rep=m[0], members=tuple(m)) for m in ordered)

    class_of = np.empty(n, dtype=np.int64)
    for c, cls in enumerate(classes):
        class_of[list(cls.members)] = c
    inverse_class = np.array([class_of[G.inv[cls.rep]] for cls in classes], dtype=np.int64)
    orders = np.array([G.element_orders[cls.rep] for cls in classes], dtype=np.int64)
    for arr in (class_of, inverse_class, orders):
        arr.setflags(write=False)
    return ClassDecomposition(G, classes, class_of, inverse_class, orders)
