"""Character-table criteria for powers of classes and checks of their structural consequences.

Three shapes of ``K^n`` are studied for a class ``K = x^G`` and ``n >= 2``:

* a single class,
* ``{1} u D`` for a non-trivial class ``D``,
* ``D u D^-1`` with ``D`` non-real.

Each shape is decided twice: by the exact class algebra (the oracle) and by an
identity over the irreducible characters.  Scans compare the two and run the
structural conclusions (solvability of ``<K>``, order and size constraints,
set identities) on every instance that is found.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .chartable import CharacterTable, class_of_power, is_nonabelian_simple
from .classalg import (
    ClassMultiset,
    Shape,
    SupportShape,
    class_power,
    class_product,
    classify_support,
    is_real_class,
    make_multiset,
    multiset_product,
    structure_constants,
    support_mask,
)
from .exceptions import ClassPowerError, NonIntegral
from .group import (
    ClassDecomposition,
    FiniteGroup,
    SubgroupInfo,
    closure_mask,
    commutator_set,
    conjugacy_classes,
    is_closed_subgroup,
    largest_normal_pi_prime,
    make_subgroup,
    normalizes,
    quotient_group,
    subgroup_closure,
    whole_group,
)
from .numbers import is_prime_power, prime_divisors

DEFAULT_MAX_N = 8
TABLE_MAX_N = 6
NEAR_INTEGER_RTOL = 1e-6
IDENTITY_RTOL = 1e-6

CHAR3_REAL_D_RULE = (
    "char3 is evaluated literally with D = class of x^n; when D is real its "
    "mass identity reads |K|^n = 2 m1 |D| and cannot hold, so a real D never "
    "satisfies char3 and the oracle's SingleClass label is the consistent verdict"
)


@dataclass
class CharVerdict:
    name: str
    holds: bool
    witness_row: int | None = None
    residual: float = 0.0
    constants: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        d = {"holds": self.holds, "witness_row": self.witness_row, "residual": _round_float(self.residual)}
        if self.constants:
            d["constants"] = self.constants
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Conclusion:
    name: str
    holds: bool
    details: str = ""
    kind: str = "theorem"

    def to_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "kind": self.kind, "details": self.details}


@dataclass
class CriterionReport:
    group: str
    class_id: int
    n: int
    class_size: int
    element_order: int
    oracle_shape: SupportShape | None
    char_verdicts: dict[str, CharVerdict]
    conclusions: list[Conclusion]
    agreement: bool | None
    notes: list[str] = field(default_factory=list)

    @property
    def is_hit(self) -> bool:
        if self.oracle_shape is not None:
            return self.oracle_shape.is_hit
        return any(v.holds for v in self.char_verdicts.values())

    @property
    def violations(self) -> list[Conclusion]:
        return [c for c in self.conclusions if not c.holds]

    @property
    def is_finding(self) -> bool:
        return self.agreement is False or bool(self.violations)

    def to_dict(self) -> dict:
        shape = None
        if self.oracle_shape is not None:
            shape = {
                "tag": self.oracle_shape.tag.value,
                "support": list(self.oracle_shape.support),
                "companion": self.oracle_shape.companion,
            }
        return {
            "group": self.group,
            "class_id": self.class_id,
            "n": self.n,
            "class_size": self.class_size,
            "element_order": self.element_order,
            "oracle_shape": shape,
            "char_verdicts": {k: v.to_dict() for k, v in self.char_verdicts.items()},
            "conclusions": [c.to_dict() for c in self.conclusions],
            "agreement": self.agreement,
            "notes": list(self.notes),
        }


def _round_float(x: float) -> float:
    return float(f"{x:.6g}")


def near_integer(name: str, value: complex, rtol: float = NEAR_INTEGER_RTOL) -> int:
    """Round ``value`` to an integer or raise ``NonIntegral``."""
    value = complex(value)
    rounded = round(value.real)
    residual = abs(value - rounded)
    if residual > rtol * max(1.0, abs(rounded)):
        raise NonIntegral(name, value, residual)
    return int(rounded)


def _first_failure(res: np.ndarray, bound: np.ndarray) -> tuple[bool, int | None, float]:
    failing = np.flatnonzero(res > bound)
    if failing.size:
        r = int(failing[0])
        return False, r, float(res[r])
    return True, None, float(res.max()) if res.size else 0.0


# --- pure character criteria -----------------------------------------------


def char1_check(table: CharacterTable, xclass: int, n: int) -> CharVerdict:
    """``chi(x)^n = chi(1)^(n-1) chi(x^n)`` for every irreducible ``chi``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    xn = class_of_power(table, xclass, n)
    deg = table.degrees
    chi = table.values[:, xclass]
    res = np.abs(chi**n - deg ** (n - 1) * table.values[:, xn])
    holds, row, r = _first_failure(res, table.tolerance * (1 + deg ** (n - 1)))
    return CharVerdict("char1", holds, row, r, {"power_class": xn})


def prod_is_class_check(table: CharacterTable, classes: Sequence[int], d: int) -> CharVerdict:
    """``chi(x_1)...chi(x_r) = chi(1)^(r-1) chi(d)`` for every irreducible ``chi``."""
    r = len(classes)
    if r < 2:
        raise ValueError("need at least two classes")
    deg = table.degrees
    lhs = np.prod(table.values[:, list(classes)], axis=1)
    res = np.abs(lhs - deg ** (r - 1) * table.values[:, d])
    holds, row, resid = _first_failure(res, table.tolerance * (1 + deg ** (r - 1)))
    return CharVerdict("prod_is_class", holds, row, resid, {"d_class": d})


def tuple_product_is_some_class(table: CharacterTable, classes: Sequence[int]) -> list[int]:
    """Classes ``d`` for which the product criterion holds for ``classes``."""
    r = len(classes)
    deg = table.degrees
    lhs = np.prod(table.values[:, list(classes)], axis=1)
    res = np.abs(lhs[:, None] - (deg ** (r - 1))[:, None] * table.values)
    bound = table.tolerance * (1 + deg ** (r - 1))[:, None]
    return [int(d) for d in np.flatnonzero((res <= bound).all(axis=0))]


@dataclass(frozen=True)
class AlphaResult:
    value: int
    residual: float
    raw: complex


def alpha_raw(table: CharacterTable, classes: Sequence[int], j: int) -> complex:
    r = len(classes)
    deg = table.degrees
    prod_chars = np.prod(table.values[:, list(classes)], axis=1)
    total = np.sum(prod_chars * table.values[:, j].conj() / deg ** (r - 1))
    scale = math.prod(int(table.class_sizes[c]) for c in classes) / table.group_order
    return complex(scale * total)


def alpha_multiplicities(table: CharacterTable, classes: Sequence[int], j: int) -> AlphaResult:
    """Multiplicity of ``D_j`` in the product of the class sums of ``classes``."""
    raw = alpha_raw(table, classes, j)
    value = near_integer("alpha", raw)
    return AlphaResult(value, abs(raw - value), raw)


def _power_constants(table: CharacterTable, xclass: int, n: int):
    size = int(table.class_sizes[xclass])
    mass = size**n
    return size, mass, float(mass) / table.group_order


def char2_check(table: CharacterTable, xclass: int, dclass: int, n: int) -> CharVerdict:
    """Character test for ``K^n = {1} u D``.

    ``m1`` and ``m2`` are the multiplicities of the trivial class and of ``D``
    in ``K^n`` computed from the table; both must be positive integers, the
    mass identity ``|K|^n = m1 + m2 |D|`` must hold, and for every ``chi``
    ``chi(x)^n |K|^n = chi(1)^(n-1) (m1 chi(1) + m2 |D| chi(d))``.
    """
    if dclass == 0:
        raise ValueError("D must be a non-trivial class")
    if n < 2:
        raise ValueError("n must be >= 2")
    deg = table.degrees
    chi_x = table.values[:, xclass]
    chi_d = table.values[:, dclass]
    size, mass, scale = _power_constants(table, xclass, n)
    d_size = int(table.class_sizes[dclass])
    m1 = near_integer("m1", scale * np.sum(chi_x**n / deg ** (n - 2)))
    m2 = near_integer("m2", scale * np.sum(chi_x**n * chi_d.conj() / deg ** (n - 1)))
    constants = {"d_class": dclass, "m1": m1, "m2": m2}
    if m1 <= 0 or m2 <= 0:
        return CharVerdict("char2", False, None, 0.0, constants, "m1 and m2 must be positive")
    if abs(m1 + m2 * d_size - mass) > NEAR_INTEGER_RTOL * mass:
        return CharVerdict("char2", False, None, float(abs(m1 + m2 * d_size - mass)), constants, "mass identity fails")
    lhs = chi_x**n * float(mass)
    rhs = deg ** (n - 1) * (m1 * deg + m2 * d_size * chi_d)
    res = np.abs(lhs - rhs)
    holds, row, r = _first_failure(res, table.tolerance * (1 + float(mass) * deg**n))
    return CharVerdict("char2", holds, row, r, constants)


def char3_check(table: CharacterTable, xclass: int, n: int) -> CharVerdict:
    """Character test for ``K^n = D u D^-1`` with ``D`` the class of ``x^n``.

    Requires positive integers ``m1, m2`` (multiplicities of ``D`` and
    ``D^-1``), the mass identity ``|K|^n = (m1 + m2)|D|``, the row identity
    ``chi(x)^n |K|^n = chi(1)^(n-1) |D| (m1 chi(x^n) + m2 chi(x^-n))`` and the
    summed identity checked by :func:`eq3_check`.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    deg = table.degrees
    xn = class_of_power(table, xclass, n)
    chi_x = table.values[:, xclass]
    chi_xn = table.values[:, xn]
    size, mass, scale = _power_constants(table, xclass, n)
    d_size = int(table.class_sizes[xn])
    m1 = near_integer("m1", scale * np.sum(chi_x**n * chi_xn.conj() / deg ** (n - 1)))
    m2 = near_integer("m2", scale * np.sum(chi_x**n * chi_xn / deg ** (n - 1)))
    constants = {"d_class": xn, "m1": m1, "m2": m2}
    note = CHAR3_REAL_D_RULE if table.inverse_class[xn] == xn else ""
    if m1 <= 0 or m2 <= 0:
        return CharVerdict("char3", False, None, 0.0, constants, note or "m1 and m2 must be positive")
    if abs((m1 + m2) * d_size - mass) > NEAR_INTEGER_RTOL * mass:
        return CharVerdict(
            "char3", False, None, float(abs((m1 + m2) * d_size - mass)), constants, note or "mass identity fails"
        )
    lhs = chi_x**n * float(mass)
    rhs = deg ** (n - 1) * d_size * (m1 * chi_xn + m2 * chi_xn.conj())
    res = np.abs(lhs - rhs)
    holds, row, r = _first_failure(res, table.tolerance * (1 + float(mass) * deg**n))
    if not holds:
        return CharVerdict("char3", False, row, r, constants, note)
    summed = eq3_check(table, xclass, n)
    return CharVerdict("char3", summed.holds, summed.witness_row, max(r, summed.residual), constants, note)


def eq3_check(table: CharacterTable, xclass: int, n: int) -> CharVerdict:
    """``chi(x)^n + chi(x^-1)^n = chi(1)^(n-1) (chi(x^n) + chi(x^-n))`` for every ``chi``."""
    deg = table.degrees
    xn = class_of_power(table, xclass, n)
    chi_x = table.values[:, xclass]
    chi_xn = table.values[:, xn]
    lhs = chi_x**n + chi_x.conj() ** n
    rhs = deg ** (n - 1) * (chi_xn + chi_xn.conj())
    res = np.abs(lhs - rhs)
    holds, row, r = _first_failure(res, table.tolerance * (1 + deg ** (n - 1)))
    return CharVerdict("eq3", holds, row, r, {"power_class": xn})


def char2_candidates(table: CharacterTable, xclass: int, n: int) -> tuple[list[int], dict[int, CharVerdict]]:
    """Run :func:`char2_check` against every non-trivial ``D``; returns the holding ones."""
    verdicts = {}
    for d in range(1, table.k):
        try:
            verdicts[d] = char2_check(table, xclass, d, n)
        except NonIntegral as exc:
            verdicts[d] = CharVerdict("char2", False, None, exc.residual, {"d_class": d}, str(exc))
    return [d for d, v in verdicts.items() if v.holds], verdicts


# --- group-level helpers ---------------------------------------------------

_closure_cache: "weakref.WeakKeyDictionary[ClassDecomposition, dict]" = weakref.WeakKeyDictionary()


def class_closure(dec: ClassDecomposition, c: int) -> SubgroupInfo:
    """``<K>`` for class ``c`` (normal, being generated by a class)."""
    cache = _closure_cache.setdefault(dec, {})
    if ("closure", c) not in cache:
        cache[("closure", c)] = subgroup_closure(dec.group, dec.members(c))
    return cache[("closure", c)]


def commutator_closure_mask(dec: ClassDecomposition, c: int) -> tuple[np.ndarray, bool]:
    """Mask of ``<[x, G]>`` for ``x = rep(c)`` and whether the raw set is already closed."""
    cache = _closure_cache.setdefault(dec, {})
    if ("comm", c) not in cache:
        raw = commutator_set(dec.group, dec.rep(c))
        mask = closure_mask(dec.group, raw)
        cache[("comm", c)] = (mask, int(mask.sum()) == raw.size)
    return cache[("comm", c)]


def set_product(G: FiniteGroup, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Mask of ``{ab : a in A, b in B}`` for index arrays ``A`` and ``B``."""
    mask = np.zeros(G.order, dtype=bool)
    mask[G.mult[np.ix_(a, b)].ravel()] = True
    return mask


def power_shape(dec: ClassDecomposition, c: int, n: int) -> SupportShape:
    return classify_support(dec, c, class_power(dec, c, n))


def _support(dec: ClassDecomposition, c: int, n: int) -> tuple[int, ...]:
    return tuple(sorted(class_power(dec, c, n).support))


def _is_two_power(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


# --- theorem-level checks --------------------------------------------------


@dataclass
class Theorem1Result:
    single_class: bool
    centralizer_and_normal_coset: bool
    centralizer_and_characters: bool

    @property
    def consistent(self) -> bool:
        return self.single_class == self.centralizer_and_normal_coset == self.centralizer_and_characters


def theorem1_equivalence_check(
    G: FiniteGroup, dec: ClassDecomposition, table: CharacterTable, xclass: int, n: int
) -> Theorem1Result:
    """Evaluate the three equivalent conditions for ``K^n`` being a class, independently.

    (a) from the class algebra; (b) from centralizers and the element set
    ``x^-1 K``; (c) from table data only: ``|K| = |(x^n)^G|`` and every
    ``chi(x)`` is ``0`` or of modulus ``chi(1)``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    a = len(class_power(dec, xclass, n).support) == 1

    x = dec.rep(xclass)
    xn = G.power(x, n)
    same_centralizer = bool(np.array_equal(G.mult[:, x] == G.mult[x, :], G.mult[:, xn] == G.mult[xn, :]))
    coset = np.unique(G.mult[G.inv[x], dec.members(xclass)])
    b = same_centralizer and is_closed_subgroup(G, coset) and normalizes(G, coset, G.small_generators)

    d = class_of_power(table, xclass, n)
    deg = table.degrees
    mod = np.abs(table.values[:, xclass])
    tol = table.tolerance * np.maximum(1.0, deg)
    chars_ok = bool(np.all((mod <= tol) | (np.abs(mod - deg) <= tol)))
    c = table.class_sizes[xclass] == table.class_sizes[d] and chars_ok
    return Theorem1Result(a, b, c)


def theoremA_verify(
    G: FiniteGroup,
    dec: ClassDecomposition,
    table: CharacterTable | None,
    xclass: int,
    n: int,
    max_n: int = DEFAULT_MAX_N,
) -> list[Conclusion]:
    """Consequences of ``K^n`` being a single class (``n >= 2``)."""
    if n < 2 or len(class_power(dec, xclass, n).support) != 1:
        raise ValueError("theoremA_verify requires K^n to be a single class with n >= 2")
    size = int(dec.sizes[xclass])
    o = int(dec.element_order_of_class[xclass])
    inv = int(dec.inverse_class[xclass])
    closure = class_closure(dec, xclass)
    out = [Conclusion("theoremA_solvable", closure.is_solvable, f"|<K>| = {closure.order}")]

    bad = [
        r for r in range(1, max_n + 1)
        if sum(int(dec.sizes[c]) for c in _support(dec, xclass, r)) != size
    ]
    out.append(Conclusion("C1_constant_power_size", not bad, f"|K^r| != |K| for r in {bad}" if bad else ""))
    out.append(Conclusion("C1_power_order_plus_one", _support(dec, xclass, o + 1) == (xclass,), f"o(x) = {o}"))
    if o >= 2:
        out.append(Conclusion("C1_power_order_minus_one", _support(dec, xclass, o - 1) == (inv,), f"o(x) = {o}"))
    coprime_bad = [
        m for m in range(1, max_n + 1) if math.gcd(m, o) == 1 and len(_support(dec, xclass, m)) != 1
    ]
    out.append(Conclusion("C1_coprime_powers_single", not coprime_bad, f"failing m: {coprime_bad}" if coprime_bad else ""))

    if is_prime_power(o) and prime_divisors(o) == {o}:
        out.append(Conclusion("NOCFSG_prime_order_solvable", closure.is_solvable, f"o(x) = {o}"))
    if o >= 2 and _is_two_power(o):
        out.append(Conclusion("NOCFSG_2_element_solvable", closure.is_solvable, f"o(x) = {o}"))

    d = _support(dec, xclass, n)[0]
    if d == xclass:
        out.extend(corollaryC2_verify(G, dec, xclass, n, max_n))
    if is_real_class(dec, d):
        out.extend(nocfsgr_verify(G, dec, xclass, n, max_n))
    return out


def corollaryC2_verify(
    G: FiniteGroup, dec: ClassDecomposition, xclass: int, n: int, max_n: int = DEFAULT_MAX_N
) -> list[Conclusion]:
    """Consequences of ``K^n = K`` (``n >= 2``)."""
    o = int(dec.element_order_of_class[xclass])
    out = []
    if n == 2:
        out.append(Conclusion("remark_no_idempotent_class", xclass == 0, "K^2 = K with K non-trivial"))
    period = n - 1
    bad = []
    for k in range(1, max_n + 1):
        for r in range(1, max_n + 1):
            m = k * period + r
            if m > max_n:
                break
            if _support(dec, xclass, m) != _support(dec, xclass, r):
                bad.append((k, r))
    out.append(Conclusion("C2_periodicity", not bad, f"K^(k(n-1)+r) != K^r for {bad}" if bad else ""))

    comm_mask, _ = commutator_closure_mask(dec, xclass)
    power_mask = support_mask(dec, class_power(dec, xclass, n - 1))
    members = np.flatnonzero(power_mask)
    ok = bool(np.array_equal(power_mask, comm_mask)) and normalizes(G, members, G.small_generators)
    out.append(Conclusion("C2_power_is_commutator_subgroup", ok, f"|K^(n-1)| = {members.size}, |[x,G]| = {int(comm_mask.sum())}"))
    primes_o, primes_n = prime_divisors(o), prime_divisors(n - 1) if n > 2 else set()
    out.append(Conclusion("C2_prime_divisors", primes_o <= primes_n, f"pi(o(x)) = {sorted(primes_o)}, pi(n-1) = {sorted(primes_n)}"))
    return out


def nocfsgr_verify(
    G: FiniteGroup, dec: ClassDecomposition, xclass: int, n: int, max_n: int = DEFAULT_MAX_N
) -> list[Conclusion]:
    """Consequences of ``K^n = D`` with ``D`` a real class."""
    sup = _support(dec, xclass, n)
    if len(sup) != 1 or not is_real_class(dec, sup[0]):
        raise ValueError("nocfsgr_verify requires K^n to be a single real class")
    d = sup[0]
    size = int(dec.sizes[xclass])
    o = int(dec.element_order_of_class[xclass])
    closure = class_closure(dec, xclass)
    d_order = int(dec.element_order_of_class[d])
    out = [
        Conclusion("NOCFSGR_solvable", closure.is_solvable, f"|<K>| = {closure.order}"),
        Conclusion("NOCFSGR_D_cubed", _support(dec, d, 3) == (d,), ""),
        Conclusion("NOCFSGR_D_2_element", _is_two_power(d_order), f"o(d) = {d_order}"),
    ]
    # Part (a) is vacuous for D = {1}: its proof needs x^n != 1.
    if _is_two_power(n) and d != 0:
        a = n.bit_length() - 1
        out.append(Conclusion("NOCFSGR_a_odd_class_size", size % 2 == 1, f"|K| = {size}"))
        out.append(Conclusion("NOCFSGR_a_element_order", o == 2 ** (a + 1), f"o(x) = {o}, n = 2^{a}"))
    if d == xclass:
        odd_bad = [m for m in range(1, max_n + 1, 2) if _support(dec, xclass, m) != (xclass,)]
        comm_mask, _ = commutator_closure_mask(dec, xclass)
        square = support_mask(dec, class_power(dec, xclass, 2))
        members = np.flatnonzero(square)
        out.extend([
            Conclusion("NOCFSGR_b_2_element", _is_two_power(o), f"o(x) = {o}"),
            Conclusion("NOCFSGR_b_odd_powers", not odd_bad, f"failing m: {odd_bad}" if odd_bad else ""),
            Conclusion(
                "NOCFSGR_b_square_is_commutator_subgroup",
                bool(np.array_equal(square, comm_mask)) and normalizes(G, members, G.small_generators),
                "",
            ),
        ])
    return out


def theoremB_verify(
    G: FiniteGroup, dec: ClassDecomposition, table: CharacterTable, xclass: int, n: int
) -> list[Conclusion]:
    """Consequences of ``K^n = {1} u D`` with ``D`` non-trivial."""
    shape = power_shape(dec, xclass, n)
    if n < 2 or shape.tag is not Shape.TRIVIAL_PLUS_CLASS:
        raise ValueError("theoremB_verify requires K^n = {1} u D with n >= 2")
    d = shape.companion
    kk = class_product(dec, xclass, int(dec.inverse_class[xclass]))
    closure = class_closure(dec, xclass)
    size = int(dec.sizes[xclass])
    deg = table.degrees
    lhs = size * np.abs(table.values[:, xclass]) ** 2
    rhs = deg**2 + (size - 1) * deg * table.values[:, d]
    res = np.abs(lhs - rhs)
    scaled = res / (1 + size * deg**2)
    return [
        Conclusion("theoremB_KKinv", tuple(sorted(kk.support)) == (0, d), f"support {sorted(kk.support)}, D = {d}"),
        Conclusion("theoremB_solvable", closure.is_solvable, f"|<K>| = {closure.order}"),
        Conclusion(
            "theoremB_character_identity",
            bool((scaled <= IDENTITY_RTOL).all()),
            f"max residual {float(res.max()):.3g}",
        ),
    ]


@dataclass
class ConverseWitness:
    kk_inverse_is_trivial_plus_class: bool
    companion: int | None
    powers_with_shape: list[int]

    @property
    def converse_fails(self) -> bool:
        return self.kk_inverse_is_trivial_plus_class and not self.powers_with_shape


def theoremB_converse_witness(dec: ClassDecomposition, xclass: int, n_range: Iterable[int]) -> ConverseWitness:
    """Whether ``KK^-1 = {1} u D`` while no ``K^n`` in ``n_range`` equals ``{1} u D``."""
    kk = class_product(dec, xclass, int(dec.inverse_class[xclass]))
    shape = classify_support(dec, xclass, kk)
    is_tpc = shape.tag is Shape.TRIVIAL_PLUS_CLASS
    hits = []
    for n in n_range:
        s = power_shape(dec, xclass, n)
        if is_tpc and s.tag is Shape.TRIVIAL_PLUS_CLASS and s.companion == shape.companion:
            hits.append(n)
    return ConverseWitness(is_tpc, shape.companion if is_tpc else None, hits)


def _inverse_pair(dec: ClassDecomposition, xclass: int, n: int) -> tuple[int, int]:
    sup = _support(dec, xclass, n)
    if len(sup) != 2 or int(dec.inverse_class[sup[0]]) != sup[1] or sup[0] == sup[1]:
        raise ValueError("K^n is not of the form D u D^-1 with D non-real")
    d = dec.power_class(xclass, n)
    return d, int(dec.inverse_class[d])


def theoremC_verify(G: FiniteGroup, dec: ClassDecomposition, xclass: int, n: int) -> list[Conclusion]:
    """Consequences of ``K^n = D u D^-1`` with ``D`` non-real (``D`` = class of ``x^n``)."""
    d, _ = _inverse_pair(dec, xclass, n)
    size, d_size = int(dec.sizes[xclass]), int(dec.sizes[d])
    closure = class_closure(dec, xclass)
    half = 2 * d_size == size
    out = [
        Conclusion("theoremC_size_dichotomy", half or d_size == size, f"|K| = {size}, |D| = {d_size}"),
        Conclusion("remark_K_nonreal", not is_real_class(dec, xclass), ""),
    ]
    if half:
        comm_mask, _ = commutator_closure_mask(dec, xclass)
        x = dec.rep(xclass)
        coset = np.zeros(G.order, dtype=bool)
        coset[G.mult[x, np.flatnonzero(comm_mask)]] = True
        out.append(Conclusion("theoremC_solvable", closure.is_solvable, f"|<K>| = {closure.order}"))
        out.append(Conclusion("theoremC_K_is_coset", bool(np.array_equal(coset, dec.mask([xclass]))), "K = x[x,G]"))
    out.append(Conclusion("conjecture3_solvable", closure.is_solvable, f"|<K>| = {closure.order}", kind="conjecture"))
    return out


def theoremD_verify(G: FiniteGroup, dec: ClassDecomposition, xclass: int) -> list[Conclusion]:
    """Consequences of ``K^2 = K u K^-1`` with ``K`` non-real, including the proof's set identities."""
    inv = int(dec.inverse_class[xclass])
    if inv == xclass or _support(dec, xclass, 2) != tuple(sorted((xclass, inv))):
        raise ValueError("theoremD_verify requires K^2 = K u K^-1 with K non-real")
    o = int(dec.element_order_of_class[xclass])
    closure = class_closure(dec, xclass)
    K = dec.members(xclass)
    kk_ms = class_product(dec, xclass, inv)
    kk_mask = support_mask(dec, kk_ms)
    base = dec.mask([0, xclass, inv])
    S_mask = kk_mask & ~base
    S = np.flatnonzero(S_mask)
    out = [
        Conclusion("theoremD_solvable", closure.is_solvable, f"|<K>| = {closure.order}"),
        Conclusion("theoremD_p_element", is_prime_power(o), f"o(x) = {o}"),
        Conclusion(
            "theoremD_generated_equals_KKinv",
            bool(np.array_equal(closure.mask(G), kk_mask)),
            f"|<K>| = {closure.order}, |KK^-1| = {int(kk_mask.sum())}, |S| = {S.size}",
        ),
    ]
    square = class_power(dec, xclass, 2)
    alpha, beta = square[xclass], square[inv]
    out.append(Conclusion(
        "theoremD_alpha_symmetry",
        kk_ms[xclass] == alpha and kk_ms[inv] == alpha,
        f"alpha = {alpha}, (KK^-1, K) = {kk_ms[xclass]}, (KK^-1, K^-1) = {kk_ms[inv]}",
    ))
    if S.size:
        s_ms = {c: m for c, m in kk_ms.multiplicities.items() if c not in (0, xclass, inv)}
        ks = multiset_product(dec, class_power(dec, xclass, 1), make_multiset(dec, s_ms))
        coeff = beta**2 - int(dec.sizes[xclass]) - alpha**2
        out.extend([
            Conclusion("theoremD_KS_equals_K", bool(np.array_equal(set_product(G, K, S), dec.mask([xclass]))), ""),
            Conclusion("theoremD_S_subgroup", bool(np.array_equal(closure_mask(G, S), S_mask | (np.arange(G.order) == 0))), ""),
            Conclusion(
                "theoremD_class_sum_identity",
                ks.multiplicities == {xclass: coeff},
                f"KS = {ks.to_dict()}, expected {coeff} * K",
            ),
        ])
    else:
        sub = closure
        nontrivial_orders = {int(G.element_orders[i]) for i in sub.member_indices if i != 0}
        elementary = sub.is_abelian and len(nontrivial_orders) <= 1 and all(
            prime_divisors(q) == {q} for q in nontrivial_orders
        )
        out.append(Conclusion("theoremD_elementary_abelian", elementary, f"orders {sorted(nontrivial_orders)}"))
    return out


@dataclass
class C3Result:
    pi: tuple[int, ...]
    hypothesis_met: bool
    failing_class: int | None
    conclusions: list[Conclusion]


def corollaryC3_verify(
    G: FiniteGroup, dec: ClassDecomposition, pi: Iterable[int], max_n: int = DEFAULT_MAX_N
) -> C3Result:
    """If every class of pi-elements has a single-class power, ``G / O_pi'(G)`` is nilpotent."""
    pi = tuple(sorted(set(pi)))
    pi_classes = [
        c for c in range(dec.k) if prime_divisors(int(dec.element_order_of_class[c])) <= set(pi)
    ]
    failing = None
    for c in pi_classes:
        if not any(len(_support(dec, c, n)) == 1 for n in range(2, max_n + 1)):
            failing = c
            break
    conclusions = []
    quotient_nilpotent = None
    if failing is None:
        o_pi_prime = largest_normal_pi_prime(G, pi)
        Q = quotient_group(G, o_pi_prime)
        quotient_nilpotent = whole_group(Q).is_nilpotent
        conclusions.append(Conclusion(
            "C3_quotient_nilpotent", quotient_nilpotent, f"|O_pi'(G)| = {o_pi_prime.order}, |G/O_pi'(G)| = {Q.order}"
        ))
    if all(commutator_closure_mask(dec, c)[1] for c in pi_classes):
        if quotient_nilpotent is None:
                quotient_nilpotent = whole_group(quotient_group(G, largest_normal_pi_prime(G, pi))).is_nilpotent
        conclusions.append(Conclusion("C3_remark_commutator_sets", quotient_nilpotent, ""))
    return C3Result(pi, failing is None, failing, conclusions)


# --- property checks (exhaustive over a decomposition) ----------------------


def mass_conservation_violations(dec: ClassDecomposition) -> list[tuple[int, int]]:
    bad = []
    for i in range(dec.k):
        for j in range(dec.k):
            if class_product(dec, i, j).total_mass != int(dec.sizes[i]) * int(dec.sizes[j]):
                bad.append((i, j))
    return bad


def lemma_le1_violations(dec: ClassDecomposition) -> list[tuple[str, int, int, int]]:
    c = structure_constants(dec).c
    inv = np.asarray(dec.inverse_class)
    sizes = np.asarray(dec.sizes)
    bad = []
    k = dec.k
    for i in range(k):
        for j in range(k):
            for l in range(k):
                if c[i, j, l] != c[inv[i], inv[j], inv[l]]:
                    bad.append(("inverse", i, j, l))
                if c[i, j, l] * sizes[l] != sizes[j] * c[i, inv[l], inv[j]]:
                    bad.append(("transpose", i, j, l))
                if c[i, j, l] != c[j, i, l]:
                    bad.append(("commute", i, j, l))
        for j in range(k):
            lhs = c[i, j, i]
            r1 = sizes[j] * c[i, inv[i], inv[j]]
            if lhs * sizes[i] != r1 or lhs != c[j, inv[i], inv[i]] or lhs != c[inv[j], i, i]:
                bad.append(("self", i, j, i))
    return bad


def idempotent_class_violations(dec: ClassDecomposition) -> list[int]:
    """Non-trivial classes with ``K^2 = K`` (never expected)."""
    return [c for c in range(1, dec.k) if _support(dec, c, 2) == (c,)]


def remark_commutator_set_violations(dec: ClassDecomposition, max_n: int = DEFAULT_MAX_N) -> list[tuple[int, int]]:
    """Pairs ``(c, n)`` where ``[x, G]`` is closed, ``gcd(n, o(x)) = 1`` but ``K^n`` is not a class."""
    bad = []
    for c in range(dec.k):
        if not commutator_closure_mask(dec, c)[1]:
            continue
        o = int(dec.element_order_of_class[c])
        for n in range(2, max_n + 1):
            if math.gcd(n, o) == 1 and len(_support(dec, c, n)) != 1:
                bad.append((c, n))
    return bad


def lemma_l1_violations(dec: ClassDecomposition) -> list[tuple[int, int]]:
    """Pairs ``(K, L)`` with ``KL = D``, ``|D| = |K|`` where ``<LL^-1>`` is not a proper normal solvable subgroup."""
    G = dec.group
    bad = []
    for ki in range(1, dec.k):
        for li in range(1, dec.k):
            sup = tuple(class_product(dec, ki, li).support)
            if len(sup) != 1 or sup[0] == 0 or dec.sizes[sup[0]] != dec.sizes[ki]:
                continue
            L = dec.members(li)
            LL = np.flatnonzero(set_product(G, L, np.asarray(G.inv)[L]))
            N = make_subgroup(G, np.flatnonzero(closure_mask(G, LL)))
            if not (N.is_normal and N.is_solvable and N.order < G.order):
                bad.append((ki, li))
    return bad


def nonreal_inverse_pair_violations(dec: ClassDecomposition, max_n: int = DEFAULT_MAX_N) -> list[tuple[int, int]]:
    bad = []
    for c in range(1, dec.k):
        for n in range(2, max_n + 1):
            shape = power_shape(dec, c, n)
            if shape.tag in (Shape.CLASS_PLUS_INVERSE, Shape.SELF_PLUS_INVERSE) and is_real_class(dec, c):
                bad.append((c, n))
    return bad


# --- scanning --------------------------------------------------------------


def _expected(shape: SupportShape) -> dict[str, object]:
    return {
        "char1": shape.tag is Shape.SINGLE_CLASS,
        "char2": [shape.companion] if shape.tag is Shape.TRIVIAL_PLUS_CLASS else [],
        "char3": shape.tag in (Shape.CLASS_PLUS_INVERSE, Shape.SELF_PLUS_INVERSE),
    }


def _char_verdicts(table: CharacterTable, c: int, n: int) -> tuple[dict[str, CharVerdict], list[int]]:
    verdicts = {}
    try:
        verdicts["char1"] = char1_check(table, c, n)
    except ClassPowerError as exc:
        verdicts["char1"] = CharVerdict("char1", False, note=str(exc))
    holding, per_d = char2_candidates(table, c, n)
    if holding:
        primary = per_d[holding[0]]
        verdicts["char2"] = CharVerdict("char2", True, None, primary.residual, dict(primary.constants, holding_d=holding))
    else:
        xn = class_of_power(table, c, n)
        ref = per_d.get(xn) if xn != 0 else None
        if ref is None:
            verdicts["char2"] = CharVerdict("char2", False, note="no non-trivial D satisfies the identity")
        else:
            verdicts["char2"] = CharVerdict("char2", False, ref.witness_row, ref.residual, dict(ref.constants), ref.note)
    try:
        verdicts["char3"] = char3_check(table, c, n)
    except NonIntegral as exc:
        verdicts["char3"] = CharVerdict("char3", False, None, exc.residual, note=str(exc))
    return verdicts, holding


def scan_group(
    G: FiniteGroup,
    table: CharacterTable,
    n_range: Iterable[int],
    dec: ClassDecomposition | None = None,
    max_n: int | None = None,
) -> list[CriterionReport]:
    """Oracle shape, character verdicts and applicable conclusions for every non-trivial class and ``n``."""
    dec = dec if dec is not None else conjugacy_classes(G)
    n_range = list(n_range)
    max_n = max_n if max_n is not None else max(n_range, default=DEFAULT_MAX_N)
    if tuple(table.class_sizes) != tuple(int(s) for s in dec.sizes):
        raise ClassPowerError("table columns do not match the class decomposition")
    reports = []
    for c in range(1, dec.k):
        o = int(dec.element_order_of_class[c])
        comm_closed = commutator_closure_mask(dec, c)[1]
        for n in n_range:
            shape = power_shape(dec, c, n)
            verdicts, holding = _char_verdicts(table, c, n)
            expected = _expected(shape)
            agreement = (
                verdicts["char1"].holds == expected["char1"]
                and holding == expected["char2"]
                and verdicts["char3"].holds == expected["char3"]
            )
            notes = []
            if is_real_class(dec, dec.power_class(c, n)):
                notes.append(CHAR3_REAL_D_RULE)

            t1 = theorem1_equivalence_check(G, dec, table, c, n)
            conclusions = [Conclusion(
                "theorem1_equivalence",
                t1.consistent,
                f"(a)={t1.single_class} (b)={t1.centralizer_and_normal_coset} (c)={t1.centralizer_and_characters}",
            )]
            if comm_closed and math.gcd(n, o) == 1:
                conclusions.append(Conclusion(
                    "remark_commutator_set_single_class", shape.tag is Shape.SINGLE_CLASS, "[x,G] is a set of commutators"
                ))
            if shape.tag is Shape.SINGLE_CLASS:
                conclusions.extend(theoremA_verify(G, dec, table, c, n, max_n=max_n))
            elif shape.tag is Shape.TRIVIAL_PLUS_CLASS:
                conclusions.extend(theoremB_verify(G, dec, table, c, n))
            elif shape.tag in (Shape.CLASS_PLUS_INVERSE, Shape.SELF_PLUS_INVERSE):
                conclusions.extend(theoremC_verify(G, dec, c, n))
                if shape.tag is Shape.SELF_PLUS_INVERSE and n == 2:
                    conclusions.extend(theoremD_verify(G, dec, c))
            reports.append(CriterionReport(
                group=G.name, class_id=c, n=n, class_size=int(dec.sizes[c]), element_order=o,
                oracle_shape=shape, char_verdicts=verdicts, conclusions=conclusions,
                agreement=agreement, notes=notes,
            ))
    return reports


def scan_table(table: CharacterTable, n_range: Iterable[int]) -> list[CriterionReport]:
    """Character criteria only; no oracle is available for an imported table.

    For a non-abelian simple group every hit contradicts a solvability
    conclusion (``<K> = G``), so hits are recorded as violated conclusions.
    """
    simple = is_nonabelian_simple(table)
    reports = []
    for c in range(1, table.k):
        for n in n_range:
            verdicts, _ = _char_verdicts(table, c, n)
            verdicts["eq1"] = verdicts["char1"]
            verdicts["eq3"] = eq3_check(table, c, n)
            conclusions = []
            if simple:
                for name, label in (("char1", "theoremA"), ("char2", "theoremB"), ("char3", "conjecture3")):
                    conclusions.append(Conclusion(
                        f"{label}_simple_group_has_no_hit", not verdicts[name].holds,
                        "table is non-abelian simple", kind="conjecture" if label == "conjecture3" else "theorem",
                    ))
            reports.append(CriterionReport(
                group=table.name, class_id=c, n=n, class_size=int(table.class_sizes[c]),
                element_order=int(table.element_orders[c]), oracle_shape=None,
                char_verdicts=verdicts, conclusions=conclusions, agreement=None,
                notes=["oracle unavailable for table-only input"],
            ))
    return reports


def default_n_range(G_order: int | None) -> range:
    if G_order is None:
        return range(2, TABLE_MAX_N + 1)
    return range(2, (DEFAULT_MAX_N if G_order <= 60 else TABLE_MAX_N) + 1)
