"""Named groups with machine-checked expected facts.

Every entry carries a construction in the group-input JSON format (or a
character-table file for table-only entries) and a list of facts.  A fact
names an evaluator, its parameters and the expected value; ``check_entry``
raises ``CatalogueError`` on the first mismatch so stale fixtures cannot slip
into a suite run.

Classes are picked by selectors: ``{"word": "a b^3"}`` names the class of a
word in the generators, ``{"order": 7, "size": 24}`` the first class (by id)
with that element order and size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Any, Callable

from .chartable import CharacterTable, table_from_dict
from .classalg import Shape, class_power, class_product, classify_support
from .criteria import class_closure, power_shape
from .exceptions import CatalogueError, ParseError
from .group import ClassDecomposition, FiniteGroup, Perm, conjugacy_classes
from .presentation import group_from_dict, parse_word


@dataclass(frozen=True)
class Fact:
    name: str
    params: dict
    expected: Any

    def to_dict(self) -> dict:
        return {"name": self.name, "params": self.params, "expected": self.expected}


@dataclass
class CatalogueEntry:
    name: str
    construction: dict
    expected_facts: list[Fact] = field(default_factory=list)
    description: str = ""

    @property
    def is_table_only(self) -> bool:
        return "table" in self.construction

    @cached_property
    def group(self) -> FiniteGroup | None:
        if self.is_table_only:
            return None
        return group_from_dict(dict(self.construction, name=self.name))

    @cached_property
    def table(self) -> CharacterTable | None:
        if not self.is_table_only:
            return None
        return self.construction["table"]()

    def to_dict(self) -> dict:
        d = {"name": self.name, "expected_facts": [f.to_dict() for f in self.expected_facts]}
        if not self.is_table_only:
            d.update({k: v for k, v in self.construction.items() if k != "name"})
        return d


# --- selectors and fact evaluators ---------------------------------------


def select_class(G: FiniteGroup, dec: ClassDecomposition, selector: dict) -> int:
    if "word" in selector:
        return dec.class_of_element(G.evaluate(parse_word(selector["word"], G.generator_names)))
    for c in range(dec.k):
        if "order" in selector and int(dec.element_order_of_class[c]) != selector["order"]:
            continue
        if "size" in selector and int(dec.sizes[c]) != selector["size"]:
            continue
        return c
    raise ParseError(f"no class matches selector {selector}")


def _shape(G, dec, p):
    return power_shape(dec, select_class(G, dec, p["class"]), p["n"])


def _kkinv_shape(G, dec, p):
    c = select_class(G, dec, p["class"])
    return classify_support(dec, c, class_product(dec, c, int(dec.inverse_class[c])))


def _no_matching_power(G, dec, p):
    c = select_class(G, dec, p["class"])
    target = _kkinv_shape(G, dec, p)
    for n in range(2, p["n_max"] + 1):
        s = power_shape(dec, c, n)
        if s.tag is Shape.TRIVIAL_PLUS_CLASS and s.companion == target.companion:
            return False
    return True


def _hit_count(G, dec, p):
    return sum(
        power_shape(dec, c, n).is_hit for c in range(1, dec.k) for n in range(p["n_min"], p["n_max"] + 1)
    )


def _power_is_base(G, dec, p):
    c = select_class(G, dec, p["class"])
    return tuple(class_power(dec, c, p["n"]).support) == (c,)


GROUP_FACTS: dict[str, Callable[[FiniteGroup, ClassDecomposition, dict], Any]] = {
    "order": lambda G, dec, p: G.order,
    "class_count": lambda G, dec, p: dec.k,
    "class_sizes": lambda G, dec, p: [int(s) for s in dec.sizes],
    "class_size": lambda G, dec, p: int(dec.sizes[select_class(G, dec, p["class"])]),
    "element_order": lambda G, dec, p: int(dec.element_order_of_class[select_class(G, dec, p["class"])]),
    "is_real": lambda G, dec, p: int(dec.inverse_class[select_class(G, dec, p["class"])]) == select_class(G, dec, p["class"]),
    "power_shape": lambda G, dec, p: _shape(G, dec, p).tag.value,
    "power_is_base": _power_is_base,
    "power_d_size": lambda G, dec, p: int(dec.sizes[_shape(G, dec, p).companion]),
    "power_d_element_order": lambda G, dec, p: int(dec.element_order_of_class[_shape(G, dec, p).companion]),
    "closure_order": lambda G, dec, p: class_closure(dec, select_class(G, dec, p["class"])).order,
    "closure_abelian": lambda G, dec, p: class_closure(dec, select_class(G, dec, p["class"])).is_abelian,
    "kkinv_shape": lambda G, dec, p: _kkinv_shape(G, dec, p).tag.value,
    "kkinv_d_size": lambda G, dec, p: int(dec.sizes[_kkinv_shape(G, dec, p).companion]),
    "no_power_matches_kkinv": _no_matching_power,
    "hit_count": _hit_count,
}

TABLE_FACTS: dict[str, Callable[[CharacterTable, dict], Any]] = {
    "group_order": lambda T, p: T.group_order,
    "class_count": lambda T, p: T.k,
    "class_sizes": lambda T, p: [int(s) for s in T.class_sizes],
    "degrees": lambda T, p: [int(round(d)) for d in T.degrees],
}


def evaluate_fact(entry: CatalogueEntry, fact: Fact) -> Any:
    if entry.is_table_only:
        fn = TABLE_FACTS.get(fact.name)
        if fn is None:
            raise CatalogueError(entry.name, fact.name, fact.expected, "unknown table fact")
        return fn(entry.table, fact.params)
    fn = GROUP_FACTS.get(fact.name)
    if fn is None:
        raise CatalogueError(entry.name, fact.name, fact.expected, "unknown group fact")
    G = entry.group
    return fn(G, conjugacy_classes(G), fact.params)


def check_entry(entry: CatalogueEntry) -> None:
    """Build the entry and check every expected fact; raises ``CatalogueError``."""
    try:
        built = entry.table if entry.is_table_only else entry.group
    except Exception as exc:
        raise CatalogueError(entry.name, "construction", "buildable", str(exc)) from exc
    if built is None:
        raise CatalogueError(entry.name, "construction", "buildable", "nothing built")
    for fact in entry.expected_facts:
        try:
            actual = evaluate_fact(entry, fact)
        except CatalogueError:
            raise
        except Exception as exc:
            raise CatalogueError(entry.name, fact.name, fact.expected, f"error: {exc}") from exc
        if actual != fact.expected:
            raise CatalogueError(entry.name, fact.name, fact.expected, actual)


def entry_from_dict(data: dict) -> CatalogueEntry:
    """Catalogue entry from a group-input document with optional ``expected_facts``."""
    if "name" not in data:
        raise ParseError("catalogue entry needs a name")
    facts = [Fact(f["name"], dict(f.get("params", {})), f["expected"]) for f in data.get("expected_facts", [])]
    construction = {k: v for k, v in data.items() if k not in ("name", "expected_facts", "description")}
    return CatalogueEntry(data["name"], construction, facts, data.get("description", ""))


# --- constructions ---------------------------------------------------------


def _cyclic(n: int) -> dict:
    return {"degree": n, "generators": [[(i + 1) % n for i in range(n)]], "generator_names": ["a"]}


def _perms(degree: int, *cycle_lists, names=None) -> dict:
    gens = [list(Perm.from_cycles(degree, *cycles).images) for cycles in cycle_lists]
    return {"degree": degree, "generators": gens, "generator_names": names or [chr(97 + i) for i in range(len(gens))]}


def _sl23() -> dict:
    vectors = [v for v in itertools.product(range(3), repeat=2) if v != (0, 0)]
    index = {v: i for i, v in enumerate(vectors)}

    def action(m):
        return [index[((m[0][0] * x + m[0][1] * y) % 3, (m[1][0] * x + m[1][1] * y) % 3)] for x, y in vectors]

    return {"degree": 8, "generators": [action(((1, 1), (0, 1))), action(((0, 2), (1, 0)))], "generator_names": ["u", "w"]}


def _agammal18() -> dict:
    # F8 = F2[t]/(t^3 + t + 1); field elements are 3-bit integers.
    def mul(a, b):
        r = 0
        for i in range(3):
            if b >> i & 1:
                r ^= a << i
        for i in (4, 3):
            if r >> i & 1:
                r ^= 0b1011 << (i - 3)
        return r

    t = 0b010
    gens = [[mul(t, x) for x in range(8)], [x ^ 1 for x in range(8)], [mul(x, x) for x in range(8)]]
    return {"degree": 8, "generators": gens, "generator_names": ["m", "s", "f"]}


def _presentation(generators, relators, order) -> dict:
    return {"presentation": {"generators": generators, "relators": relators, "order": order}}


def _load_m11() -> CharacterTable:
    import json

    text = resources.files("classpower").joinpath("data/M11.json").read_text()
    return table_from_dict(json.loads(text))


def _facts(*items) -> list[Fact]:
    return [Fact(name, params, expected) for name, params, expected in items]


def build_catalogue() -> list[CatalogueEntry]:
    entries = [
        CatalogueEntry(f"Z{n}", _cyclic(n), _facts(("order", {}, n), ("class_count", {}, n)), "cyclic group")
        for n in range(1, 13)
    ]
    z4 = next(e for e in entries if e.name == "Z4")
    z4.expected_facts += _facts(
        ("power_shape", {"class": {"word": "a"}, "n": 2}, "SingleClass"),
        ("power_d_element_order", {"class": {"word": "a"}, "n": 2}, 2),
    )
    entries += [
        CatalogueEntry("Z2^3", _perms(6, [(0, 1)], [(2, 3)], [(4, 5)]), _facts(("order", {}, 8)), "elementary abelian"),
        CatalogueEntry(
            "S3", _perms(3, [(0, 1, 2)], [(0, 1)]),
            _facts(("order", {}, 6), ("class_sizes", {}, [1, 2, 3])),
        ),
        CatalogueEntry("D8", _perms(4, [(0, 1, 2, 3)], [(0, 2)]), _facts(("order", {}, 8), ("class_count", {}, 5)), "dihedral of order 8"),
        CatalogueEntry(
            "Q8", _presentation(["i", "j"], ["i^4", "i^2=j^2", "j'ij=i'"], 8),
            _facts(("order", {}, 8), ("class_count", {}, 5)),
        ),
        CatalogueEntry(
            "A4", _perms(4, [(0, 1, 2)], [(1, 2, 3)]),
            _facts(
                ("order", {}, 12),
                ("class_size", {"class": {"word": "a"}}, 4),
                ("power_shape", {"class": {"word": "a"}, "n": 3}, "TrivialPlusClass"),
                ("power_d_size", {"class": {"word": "a"}, "n": 3}, 3),
                ("power_d_element_order", {"class": {"word": "a"}, "n": 3}, 2),
            ),
        ),
        CatalogueEntry("S4", _perms(4, [(0, 1, 2, 3)], [(0, 1)]), _facts(("order", {}, 24), ("class_count", {}, 5))),
        CatalogueEntry(
            "SL(2,3)", _sl23(),
            _facts(
                ("order", {}, 24),
                ("class_size", {"class": {"order": 6, "size": 4}}, 4),
                ("kkinv_shape", {"class": {"order": 6, "size": 4}}, "TrivialPlusClass"),
                ("kkinv_d_size", {"class": {"order": 6, "size": 4}}, 6),
                ("no_power_matches_kkinv", {"class": {"order": 6, "size": 4}, "n_max": 12}, True),
            ),
            "natural action on the non-zero vectors of F3^2",
        ),
        CatalogueEntry(
            "M16", _presentation(["a", "x"], ["a^8", "x^2", "x'ax=a^5"], 16),
            _facts(
                ("order", {}, 16),
                ("class_size", {"class": {"word": "a"}}, 2),
                ("power_shape", {"class": {"word": "a"}, "n": 2}, "ClassPlusInverse"),
                ("power_d_size", {"class": {"word": "a"}, "n": 2}, 1),
                ("closure_order", {"class": {"word": "a"}}, 8),
            ),
        ),
        CatalogueEntry(
            "Z3:Z4", _presentation(["a", "b"], ["a^3", "b^4", "b'ab=a'"], 12),
            _facts(
                ("order", {}, 12),
                ("class_size", {"class": {"word": "b"}}, 3),
                ("power_shape", {"class": {"word": "b"}, "n": 3}, "SingleClass"),
                ("power_is_base", {"class": {"word": "b"}, "n": 3}, False),
            ),
            "b inverts a",
        ),
        CatalogueEntry(
            "Z2x(Z7:Z3)",
            _presentation(["a", "b", "c"], ["a^7", "b^3", "c^2", "b'ab=a^2", "a c a' c'", "b c b' c'"], 42),
            _facts(
                ("order", {}, 42),
                ("element_order", {"class": {"word": "ac"}}, 14),
                ("class_size", {"class": {"word": "ac"}}, 3),
                ("power_shape", {"class": {"word": "ac"}, "n": 2}, "ClassPlusInverse"),
                ("power_d_size", {"class": {"word": "ac"}, "n": 2}, 3),
            ),
        ),
        CatalogueEntry(
            "(Z7:Z9):Z2",
            _presentation(["a", "b", "c"], ["a^7", "b^9", "c^2", "b'ab=a^2", "c'ac=a'", "c'bcb'"], 126),
            _facts(
                ("order", {}, 126),
                ("element_order", {"class": {"word": "ab^3"}}, 21),
                ("class_size", {"class": {"word": "ab^3"}}, 6),
                ("power_shape", {"class": {"word": "ab^3"}, "n": 3}, "TrivialPlusClass"),
                ("power_d_size", {"class": {"word": "ab^3"}, "n": 3}, 6),
                ("power_d_element_order", {"class": {"word": "ab^3"}, "n": 3}, 7),
                ("closure_order", {"class": {"word": "ab^3"}}, 21),
                ("closure_abelian", {"class": {"word": "ab^3"}}, True),
            ),
            "b acts on a with order 3, c inverts a and centralizes b",
        ),
        CatalogueEntry(
            "AGammaL(1,8)", _agammal18(),
            _facts(
                ("order", {}, 168),
                ("class_size", {"class": {"order": 7}}, 24),
                ("power_shape", {"class": {"order": 7}, "n": 2}, "SelfPlusInverse"),
                ("closure_order", {"class": {"order": 7}}, 56),
            ),
            "x -> tx, x -> x + 1 and Frobenius on F8",
        ),
        CatalogueEntry(
            "A5", _perms(5, [(0, 1, 2, 3, 4)], [(0, 1, 2)]),
            _facts(("order", {}, 60), ("class_sizes", {}, [1, 12, 12, 15, 20]), ("hit_count", {"n_min": 2, "n_max": 6}, 0)),
            "simple control",
        ),
        CatalogueEntry(
            "M11", {"table": _load_m11},
            _facts(
                ("group_order", {}, 7920),
                ("class_count", {}, 10),
                ("degrees", {}, [1, 10, 10, 10, 11, 16, 16, 44, 45, 55]),
            ),
            "imported character table, simple control",
        ),
    ]
    return entries


def catalogue_names() -> list[str]:
    return [e.name for e in build_catalogue()]


def get_entry(name: str) -> CatalogueEntry:
    for e in build_catalogue():
        if e.name == name:
            return e
    raise KeyError(f"no catalogue entry named {name!r}")
