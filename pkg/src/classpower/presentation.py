"""Groups from presentations and the group-input JSON format.

Words are strings over generator names.  A name may be followed by ``'``
(inverse) and/or ``^k`` (integer power); whitespace and ``*`` are ignored.
A relator written ``u = v`` stands for ``u v^-1``.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Sequence

from .exceptions import CapExceeded, ParseError, PresentationError
from .group import DEFAULT_CAP, FiniteGroup, Perm, enumerate_group

Word = list[tuple[int, int]]

_POWER = re.compile(r"\^\s*(-?\d+)")


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse ``text`` into ``(generator position, exponent)`` pairs."""
    if "=" in text:
        lhs, _, rhs = text.partition("=")
        return parse_word(lhs, names) + invert_word(parse_word(rhs, names))
    if text.strip() in ("", "1"):
        return []
    by_length = sorted(range(len(names)), key=lambda i: -len(names[i]))
    word: Word = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace() or ch == "*":
            pos += 1
            continue
        for gi in by_length:
            if text.startswith(names[gi], pos):
                pos += len(names[gi])
                break
        else:
            raise ParseError(f"unknown symbol at {pos} in word {text!r}")
        exp = 1
        while pos < len(text) and text[pos] in "'^":
            if text[pos] == "'":
                exp = -exp
                pos += 1
            else:
                m = _POWER.match(text, pos)
                if not m:
                    raise ParseError(f"bad exponent at {pos} in word {text!r}")
                exp *= int(m.group(1))
                pos = m.end()
        word.append((gi, exp))
    return word


def invert_word(word: Word) -> Word:
    return [(g, -e) for g, e in reversed(word)]


def group_from_presentation(
    generators: Sequence[str],
    relators: Sequence[str],
    order: int,
    cap: int = DEFAULT_CAP,
    name: str = "",
) -> FiniteGroup:
    """Realize ``<generators | relators>`` through its regular representation.

    Coset enumeration over the trivial subgroup yields the right-regular
    action; the enumerated group must have exactly the declared ``order`` and
    every relator must evaluate to the identity in it.
    """
    from sympy.combinatorics.coset_table import coset_enumeration_r
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    if order > cap:
        raise CapExceeded(f"declared order {order} exceeds cap {cap}")
    if len(set(generators)) != len(generators) or not generators:
        raise PresentationError("generator names must be distinct and non-empty")
    words = [parse_word(r, generators) for r in relators]

    free, *symbols = free_group(" ".join(f"g{i}" for i in range(len(generators))))
    def to_free(word):
        result = free.identity
        for g, e in word:
            result = result * symbols[g] ** e
        return result

    fp = FpGroup(free, [to_free(w) for w in words])
    try:
        table = coset_enumeration_r(fp, [], max_cosets=max(64 * order, 4096))
    except ValueError as exc:
        raise PresentationError(f"coset enumeration failed for {name or 'presentation'}: {exc}") from exc
    table.compress()
    table.standardize()
    degree = len(table.table)
    if degree != order:
        raise PresentationError(f"{name or 'presentation'} defines a group of order {degree}, declared {order}")

    perms = [Perm(row[2 * gi] for row in table.table) for gi in range(len(generators))]
    G = enumerate_group(perms, cap=cap, name=name, names=generators)
    for text, w in zip(relators, words):
        if G.evaluate(w) != 0:
            raise PresentationError(f"relator {text!r} is not trivial in the realized group")
    if G.order != order:
        raise PresentationError(f"realized order {G.order}, declared {order}")
    return G


def group_from_dict(data: dict, cap: int = DEFAULT_CAP) -> FiniteGroup:
    name = data.get("name", "")
    if "presentation" in data:
        pres = data["presentation"]
        try:
            return group_from_presentation(
                pres["generators"], pres["relators"], int(pres["order"]), cap=cap, name=name
            )
        except KeyError as exc:
            raise ParseError(f"presentation missing field {exc}") from exc
    if "generators" not in data:
        raise ParseError("group input needs 'generators' or 'presentation'")
    degree = int(data.get("degree", len(data["generators"][0]) if data["generators"] else 0))
    try:
        perms = [Perm(images) for images in data["generators"]]
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if not perms:
        perms = [Perm.identity(max(degree, 1))]
    if any(p.degree != degree for p in perms):
        raise ParseError(f"generator degrees disagree with declared degree {degree}")
    return enumerate_group(perms, cap=cap, name=name, names=data.get("generator_names"))


def load_group(path: str | Path, cap: int = DEFAULT_CAP) -> tuple[FiniteGroup, dict]:
    """Read a group-input JSON file; returns the group and the raw document."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read group file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("group input must be a JSON object")
    return group_from_dict(data, cap=cap), data


def group_to_dict(G: FiniteGroup) -> dict:
    gens = [list(map(int, G.elements[i])) for i in G.generator_indices] or [list(range(G.degree))]
    return {
        "name": G.name,
        "degree": G.degree,
        "generators": gens,
        "generator_names": list(G.generator_names),
    }
