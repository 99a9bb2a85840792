"""Ordinary character tables: numeric Burnside-Dixon computation, JSON I/O, validation.

Tables hold double-precision complex values.  Rows are irreducible
characters, columns are classes, column 0 is the trivial class.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .classalg import StructureConstants, structure_constants
from .exceptions import ClassPowerError, DegenerateSpectrum, MissingPowerMap, ParseError, ValidationFailed
from .group import ClassDecomposition, FiniteGroup, conjugacy_classes
from .numbers import prime_divisors, prime_factorization, primes_up_to

DEFAULT_SEED = 0xC1A55
COMPUTED_TOLERANCE = 1e-8
IMPORTED_TOLERANCE = 1e-6
DEFAULT_CLASS_LIMIT = 64
MAX_RETRIES = 20
# Power maps for these primes are always computed so that every exponent up to
# the largest supported scan range can be resolved from the table alone.
SCAN_PRIMES = tuple(primes_up_to(16))


@dataclass(frozen=True, eq=False)
class CharacterTable:
    name: str
    values: np.ndarray
    class_sizes: tuple[int, ...]
    element_orders: tuple[int, ...]
    power_maps: Mapping[int, tuple[int, ...]]
    group_order: int
    tolerance: float = COMPUTED_TOLERANCE
    header: str = ""
    inverse_class: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if not self.inverse_class:
            object.__setattr__(self, "inverse_class", _inverse_columns(self.values, self.tolerance))

    @property
    def k(self) -> int:
        return self.values.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.values[:, 0].real

    def central_characters(self) -> np.ndarray:
        """``w[r, l] = |K_l| chi_r(l) / chi_r(1)``."""
        return self.values * np.asarray(self.class_sizes)[None, :] / self.degrees[:, None]


def _inverse_columns(values: np.ndarray, tol: float) -> tuple[int, ...]:
    conj = values.conj()
    inverse = []
    for l in range(values.shape[1]):
        diffs = np.abs(values - conj[:, l][:, None]).max(axis=0)
        inverse.append(int(np.argmin(diffs)))
    return tuple(inverse)


def class_matrices(sc: StructureConstants) -> list[np.ndarray]:
    """``M_i[l, j] = c[i, j, l]``: left multiplication by ``K_i`` in the class-sum basis."""
    return [np.ascontiguousarray(sc.c[i].T) for i in range(sc.k)]


def _clean(values: np.ndarray) -> np.ndarray:
    # Parts within 1e-10 of an integer are exact integers; snap them.
    parts = []
    for part in (values.real.copy(), values.imag.copy()):
        near = np.rint(part)
        snap = np.abs(part - near) < 1e-10
        part[snap] = near[snap]
        parts.append(part + 0.0)
    return parts[0] + 1j * parts[1]


def canonical_row_order(values: np.ndarray) -> np.ndarray:
    """Row order: degree ascending, then rounded real parts and imaginary parts
    compared lexicographically in descending order (so the trivial character
    is row 0)."""
    rounded_re = np.round(values.real, 6) + 0.0
    rounded_im = np.round(values.imag, 6) + 0.0
    keys = [
        (rounded_re[r, 0], tuple(-rounded_re[r]), tuple(-rounded_im[r]))
        for r in range(values.shape[0])
    ]
    return np.array(sorted(range(values.shape[0]), key=lambda r: keys[r]), dtype=np.int64)


def compute_power_maps(dec: ClassDecomposition, primes: Sequence[int]) -> dict[int, tuple[int, ...]]:
    return {p: tuple(dec.power_class(l, p) for l in range(dec.k)) for p in sorted(set(primes))}


def compute_character_table(
    G: FiniteGroup,
    dec: ClassDecomposition | None = None,
    sc: StructureConstants | None = None,
    seed: int = DEFAULT_SEED,
    tolerance: float = COMPUTED_TOLERANCE,
    class_limit: int = DEFAULT_CLASS_LIMIT,
    validate: bool = True,
) -> CharacterTable:
    """Character table of ``G`` from simultaneous eigenvectors of the class matrices.

    Central characters ``w`` are the common eigenvectors of ``M_i^T``.  After
    the similarity ``S = diag(sqrt|K_l|)`` the family ``S^-1 M_i^T S`` is
    normal and closed under transposition (``B_{i*} = B_i^T``), so a random
    Hermitian element of it can be diagonalized with ``eigh``.  A spectrum
    with a repeated eigenvalue is redrawn from the seeded generator.
    """
    dec = dec if dec is not None else conjugacy_classes(G)
    sc = sc if sc is not None else structure_constants(dec)
    k = dec.k
    if k > class_limit:
        raise ClassPowerError(f"{k} classes exceeds the class limit {class_limit}")
    sizes = np.asarray(dec.sizes, dtype=float)
    root = np.sqrt(sizes)
    family = [sc.c[i] * root[None, :] / root[:, None] for i in range(k)]

    rng = np.random.default_rng(seed)
    for _ in range(MAX_RETRIES + 1):
        t = rng.uniform(-1.0, 1.0, size=k)
        s = rng.uniform(-1.0, 1.0, size=k)
        H = sum(ti * (B + B.T) / 2 + 1j * si * (B - B.T) / 2 for ti, si, B in zip(t, s, family))
        evals, evecs = np.linalg.eigh(H)
        scale = max(1.0, float(np.abs(evals).max()))
        if k == 1 or np.diff(evals).min() > 1e-6 * scale:
            break
    else:
        raise DegenerateSpectrum(f"repeated eigenvalues after {MAX_RETRIES} retries")

    omega = (evecs * root[:, None]).T
    omega = omega / omega[:, [0]]
    degrees = np.sqrt(G.order / (np.abs(omega) ** 2 / sizes[None, :]).sum(axis=1))
    rounded = np.round(degrees)
    near = np.abs(degrees - rounded) <= tolerance * np.maximum(1.0, degrees)
    degrees = np.where(near, rounded, degrees)
    values = degrees[:, None] * omega / sizes[None, :]
    values[:, 0] = degrees
    values = _clean(values)
    values = values[canonical_row_order(values)]

    primes = sorted(prime_divisors(G.order) | set(SCAN_PRIMES))
    table = CharacterTable(
        name=G.name,
        values=values,
        class_sizes=tuple(int(x) for x in dec.sizes),
        element_orders=tuple(int(x) for x in dec.element_order_of_class),
        power_maps=compute_power_maps(dec, primes),
        group_order=G.order,
        tolerance=tolerance,
        inverse_class=tuple(int(x) for x in dec.inverse_class),
    )
    if validate:
        validate_table(table)
    return table


def unitary_form(table: CharacterTable) -> np.ndarray:
    """``U[r, l] = chi_r(l) sqrt(|K_l| / |G|)``; unitary iff both orthogonality relations hold."""
    return table.values * np.sqrt(np.asarray(table.class_sizes, dtype=float) / table.group_order)[None, :]


def orthogonality_residuals(table: CharacterTable) -> tuple[float, float]:
    U = unitary_form(table)
    eye = np.eye(table.k)
    return float(np.abs(U @ U.conj().T - eye).max()), float(np.abs(U.conj().T @ U - eye).max())


def central_character_residual(table: CharacterTable, sc: StructureConstants) -> float:
    """Largest ``|M_i^T w - w_i w|`` over rows, scaled by ``max(1, |w_i|)``.

    Each row of central characters must be a common left eigenvector of the
    class matrices, with eigenvalue ``w_i`` for ``M_i``.
    """
    w = table.central_characters()
    worst = 0.0
    for i, M in enumerate(class_matrices(sc)):
        lhs = w @ M
        rhs = w[:, [i]] * w
        scale = np.maximum(1.0, np.abs(w[:, [i]]))
        worst = max(worst, float((np.abs(lhs - rhs) / scale).max()))
    return worst


def validate_table(table: CharacterTable) -> None:
    """Raise ``ValidationFailed`` naming the first invariant that does not hold."""
    tol = table.tolerance
    k = table.k
    if table.values.shape != (k, k) or len(table.class_sizes) != k or len(table.element_orders) != k:
        raise ValidationFailed("shape", f"values {table.values.shape}, {len(table.class_sizes)} class sizes")
    if sum(table.class_sizes) != table.group_order:
        raise ValidationFailed("class sizes", f"sum {sum(table.class_sizes)} != order {table.group_order}")
    if any(table.group_order % s for s in table.class_sizes):
        raise ValidationFailed("class sizes", "a class size does not divide the group order")
    if table.class_sizes[0] != 1 or table.element_orders[0] != 1:
        raise ValidationFailed("trivial class", "column 0 must be the identity class")

    degrees = table.values[:, 0]
    if np.abs(degrees.imag).max() > tol or (degrees.real < 1 - tol).any():
        raise ValidationFailed("degrees", "degrees must be positive reals")
    if np.abs(degrees.real - np.round(degrees.real)).max() > tol:
        raise ValidationFailed("degrees", "degrees are not integers")
    square_sum = float((degrees.real**2).sum())
    if abs(square_sum - table.group_order) > tol * table.group_order:
        raise ValidationFailed("degree sum", f"sum of squared degrees {square_sum} != {table.group_order}")

    row_res, col_res = orthogonality_residuals(table)
    if row_res > tol:
        raise ValidationFailed("row orthogonality", f"residual {row_res:.3g}")
    if col_res > tol:
        raise ValidationFailed("column orthogonality", f"residual {col_res:.3g}")

    for p, pm in table.power_maps.items():
        if len(pm) != k or any(not 0 <= c < k for c in pm):
            raise ValidationFailed("power maps", f"map for {p} is malformed")
        if pm[0] != 0:
            raise ValidationFailed("power maps", f"map for {p} moves the trivial class")
        for l, target in enumerate(pm):
            o = table.element_orders[l]
            if table.element_orders[target] != o // math.gcd(o, p):
                raise ValidationFailed(
                    "power maps", f"{p}-th power of class {l} has order {table.element_orders[target]}"
                )
    _check_power_map_commutation(table)


def _check_power_map_commutation(table: CharacterTable) -> None:
    primes = sorted(table.power_maps)
    for i, p in enumerate(primes):
        for q in primes[i + 1:]:
            a, b = table.power_maps[p], table.power_maps[q]
            if any(a[b[l]] != b[a[l]] for l in range(table.k)):
                raise ValidationFailed("power maps", f"maps for {p} and {q} do not commute")


def class_of_power(table: CharacterTable, l: int, n: int) -> int:
    """Class of ``x^n`` for ``x`` in class ``l``, by composing prime power maps."""
    if n < 1:
        raise ValueError("n must be positive")
    n %= int(table.element_orders[l])
    if n == 0:
        return 0
    for p, a in sorted(prime_factorization(n).items()):
        pm = table.power_maps.get(p)
        if pm is None:
            raise MissingPowerMap(p)
        for _ in range(a):
            l = pm[l]
    return l


def is_nonabelian_simple(table: CharacterTable) -> bool:
    """True iff every non-trivial irreducible is faithful and the group is non-abelian."""
    if table.k == table.group_order:
        return False
    deg = table.degrees
    for r in range(table.k):
        kernel = np.flatnonzero(np.abs(table.values[r] - deg[r]) <= table.tolerance * max(1.0, deg[r]))
        if kernel.size == table.k:
            continue
        if kernel.size > 1:
            return False
    return True


def tables_match(a: CharacterTable, b: CharacterTable, tol: float | None = None) -> tuple[bool, str]:
    """Compare two tables column by column, allowing any row permutation."""
    tol = tol if tol is not None else max(a.tolerance, b.tolerance)
    if a.k != b.k or a.group_order != b.group_order:
        return False, f"shape mismatch: {a.k} vs {b.k} classes"
    if tuple(a.class_sizes) != tuple(b.class_sizes):
        return False, "class sizes differ"
    unused = list(range(b.k))
    for r in range(a.k):
        diffs = [np.abs(a.values[r] - b.values[s]).max() for s in unused]
        best = int(np.argmin(diffs))
        if diffs[best] > tol:
            return False, f"row {r} has no match (closest residual {diffs[best]:.3g})"
        unused.pop(best)
    return True, "tables agree up to row order"


# --- JSON ------------------------------------------------------------------


def table_to_dict(table: CharacterTable) -> dict:
    data = {"name": table.name}
    if table.header:
        data["header"] = table.header
    data.update(
        order=int(table.group_order),
        class_sizes=[int(s) for s in table.class_sizes],
        element_orders=[int(o) for o in table.element_orders],
        power_maps={str(p): [int(c) for c in table.power_maps[p]] for p in sorted(table.power_maps)},
        irreducibles=[[[float(v.real), float(v.imag)] for v in row] for row in table.values],
    )
    return data


def dumps_table(table: CharacterTable) -> str:
    data = table_to_dict(table)
    lines = ["{"]
    items = list(data.items())
    for idx, (key, value) in enumerate(items):
        comma = "," if idx < len(items) - 1 else ""
        if key == "irreducibles":
            rows = [json.dumps(row, separators=(",", ":")) for row in value]
            lines.append(f'  "{key}": [')
            lines.extend(f"    {row}{',' if i < len(rows) - 1 else ''}" for i, row in enumerate(rows))
            lines.append(f"  ]{comma}")
        elif key == "power_maps":
            lines.append(f'  "{key}": {{')
            maps = list(value.items())
            for i, (p, pm) in enumerate(maps):
                sep = "," if i < len(maps) - 1 else ""
                lines.append(f'    "{p}": {json.dumps(pm, separators=(",", ":"))}{sep}')
            lines.append(f"  }}{comma}")
        else:
            lines.append(f'  "{key}": {json.dumps(value, separators=(",", ":"))}{comma}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def table_from_dict(data: dict, tolerance: float = IMPORTED_TOLERANCE, validate: bool = True) -> CharacterTable:
    try:
        values = np.array(
            [[complex(float(re), float(im)) for re, im in row] for row in data["irreducibles"]],
            dtype=complex,
        )
        table = CharacterTable(
            name=str(data.get("name", "")),
            values=values,
            class_sizes=tuple(int(s) for s in data["class_sizes"]),
            element_orders=tuple(int(o) for o in data["element_orders"]),
            power_maps={int(p): tuple(int(c) for c in pm) for p, pm in data.get("power_maps", {}).items()},
            group_order=int(data["order"]),
            tolerance=tolerance,
            header=str(data.get("header", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed character table: {exc!r}") from exc
    if values.ndim != 2:
        raise ParseError("irreducibles must be a square matrix of [re, im] pairs")
    if validate:
        validate_table(table)
    return table


def import_table(path: str | Path, tolerance: float = IMPORTED_TOLERANCE) -> CharacterTable:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read table {path}: {exc}") from exc
    return table_from_dict(data, tolerance=tolerance)


def export_table(table: CharacterTable, path: str | Path) -> None:
    Path(path).write_text(dumps_table(table))


def with_tolerance(table: CharacterTable, tolerance: float) -> CharacterTable:
    return replace(table, tolerance=tolerance)
