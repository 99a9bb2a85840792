"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import time

import numpy as np
import pytest

from classpower.catalogue import select_class
from classpower.chartable import (
    DEFAULT_SEED,
    central_character_residual,
    compute_character_table,
    dumps_table,
    orthogonality_residuals,
)
from classpower.classalg import Shape, class_power, structure_constants
from classpower.criteria import (
    alpha_multiplicities,
    class_closure,
    idempotent_class_violations,
    lemma_le1_violations,
    mass_conservation_violations,
    nonreal_inverse_pair_violations,
    power_shape,
    remark_commutator_set_violations,
    scan_group,
    scan_table,
    theoremB_converse_witness,
)

from conftest import analysed, group_names


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return emit


def _cls(name, **selector):
    G, dec, T = analysed(name)
    return G, dec, select_class(G, dec, selector)


def test_1_worked_examples(report):
    t0 = time.perf_counter()
    failures = []

    def check(label, cond):
        if not cond:
            failures.append(label)

    # (i)
    G, dec, b = _cls("Z3:Z4", word="b")
    s = power_shape(dec, b, 3)
    check("i", dec.sizes[b] == 3 and s.tag is Shape.SINGLE_CLASS and s.companion != b)
    # (ii)
    G, dec, x = _cls("A4", order=3, size=4)
    s = power_shape(dec, x, 3)
    d = s.companion
    check("ii", s.tag is Shape.TRIVIAL_PLUS_CLASS and dec.sizes[d] == 3 and dec.element_order_of_class[d] == 2)
    # (iii)
    G, dec, x = _cls("(Z7:Z9):Z2", word="ab^3")
    s = power_shape(dec, x, 3)
    d = s.companion
    closure = class_closure(dec, x)
    check("iii", dec.element_order_of_class[x] == 21 and dec.sizes[x] == 6
          and s.tag is Shape.TRIVIAL_PLUS_CLASS and dec.sizes[d] == 6
          and dec.element_order_of_class[d] == 7 and closure.order == 21 and closure.is_abelian)
    # (iv)
    G, dec, x = _cls("SL(2,3)", order=6, size=4)
    w = theoremB_converse_witness(dec, x, range(2, 13))
    check("iv", w.kk_inverse_is_trivial_plus_class and dec.sizes[w.companion] == 6 and w.converse_fails)
    # (v)
    G, dec, a = _cls("M16", word="a")
    s = power_shape(dec, a, 2)
    check("v", dec.sizes[a] == 2 and s.tag is Shape.CLASS_PLUS_INVERSE and dec.sizes[s.companion] == 1)
    # (vi)
    G, dec, x = _cls("Z2x(Z7:Z3)", order=14)
    s = power_shape(dec, x, 2)
    check("vi", s.tag is Shape.CLASS_PLUS_INVERSE and dec.sizes[x] == 3 and dec.sizes[s.companion] == 3)
    # (vii)
    G, dec, x = _cls("AGammaL(1,8)", order=7)
    s = power_shape(dec, x, 2)
    check("vii", dec.sizes[x] == 24 and s.tag is Shape.SELF_PLUS_INVERSE and class_closure(dec, x).order == 56)

    dt = time.perf_counter() - t0
    report(1, not failures and dt < 10, f"7 worked examples, failing {failures or 'none'}, {dt:.2f}s")


def test_2_oracle_sweep(report):
    t0 = time.perf_counter()
    pairs = disagreements = 0
    for name in group_names():
        G, dec, T = analysed(name)
        top = 8 if G.order <= 60 else 6
        reports = scan_group(G, T, range(2, top + 1), dec)
        pairs += len(reports)
        disagreements += sum(not r.agreement for r in reports)
    dt = time.perf_counter() - t0
    report(2, disagreements == 0 and dt < 300, f"{pairs} (class, n) pairs, {disagreements} disagreements, {dt:.1f}s")


def test_3_alpha_reconstruction(report):
    t0 = time.perf_counter()
    checked = mismatches = 0
    worst = 0.0
    for name in group_names():
        G, dec, T = analysed(name)
        sc = structure_constants(dec)
        for i in range(dec.k):
            for j in range(dec.k):
                for l in range(dec.k):
                    a = alpha_multiplicities(T, [i, j], l)
                    worst = max(worst, a.residual)
                    mismatches += a.value != int(sc.c[i, j, l])
                    checked += 1
        for c in range(dec.k):
            for n in range(2, 5):
                ms = class_power(dec, c, n)
                for l in range(dec.k):
                    a = alpha_multiplicities(T, [c] * n, l)
                    worst = max(worst, a.residual)
                    mismatches += a.value != ms[l]
                    checked += 1
    dt = time.perf_counter() - t0
    report(3, mismatches == 0 and worst < 1e-6 and dt < 120,
           f"{checked} coefficients, {mismatches} mismatches, max residual {worst:.2e}, {dt:.1f}s")


REQUIRED = {
    Shape.SINGLE_CLASS: {"theoremA_solvable", "C1_constant_power_size", "C1_power_order_plus_one", "C1_coprime_powers_single"},
    Shape.TRIVIAL_PLUS_CLASS: {"theoremB_KKinv", "theoremB_solvable", "theoremB_character_identity"},
    Shape.CLASS_PLUS_INVERSE: {"theoremC_size_dichotomy", "remark_K_nonreal"},
    Shape.SELF_PLUS_INVERSE: {"theoremC_size_dichotomy", "remark_K_nonreal"},
}


def test_4_theorem_conclusions(report):
    hits = checked = violations = missing = 0
    s_branch = 0
    for name in group_names():
        G, dec, T = analysed(name)
        top = 8 if G.order <= 60 else 6
        for r in scan_group(G, T, range(2, top + 1), dec):
            if not r.is_hit:
                continue
            hits += 1
            names = {c.name for c in r.conclusions}
            need = set(REQUIRED[r.oracle_shape.tag])
            tag = r.oracle_shape.tag
            if tag is Shape.SINGLE_CLASS:
                d = dec.power_class(r.class_id, r.n)
                if d == r.class_id:
                    need.add("C2_periodicity")
                if dec.inverse_class[d] == d:
                    need.add("NOCFSGR_solvable")
            if tag is Shape.SELF_PLUS_INVERSE and r.n == 2:
                need |= {"theoremD_solvable", "theoremD_alpha_symmetry"}
                s_branch += "theoremD_KS_equals_K" in names
            missing += len(need - names)
            checked += len(r.conclusions)
            violations += len(r.violations)
    report(4, violations == 0 and missing == 0 and hits > 0,
           f"{hits} hits, {checked} conclusions, {violations} violations, {missing} missing, "
           f"{s_branch} S-branch identity checks")


def test_5_simple_group_controls(report, m11):
    t0 = time.perf_counter()
    G, dec, T = analysed("A5")
    a5 = scan_group(G, T, range(2, 7), dec)
    a5_hits = sum(r.is_hit for r in a5) + sum(v.holds for r in a5 for v in r.char_verdicts.values())
    m = scan_table(m11, range(2, 7))
    m_hits = sum(v.holds for r in m for v in r.char_verdicts.values())
    no_witness = sum(
        r.char_verdicts[e].witness_row is None or r.char_verdicts[e].holds for r in m for e in ("eq1", "eq3")
    )
    dt = time.perf_counter() - t0
    ok = a5_hits == 0 and m_hits == 0 and no_witness == 0 and len(m) == 45 and dt < 30
    report(5, ok, f"A5 {len(a5)} pairs / {a5_hits} hits, M11 {len(m)} pairs / {m_hits} hits, "
                  f"{no_witness} identity checks without a witness character, {dt:.1f}s")


def test_6_table_engine(report):
    worst_orth = worst_central = 0.0
    bad = []
    for name in group_names():
        G, dec, T = analysed(name)
        row, col = orthogonality_residuals(T)
        worst_orth = max(worst_orth, row, col)
        worst_central = max(worst_central, central_character_residual(T, structure_constants(dec)))
        if not np.all(T.degrees == np.round(T.degrees)) or int((T.degrees ** 2).sum()) != G.order:
            bad.append(name)
        again = compute_character_table(G, dec, seed=DEFAULT_SEED)
        if dumps_table(again) != dumps_table(T):
            bad.append(f"{name} (nondeterministic)")
    ok = worst_orth < 1e-8 and worst_central < 1e-8 and not bad
    report(6, ok, f"{len(group_names())} tables, orthogonality {worst_orth:.1e}, "
                  f"central characters {worst_central:.1e}, failing {bad or 'none'}")


def test_7_property_suite(report):
    counts = {"mass": 0, "le1": 0, "idempotent": 0, "nonreal": 0, "commutator_set": 0, "products": 0}
    for name in group_names():
        G, dec, T = analysed(name)
        counts["products"] += dec.k * dec.k
        counts["mass"] += len(mass_conservation_violations(dec))
        counts["le1"] += len(lemma_le1_violations(dec))
        counts["idempotent"] += len(idempotent_class_violations(dec))
        counts["nonreal"] += len(nonreal_inverse_pair_violations(dec))
        counts["commutator_set"] += len(remark_commutator_set_violations(dec))
    total = sum(v for k, v in counts.items() if k != "products")
    report(7, total == 0, f"{counts['products']} class products, violations {total} "
                          + str({k: v for k, v in counts.items() if k != 'products'}))
