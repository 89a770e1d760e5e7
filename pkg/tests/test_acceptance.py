"""Acceptance criteria: every stated identity at its stated bound, exactly.

Each test prints one PASS line on success (FAIL is reported by pytest);
all equalities are exact rational identities, tolerance zero.
"""

import time
from fractions import Fraction

from fatrec.correlators import CorrelatorCache, correlator, free_energy, partition_function
from fatrec.cutjoin import exp_M_vacuum
from fatrec.exact import CouplingMonomial, TPoly
from fatrec.graphsum import contract_K1, enumerate_graphs, relabel
from fatrec.npoint import qsc_residual, w_from_correlators
from fatrec.ribbon import dot_graph
from fatrec.suites import (abstract_recursion_suite, commutator_suite,
                           heisenberg_suite, npoint_suite, oracle_suite)
from fatrec.virasoro import spectral_curve_check, verify_virasoro, y_squared_negative_part

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430]


def announce(number, label, t0, limit=None):
    elapsed = time.monotonic() - t0
    line = f"ACCEPTANCE {number:2d} PASS  {label}  ({elapsed:.2f}s)"
    print(line)
    if limit is not None:
        assert elapsed < limit, f"criterion {number} exceeded {limit}s"


def test_criterion_01_catalan_one_point_table():
    t0 = time.monotonic()
    cache = CorrelatorCache()
    for m in range(1, 9):
        expected = TPoly.t_power(m + 1, Fraction(CATALAN[m], 2 * m))
        assert correlator(0, (2 * m,), cache) == expected, m
    assert correlator(0, (4,), cache) == TPoly.t_power(3, Fraction(1, 2))
    assert correlator(0, (6,), cache) == TPoly.t_power(4, Fraction(5, 6))
    assert correlator(0, (8,), cache) == TPoly.t_power(5, Fraction(7, 4))
    assert correlator(0, (10,), cache) == TPoly.t_power(6, Fraction(21, 5))
    announce(1, "one-point Catalan table m<=8", t0, limit=1.0)


def test_criterion_02_two_point_closed_forms():
    t0 = time.monotonic()
    cache = CorrelatorCache()
    for m in range(1, 7):
        c_m, c_m1 = CATALAN[m], CATALAN[m - 1]
        assert correlator(0, (1, 2 * m + 1), cache) == TPoly.t_power(m + 1, c_m)
        assert correlator(0, (2, 2 * m), cache) == TPoly.t_power(m + 1, Fraction(c_m, 2))
        expected = Fraction(c_m, 3) + Fraction(2 * c_m1, 3)
        assert correlator(0, (3, 2 * m - 1), cache) == TPoly.t_power(m + 1, expected)
    announce(2, "two-point closed forms m<=6", t0, limit=1.0)


def test_criterion_03_oracle_equivalence():
    t0 = time.monotonic()
    report = oracle_suite(max_size=12, max_parts=4, cache=CorrelatorCache())
    assert report.passed, report.violations[:3]
    assert report.params["checked"] >= 150
    announce(3, f"recursion == oracle, |mu|<=12 n<=4 ({report.params['checked']} cells)",
             t0, limit=60.0)


def test_criterion_04_free_energy_fixtures():
    t0 = time.monotonic()
    f0 = free_energy(0, 8)
    f1 = free_energy(1, 6)

    def c0(couplings, t):
        return f0.coeff(CouplingMonomial(couplings, t, 0))

    def c1(couplings, t):
        return f1.coeff(CouplingMonomial(couplings, t, 0))

    # F_0: t(g1^2/2 + g1^2 g2/2 + g1^2 g2^2/2 + g1^3 g3/3)
    assert c0((1, 1), 1) == Fraction(1, 2)
    assert c0((1, 1, 2), 1) == Fraction(1, 2)
    assert c0((1, 1, 2, 2), 1) == Fraction(1, 2)
    assert c0((1, 1, 1, 3), 1) == Fraction(1, 3)
    # + t^2(g2/2 + g2^2/4 + g1 g3 + g2^3/6)
    assert c0((2,), 2) == Fraction(1, 2)
    assert c0((2, 2), 2) == Fraction(1, 4)
    assert c0((1, 3), 2) == 1
    assert c0((2, 2, 2), 2) == Fraction(1, 6)
    # + t^3(g4/2 + 2 g3^2/3) + t^4(5 g6/6) + t^5(7 g8/4)
    assert c0((4,), 3) == Fraction(1, 2)
    assert c0((3, 3), 3) == Fraction(2, 3)
    assert c0((6,), 4) == Fraction(5, 6)
    assert c0((8,), 5) == Fraction(7, 4)
    # F_1: t(g4/4 + g1 g5 + g2 g4/2) + t^2(5 g6/3)
    assert c1((4,), 1) == Fraction(1, 4)
    assert c1((1, 5), 1) == 1
    assert c1((2, 4), 1) == Fraction(1, 2)
    assert c1((6,), 2) == Fraction(5, 3)
    announce(4, "free-energy printed terms, genus 0 and 1", t0)


def test_criterion_05_abstract_recursion():
    t0 = time.monotonic()
    report = abstract_recursion_suite(max_size=8, max_parts=3)
    assert report.passed, report.violations[:2]

    # the worked five-term identity for K1 F_0^(4,1,1), as explicit graph sums
    lhs = contract_K1(enumerate_graphs(0, (4, 1, 1)))
    from fatrec.graphsum import GraphSum
    tail = enumerate_graphs(0, (2, 1, 1))
    edge = enumerate_graphs(0, (1, 1))
    rhs = (enumerate_graphs(0, (3, 1)).scale(6)
           + (GraphSum.single(dot_graph(2)) * relabel(tail, {1, 3, 4})).scale(2)
           + (GraphSum.single(dot_graph(1)) * relabel(tail, {2, 3, 4})).scale(2)
           + relabel(edge, {1, 3}) * relabel(edge, {2, 4})
           + relabel(edge, {1, 4}) * relabel(edge, {2, 3}))
    assert lhs == rhs
    announce(5, f"abstract recursion |mu|<=8 n<=3 ({report.params['checked']} cells)"
                " + worked (4,1,1) identity", t0, limit=30.0)


def test_criterion_06_virasoro_constraints():
    t0 = time.monotonic()
    report = verify_virasoro(4, 6, CorrelatorCache())
    assert report.passed, report.violations[:3]
    announce(6, "L_m Z = 0 for -1<=m<=4 at D=6 (reliable band)", t0, limit=30.0)


def test_criterion_07_commutation_relations():
    t0 = time.monotonic()
    com = commutator_suite(m_max=4, weight_bound=8, max_subscript=6)
    assert com.passed, com.violations[:3]
    heis = heisenberg_suite(index_bound=6)
    assert heis.passed, heis.violations[:3]
    announce(7, f"commutators ({com.params['checked']} cases) and Heisenberg "
                f"({heis.params['checked']} cases)", t0)


def test_criterion_08_cut_and_join():
    t0 = time.monotonic()
    assert exp_M_vacuum(4) == partition_function(4, CorrelatorCache()).set_gs_one()
    announce(8, "exp(M)(1) == Z|_{gs=1} at weight 4, monomial by monomial", t0)


def test_criterion_09_npoint_fixtures():
    t0 = time.monotonic()
    w02 = w_from_correlators(0, 2, 6)
    table = {(-2, -2): (1, 1), (-2, -4): (2, 3), (-4, -2): (2, 3),
             (-3, -3): (2, 2), (-2, -6): (3, 10), (-6, -2): (3, 10),
             (-3, -5): (3, 8), (-5, -3): (3, 8), (-4, -4): (3, 12)}
    for exps, (tp, c) in table.items():
        assert w02.coeff(exps) == TPoly.t_power(tp, c), exps
    report = npoint_suite(max_mu_weight=10, cache=CorrelatorCache())
    assert report.passed, report.violations[:1]
    announce(9, "W_{0,2} reference table + recursion==direct on five cells, K<=10",
             t0, limit=60.0)


def test_criterion_10_quantum_spectral_curve():
    t0 = time.monotonic()
    report = qsc_residual(3, 10, CorrelatorCache())
    assert report.passed, report.violations[:3]
    unshifted = [v for v in report.violations if v["form"] == "unshifted"]
    assert not unshifted
    assert any("1/2" in note and "hbar" in note for note in report.notes), \
        "report must document the shifted-equation discrepancy"
    announce(10, "Schroedinger-type identities m<=3 K=10; -hbar/2 correction noted",
             t0)


def test_criterion_11_spectral_geometry():
    t0 = time.monotonic()
    assert spectral_curve_check(12, CorrelatorCache()).passed
    assert y_squared_negative_part(4, 6, CorrelatorCache()).passed
    announce(11, "2y^2 = z^2 - 4t to order 12; (y^2)_- = 0 at D=4, K=6", t0)


def test_criterion_12_out_of_scope_surfaces_absent():
    t0 = time.monotonic()
    # finite-N matrix integrals, KP tau-function machinery and Eynard-Orantin
    # residues are intentionally not computed; the identities they would
    # certify are covered by the oracle and operator suites above.
    import fatrec
    for name in ("matrix_integral", "kp_tau", "eynard_orantin", "eo_invariants"):
        assert not hasattr(fatrec, name)
    announce(12, "out-of-scope surfaces absent; covered by suites 3/6/7/10/11",
             t0)
