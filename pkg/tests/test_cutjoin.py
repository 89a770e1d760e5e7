"""Cut-and-join operator and the exponential representation of Z at gs=1."""

from fractions import Fraction

from fatrec.correlators import partition_function
from fatrec.cutjoin import apply_M, exp_M_vacuum, m_power_vacuum
from fatrec.exact import CouplingMonomial, CouplingSeries


def mono(couplings=(), t=0):
    return CouplingMonomial(couplings, t, 0)


def test_apply_M_vacuum():
    out = apply_M(CouplingSeries.one(4))
    assert out.coeff(mono((1, 1), 1)) == Fraction(1, 2)
    assert out.coeff(mono((2,), 2)) == Fraction(1, 2)
    assert len(out.terms) == 2


def test_apply_M_zero():
    assert apply_M(CouplingSeries.zero(4)).is_zero()


def test_apply_M_adds_one_edge():
    # one application adds one edge: coupling weight rises by exactly 2
    for m in [mono((1, 1), 1), mono((2,), 2), mono((4,), 1)]:
        out = apply_M(CouplingSeries.monomial(m, 1, trunc=10))
        assert out.terms
        assert all(mm.weight == m.weight + 2 for mm in out.terms)


def test_exp_M_trivial():
    assert exp_M_vacuum(0) == CouplingSeries.one(0)


def test_exp_M_weight2():
    e = exp_M_vacuum(2)
    assert e.coeff(mono()) == 1
    assert e.coeff(mono((1, 1), 1)) == Fraction(1, 2)
    assert e.coeff(mono((2,), 2)) == Fraction(1, 2)


def test_exp_M_g4_coefficient():
    # genus 0 and genus 1 pieces mix at gs=1: (1/2) t^3 + (1/4) t
    e = exp_M_vacuum(4)
    assert e.coeff(mono((4,), 3)) == Fraction(1, 2)
    assert e.coeff(mono((4,), 1)) == Fraction(1, 4)


def test_edge_strata_match_exponential():
    # the weight-2k component of exp(M)(1) is M^k(1)/k!
    e = exp_M_vacuum(6)
    for k in range(0, 4):
        stratum = e.weight_component(2 * k)
        assert stratum == m_power_vacuum(k, 6).weight_component(2 * k)


def test_cut_and_join_theorem_desk_scale():
    for d in range(0, 5):
        assert exp_M_vacuum(d) == partition_function(d).set_gs_one(), d
