"""Production correlators, free energies, partition function, cache."""

import math
from fractions import Fraction

import pytest

from fatrec.correlators import (CacheError, CorrelatorCache, correlator,
                                free_energy, full_free_energy,
                                partition_function)
from fatrec.exact import CouplingMonomial, TPoly
from fatrec.graphsum import oracle_correlator


def catalan(m):
    return math.comb(2 * m, m) // (m + 1)


def tp(e, c):
    return TPoly.t_power(e, Fraction(c))


def test_one_point_values():
    assert correlator(0, (4,)) == tp(3, Fraction(1, 2))
    assert correlator(0, (6,)) == tp(4, Fraction(5, 6))
    assert correlator(0, (8,)) == tp(5, Fraction(7, 4))
    assert correlator(0, (10,)) == tp(6, Fraction(21, 5))


def test_one_point_catalan_closed_form():
    for m in range(1, 9):
        assert correlator(0, (2 * m,)) == tp(m + 1, Fraction(catalan(m), 2 * m))


def test_two_point_closed_forms():
    for m in range(0, 7):
        assert correlator(0, (1, 2 * m + 1)) == tp(m + 1, catalan(m))
    for m in range(1, 7):
        assert correlator(0, (2, 2 * m)) == tp(m + 1, Fraction(catalan(m), 2))
    for m in range(1, 7):
        expected = Fraction(catalan(m), 3) + Fraction(2 * catalan(m - 1), 3)
        assert correlator(0, (3, 2 * m - 1)) == tp(m + 1, expected)


def test_low_genus_known_values():
    assert correlator(1, (6,)) == tp(2, Fraction(5, 3))
    assert correlator(1, (4,)) == tp(1, Fraction(1, 4))
    assert correlator(0, (1, 1)) == tp(1, 1)
    assert correlator(0, (2, 6)) == tp(4, Fraction(5, 2))


def test_initial_and_degenerate_values():
    assert correlator(0, (0,)) == tp(1, 1)
    assert correlator(1, (0,)).is_zero()
    assert correlator(-1, (4,)).is_zero()
    assert correlator(0, (3,)).is_zero()


def test_zero_valence_in_vector_rejected():
    with pytest.raises(ValueError):
        correlator(0, (2, 0))


def test_permutation_invariance():
    assert correlator(0, (2, 4, 6)) == correlator(0, (6, 2, 4))
    assert correlator(1, (1, 3, 2)) == correlator(1, (3, 2, 1))


def test_monomiality():
    for mu in [(4,), (2, 2), (1, 3), (2, 4, 6), (1, 1, 1, 3)]:
        for g in range(0, 3):
            value = correlator(g, mu)
            if value.is_zero():
                continue
            single = value.single_term()
            assert single is not None
            assert single[0] == 2 - 2 * g - len(mu) + sum(mu) // 2


def test_matches_oracle_medium():
    for mu in [(6,), (8,), (2, 4), (3, 3), (1, 1, 4), (2, 2, 2), (1, 2, 3)]:
        for g in range(0, 3):
            assert correlator(g, mu) == oracle_correlator(g, mu), (g, mu)


def c_of(series, couplings, t, gs=0):
    return series.coeff(CouplingMonomial(couplings, t, gs))


def test_free_energy_genus0_tabulated_terms():
    f0 = free_energy(0, 6)
    assert c_of(f0, (1, 1), 1) == Fraction(1, 2)
    assert c_of(f0, (1, 1, 2), 1) == Fraction(1, 2)
    assert c_of(f0, (1, 1, 2, 2), 1) == Fraction(1, 2)
    assert c_of(f0, (1, 1, 1, 3), 1) == Fraction(1, 3)
    assert c_of(f0, (2,), 2) == Fraction(1, 2)
    assert c_of(f0, (2, 2), 2) == Fraction(1, 4)
    assert c_of(f0, (1, 3), 2) == 1
    assert c_of(f0, (2, 2, 2), 2) == Fraction(1, 6)
    assert c_of(f0, (4,), 3) == Fraction(1, 2)
    assert c_of(f0, (3, 3), 3) == Fraction(2, 3)
    assert c_of(f0, (6,), 4) == Fraction(5, 6)


def test_free_energy_genus1_tabulated_terms():
    f1 = free_energy(1, 6)
    assert c_of(f1, (4,), 1) == Fraction(1, 4)
    assert c_of(f1, (1, 5), 1) == 1
    assert c_of(f1, (2, 4), 1) == Fraction(1, 2)
    assert c_of(f1, (6,), 2) == Fraction(5, 3)


def test_free_energy_genus2_weight2_vanishes():
    assert free_energy(2, 2).is_zero()


def test_partition_function_examples():
    from fatrec.exact import CouplingSeries
    assert partition_function(0) == CouplingSeries.one(0)
    z2 = partition_function(2)
    assert c_of(z2, (1, 1), 1, -2) == Fraction(1, 2)
    z4 = partition_function(4)
    assert c_of(z4, (1, 1, 1, 1), 2, -4) == Fraction(1, 8)


def test_full_free_energy_gs_powers():
    f = full_free_energy(6)
    assert c_of(f, (4,), 3, -2) == Fraction(1, 2)   # genus 0
    assert c_of(f, (4,), 1, 0) == Fraction(1, 4)    # genus 1


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "cache.json"
    cache = CorrelatorCache(str(path))
    correlator(0, (4,), cache)
    correlator(1, (4,), cache)
    cache.save()
    text = path.read_text()
    assert '"version":1' in text
    fresh = CorrelatorCache(str(path))
    fresh.load()
    assert fresh.table == cache.table
    assert fresh.serialize() == cache.serialize()


def test_cache_empty_serialization(tmp_path):
    cache = CorrelatorCache(str(tmp_path / "c.json"))
    assert '"entries":[]' in cache.serialize()


def test_cache_single_entry_format(tmp_path):
    cache = CorrelatorCache(str(tmp_path / "c.json"))
    correlator(0, (4,), cache)
    cache.table = {k: v for k, v in cache.table.items() if k == (0, (4,))}
    assert cache.serialize() == (
        '{"entries":[{"coeff":"1/2","g":0,"mu":[4],"t_power":3}],"version":1}')


def test_cache_version_mismatch(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"version": 99, "entries": []}')
    cache = CorrelatorCache(str(path))
    with pytest.raises(CacheError, match="version"):
        cache.load()


def test_cache_corrupt_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    with pytest.raises(CacheError):
        CorrelatorCache(str(path)).load()


def test_cache_paranoid_detects_poison(tmp_path):
    cache = CorrelatorCache(None, paranoid=True)
    correlator(0, (4,), cache)
    assert correlator(0, (4,), cache) == tp(3, Fraction(1, 2))
    cache.table[(0, (4,))] = tp(3, Fraction(9, 7))
    with pytest.raises(AssertionError, match="cache mismatch"):
        correlator(0, (4,), cache)


def test_cache_lock_collision(tmp_path):
    path = tmp_path / "c.json"
    cache = CorrelatorCache(str(path))
    (tmp_path / "c.json.lock").write_text("")
    with pytest.raises(CacheError, match="locked"):
        cache.save()
