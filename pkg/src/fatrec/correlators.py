"""Hermitian one-matrix-model correlators via the quadratic recursion.

The recursion determines F_g^mu from the initial value F_0^(0) = t by
induction on |mu|; every value is a single t-monomial (or zero) by the fat
selection rule.  A persistent JSON cache keyed by (g, sorted mu) makes the
superpolynomial recursion cheap across runs.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .exact import (CouplingMonomial, CouplingSeries, Rat, TPoly, rat_str,
                    series_exp)

CACHE_ENV = "FATREC_CACHE"
DEFAULT_CACHE_PATH = "./fatrec-cache.json"
CACHE_VERSION = 1


class CacheError(Exception):
    """Raised when a persistent cache cannot be loaded."""


def _sorted_key(g: int, mu: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    return g, tuple(sorted(mu, reverse=True))


class CorrelatorCache:
    """In-memory memo table with optional JSON persistence.

    File format: {"version": 1, "entries": [{"g", "mu", "t_power", "coeff"}]}
    with entries sorted by (g, mu); a zero correlator is stored with
    t_power 0 and coeff "0".
    """

    def __init__(self, path: str | None = None, paranoid: bool = False):
        self.table: dict[tuple[int, tuple[int, ...]], TPoly] = {}
        self.path = path
        self.paranoid = paranoid

    # -- persistence --------------------------------------------------------

    @staticmethod
    def resolve_path(path: str | None = None) -> str:
        if path:
            return path
        return os.environ.get(CACHE_ENV, DEFAULT_CACHE_PATH)

    def load(self) -> None:
        if not self.path or not os.path.exists(self.path):
            return
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (json.JSONDecodeError, OSError) as exc:
            raise CacheError(f"cannot read cache {self.path}: {exc}") from exc
        if not isinstance(data, dict) or data.get("version") != CACHE_VERSION:
            raise CacheError(f"cache version mismatch in {self.path}")
        for entry in data.get("entries", []):
            try:
                g = int(entry["g"])
                mu = tuple(int(x) for x in entry["mu"])
                coeff = Fraction(entry["coeff"])
                t_power = int(entry["t_power"])
            except (KeyError, ValueError, TypeError) as exc:
                raise CacheError(f"malformed cache entry: {entry!r}") from exc
            poly = TPoly({t_power: coeff}) if coeff else TPoly.zero()
            self.table[_sorted_key(g, mu)] = poly

    def serialize(self) -> str:
        entries = []
        for (g, mu) in sorted(self.table):
            poly = self.table[(g, mu)]
            single = poly.single_term()
            if single is None and not poly.is_zero():
                raise AssertionError("correlator is not a t-monomial")
            t_power, coeff = single if single else (0, Fraction(0))
            entries.append({"g": g, "mu": list(mu), "t_power": t_power,
                            "coeff": rat_str(coeff)})
        return json.dumps({"version": CACHE_VERSION, "entries": entries},
                          separators=(",", ":"), sort_keys=True)

    def save(self) -> None:
        if not self.path:
            return
        payload = self.serialize()
        lock = self.path + ".lock"
        fd = None
        try:
            fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            tmp = self.path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, self.path)
        except FileExistsError:
            raise CacheError(f"cache is locked: {lock}")
        finally:
            if fd is not None:
                os.close(fd)
                os.unlink(lock)


_session_cache = CorrelatorCache()


def correlator(g: int, mu, cache: CorrelatorCache | None = None) -> TPoly:
    """F_g^mu(t), computed by the quadratic recursion with memoization.

    mu is a vector of positive valences, or the singleton (0).  Negative
    genus gives zero; odd |mu| gives zero.
    """
    if cache is None:
        cache = _session_cache
    mu = tuple(int(m) for m in mu)
    if g < 0:
        return TPoly.zero()
    if mu == (0,):
        return TPoly.t_power(1) if g == 0 else TPoly.zero()
    if any(m <= 0 for m in mu):
        raise ValueError("valences must be positive (or the single (0))")
    if sum(mu) % 2:
        return TPoly.zero()
    key = _sorted_key(g, mu)
    hit = cache.table.get(key)
    if hit is not None:
        if cache.paranoid:
            fresh = _compute(g, key[1], cache)
            if fresh != hit:
                raise AssertionError(f"cache mismatch at {key}")
        return hit
    value = _compute(g, key[1], cache)
    cache.table[key] = value
    return value


def _compute(g: int, mu: tuple[int, ...], cache: CorrelatorCache) -> TPoly:
    """Evaluate the recursion with mu sorted descending (mu[0] maximal)."""
    n = len(mu)
    mu1 = mu[0]
    rest = mu[1:]
    acc = TPoly.zero()

    for j in range(1, n):
        m0 = mu1 + mu[j] - 2
        others = rest[:j - 1] + rest[j:]
        if m0 > 0:
            acc = acc + Fraction(m0) * correlator(g, (m0,) + others, cache)
        elif m0 == 0 and n == 2 and g == 0:
            # contracting the dumbbell leaves the plain vertex, weight t
            acc = acc + TPoly.t_power(1)

    for a in range(1, mu1 - 2):
        b = mu1 - 2 - a
        if b < 1:
            continue
        coeff = Fraction(a * b)
        acc = acc + coeff * correlator(g - 1, (a, b) + rest, cache)
        idx = list(range(n - 1))
        for size in range(len(idx) + 1):
            for subset in combinations(idx, size):
                comp = [i for i in idx if i not in subset]
                mu_i = tuple(rest[i] for i in subset)
                mu_j = tuple(rest[i] for i in comp)
                if (a + sum(mu_i)) % 2 or (b + sum(mu_j)) % 2:
                    continue
                for g1 in range(0, g + 1):
                    left = correlator(g1, (a,) + mu_i, cache)
                    if left.is_zero():
                        continue
                    right = correlator(g - g1, (b,) + mu_j, cache)
                    if right.is_zero():
                        continue
                    acc = acc + coeff * (left * right)

    if mu1 - 2 >= 1:
        acc = acc + (2 * (mu1 - 2)) * TPoly.t_power(1) * correlator(g, (mu1 - 2,) + rest, cache)

    if n == 1 and g == 0 and mu1 == 2:
        acc = acc + TPoly.t_power(2)

    return Fraction(1, mu1) * acc


def connected_correlator(g: int, mu, cache: CorrelatorCache | None = None) -> TPoly:
    """<p_mu1 ... p_mun>_g^c = prod(mu) * F_g^mu."""
    mu = tuple(int(m) for m in mu)
    value = correlator(g, mu, cache)
    factor = 1
    for m in mu:
        factor *= m
    return Fraction(factor) * value


def _partitions_up_to(total: int):
    """All partitions (sorted descending) of every size 1..total."""

    def rec(remaining: int, maximum: int, prefix: tuple[int, ...]):
        if prefix:
            yield prefix
        for part in range(min(remaining, maximum), 0, -1):
            yield from rec(remaining - part, part, prefix + (part,))

    yield from rec(total, total, ())


def free_energy(g: int, max_weight: int, cache: CorrelatorCache | None = None) -> CouplingSeries:
    """Genus-g free energy: sum over unordered mu of F_g^mu g_mu / sym.

    The 1/n! over ordered tuples collapses to 1/prod(multiplicities!) per
    multiset; truncated at total coupling weight ``max_weight``.
    """
    terms: dict[CouplingMonomial, Rat] = {}
    for mu in _partitions_up_to(max_weight):
        if sum(mu) % 2:
            continue
        value = correlator(g, mu, cache)
        if value.is_zero():
            continue
        sym = 1
        counts: dict[int, int] = {}
        for m in mu:
            counts[m] = counts.get(m, 0) + 1
        for c in counts.values():
            f = 1
            for i in range(2, c + 1):
                f *= i
            sym *= f
        for t_power, coeff in value.terms.items():
            mono = CouplingMonomial(mu, t_power, 0)
            terms[mono] = terms.get(mono, Fraction(0)) + coeff / sym
    return CouplingSeries(terms, max_weight)


def genus_range(max_weight: int) -> range:
    """Genera that can contribute at coupling weight <= max_weight.

    The selection rule t-power = 2 - 2g - n + |mu|/2 >= 1 with n >= 1 forces
    2g <= |mu|/2 <= max_weight/2.
    """
    return range(0, max_weight // 4 + 1)


def full_free_energy(max_weight: int, cache: CorrelatorCache | None = None) -> CouplingSeries:
    """Sum over genus of gs^(2g-2) * free_energy(g)."""
    total = CouplingSeries.zero(max_weight)
    for g in genus_range(max_weight):
        fg = free_energy(g, max_weight, cache)
        shifted = CouplingSeries(
            {m.shift(gs_power=2 * g - 2): c for m, c in fg.terms.items()},
            max_weight)
        total = total + shifted
    return total


def partition_function(max_weight: int, cache: CorrelatorCache | None = None) -> CouplingSeries:
    """Z = exp(sum_g gs^(2g-2) F_g), truncated at the weight bound."""
    return series_exp(full_free_energy(max_weight, cache))
