"""Named verification suites shared by the CLI and the acceptance tests.

Each suite returns a SuiteReport whose ``violations`` list is empty exactly
when the checked identity holds at the requested bounds.
"""

from __future__ import annotations

import random

from .correlators import CorrelatorCache, correlator, partition_function
from .cutjoin import exp_M_vacuum
from .exact import CouplingMonomial, TPoly
from .graphsum import oracle_correlators_all_genus, verify_abstract_recursion
from .npoint import qsc_residual, w_from_correlators, NPointRecursion
from .virasoro import (SuiteReport, commutator_check, heisenberg_check,
                       spectral_curve_check, verify_virasoro,
                       y_squared_negative_part)


def _partitions_of(total: int, max_parts: int):
    def rec(remaining, maximum, prefix):
        if remaining == 0:
            yield prefix
            return
        if len(prefix) == max_parts:
            return
        for part in range(min(remaining, maximum), 0, -1):
            yield from rec(remaining - part, part, prefix + (part,))

    yield from rec(total, total, ())


def _compositions_of(total: int, max_parts: int):
    def rec(remaining, prefix):
        if remaining == 0:
            if prefix:
                yield prefix
            return
        if len(prefix) == max_parts:
            return
        for part in range(1, remaining + 1):
            yield from rec(remaining - part, prefix + (part,))

    yield from rec(total, ())


def max_feasible_genus(mu) -> int:
    """Largest genus allowed by the selection rule t-power >= 1."""
    return max(-1, (2 - len(mu) + sum(mu) // 2 - 1) // 2)


def abstract_recursion_suite(max_size: int = 8, max_parts: int = 3) -> SuiteReport:
    """verify_abstract_recursion over every (g, mu), |mu| <= max_size."""
    violations = []
    checked = 0
    for total in range(2, max_size + 1, 2):
        for mu in _compositions_of(total, max_parts):
            for g in range(0, max_feasible_genus(mu) + 1):
                checked += 1
                report = verify_abstract_recursion(g, mu)
                if not report.equal:
                    violations.append(report.to_dict())
    status = "pass" if not violations else "fail"
    return SuiteReport("abstract-rec", {"max_size": max_size,
                                        "max_parts": max_parts,
                                        "checked": checked}, status, violations)


def oracle_suite(max_size: int = 12, max_parts: int = 4,
                 cache: CorrelatorCache | None = None) -> SuiteReport:
    """Production recursion against the brute-force oracle, exact equality."""
    violations = []
    checked = 0
    for total in range(2, max_size + 1, 2):
        for mu in _partitions_of(total, max_parts):
            by_genus = oracle_correlators_all_genus(mu)
            for g in range(0, max_feasible_genus(mu) + 1):
                checked += 1
                lhs = correlator(g, mu, cache)
                rhs = by_genus.get(g, TPoly.zero())
                if lhs != rhs:
                    violations.append({"g": g, "mu": list(mu),
                                       "recursion": str(lhs), "oracle": str(rhs)})
    status = "pass" if not violations else "fail"
    return SuiteReport("oracle", {"max_size": max_size, "max_parts": max_parts,
                                  "checked": checked}, status, violations)


def commutator_suite(m_max: int = 4, weight_bound: int = 8,
                     max_subscript: int = 6) -> SuiteReport:
    """Exhaustive [L_m, L_n] = (m-n) L_{m+n} sweep over probe monomials."""
    probes = [CouplingMonomial(())]
    for total in range(1, weight_bound + 1):
        for mu in _partitions_of(total, weight_bound):
            if max(mu) <= max_subscript:
                probes.append(CouplingMonomial(mu))
    violations = []
    checked = 0
    for m in range(-1, m_max + 1):
        for n in range(-1, m_max + 1):
            if m + n < -1:
                continue
            for probe in probes:
                checked += 1
                if not commutator_check(m, n, probe):
                    violations.append({"m": m, "n": n, "probe": str(probe)})
    status = "pass" if not violations else "fail"
    return SuiteReport("commutators", {"m_max": m_max,
                                       "weight_bound": weight_bound,
                                       "max_subscript": max_subscript,
                                       "checked": checked}, status, violations)


def heisenberg_suite(index_bound: int = 6, panel_size: int = 12,
                     seed: int = 20240901) -> SuiteReport:
    """[b_m, b_n] = m delta on a reproducible random panel of monomials."""
    rng = random.Random(seed)
    probes = [CouplingMonomial(()), CouplingMonomial((2,)), CouplingMonomial((2, 2))]
    while len(probes) < panel_size:
        n_parts = rng.randint(1, 4)
        parts = tuple(rng.randint(1, 6) for _ in range(n_parts))
        t_power = rng.randint(0, 2)
        probes.append(CouplingMonomial(parts, t_power))
    violations = []
    checked = 0
    for m in range(-index_bound, index_bound + 1):
        for n in range(-index_bound, index_bound + 1):
            if m == 0 or n == 0:
                continue
            for probe in probes:
                checked += 1
                if not heisenberg_check(m, n, probe):
                    violations.append({"m": m, "n": n, "probe": str(probe)})
    status = "pass" if not violations else "fail"
    return SuiteReport("heisenberg", {"index_bound": index_bound,
                                      "panel": len(probes),
                                      "checked": checked}, status, violations)


def cutjoin_suite(max_weight: int = 4,
                  cache: CorrelatorCache | None = None) -> SuiteReport:
    """exp(M)(1) against the recursion-built partition function at gs = 1."""
    violations = []
    for d in range(0, max_weight + 1):
        lhs = exp_M_vacuum(d)
        rhs = partition_function(d, cache).set_gs_one()
        if lhs != rhs:
            diff = lhs - rhs
            violations.append({"D": d, "difference": str(diff)})
    status = "pass" if not violations else "fail"
    return SuiteReport("cutjoin", {"max_weight": max_weight}, status, violations)


NPOINT_CELLS = ((0, 2), (0, 3), (1, 1), (1, 2), (2, 1))


def npoint_suite(max_mu_weight: int = 8,
                 cache: CorrelatorCache | None = None) -> SuiteReport:
    """w_recursion == w_from_correlators on the standard cell list."""
    violations = []
    rec = NPointRecursion(max_mu_weight, cache)
    for (g, n) in NPOINT_CELLS:
        a = rec.cell(g, n)
        b = w_from_correlators(g, n, max_mu_weight, cache)
        if a != b:
            bad = sorted(set(a.terms) | set(b.terms))
            sample = [{"exps": list(e), "recursion": str(a.coeff(e)),
                       "direct": str(b.coeff(e))}
                      for e in bad if a.coeff(e) != b.coeff(e)][:5]
            violations.append({"g": g, "n": n, "mismatches": sample})
    status = "pass" if not violations else "fail"
    return SuiteReport("npoint", {"K": max_mu_weight, "cells": list(map(list, NPOINT_CELLS))},
                       status, violations)


def run_suite(name: str, cache: CorrelatorCache | None = None, **params) -> SuiteReport:
    """Dispatch a suite by CLI name."""
    if name == "abstract-rec":
        return abstract_recursion_suite(params.get("max_weight", 8),
                                        params.get("max_parts", 3))
    if name == "oracle":
        return oracle_suite(params.get("max_weight", 8),
                            params.get("max_parts", 4), cache)
    if name == "virasoro":
        return verify_virasoro(params.get("m_max", 4),
                               params.get("max_weight", 6), cache)
    if name == "commutators":
        return commutator_suite(params.get("m_max", 4),
                                params.get("max_weight", 8),
                                params.get("max_subscript", 6))
    if name == "heisenberg":
        return heisenberg_suite(params.get("m_max", 6))
    if name == "cutjoin":
        return cutjoin_suite(params.get("max_weight", 4), cache)
    if name == "npoint":
        return npoint_suite(params.get("max_order", 8), cache)
    if name == "qsc":
        return qsc_residual(params.get("m_max", 3),
                            params.get("max_order", 8), cache)
    if name == "spectral":
        return spectral_curve_check(params.get("max_order", 8), cache)
    if name == "deformation":
        return y_squared_negative_part(params.get("max_weight", 6),
                                       params.get("max_order", 8), cache)
    raise ValueError(f"unknown suite: {name}")


SUITE_NAMES = ("abstract-rec", "oracle", "virasoro", "commutators",
               "heisenberg", "cutjoin", "npoint", "qsc", "spectral",
               "deformation")
