"""Exact-arithmetic calculus of fat graphs (ribbon graphs).

Enumeration of labelled fat graphs by genus and valence profile, the
edge-contraction recursion checked at the graph-sum level, Hermitian
one-matrix-model correlators via the quadratic recursion with a brute-force
oracle, fat Virasoro constraints, the cut-and-join representation of the
partition function, n-point functions with their own quadratic recursion,
and the quantum-spectral-curve identities -- all over exact rationals.
"""

from .exact import (CouplingMonomial, CouplingSeries, Rat, TPoly, rat, rat_str,
                    series_exp, series_log)
from .ribbon import FaceSet, FatGraph, dot_graph, involutions, loop_graph, theta_graph
from .graphsum import (GraphSum, contract_K1, enumerate_graphs,
                       oracle_correlator, oracle_correlators_all_genus,
                       relabel, verify_abstract_recursion)
from .correlators import (CorrelatorCache, CacheError, connected_correlator,
                          correlator, free_energy, full_free_energy,
                          partition_function)
from .virasoro import (LinearOp, apply_L, commutator_check, heisenberg_check,
                       spectral_curve_check, verify_virasoro,
                       y_squared_negative_part)
from .cutjoin import apply_M, exp_M_vacuum
from .npoint import (op_D, qsc_residual, s_function, w_from_correlators,
                     w_recursion)
from .xseries import XSeries, xseries_diag, xseries_invert

__version__ = "0.1.0"
