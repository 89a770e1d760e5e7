"""Formal graph sums, the brute-force enumerator, and the contraction operator.

This module is the structural oracle of the package: abstract correlators are
built literally (one canonical fat graph per class, weighted 1/|Aut|), the
edge-contraction operator acts graph by graph, and the quadratic recursion is
checked as an identity between finite graph sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .exact import Rat, TPoly, rat_str
from .ribbon import FatGraph, dot_graph, involutions


class GraphSum:
    """Finite linear combination of labelled fat graphs with Rat coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[FatGraph, Rat] | None = None):
        clean: dict[FatGraph, Rat] = {}
        if terms:
            for gr, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[gr] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("GraphSum is immutable")

    @staticmethod
    def zero() -> "GraphSum":
        return GraphSum()

    @staticmethod
    def single(graph: FatGraph, coeff=1) -> "GraphSum":
        return GraphSum({graph: Fraction(coeff)})

    def label_universe(self) -> set[int]:
        out: set[int] = set()
        for gr in self.terms:
            out.update(gr.labels)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphSum):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "GraphSum") -> "GraphSum":
        out = dict(self.terms)
        for gr, c in other.terms.items():
            s = out.get(gr, Fraction(0)) + c
            if s:
                out[gr] = s
            else:
                out.pop(gr, None)
        return GraphSum(out)

    def __neg__(self) -> "GraphSum":
        return GraphSum({gr: -c for gr, c in self.terms.items()})

    def __sub__(self, other: "GraphSum") -> "GraphSum":
        return self + (-other)

    def scale(self, c) -> "GraphSum":
        c = Fraction(c)
        if c == 0:
            return GraphSum()
        return GraphSum({gr: k * c for gr, k in self.terms.items()})

    def __mul__(self, other: "GraphSum") -> "GraphSum":
        """Disjoint union of graphs, bilinear; label sets must not clash."""
        out: dict[FatGraph, Rat] = {}
        for g1, c1 in self.terms.items():
            for g2, c2 in other.terms.items():
                gr = graph_union(g1, g2)
                s = out.get(gr, Fraction(0)) + c1 * c2
                if s:
                    out[gr] = s
                else:
                    out.pop(gr, None)
        return GraphSum(out)

    def weighted_t_total(self) -> TPoly:
        """Sum of coeff * t^(face count) over the graphs in this sum."""
        out = TPoly.zero()
        for gr, c in self.terms.items():
            out = out + TPoly.t_power(gr.face_count(), c)
        return out

    def sorted_terms(self) -> list[tuple[FatGraph, Rat]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].canonical())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{rat_str(c)} * [{gr.to_text()}]"
                          for gr, c in self.sorted_terms())

    def __repr__(self) -> str:
        return f"GraphSum({self})"


def _rebuild(blocks: list[tuple[int, list]], alpha_map: dict) -> FatGraph:
    """Renumber arbitrary half-edge ids into a fresh FatGraph.

    ``blocks`` is a list of (label, cyclic sequence of old ids) in the desired
    vertex order; ``alpha_map`` pairs old ids.
    """
    new_id = {}
    counter = 1
    for _, seq in blocks:
        for old in seq:
            new_id[old] = counter
            counter += 1
    mu = [len(seq) for _, seq in blocks]
    labels = [lab for lab, _ in blocks]
    alpha = {}
    for old, new in new_id.items():
        alpha[new] = new_id[alpha_map[old]]
    return FatGraph(mu, alpha, labels)


def graph_union(g1: FatGraph, g2: FatGraph) -> FatGraph:
    """Disjoint union; vertices re-sorted by label."""
    if set(g1.labels) & set(g2.labels):
        raise ValueError("label sets overlap")
    pieces = []
    for tag, gr in (("a", g1), ("b", g2)):
        for i in range(gr.n_vertices):
            pieces.append((gr.labels[i], [(tag, h) for h in gr.block(i)]))
    pieces.sort(key=lambda p: p[0])
    alpha_map = {}
    for tag, gr in (("a", g1), ("b", g2)):
        for h in range(1, gr.n_half_edges + 1):
            alpha_map[(tag, h)] = (tag, gr.alpha_of(h))
    return _rebuild(pieces, alpha_map)


def relabel_graph(gr: FatGraph, new_labels: set[int] | list[int]) -> FatGraph:
    """Replace the labels by ``new_labels``, preserving relative order."""
    new = sorted(new_labels)
    if len(new) != gr.n_vertices:
        raise ValueError("label count mismatch")
    old_sorted = sorted(gr.labels)
    mapping = {o: n for o, n in zip(old_sorted, new)}
    pieces = [(mapping[gr.labels[i]], list(gr.block(i))) for i in range(gr.n_vertices)]
    pieces.sort(key=lambda p: p[0])
    alpha_map = {h: gr.alpha_of(h) for h in range(1, gr.n_half_edges + 1)}
    return _rebuild(pieces, alpha_map)


def relabel(s: GraphSum, index_set) -> GraphSum:
    """F_{g,I}: replace labels v_1..v_n by the sorted indices of I."""
    out: dict[FatGraph, Rat] = {}
    for gr, c in s.terms.items():
        g2 = relabel_graph(gr, index_set)
        out[g2] = out.get(g2, Fraction(0)) + c
    return GraphSum(out)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _vertex_owner(mu) -> list[int]:
    owner = [0] * (sum(mu) + 1)
    pos = 1
    for i, m in enumerate(mu):
        for _ in range(m):
            owner[pos] = i
            pos += 1
    return owner


def _sigma_array(mu) -> list[int]:
    sig = [0] * (sum(mu) + 1)
    start = 1
    for m in mu:
        for k in range(m):
            sig[start + k] = start + (k + 1) % m
        start += m
    return sig


def _faces_of(alpha, sigma) -> int:
    h = len(alpha) - 1
    seen = [False] * (h + 1)
    count = 0
    for s in range(1, h + 1):
        if seen[s]:
            continue
        count += 1
        x = s
        while not seen[x]:
            seen[x] = True
            x = sigma[alpha[x]]
    return count


def _connected(alpha, owner, n) -> bool:
    if n <= 1:
        return True
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merges = 0
    for h in range(1, len(alpha)):
        a, b = find(owner[h]), find(owner[alpha[h]])
        if a != b:
            parent[a] = b
            merges += 1
            if merges == n - 1:
                return True
    return merges == n - 1


def enumerate_graphs(g: int, mu) -> GraphSum:
    """Abstract correlator: sum over connected genus-g classes of 1/|Aut|."""
    mu = tuple(int(m) for m in mu)
    if mu == (0,):
        return GraphSum.single(dot_graph(1)) if g == 0 else GraphSum.zero()
    if any(m < 1 for m in mu):
        raise ValueError("valences must be positive (or the single (0))")
    h = sum(mu)
    if h % 2 or g < 0:
        return GraphSum.zero()
    n = len(mu)
    owner = _vertex_owner(mu)
    sigma = _sigma_array(mu)
    counts: dict[FatGraph, int] = {}
    for alpha_word in involutions(h):
        alpha = [0] + list(alpha_word)
        if not _connected(alpha, owner, n):
            continue
        faces = _faces_of(alpha, sigma)
        genus2 = 2 - (n - h // 2 + faces)
        if genus2 != 2 * g:
            continue
        gr = FatGraph(mu, alpha_word)
        counts[gr] = counts.get(gr, 0) + 1
    rotations = 1
    for m in mu:
        rotations *= m
    return GraphSum({gr: Fraction(c, rotations) for gr, c in counts.items()})


def oracle_correlators_all_genus(mu) -> dict[int, TPoly]:
    """Brute-force correlators for every genus at once, keyed by genus.

    Sums t^faces over all connected pairings divided by prod(mu); equals
    sum over classes of t^faces / |Aut| by orbit-stabilizer.
    """
    mu = tuple(int(m) for m in mu)
    if mu == (0,):
        return {0: TPoly.t_power(1)}
    if any(m < 1 for m in mu):
        raise ValueError("valences must be positive (or the single (0))")
    h = sum(mu)
    if h % 2:
        return {}
    n = len(mu)
    owner = _vertex_owner(mu)
    sigma = _sigma_array(mu)
    rotations = 1
    for m in mu:
        rotations *= m
    buckets: dict[int, dict[int, int]] = {}
    for alpha_word in involutions(h):
        alpha = [0] + list(alpha_word)
        if not _connected(alpha, owner, n):
            continue
        faces = _faces_of(alpha, sigma)
        genus2 = 2 - (n - h // 2 + faces)
        if genus2 % 2:
            raise AssertionError("non-integer genus in enumeration")
        g = genus2 // 2
        buckets.setdefault(g, {})
        buckets[g][faces] = buckets[g].get(faces, 0) + 1
    out = {}
    for g, by_faces in buckets.items():
        out[g] = TPoly({f: Fraction(c, rotations) for f, c in by_faces.items()})
    return out


def oracle_correlator(g: int, mu) -> TPoly:
    """Independent brute-force value of the correlator of genus g, type mu."""
    return oracle_correlators_all_genus(mu).get(g, TPoly.zero())


# ---------------------------------------------------------------------------
# Edge contraction
# ---------------------------------------------------------------------------

def _contract_at(gr: FatGraph, h: int) -> FatGraph:
    """The graph obtained by contracting the edge holding half-edge h at v_1."""
    n = gr.n_vertices
    hp = gr.alpha_of(h)
    p1 = gr.vertex_of(h)
    pj = gr.vertex_of(hp)
    alpha_map = {x: gr.alpha_of(x) for x in range(1, gr.n_half_edges + 1)
                 if x not in (h, hp)}
    if p1 != pj:
        # Whitehead collapse: merge the two endpoints into a new v_1.
        a_part = []
        x = gr.sigma(h)
        while x != h:
            a_part.append(x)
            x = gr.sigma(x)
        b_part = []
        x = gr.sigma(hp)
        while x != hp:
            b_part.append(x)
            x = gr.sigma(x)
        blocks = [(1, a_part + b_part)]
        next_label = 2
        for i in range(n):
            if i in (p1, pj):
                continue
            blocks.append((next_label, list(gr.block(i))))
            next_label += 1
        blocks.sort(key=lambda p: p[0])
        return _rebuild(blocks, alpha_map)
    # Loop: split v_1; the side right after h becomes the new v_1.
    between = []
    x = gr.sigma(h)
    while x != hp:
        between.append(x)
        x = gr.sigma(x)
    after = []
    x = gr.sigma(hp)
    while x != h:
        after.append(x)
        x = gr.sigma(x)
    blocks = [(1, between), (2, after)]
    next_label = 3
    for i in range(n):
        if i == p1:
            continue
        blocks.append((next_label, list(gr.block(i))))
        next_label += 1
    return _rebuild(blocks, alpha_map)


def contract_K1(s: GraphSum) -> GraphSum:
    """Edge-contracting operator: sum of contractions over half-edges at v_1."""
    out: dict[FatGraph, Rat] = {}
    for gr, c in s.terms.items():
        if 1 not in gr.labels:
            raise ValueError("graph has no vertex labelled v1")
        p1 = gr.labels.index(1)
        if gr.mu[p1] == 0:
            raise ValueError("nothing to contract")
        if gr.labels != tuple(range(1, gr.n_vertices + 1)):
            raise ValueError("contraction requires standard labels 1..n")
        for h in gr.block(p1):
            g2 = _contract_at(gr, h)
            val = out.get(g2, Fraction(0)) + c
            if val:
                out[g2] = val
            else:
                out.pop(g2, None)
    return GraphSum(out)


# ---------------------------------------------------------------------------
# The quadratic recursion, verified at the graph-sum level
# ---------------------------------------------------------------------------

@dataclass
class RecursionReport:
    g: int
    mu: tuple[int, ...]
    equal: bool
    mismatches: list = field(default_factory=list)
    lhs_terms: int = 0
    rhs_terms: int = 0

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "mu": list(self.mu),
            "status": "pass" if self.equal else "fail",
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "mismatches": [
                {"graph": t, "lhs": rat_str(a), "rhs": rat_str(b)}
                for t, a, b in self.mismatches
            ],
        }


def recursion_rhs(g: int, mu) -> GraphSum:
    """Right-hand side of the contraction recursion, as labelled graph sums."""
    mu = tuple(int(m) for m in mu)
    n = len(mu)
    rest = mu[1:]
    rhs = GraphSum.zero()

    if g == 0 and n == 1 and mu[0] == 2:
        rhs = rhs + GraphSum.single(graph_union(dot_graph(1), dot_graph(2)))

    for j in range(2, n + 1):
        m0 = mu[0] + mu[j - 1] - 2
        new_mu = (m0,) + tuple(mu[i - 1] for i in range(2, n + 1) if i != j)
        if m0 > 0:
            rhs = rhs + enumerate_graphs(g, new_mu).scale(m0)
        elif m0 == 0 and n == 2 and g == 0:
            # Contracting the dumbbell leaves the single valence-0 vertex;
            # the displayed coefficient would kill it (see decisions ledger).
            rhs = rhs + GraphSum.single(dot_graph(1))

    rest_indices = list(range(2, n + 1))
    for a in range(1, mu[0] - 2):
        b = mu[0] - 2 - a
        if b < 1:
            continue
        coeff = a * b
        rhs = rhs + enumerate_graphs(g - 1, (a, b) + rest).scale(coeff)
        for size in range(len(rest_indices) + 1):
            for subset in combinations(rest_indices, size):
                comp = tuple(i for i in rest_indices if i not in subset)
                mu_i = tuple(mu[i - 1] for i in subset)
                mu_j = tuple(mu[i - 1] for i in comp)
                for g1 in range(0, g + 1):
                    g2 = g - g1
                    left = enumerate_graphs(g1, (a,) + mu_i)
                    if left.is_zero():
                        continue
                    right = enumerate_graphs(g2, (b,) + mu_j)
                    if right.is_zero():
                        continue
                    left = relabel(left, {1} | {i + 1 for i in subset})
                    right = relabel(right, {2} | {i + 1 for i in comp})
                    rhs = rhs + (left * right).scale(coeff)

    if mu[0] - 2 > 0:
        tail = enumerate_graphs(g, (mu[0] - 2,) + rest)
        if not tail.is_zero():
            c = mu[0] - 2
            lab_all = set(range(1, n + 2))
            rhs = rhs + (GraphSum.single(dot_graph(1))
                         * relabel(tail, lab_all - {1})).scale(c)
            rhs = rhs + (GraphSum.single(dot_graph(2))
                         * relabel(tail, lab_all - {2})).scale(c)
    return rhs


def verify_abstract_recursion(g: int, mu) -> RecursionReport:
    """Check K1(F_g^mu) against the recursion's right-hand side, exactly."""
    mu = tuple(int(m) for m in mu)
    lhs = contract_K1(enumerate_graphs(g, mu))
    rhs = recursion_rhs(g, mu)
    mismatches = []
    for gr in sorted(set(lhs.terms) | set(rhs.terms), key=lambda x: x.canonical()):
        a = lhs.terms.get(gr, Fraction(0))
        b = rhs.terms.get(gr, Fraction(0))
        if a != b:
            mismatches.append((gr.to_text(), a, b))
    return RecursionReport(g=g, mu=mu, equal=not mismatches, mismatches=mismatches,
                           lhs_terms=len(lhs.terms), rhs_terms=len(rhs.terms))
