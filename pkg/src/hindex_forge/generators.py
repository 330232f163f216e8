"""Instance generators: worked examples, hardness gadgets, random suites.

The gadget generators materialize reduction constructions as concrete
instances, so their yes/no answers can be cross-checked against brute
force on the source problem (exact-1-in-3 satisfiability, multicolored
clique, independent set).  Layout conventions shared by all generators:
own articles occupy the low ids, fresh citing articles are appended after
all own articles, grouped by the article they cite in ascending order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .compat import build_compat_graph, tokenize_title
from .formats import ProfileArticle, ProfileRecord
from .model import (
    CitationGraph,
    CompatibilityGraph,
    ManipulationInstance,
)


class GeneratorError(ValueError):
    """Base class for malformed generator inputs."""


class InfeasiblePadding(GeneratorError):
    """Gadget citations exceed what the padding scheme can absorb."""


class OddSize(GeneratorError):
    """Strict construction got an odd clause+variable count and may not duplicate."""


class NotPartite(GeneratorError):
    """The declared vertex classes are not a proper partition."""


class ParamOutOfRange(GeneratorError):
    """Construction parameters outside the reduction's domain."""


@dataclass(frozen=True)
class Formula1in3:
    """Positive 3-CNF asking for exactly one true variable per clause.

    Variables are 0-based; every clause has three distinct variables and
    each variable occurs in at most three clauses.
    """

    n_vars: int
    clauses: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        occur: dict[int, int] = {}
        for clause in self.clauses:
            if len(clause) != 3:
                raise GeneratorError(f"clause {sorted(clause)} must have 3 distinct variables")
            for x in clause:
                if not 0 <= x < self.n_vars:
                    raise GeneratorError(f"variable {x} outside 0..{self.n_vars - 1}")
                occur[x] = occur.get(x, 0) + 1
        heavy = [x for x, c in occur.items() if c > 3]
        if heavy:
            raise GeneratorError(f"variable(s) {sorted(heavy)} occur in more than 3 clauses")

    @classmethod
    def from_clauses(cls, n_vars: int, clauses: Iterable[Iterable[int]]) -> "Formula1in3":
        return cls(n_vars, tuple(frozenset(int(x) for x in c) for c in clauses))

    @classmethod
    def parse(cls, text: str) -> "Formula1in3":
        """Read a DIMACS-like listing: one clause of three positive 1-based
        variable indices per line; 'c' lines are comments, an optional
        'p cnf <vars> <clauses>' header pins the variable count."""
        n_vars = 0
        declared: Optional[int] = None
        clauses = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith(("c", "#")):
                continue
            if line.startswith("p"):
                fields = line.split()
                declared = int(fields[2])
                continue
            nums = [int(x) for x in line.split() if x != "0"]
            if any(x <= 0 for x in nums):
                raise GeneratorError("only positive literals are allowed")
            clauses.append([x - 1 for x in nums])
            n_vars = max(n_vars, max(nums))
        if declared is not None:
            n_vars = max(n_vars, declared)
        return cls.from_clauses(n_vars, clauses)

    @property
    def n_clauses(self) -> int:
        return len(self.clauses)

    def duplicated(self) -> "Formula1in3":
        """Disjoint union with a fresh-variable copy of itself."""
        shifted = tuple(
            frozenset(x + self.n_vars for x in c) for c in self.clauses
        )
        return Formula1in3(2 * self.n_vars, self.clauses + shifted)

    def satisfiable(self) -> bool:
        """Brute force over all assignments: exactly one true per clause."""
        for bits in range(1 << self.n_vars):
            if all(
                sum(1 for x in clause if bits >> x & 1) == 1
                for clause in self.clauses
            ):
                return True
        return False


@dataclass(frozen=True)
class PartitionedGraph:
    """Undirected source graph, optionally with declared vertex classes."""

    n: int
    edges: frozenset[tuple[int, int]]
    parts: Optional[tuple[tuple[int, ...], ...]] = None

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        parts: Optional[Iterable[Iterable[int]]] = None,
    ) -> "PartitionedGraph":
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise GeneratorError(f"bad edge ({u}, {v})")
            norm.add((u, v) if u < v else (v, u))
        p = None
        if parts is not None:
            p = tuple(tuple(sorted(int(v) for v in cl)) for cl in parts)
        return cls(n, frozenset(norm), p)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def validate_partite(self) -> None:
        if self.parts is None:
            raise NotPartite("no vertex classes declared")
        seen: set[int] = set()
        for cl in self.parts:
            if seen.intersection(cl):
                raise NotPartite("vertex classes overlap")
            seen.update(cl)
        if seen != set(range(self.n)):
            raise NotPartite("vertex classes do not cover the graph")
        cls_of = {v: i for i, cl in enumerate(self.parts) for v in cl}
        for u, v in self.edges:
            if cls_of[u] == cls_of[v]:
                raise NotPartite(f"edge ({u}, {v}) inside one vertex class")

    def has_clique(self, size: int) -> bool:
        """Brute force: some `size` vertices are pairwise adjacent."""
        if size <= 1:
            return self.n >= size
        for combo in itertools.combinations(range(self.n), size):
            if all(
                (a, b) in self.edges
                for a, b in itertools.combinations(combo, 2)
            ):
                return True
        return False

    def has_independent_set(self, size: int, min_degree: int = 0) -> bool:
        """Brute force: some `size` vertices are pairwise non-adjacent,
        each with degree at least `min_degree`."""
        pool = [v for v in range(self.n) if self.degree(v) >= min_degree]
        if size <= 0:
            return True
        for combo in itertools.combinations(pool, size):
            if not any(
                (a, b) in self.edges
                for a, b in itertools.combinations(combo, 2)
            ):
                return True
        return False


def gen_square(h: int) -> ManipulationInstance:
    """The h^2 once-cited articles example: singleton H-index 1, best H-index h.

    h^2 own articles, each cited by its own fresh article; unrestricted
    merging (complete compatibility on the own articles); target h.
    """
    if h < 1:
        raise ParamOutOfRange("square profile needs h >= 1")
    n_own = h * h
    n = 2 * n_own
    arcs = frozenset((n_own + i, i) for i in range(n_own))
    own = frozenset(range(n_own))
    return ManipulationInstance(
        D=CitationGraph(n, arcs),
        G=CompatibilityGraph.clique(n, own),
        W=own,
        h=h,
    )


def _onein3_layout(formula: Formula1in3):
    """Own-article ids for the satisfiability gadget.

    Per variable i: 4i, 4i+1 form the "true" pair and 4i+2, 4i+3 the
    "false" pair.  Per clause j (variables ascending): six articles from
    4n + 6j, consecutive evens paired with the following odd id.
    """
    n = formula.n_vars
    pairs: list[tuple[int, int, int]] = []  # (small, other) + gadget role
    for i in range(n):
        pairs.append((4 * i, 4 * i + 1, 0))        # true pair: first member small
        pairs.append((4 * i + 2, 4 * i + 3, 1))    # false pair: first member small
    clause_base = 4 * n
    clause_pairs: dict[tuple[int, int], tuple[int, int]] = {}
    for j, clause in enumerate(formula.clauses):
        base = clause_base + 6 * j
        for slot, z in enumerate(sorted(clause)):
            first = base + 2 * slot
            clause_pairs[(j, z)] = (first, first + 1)
            pairs.append((first + 1, first, 2))    # second member is the small one
    return pairs, clause_pairs


def gen_1in3sat(
    formula: Formula1in3,
    mode: str = "strict",
    duplicate_if_odd: bool = True,
) -> ManipulationInstance:
    """Satisfiability gadget: a FUSED instance with compatibility components
    of size two, acyclic citations, and singleton H-index h-1, where
    h = clauses + variables.  It reaches H-index h iff the formula has an
    assignment with exactly one true variable per clause.

    Strict mode reproduces the construction verbatim: an odd clause+variable
    count is fixed by duplicating the formula (or rejected when
    `duplicate_if_odd` is false), and h/2 >= 18 is required so that padding
    feasibility never needs checking.  Relaxed mode accepts any formula
    whose gadget citation counts fit under the padding caps, which makes
    desk-scale equivalence checks possible.
    """
    if mode not in ("strict", "relaxed"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "strict":
        if (formula.n_clauses + formula.n_vars) % 2 == 1:
            if not duplicate_if_odd:
                raise OddSize("clause+variable count is odd")
            formula = formula.duplicated()
        if (formula.n_clauses + formula.n_vars) // 2 < 18:
            raise InfeasiblePadding(
                "strict construction guarantees padding only for h >= 36; "
                "use relaxed mode for small formulas"
            )

    n = formula.n_vars
    m = formula.n_clauses
    h = n + m
    n_own = 4 * n + 6 * m
    own = frozenset(range(n_own))

    pairs, clause_pairs = _onein3_layout(formula)

    edges = [(small, other) if small < other else (other, small) for small, other, _ in pairs]

    arcs: set[tuple[int, int]] = set()
    for i in range(n):
        arcs.add((4 * i, 4 * i + 2))
        arcs.add((4 * i + 1, 4 * i + 2))
    for j, clause in enumerate(formula.clauses):
        ordered = sorted(clause)
        cp = [clause_pairs[(j, z)] for z in ordered]
        (a1, a2), (b1, b2), (c1, _) = cp[0], cp[1], cp[2]
        arcs.update([(a1, b1), (a2, b1), (a1, c1), (a2, c1), (b1, c1), (b2, c1)])
        for z in ordered:
            z1, z2 = clause_pairs[(j, z)]
            arcs.add((z1, 4 * z + 3))
            arcs.add((z2, 4 * z + 3))
            for y in ordered:
                if y != z:
                    arcs.add((z1, 4 * y + 1))
                    arcs.add((z2, 4 * y + 1))

    gadget_indeg = [0] * n_own
    for _, v in arcs:
        gadget_indeg[v] += 1

    # Bring every compatible pair to exactly h citations in total while each
    # single article stays below h.  The designated member of each pair gets
    # the small share (one citation unless its gadget citations force more).
    padding = [0] * n_own
    for small, other, _ in pairs:
        ds, do = gadget_indeg[small], gadget_indeg[other]
        ts = max(ds, 1)
        to = h - ts
        if ts > h - 1 or do > to:
            raise InfeasiblePadding(
                f"pair ({small}, {other}) with gadget citations ({ds}, {do}) "
                f"cannot be padded to a total of exactly {h}"
            )
        padding[small] = ts - ds
        padding[other] = to - do

    next_id = n_own
    for v in range(n_own):
        for _ in range(padding[v]):
            arcs.add((next_id, v))
            next_id += 1

    return ManipulationInstance(
        D=CitationGraph(next_id, frozenset(arcs)),
        G=CompatibilityGraph.from_edges(next_id, edges),
        W=own,
        h=h,
    )


def gen_multicolored_clique(
    H: PartitionedGraph,
) -> tuple[ManipulationInstance, ManipulationInstance]:
    """Clique-search gadget on an l-partite graph.

    Own articles are the graph's vertices (one fresh citer each) plus l-1
    pedestal articles (l fresh citers each, isolated in the compatibility
    graph); mergeability is exactly the graph's adjacency.  Returns the
    budgeted instance (target l, at most l-1 merges) and the improvement
    instance over the same graphs; both are yes iff the graph has an
    l-vertex clique.
    """
    H.validate_partite()
    ell = len(H.parts or ())
    if ell < 1:
        raise ParamOutOfRange("need at least one vertex class")
    nv = H.n
    n_own = nv + ell - 1
    own = frozenset(range(n_own))

    arcs = []
    next_id = n_own
    for v in range(nv):
        arcs.append((next_id, v))
        next_id += 1
    for w in range(nv, n_own):
        for _ in range(ell):
            arcs.append((next_id, w))
            next_id += 1

    D = CitationGraph(next_id, frozenset(arcs))
    G = CompatibilityGraph(next_id, frozenset(H.edges))
    cautious = ManipulationInstance(D=D, G=G, W=own, h=ell, k=ell - 1)
    improvement = ManipulationInstance(D=D, G=G, W=own)
    return cautious, improvement


def gen_independent_set_cautious(H: PartitionedGraph, ell: int) -> ManipulationInstance:
    """Independent-set gadget, budgeted variant: clique compatibility,
    target l*n with at most l-1 merges.

    Graph vertices become own articles topped up to exactly n citations,
    with one shared citer per graph edge; l*n - 1 pedestal articles carry
    l*n citations each.  Yes iff the graph has an independent set of size l.
    """
    nv = H.n
    if not nv > ell > 1:
        raise ParamOutOfRange(f"need |V| > l > 1, got |V|={nv}, l={ell}")
    h = ell * nv
    n_own = nv + (h - 1)
    own = frozenset(range(n_own))

    arcs = []
    next_id = n_own
    for u, v in sorted(H.edges):
        arcs.append((next_id, u))
        arcs.append((next_id, v))
        next_id += 1
    for v in range(nv):
        for _ in range(nv - H.degree(v)):
            arcs.append((next_id, v))
            next_id += 1
    for w in range(nv, n_own):
        for _ in range(h):
            arcs.append((next_id, w))
            next_id += 1

    return ManipulationInstance(
        D=CitationGraph(next_id, frozenset(arcs)),
        G=CompatibilityGraph.clique(next_id, own),
        W=own,
        h=h,
        k=ell - 1,
    )


def gen_independent_set_improvement(H: PartitionedGraph, ell: int) -> ManipulationInstance:
    """Independent-set gadget, improvement variant: clique compatibility,
    singleton H-index q-1 where q is the graph's edge count.

    Own articles: the graph's vertices (cited once per incident edge via a
    shared edge article), l articles with q-1 citations, and q-l-1 articles
    with q citations.  Merging beats q-1 iff the graph has an independent
    set of l vertices all of positive degree; for graphs without isolated
    vertices that is the plain independent-set question.
    """
    q = len(H.edges)
    if not q > ell > 2:
        raise ParamOutOfRange(f"need |E| > l > 2, got |E|={q}, l={ell}")
    nv = H.n
    n_mid = ell            # articles with q-1 citations
    n_top = q - ell - 1    # articles with q citations
    n_own = nv + n_mid + n_top
    own = frozenset(range(n_own))

    arcs = []
    next_id = n_own
    for u, v in sorted(H.edges):
        arcs.append((next_id, u))
        arcs.append((next_id, v))
        next_id += 1
    for w in range(nv, nv + n_mid):
        for _ in range(q - 1):
            arcs.append((next_id, w))
            next_id += 1
    for w in range(nv + n_mid, n_own):
        for _ in range(q):
            arcs.append((next_id, w))
            next_id += 1

    return ManipulationInstance(
        D=CitationGraph(next_id, frozenset(arcs)),
        G=CompatibilityGraph.clique(next_id, own),
        W=own,
    )


def random_instance(
    seed: int,
    n_own: int,
    n_ext: int,
    arc_prob: float,
    component_size_cap: Optional[int] = None,
    title_model: Optional[dict] = None,
    compat_prob: float = 0.3,
    h: Optional[int] = None,
    k: Optional[int] = None,
) -> ManipulationInstance:
    """Seed-deterministic random instance for oracle and equivalence suites.

    Citations run from any article into own articles, each drawn with
    probability `arc_prob` (never between two non-own articles, and never
    as self-citations).  Compatibility comes from one of three modes:
    connected random components of size at most `component_size_cap`,
    titles sampled from a token pool (`title_model` keys: vocab, words,
    threshold) run through the real title pipeline, or plain random edges
    with probability `compat_prob`.
    """
    rng = random.Random(seed)
    n = n_own + n_ext
    own = frozenset(range(n_own))

    arcs = set()
    for w in range(n_own):
        for u in range(n):
            if u != w and rng.random() < arc_prob:
                arcs.add((u, w))
    D = CitationGraph(n, frozenset(arcs))

    if title_model is not None:
        vocab = [f"w{i}" for i in range(title_model.get("vocab", 10))]
        lo, hi = title_model.get("words", (2, 5))
        tokens = {
            v: tokenize_title(" ".join(rng.choice(vocab) for _ in range(rng.randint(lo, hi))))
            for v in range(n_own)
        }
        G = build_compat_graph(n, own, tokens, title_model.get("threshold", "0.3"))
    elif component_size_cap is not None:
        order = list(range(n_own))
        rng.shuffle(order)
        edges = set()
        i = 0
        while i < n_own:
            size = rng.randint(1, component_size_cap)
            group = order[i:i + size]
            for a, b in zip(group, group[1:]):
                edges.add((a, b) if a < b else (b, a))
            for a, b in itertools.combinations(group, 2):
                if rng.random() < 0.5:
                    edges.add((a, b) if a < b else (b, a))
            i += size
        G = CompatibilityGraph(n, frozenset(edges))
    else:
        edges = set()
        for a, b in itertools.combinations(range(n_own), 2):
            if rng.random() < compat_prob:
                edges.add((a, b))
        G = CompatibilityGraph(n, frozenset(edges))

    return ManipulationInstance(D=D, G=G, W=own, h=h, k=k)
