"""Exact solvers for H-index manipulation.

Four independent routes, all pure functions:

* a per-component subset DP, exact for the SUM and UNION measures when the
  compatibility components are small;
* a budgeted subset DP over a clique compatibility graph, exact for SUM,
  and reusable as a sound lower-bound certifier for UNION;
* a clique-enumeration search (minimal good parts + maximum disjoint
  subfamily), exact for SUM and UNION on any compatibility graph, used as
  the fallback when a component is too wide for bitmask tables;
* a brute-force enumeration of complying partitions, the ground-truth
  oracle for small instances and the only exact solver for FUSED.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from math import comb, factorial
from typing import Callable, Iterable, Optional, Sequence

from .model import (
    CitationGraph,
    CompatibilityGraph,
    ManipulationInstance,
    Measure,
    Partition,
    h_index,
    partition_h_index,
    singleton_h_index,
)

MASK_WIDTH_CAP = 30
SUBSET_BUDGET = 2_000_000
CANDIDATE_BUDGET = 100_000
ORACLE_PARTITION_BUDGET = 5_000_000


class SolverError(Exception):
    """Base class for solver-side failures."""


class ComponentTooLarge(SolverError):
    """A compatibility component exceeds the bitmask width cap."""


class NotAClique(SolverError):
    """The solver requires complete compatibility on the own articles."""


class EnumerationBudgetExceeded(SolverError):
    """Candidate-part enumeration grew past the configured budget."""


class TooLargeForOracle(SolverError):
    """The brute-force oracle would enumerate too many partitions."""


class UnsupportedMeasure(SolverError):
    """The requested measure has no exact algorithm on this route."""


class TimeBudgetExceeded(SolverError):
    """A cooperative deadline expired mid-solve."""


@dataclass
class SolveStats:
    method: str = ""
    table_entries: int = 0
    candidates: int = 0
    nodes: int = 0
    fallback_components: tuple[int, ...] = ()
    wall_ms: float = 0.0

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "table_entries": self.table_entries,
            "candidates": self.candidates,
            "nodes": self.nodes,
            "fallback_components": list(self.fallback_components),
            "wall_ms": round(self.wall_ms, 3),
        }


@dataclass
class SolveResult:
    """Decision or optimum, with a witness partition when one exists.

    For decision problems `answer` is a bool; for maximization it is the
    optimum H-index.  A present witness always complies with the
    compatibility graph and certifies the answer.
    """

    answer: bool | int
    witness: Optional[Partition]
    stats: SolveStats


@dataclass(frozen=True)
class CandidatePart:
    """An inclusion-minimal clique of own articles whose measure reaches h."""

    members: tuple[int, ...]
    value: int


def _check_deadline(deadline: Optional[float]) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise TimeBudgetExceeded("solver exceeded its time budget")


def connected_components(G: CompatibilityGraph) -> list[frozenset[int]]:
    """Connected components of the whole article universe."""
    return G.components()


def _w_components(G: CompatibilityGraph, W: frozenset[int]) -> list[frozenset[int]]:
    """Components of the compatibility graph induced on the own articles.

    Merged parts are cliques inside W, so this is the finest sound split.
    """
    seen: set[int] = set()
    comps = []
    for start in sorted(W):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in G.adj[v]:
                if w in W and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return comps


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _component_dp(
    G: CompatibilityGraph,
    D: CitationGraph,
    verts: Sequence[int],
    h: int,
    measure: Measure,
    cap: int = MASK_WIDTH_CAP,
) -> tuple[int, list[tuple[int, ...]]]:
    """Max number of parts with measure >= h over all complying partitions
    of `verts`, plus one optimal partition of `verts`.

    Tables are indexed by vertex subsets of the component; a part qualifies
    when it induces a clique and its measure reaches h.  Runs in O(3^c).
    """
    c = len(verts)
    if c > cap:
        raise ComponentTooLarge(
            f"component of size {c} exceeds bitmask width cap {cap}"
        )
    full = (1 << c) - 1
    adj = []
    index = {v: i for i, v in enumerate(verts)}
    for v in verts:
        m = 0
        for w in G.adj[v]:
            j = index.get(w)
            if j is not None:
                m |= 1 << j
        adj.append(m)

    clique = [False] * (full + 1)
    clique[0] = True
    good = [False] * (full + 1)
    if measure is Measure.SUM:
        deg = [D.indeg[v] for v in verts]
        val = [0] * (full + 1)
        for mask in range(1, full + 1):
            low = mask & -mask
            i = low.bit_length() - 1
            rest = mask ^ low
            clique[mask] = clique[rest] and (rest & adj[i]) == rest
            val[mask] = val[rest] + deg[i]
            good[mask] = val[mask] >= h
    else:
        citer = [D.citer_mask[v] for v in verts]
        acc = [0] * (full + 1)
        for mask in range(1, full + 1):
            low = mask & -mask
            i = low.bit_length() - 1
            rest = mask ^ low
            clique[mask] = clique[rest] and (rest & adj[i]) == rest
            acc[mask] = acc[rest] | citer[i]
            good[mask] = acc[mask].bit_count() >= h

    T = [0] * (full + 1)
    back = [0] * (full + 1)
    for mask in range(1, full + 1):
        low = mask & -mask
        rem = mask ^ low
        best = -1
        best_part = low
        sub = rem
        while True:
            part = sub | low
            if clique[part]:
                cand = T[mask ^ part] + (1 if good[part] else 0)
                if cand > best:
                    best = cand
                    best_part = part
            if sub == 0:
                break
            sub = (sub - 1) & rem
        T[mask] = best
        back[mask] = best_part

    parts = []
    mask = full
    while mask:
        part = back[mask]
        parts.append(tuple(verts[i] for i in _bits(part)))
        mask ^= part
    return T[full], parts


def max_good_parts_dp(
    G: CompatibilityGraph,
    D: CitationGraph,
    W: frozenset[int],
    component: Iterable[int],
    h: int,
    measure: Measure,
    cap: int = MASK_WIDTH_CAP,
) -> int:
    """Maximum number of parts with measure >= h over complying partitions
    of one compatibility component (own articles only)."""
    verts = sorted(component)
    if any(v not in W for v in verts):
        raise ValueError("component passed to the DP must contain own articles only")
    if measure is Measure.FUSED:
        raise UnsupportedMeasure("the component DP handles SUM and UNION only")
    count, _ = _component_dp(G, D, verts, h, measure, cap)
    return count


def decide_manipulation(
    inst: ManipulationInstance,
    measure: Measure,
    *,
    cap: int = MASK_WIDTH_CAP,
    deadline: Optional[float] = None,
) -> SolveResult:
    """Decide whether some complying partition reaches H-index h.

    Runs the subset DP independently per compatibility component;
    components wider than the bitmask cap fall back to the
    clique-enumeration route (recorded in the stats).
    """
    if inst.h is None:
        raise ValueError("instance has no target H-index")
    if inst.k is not None:
        raise ValueError("budgeted instances are handled by the cautious solver")
    if measure is Measure.FUSED:
        raise UnsupportedMeasure(
            "no exact polynomial structure for FUSED; use the brute-force oracle"
        )
    start = time.perf_counter()
    h = inst.h
    stats = SolveStats(method="component-dp")
    total = 0
    all_parts: list[tuple[int, ...]] = []
    for comp in _w_components(inst.G, inst.W):
        _check_deadline(deadline)
        verts = sorted(comp)
        try:
            count, parts = _component_dp(inst.G, inst.D, verts, h, measure, cap)
            stats.table_entries += 1 << len(verts)
        except ComponentTooLarge:
            candidates = enumerate_minimal_good_cliques(
                inst.G, inst.D, inst.W, h, measure, within=comp, deadline=deadline
            )
            count, chosen = max_disjoint_parts(candidates)
            used = {v for c in chosen for v in c.members}
            parts = [c.members for c in chosen]
            parts.extend((v,) for v in sorted(comp - used))
            stats.candidates += len(candidates)
            stats.fallback_components += (len(verts),)
        total += count
        all_parts.extend(parts)
    answer = total >= h
    witness = Partition.from_parts(all_parts) if answer else None
    stats.wall_ms = (time.perf_counter() - start) * 1000
    return SolveResult(answer=answer, witness=witness, stats=stats)


def max_h_index(
    inst: ManipulationInstance,
    measure: Measure,
    *,
    method: str = "auto",
    deadline: Optional[float] = None,
) -> SolveResult:
    """Largest achievable H-index: try h = 1, 2, ... until the first no.

    `method` picks the decision engine: "dp" (component DP with fallback),
    "clique" (clique enumeration), "oracle" (brute force), or "auto",
    which routes FUSED to the oracle and everything else to the DP.
    """
    if method == "auto":
        method = "oracle" if measure is Measure.FUSED else "dp"
    if method == "oracle":
        start = time.perf_counter()
        best = brute_force_max_h(inst, measure)
        stats = SolveStats(method="oracle", wall_ms=(time.perf_counter() - start) * 1000)
        return SolveResult(answer=best, witness=None, stats=stats)
    if method == "clique":
        return clique_enum_max_h(inst, measure, deadline=deadline)
    if method != "dp":
        raise ValueError(f"unknown solve method {method!r}")

    start = time.perf_counter()
    plain = replace(inst, k=None)
    best = 0
    witness: Optional[Partition] = Partition.singletons(inst.W)
    stats = SolveStats(method="component-dp")
    h = 1
    while h <= len(inst.W):
        _check_deadline(deadline)
        res = decide_manipulation(replace(plain, h=h), measure, deadline=deadline)
        stats.table_entries += res.stats.table_entries
        stats.candidates += res.stats.candidates
        stats.fallback_components += res.stats.fallback_components
        if not res.answer:
            break
        best = h
        witness = res.witness
        h += 1
    stats.wall_ms = (time.perf_counter() - start) * 1000
    return SolveResult(answer=best, witness=witness, stats=stats)


def _require_clique_on_own(G: CompatibilityGraph, W: frozenset[int]) -> None:
    if not G.is_clique(W):
        raise NotAClique("compatibility graph is not complete on the own articles")


def _cautious_clique_dp(
    D: CitationGraph,
    W: frozenset[int],
    h: int,
    k: int,
    measure: Measure,
    deadline: Optional[float] = None,
) -> tuple[bool, Partition, int]:
    """Budgeted subset DP behind the cautious clique solvers.

    Only articles with at most h citations can profit from merging, and at
    most 2k articles are ever merged, so the table ranges over the 2k
    highest-cited such articles (ties broken by ascending id).  Everything
    else stays a singleton and contributes to the base count directly.

    Exact for SUM.  For UNION the same restriction is not optimal, but any
    yes answer is still certified by the returned partition.
    """
    indeg = D.indeg
    lows = [v for v in sorted(W) if indeg[v] <= h]
    lows.sort(key=lambda v: (-indeg[v], v))
    cands = lows[: 2 * k]
    cand_set = frozenset(cands)
    base = sum(1 for v in W if v not in cand_set and indeg[v] >= h)

    s = len(cands)
    full = (1 << s) - 1
    good = [False] * (full + 1)
    if measure is Measure.SUM:
        deg = [indeg[v] for v in cands]
        val = [0] * (full + 1)
        for mask in range(1, full + 1):
            low = mask & -mask
            i = low.bit_length() - 1
            val[mask] = val[mask ^ low] + deg[i]
            good[mask] = val[mask] >= h
    elif measure is Measure.UNION:
        citer = [D.citer_mask[v] for v in cands]
        acc = [0] * (full + 1)
        for mask in range(1, full + 1):
            low = mask & -mask
            i = low.bit_length() - 1
            acc[mask] = acc[mask ^ low] | citer[i]
            good[mask] = acc[mask].bit_count() >= h
    else:
        raise UnsupportedMeasure("cautious clique DP handles SUM and UNION only")

    # T[b][mask]: max good parts over partitions of `mask` using <= b merges.
    T = [[0] * (full + 1) for _ in range(k + 1)]
    back = [[0] * (full + 1) for _ in range(k + 1)]
    for b in range(k + 1):
        tb = T[b]
        bb = back[b]
        for mask in range(1, full + 1):
            low = mask & -mask
            rem = mask ^ low
            best = -1
            best_part = low
            sub = rem
            while True:
                part = sub | low
                cost = part.bit_count() - 1
                if cost <= b:
                    cand = T[b - cost][mask ^ part] + (1 if good[part] else 0)
                    if cand > best:
                        best = cand
                        best_part = part
                if sub == 0:
                    break
                sub = (sub - 1) & rem
            tb[mask] = best
            bb[mask] = best_part
        _check_deadline(deadline)

    yes = base + T[k][full] >= h

    parts: list[tuple[int, ...]] = []
    mask, b = full, k
    while mask:
        part = back[b][mask]
        parts.append(tuple(cands[i] for i in _bits(part)))
        b -= part.bit_count() - 1
        mask ^= part
    parts.extend((v,) for v in sorted(W - cand_set))
    return yes, Partition.from_parts(parts), (full + 1) * (k + 1)


def decide_cautious_sum(
    inst: ManipulationInstance,
    *,
    deadline: Optional[float] = None,
) -> SolveResult:
    """Cautious decision under SUM: at most k merges, clique compatibility."""
    if inst.h is None or inst.k is None:
        raise ValueError("cautious solving needs both a target H-index and a budget")
    _require_clique_on_own(inst.G, inst.W)
    start = time.perf_counter()
    yes, witness, entries = _cautious_clique_dp(
        inst.D, inst.W, inst.h, inst.k, Measure.SUM, deadline
    )
    stats = SolveStats(
        method="cautious-dp",
        table_entries=entries,
        wall_ms=(time.perf_counter() - start) * 1000,
    )
    return SolveResult(answer=yes, witness=witness if yes else None, stats=stats)


def cautious_union_bounds(
    inst: ManipulationInstance,
    *,
    deadline: Optional[float] = None,
) -> tuple[int, int]:
    """Sound (lower, upper) bounds on the best UNION H-index within k merges.

    The upper bound is the exact cautious SUM optimum (UNION never exceeds
    SUM part by part).  The lower bound is the best h the budgeted DP can
    certify when part values are evaluated under UNION; each certificate is
    re-checked against the witness partition before it counts.
    """
    if inst.k is None:
        raise ValueError("bounds need a merge budget")
    _require_clique_on_own(inst.G, inst.W)
    lower = 0
    upper = 0
    h = 1
    while h <= len(inst.W):
        _check_deadline(deadline)
        sum_yes, _, _ = _cautious_clique_dp(inst.D, inst.W, h, inst.k, Measure.SUM, deadline)
        if not sum_yes:
            break
        upper = h
        union_yes, witness, _ = _cautious_clique_dp(
            inst.D, inst.W, h, inst.k, Measure.UNION, deadline
        )
        if union_yes and partition_h_index(inst.D, inst.W, witness, Measure.UNION) >= h:
            lower = h
        h += 1
    return lower, upper


def _maximal_cliques(verts: Sequence[int], adj: dict[int, frozenset[int]]) -> list[tuple[int, ...]]:
    """Bron-Kerbosch with a lowest-id pivot; output sorted for determinism."""
    out: list[tuple[int, ...]] = []

    def expand(r: set[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            out.append(tuple(sorted(r)))
            return
        pivot = min(p | x)
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(verts), set())
    return sorted(out)


def enumerate_minimal_good_cliques(
    G: CompatibilityGraph,
    D: CitationGraph,
    W: frozenset[int],
    h: int,
    measure: Measure,
    *,
    within: Optional[Iterable[int]] = None,
    max_candidates: int = CANDIDATE_BUDGET,
    max_subsets: int = SUBSET_BUDGET,
    deadline: Optional[float] = None,
) -> list[CandidatePart]:
    """All inclusion-minimal own-article cliques whose measure reaches h.

    Walks every maximal clique of the compatibility graph and grows subsets
    by increasing size; a subset whose measure already reaches h is never
    extended, since no proper superset can be minimal.  Both measures are
    monotone under inclusion, so checking the one-element-removed subsets
    suffices for minimality.
    """
    if measure is Measure.FUSED:
        raise UnsupportedMeasure("candidate parts are only defined for SUM and UNION")
    scope = W if within is None else frozenset(within) & W
    verts = sorted(scope)
    adj = {v: G.adj[v] & scope for v in verts}

    if measure is Measure.SUM:
        indeg = D.indeg

        def val_of(acc: int) -> int:
            return acc

        def extend(acc: int, v: int) -> int:
            return acc + indeg[v]

    else:
        citer = D.citer_mask

        def val_of(acc: int) -> int:
            return acc.bit_count()

        def extend(acc: int, v: int) -> int:
            return acc | citer[v]

    def value_of_set(members: Sequence[int]) -> int:
        acc = 0
        for v in members:
            acc = extend(acc, v)
        return val_of(acc)

    minimal: dict[tuple[int, ...], int] = {}
    examined = 0
    for K in _maximal_cliques(verts, adj):
        _check_deadline(deadline)
        frontier: list[tuple[tuple[int, ...], int]] = []
        for v in K:
            examined += 1
            acc = extend(0, v)
            value = val_of(acc)
            if value >= h:
                minimal[(v,)] = value
            else:
                frontier.append(((v,), acc))
        while frontier:
            _check_deadline(deadline)
            if examined > max_subsets or len(minimal) > max_candidates:
                raise EnumerationBudgetExceeded(
                    f"candidate enumeration passed the budget "
                    f"({examined} subsets, {len(minimal)} candidates)"
                )
            nxt: list[tuple[tuple[int, ...], int]] = []
            for members, acc in frontier:
                last = members[-1]
                for w in K:
                    if w <= last:
                        continue
                    examined += 1
                    nacc = extend(acc, w)
                    grown = members + (w,)
                    if val_of(nacc) >= h:
                        if grown in minimal:
                            continue
                        if all(
                            value_of_set(grown[:i] + grown[i + 1:]) < h
                            for i in range(len(grown))
                        ):
                            minimal[grown] = val_of(nacc)
                    else:
                        nxt.append((grown, nacc))
            frontier = nxt
    return [CandidatePart(members, value) for members, value in sorted(minimal.items())]


def _min_vertex_cover(adj: dict[int, set[int]]) -> set[int]:
    """Exact minimum vertex cover via bounded edge branching.

    Branches on the lexicographically smallest remaining edge; a branch is
    cut as soon as it cannot beat the best cover found so far.
    """
    best: set[int] = {v for v, ns in adj.items() if ns}

    def smallest_edge(graph: dict[int, set[int]]) -> Optional[tuple[int, int]]:
        for u in sorted(graph):
            if graph[u]:
                return u, min(graph[u])
        return None

    def without(graph: dict[int, set[int]], v: int) -> dict[int, set[int]]:
        out = {u: ns - {v} for u, ns in graph.items() if u != v}
        return out

    def search(graph: dict[int, set[int]], cur: set[int]) -> None:
        nonlocal best
        if len(cur) >= len(best):
            return
        edge = smallest_edge(graph)
        if edge is None:
            best = set(cur)
            return
        u, v = edge
        search(without(graph, u), cur | {u})
        search(without(graph, v), cur | {v})

    search(adj, set())
    return best


def max_disjoint_parts(
    candidates: Sequence[CandidatePart],
) -> tuple[int, list[CandidatePart]]:
    """Maximum pairwise-disjoint subfamily of candidate parts.

    Computed as a maximum independent set of the intersection graph, via
    the complement minimum vertex cover.
    """
    m = len(candidates)
    members = [frozenset(c.members) for c in candidates]
    adj: dict[int, set[int]] = {i: set() for i in range(m)}
    for i in range(m):
        for j in range(i + 1, m):
            if members[i] & members[j]:
                adj[i].add(j)
                adj[j].add(i)
    cover = _min_vertex_cover(adj)
    chosen = [candidates[i] for i in range(m) if i not in cover]
    return len(chosen), chosen


def clique_enum_max_h(
    inst: ManipulationInstance,
    measure: Measure,
    *,
    max_candidates: int = CANDIDATE_BUDGET,
    max_subsets: int = SUBSET_BUDGET,
    deadline: Optional[float] = None,
) -> SolveResult:
    """Maximize the H-index via candidate enumeration.

    For h = 1, 2, ... collect the minimal good cliques and ask for h
    pairwise-disjoint ones; the first failing h ends the search.  Exact for
    SUM and UNION because both measures ignore everything outside the part:
    leftover articles become singletons without changing any part's value.
    """
    if inst.k is not None:
        raise ValueError("budgeted instances are handled by the cautious solver")
    start = time.perf_counter()
    stats = SolveStats(method="clique-enum")
    best = 0
    best_parts: list[tuple[int, ...]] = []
    h = 1
    while h <= len(inst.W):
        _check_deadline(deadline)
        candidates = enumerate_minimal_good_cliques(
            inst.G, inst.D, inst.W, h, measure,
            max_candidates=max_candidates, max_subsets=max_subsets,
            deadline=deadline,
        )
        stats.candidates += len(candidates)
        count, chosen = max_disjoint_parts(candidates)
        if count < h:
            break
        best = h
        best_parts = [c.members for c in chosen]
        h += 1
    used = {v for p in best_parts for v in p}
    parts = list(best_parts) + [(v,) for v in sorted(inst.W - used)]
    witness = Partition.from_parts(parts)
    stats.wall_ms = (time.perf_counter() - start) * 1000
    return SolveResult(answer=best, witness=witness, stats=stats)


def _bell_numbers(limit: int) -> list[int]:
    bell = [1]
    row = [1]
    for _ in range(limit):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        bell.append(nxt[0])
        row = nxt
    return bell


def _oracle_size_estimate(
    G: CompatibilityGraph, W: frozenset[int], k: Optional[int]
) -> int:
    if k is not None:
        n2 = len(W) * (len(W) - 1) // 2
        return sum(n2**j // factorial(j) + 1 for j in range(k + 1))
    comps = _w_components(G, W)
    sizes = [len(c) for c in comps]
    bell = _bell_numbers(max(sizes, default=0))
    est = 1
    for s in sizes:
        est *= bell[s]
        if est > ORACLE_PARTITION_BUDGET * 16:
            break
    return est


def brute_force_max_h(
    inst: ManipulationInstance,
    measure: Measure,
    k: Optional[int] = None,
    *,
    max_partitions: int = ORACLE_PARTITION_BUDGET,
) -> int:
    """Ground-truth maximum H-index by enumerating complying partitions.

    Vertices are assigned one by one, joining a part only when compatible
    with every member, so only complying partitions are ever visited; a
    merge budget prunes further when given (falling back to the instance's
    own k).  Refuses instances whose complying-partition count estimate
    exceeds the budget.
    """
    budget = inst.k if k is None else k
    W = inst.W
    if not W:
        return 0
    estimate = _oracle_size_estimate(inst.G, W, budget)
    if estimate > max_partitions:
        raise TooLargeForOracle(
            f"~{estimate} complying partitions exceed the oracle budget {max_partitions}"
        )

    comps = _w_components(inst.G, W)
    verts: list[int] = []
    for comp in comps:
        verts.extend(sorted(comp))
    nv = len(verts)
    adj_mask = inst.G.adj_mask
    indeg = inst.D.indeg
    citer_mask = inst.D.citer_mask
    w_mask = inst.w_mask
    ext_mask = [citer_mask[v] & ~w_mask for v in range(inst.n)]
    ww_arcs = [(u, v) for u, v in sorted(inst.D.arcs) if u in W and v in W]
    fused = measure is Measure.FUSED

    # per-part state, maintained incrementally
    allowed: list[int] = []   # AND of adjacency masks of the members
    sums: list[int] = []
    ors: list[int] = []       # citer union (UNION) or external-citer union (FUSED)
    assign: dict[int, int] = {}
    sizes: list[int] = []

    best = 0
    leaves = 0

    def evaluate() -> int:
        if measure is Measure.SUM:
            return h_index(sums)
        if measure is Measure.UNION:
            return h_index(m.bit_count() for m in ors)
        values = [m.bit_count() for m in ors]
        np = len(values)
        seen: set[int] = set()
        for u, v in ww_arcs:
            pu = assign[u]
            pv = assign[v]
            if pu != pv:
                key = pu * np + pv
                if key not in seen:
                    seen.add(key)
                    values[pv] += 1
        return h_index(values)

    def rec(i: int, merges: int) -> None:
        nonlocal best, leaves
        if i == nv:
            leaves += 1
            if leaves > max_partitions:
                raise TooLargeForOracle("oracle enumeration exceeded its hard budget")
            value = evaluate()
            if value > best:
                best = value
            return
        v = verts[i]
        vbit = 1 << v
        if budget is None or merges < budget:
            for pi in range(len(allowed)):
                if allowed[pi] & vbit:
                    saved_allowed = allowed[pi]
                    saved_or = ors[pi]
                    allowed[pi] &= adj_mask[v]
                    sums[pi] += indeg[v]
                    ors[pi] |= ext_mask[v] if fused else citer_mask[v]
                    sizes[pi] += 1
                    assign[v] = pi
                    rec(i + 1, merges + 1)
                    del assign[v]
                    sizes[pi] -= 1
                    ors[pi] = saved_or
                    sums[pi] -= indeg[v]
                    allowed[pi] = saved_allowed
        allowed.append(adj_mask[v])
        sums.append(indeg[v])
        ors.append(ext_mask[v] if fused else citer_mask[v])
        sizes.append(1)
        assign[v] = len(allowed) - 1
        rec(i + 1, merges)
        del assign[v]
        allowed.pop()
        sums.pop()
        ors.pop()
        sizes.pop()

    rec(0, 0)
    return best


def decide_improvement(
    inst: ManipulationInstance,
    measure: Measure,
    *,
    method: str = "auto",
    deadline: Optional[float] = None,
) -> SolveResult:
    """Can merging beat the H-index of the unmerged profile?"""
    base = singleton_h_index(inst.D, inst.W, measure)
    res = max_h_index(replace(inst, k=None), measure, method=method, deadline=deadline)
    yes = res.answer > base
    stats = res.stats
    stats.method = f"improvement({stats.method})"
    return SolveResult(answer=yes, witness=res.witness if yes else None, stats=stats)
