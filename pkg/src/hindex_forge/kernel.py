"""Data reduction for instances whose compatibility graph is a clique.

Three rules shrink an instance to one whose article count depends only on
the target H-index h, or accept outright:

1. a big greedy matching of citations certifies a yes-instance;
2. matched endpoints form a vertex cover C of the citation-relevant arcs,
   and cover members never need to cite more than 2h^2 + 2h own articles
   outside C;
3. cleanup: accept once h articles reach h citations, demote own articles
   nobody cites, drop externals that cite nothing, and trim external
   citations of one article down to h.

Every rule preserves the yes/no answer at the instance's h under all three
citation measures.  The reduced instance is re-indexed densely; the trace
records each rule application and the id relabeling, one line each.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import (
    CitationGraph,
    CompatibilityGraph,
    ManipulationInstance,
    Partition,
)
from .solvers import NotAClique


class NotACover(Exception):
    """The supplied vertex set misses a citation arc into an own article."""


def kernel_size_bound(h: int) -> int:
    """Maximum article count of a reduced instance."""
    return 4 * h**4 + 6 * h**3 + 5 * h**2


@dataclass(frozen=True)
class KernelStep:
    """Outcome of one rule application on a fixed article universe."""

    instance: ManipulationInstance
    accepted: bool
    witness: Optional[Partition]
    trace: tuple[str, ...]
    cover: frozenset[int] = frozenset()
    matching: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class KernelOutcome:
    """Result of the full kernelization.

    verdict "accept" certifies the original instance is a yes-instance
    (see `witness`); verdict "reduced" carries an equivalent instance with
    at most `kernel_size_bound(h)` articles, re-indexed densely via
    `id_map` (old id -> new id).  `cover` is reported in original ids.
    """

    verdict: str
    reduced: Optional[ManipulationInstance]
    trace: tuple[str, ...]
    cover: frozenset[int]
    witness: Optional[Partition] = None
    id_map: Optional[dict[int, int]] = None


def _greedy_matching(arcs: list[tuple[int, int]]) -> list[tuple[int, int]]:
    matched: set[int] = set()
    matching = []
    for u, v in arcs:
        if u not in matched and v not in matched:
            matching.append((u, v))
            matched.add(u)
            matched.add(v)
    return matching


def greedy_matching(D: CitationGraph) -> list[tuple[int, int]]:
    """Maximal matching in the undirected graph underlying the citations.

    Arcs are scanned in ascending order; an arc joins the matching whenever
    both endpoints are still unmatched.
    """
    return _greedy_matching(sorted(D.arcs))


def _require_clique(inst: ManipulationInstance) -> None:
    if not inst.G.is_clique(inst.W):
        raise NotAClique("kernelization requires complete compatibility on own articles")


def apply_rule_matching(inst: ManipulationInstance) -> KernelStep:
    """Accept if a greedy matching of citations into own articles has size h^2.

    Otherwise return the matched endpoints as a vertex cover of every arc
    that matters for the measures.  Only arcs whose cited endpoint is an
    own article enter the matching: a matched pair must certify a citation
    an own article can keep.
    """
    h = inst.h
    if h is None:
        raise ValueError("rule needs a target H-index")
    relevant = sorted((u, v) for u, v in inst.D.arcs if v in inst.W)
    matching = _greedy_matching(relevant)
    if len(matching) >= h * h:
        _require_clique(inst)
        heads = sorted(v for _, v in matching[: h * h])
        parts = [tuple(heads[i * h:(i + 1) * h]) for i in range(h)] if h else []
        rest = inst.W - set(heads)
        parts.extend((v,) for v in sorted(rest))
        witness = Partition.from_parts(parts)
        return KernelStep(
            instance=inst,
            accepted=True,
            witness=witness,
            trace=(f"RULE1 matched={len(matching)} accept",),
            matching=tuple(matching),
        )
    cover = frozenset(x for arc in matching for x in arc)
    return KernelStep(
        instance=inst,
        accepted=False,
        witness=None,
        trace=(
            f"RULE1 matched={len(matching)} cover={','.join(map(str, sorted(cover)))}",
        ),
        cover=cover,
        matching=tuple(matching),
    )


def apply_rule_cover_trim(
    inst: ManipulationInstance, cover: frozenset[int]
) -> KernelStep:
    """Cap each cover member's citations into own articles outside the cover.

    A cover article citing more than 2h^2 + 2h own articles outside the
    cover keeps exactly that many; excess citations are dropped, highest
    target id first.
    """
    h = inst.h
    if h is None:
        raise ValueError("rule needs a target H-index")
    for u, v in inst.D.arcs:
        if v in inst.W and u not in cover and v not in cover:
            raise NotACover(f"arc ({u}, {v}) into an own article avoids the cover")
    threshold = 2 * h * h + 2 * h
    arcs = set(inst.D.arcs)
    trace = []
    for v in sorted(cover):
        targets = sorted(
            w for w in inst.D.out_lists[v] if w in inst.W and w not in cover
        )
        excess = len(targets) - threshold
        if excess > 0:
            for w in sorted(targets, reverse=True)[:excess]:
                arcs.remove((v, w))
                trace.append(f"RULE2 drop-citation {v}->{w}")
    if not trace:
        return KernelStep(inst, False, None, (), cover=cover)
    new_inst = ManipulationInstance(
        D=CitationGraph(inst.n, frozenset(arcs)),
        G=inst.G,
        W=inst.W,
        h=inst.h,
        k=inst.k,
    )
    return KernelStep(new_inst, False, None, tuple(trace), cover=cover)


def apply_rule_cleanup(inst: ManipulationInstance) -> KernelStep:
    """One exhaustive cleanup pass; articles are dropped by isolating them.

    In order: accept once h own articles have h citations each; demote own
    articles without citers to non-own status (their outgoing citations
    survive); strip citations between two non-own articles, which no
    measure can see; isolate non-own articles that cite nothing; trim
    citations from non-own articles so that each own article keeps at most
    h of them (highest citer id dropped first).

    Isolated non-own articles are removed from the universe by the final
    re-indexing in `kernelize`.
    """
    h = inst.h
    if h is None:
        raise ValueError("rule needs a target H-index")
    _require_clique(inst)
    arcs = set(inst.D.arcs)
    own = set(inst.W)
    trace: list[str] = []

    changed = True
    while changed:
        changed = False

        indeg: dict[int, int] = {}
        for _, v in arcs:
            indeg[v] = indeg.get(v, 0) + 1
        strong = sum(1 for v in own if indeg.get(v, 0) >= h)
        if strong >= h:
            trace.append(f"RULE3 accept strong={strong}")
            witness = Partition.singletons(inst.W)
            return KernelStep(inst, True, witness, tuple(trace))

        for v in sorted(own):
            if indeg.get(v, 0) == 0:
                own.discard(v)
                trace.append(f"RULE3 demote {v}")
                changed = True

        for u, v in sorted(arcs):
            if u not in own and v not in own:
                arcs.discard((u, v))
                trace.append(f"RULE3 strip-arc {u}->{v}")
                changed = True

        out_count: dict[int, int] = {}
        for u, _ in arcs:
            out_count[u] = out_count.get(u, 0) + 1
        for v in sorted(set(range(inst.n)) - own):
            if out_count.get(v, 0) == 0:
                incident = [a for a in arcs if v in a]
                if incident:
                    for a in sorted(incident):
                        arcs.discard(a)
                    trace.append(f"RULE3 drop-article {v}")
                    changed = True

        for v in sorted(own):
            ext = sorted(u for u, w in arcs if w == v and u not in own)
            if len(ext) > h:
                for u in sorted(ext, reverse=True)[: len(ext) - h]:
                    arcs.discard((u, v))
                    trace.append(f"RULE3 trim-citation {u}->{v}")
                changed = True

    new_inst = ManipulationInstance(
        D=CitationGraph(inst.n, frozenset(arcs)),
        G=inst.G,
        W=frozenset(own),
        h=inst.h,
        k=inst.k,
    )
    return KernelStep(new_inst, False, None, tuple(trace))


def kernelize(inst: ManipulationInstance) -> KernelOutcome:
    """Reduce an unbudgeted clique-compatibility instance, or accept.

    Applies the matching rule once, the cover trim once, and the cleanup
    pass to a fixpoint, then drops isolated non-own articles and re-indexes
    the survivors densely.  Reduced instances stay equivalent to the input
    at its h under SUM, UNION and FUSED, and never exceed
    `kernel_size_bound(h)` articles.
    """
    if inst.h is None:
        raise ValueError("kernelization needs a target H-index")
    if inst.k is not None:
        raise ValueError("kernelization applies to the unbudgeted problem")
    _require_clique(inst)

    step1 = apply_rule_matching(inst)
    trace = list(step1.trace)
    if step1.accepted:
        return KernelOutcome(
            verdict="accept",
            reduced=None,
            trace=tuple(trace),
            cover=frozenset(),
            witness=step1.witness,
        )
    cover = step1.cover

    step2 = apply_rule_cover_trim(inst, cover)
    trace.extend(step2.trace)

    step3 = apply_rule_cleanup(step2.instance)
    trace.extend(step3.trace)
    if step3.accepted:
        return KernelOutcome(
            verdict="accept",
            reduced=None,
            trace=tuple(trace),
            cover=cover,
            witness=step3.witness,
        )
    current = step3.instance

    alive = sorted(set(current.W) | {x for arc in current.D.arcs for x in arc})
    id_map = {old: new for new, old in enumerate(alive)}
    new_w = frozenset(id_map[v] for v in current.W)
    new_arcs = frozenset((id_map[u], id_map[v]) for u, v in current.D.arcs)
    reduced = ManipulationInstance(
        D=CitationGraph(len(alive), new_arcs),
        G=CompatibilityGraph.clique(len(alive), new_w),
        W=new_w,
        h=inst.h,
        k=None,
    )
    trace.append(
        "RELABEL " + " ".join(f"{old}:{new}" for old, new in sorted(id_map.items()))
    )
    return KernelOutcome(
        verdict="reduced",
        reduced=reduced,
        trace=tuple(trace),
        cover=cover,
        id_map=id_map,
    )
