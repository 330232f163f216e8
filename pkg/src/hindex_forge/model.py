"""Core data model: citation graphs, compatibility graphs, partitions and
the three citation measures for merged articles.

Article ids are dense integers 0..n-1 over one shared universe: the profile's
own articles together with every article that cites them.  The own articles
form the set W; only citations *into* W ever influence a measure.

All types are immutable after construction and all functions are pure, so
everything here is safe to share across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional


class InstanceError(ValueError):
    """Base class for malformed instances and partition misuse."""


class InvalidArc(InstanceError):
    """Self-citation, duplicate arc, or loop/duplicate compatibility edge."""


class OutOfRangeId(InstanceError):
    """An article id falls outside the instance's dense universe."""


class WNotSubset(InstanceError):
    """The own-article set contains something that is not a valid id."""


class EmptyPart(InstanceError):
    """A citation measure was asked for an empty article set."""


class PartNotInPartition(InstanceError):
    """The queried part does not belong to the given partition."""


class InvalidPartition(InstanceError):
    """Parts overlap, or the partition does not cover exactly the own set."""


class Measure(enum.Enum):
    """How the citation count of a merged article is computed.

    SUM    counts every citation of every member, including citations
           between members.
    UNION  counts distinct citing articles; a member citing another member
           is itself a distinct citer and therefore counts.
    FUSED  counts distinct citing articles outside the profile plus, for
           every *other* part, at most one citation from that part.  Its
           value depends on the whole partition, not just the part.
    """

    SUM = "sum"
    UNION = "union"
    FUSED = "fused"

    @classmethod
    def from_str(cls, name: str) -> "Measure":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown measure {name!r}; expected one of "
                f"{', '.join(m.value for m in cls)}"
            ) from None


@dataclass(frozen=True)
class CitationGraph:
    """Directed graph of articles; an arc (u, v) means u cites v."""

    n: int
    arcs: frozenset[tuple[int, int]]

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "CitationGraph":
        """Build from an arc list, rejecting duplicates eagerly."""
        arc_list = [(int(u), int(v)) for u, v in arcs]
        arc_set = frozenset(arc_list)
        if len(arc_set) != len(arc_list):
            seen: set[tuple[int, int]] = set()
            for a in arc_list:
                if a in seen:
                    raise InvalidArc(f"duplicate citation arc {a}")
                seen.add(a)
        return cls(n, arc_set)

    @cached_property
    def in_lists(self) -> tuple[tuple[int, ...], ...]:
        """in_lists[v] = sorted tuple of articles citing v."""
        acc: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            acc[v].append(u)
        return tuple(tuple(sorted(c)) for c in acc)

    @cached_property
    def out_lists(self) -> tuple[tuple[int, ...], ...]:
        acc: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            acc[u].append(v)
        return tuple(tuple(sorted(c)) for c in acc)

    @cached_property
    def indeg(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.in_lists)

    @cached_property
    def citer_mask(self) -> tuple[int, ...]:
        """citer_mask[v] = bitmask over article ids of the citers of v."""
        masks = [0] * self.n
        for u, v in self.arcs:
            masks[v] |= 1 << u
        return tuple(masks)

    def in_citers(self, v: int) -> tuple[int, ...]:
        return self.in_lists[v]

    def out_targets(self, v: int) -> tuple[int, ...]:
        return self.out_lists[v]


@dataclass(frozen=True)
class CompatibilityGraph:
    """Undirected graph on the article universe; an edge marks an allowed merge.

    Edges are stored as (u, v) with u < v.
    """

    n: int
    edges: frozenset[tuple[int, int]]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "CompatibilityGraph":
        norm = []
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidArc(f"loop compatibility edge on article {u}")
            norm.append((u, v) if u < v else (v, u))
        edge_set = frozenset(norm)
        if len(edge_set) != len(norm):
            raise InvalidArc("duplicate compatibility edge")
        return cls(n, edge_set)

    @classmethod
    def clique(cls, n: int, members: Iterable[int]) -> "CompatibilityGraph":
        """Complete compatibility on `members` (no edges elsewhere)."""
        mem = sorted(set(members))
        return cls(n, frozenset(
            (mem[i], mem[j]) for i in range(len(mem)) for j in range(i + 1, len(mem))
        ))

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        acc: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            acc[u].add(v)
            acc[v].add(u)
        return tuple(frozenset(s) for s in acc)

    @cached_property
    def adj_mask(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def components(self) -> list[frozenset[int]]:
        """Connected components of the whole universe, sorted by smallest member."""
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            stack = [start]
            seen[start] = True
            comp = []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(frozenset(comp))
        return comps

    def is_clique(self, members: Iterable[int]) -> bool:
        mem = list(members)
        return all(
            mem[j] in self.adj[mem[i]]
            for i in range(len(mem))
            for j in range(i + 1, len(mem))
        )


@dataclass(frozen=True)
class ManipulationInstance:
    """One decision problem: can W be partitioned, complying with G, so that
    the resulting profile has H-index at least h?

    `k`, when present, caps the number of merges (the cautious variant).
    `h` may be None for instances built from raw profiles, where the caller
    picks the solve mode later.
    """

    D: CitationGraph
    G: CompatibilityGraph
    W: frozenset[int]
    h: Optional[int] = None
    k: Optional[int] = None

    @property
    def n(self) -> int:
        return self.D.n

    @cached_property
    def w_mask(self) -> int:
        m = 0
        for v in self.W:
            m |= 1 << v
        return m


@dataclass(frozen=True)
class Partition:
    """A partition of the own-article set; parts of size >= 2 are merged articles.

    Canonical form: parts ordered by smallest member, members ascending.
    """

    parts: tuple[tuple[int, ...], ...]

    @classmethod
    def from_parts(cls, parts: Iterable[Iterable[int]]) -> "Partition":
        canon = []
        seen: set[int] = set()
        for part in parts:
            members = tuple(sorted(set(int(v) for v in part)))
            if not members:
                raise EmptyPart("partition contains an empty part")
            overlap = seen.intersection(members)
            if overlap:
                raise InvalidPartition(f"articles {sorted(overlap)} appear in two parts")
            seen.update(members)
            canon.append(members)
        canon.sort(key=lambda p: p[0])
        return cls(tuple(canon))

    @classmethod
    def singletons(cls, members: Iterable[int]) -> "Partition":
        return cls(tuple((v,) for v in sorted(set(members))))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    @cached_property
    def universe(self) -> frozenset[int]:
        return frozenset(v for part in self.parts for v in part)

    def merge_count(self) -> int:
        return sum(len(p) - 1 for p in self.parts)


def merge_count(partition: Partition) -> int:
    """Number of pairwise merges needed to form the partition: sum of |P|-1."""
    return partition.merge_count()


def validate_instance(inst: ManipulationInstance) -> list[str]:
    """Check every structural invariant; raise the first violation found.

    Returns a list of warnings for oddities that are legal but usually
    indicate bad data (currently: citation arcs between two non-own
    articles, which never influence any measure).
    """
    n = inst.D.n
    if inst.G.n != n:
        raise OutOfRangeId(
            f"citation graph has {n} articles but compatibility graph has {inst.G.n}"
        )
    for u, v in inst.D.arcs:
        if u == v:
            raise InvalidArc(f"article {u} cites itself")
        if not (0 <= u < n and 0 <= v < n):
            raise OutOfRangeId(f"citation arc ({u}, {v}) outside universe 0..{n - 1}")
    for u, v in inst.G.edges:
        if not (0 <= u < n and 0 <= v < n):
            raise OutOfRangeId(f"compatibility edge ({u}, {v}) outside universe 0..{n - 1}")
    for w in inst.W:
        if not isinstance(w, int) or isinstance(w, bool):
            raise WNotSubset(f"own-article set contains non-id {w!r}")
        if w < 0:
            raise WNotSubset(f"own-article set contains negative id {w}")
        if w >= n:
            raise OutOfRangeId(f"own-article set contains id {w} >= {n}")
    if inst.h is not None and inst.h < 0:
        raise InstanceError(f"target H-index must be non-negative, got {inst.h}")
    if inst.k is not None and inst.k < 0:
        raise InstanceError(f"merge budget must be non-negative, got {inst.k}")
    warnings = []
    outside = sum(1 for u, v in inst.D.arcs if u not in inst.W and v not in inst.W)
    if outside:
        warnings.append(
            f"{outside} citation arc(s) between non-own articles; "
            "they never affect any citation measure"
        )
    return warnings


def sum_citations(D: CitationGraph, part: Iterable[int]) -> int:
    """Total citations of the part's members, internal citations included."""
    members = list(part)
    if not members:
        raise EmptyPart("measure of an empty part")
    return sum(D.indeg[v] for v in members)


def union_citations(D: CitationGraph, part: Iterable[int]) -> int:
    """Number of distinct articles citing at least one member of the part."""
    members = list(part)
    if not members:
        raise EmptyPart("measure of an empty part")
    mask = 0
    for v in members:
        mask |= D.citer_mask[v]
    return mask.bit_count()


def fused_citations(
    D: CitationGraph,
    W: frozenset[int],
    partition: Partition,
    part: Iterable[int],
) -> int:
    """Distinct non-own citers of the part, plus one per other part citing it.

    Citations between members of the part itself never count.
    """
    members = frozenset(part)
    target = None
    for p in partition.parts:
        if frozenset(p) == members:
            target = p
            break
    if target is None:
        raise PartNotInPartition(f"part {sorted(members)} not in partition")
    w_mask = 0
    for v in W:
        w_mask |= 1 << v
    ext = 0
    for v in target:
        ext |= D.citer_mask[v] & ~w_mask
    count = ext.bit_count()
    for other in partition.parts:
        if other is target:
            continue
        if any(t in members for u in other for t in D.out_lists[u]):
            count += 1
    return count


def measure_value(
    D: CitationGraph,
    W: frozenset[int],
    partition: Partition,
    part: tuple[int, ...],
    measure: Measure,
) -> int:
    if measure is Measure.SUM:
        return sum_citations(D, part)
    if measure is Measure.UNION:
        return union_citations(D, part)
    return fused_citations(D, W, partition, part)


def h_index(values: Iterable[int]) -> int:
    """Largest h such that at least h of the values are >= h."""
    ordered = sorted(values, reverse=True)
    best = 0
    for i, v in enumerate(ordered):
        if v >= i + 1:
            best = i + 1
        else:
            break
    return best


def partition_h_index(
    D: CitationGraph,
    W: frozenset[int],
    partition: Partition,
    measure: Measure,
) -> int:
    """H-index of a merged profile: largest h with at least h parts of value >= h."""
    if partition.universe != W:
        raise InvalidPartition(
            "partition does not cover exactly the own-article set"
        )
    if not partition.parts:
        return 0
    if measure is Measure.FUSED:
        values = _fused_values(D, W, partition)
    elif measure is Measure.SUM:
        values = [sum_citations(D, p) for p in partition.parts]
    else:
        values = [union_citations(D, p) for p in partition.parts]
    return h_index(values)


def _fused_values(D: CitationGraph, W: frozenset[int], partition: Partition) -> list[int]:
    """Fused measure of every part in one sweep over the arcs."""
    w_mask = 0
    for v in W:
        w_mask |= 1 << v
    part_of: dict[int, int] = {}
    for i, part in enumerate(partition.parts):
        for v in part:
            part_of[v] = i
    values = []
    for part in partition.parts:
        ext = 0
        for v in part:
            ext |= D.citer_mask[v] & ~w_mask
        values.append(ext.bit_count())
    seen: set[int] = set()
    np = len(partition.parts)
    for u, v in D.arcs:
        pu = part_of.get(u)
        pv = part_of.get(v)
        if pu is None or pv is None or pu == pv:
            continue
        key = pu * np + pv
        if key not in seen:
            seen.add(key)
            values[pv] += 1
    return values


def complies(G: CompatibilityGraph, partition: Partition) -> bool:
    """True iff every part induces a clique in the compatibility graph."""
    return all(G.is_clique(part) for part in partition.parts)


def singleton_h_index(D: CitationGraph, W: frozenset[int], measure: Measure) -> int:
    """H-index of the unmerged profile: the baseline every manipulation starts from."""
    if not W:
        return 0
    return partition_h_index(D, W, Partition.singletons(W), measure)
