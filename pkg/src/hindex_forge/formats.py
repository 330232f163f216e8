"""Instance and profile JSON, plus profile ingestion.

Instance schema::

    {"n": int, "own": [ids], "citations": [[u, v], ...],
     "compat_edges": [[u, v], ...] | "compat": "clique",
     "h": int?, "k": int?}

"compat": "clique" means complete compatibility on the own articles.  The
writer always emits sorted `compat_edges`, sorted keys and compact
separators, so `write(parse(x))` is byte-identical for canonical input.

Profile schema::

    {"articles": [{"key": str, "title": str, "own": bool}, ...],
     "citations": [["citing-key", "cited-key"], ...]}

Keys map to dense article ids in sorted-key order, which keeps the mapping
stable across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

from .compat import Threshold, build_compat_graph, tokenize_title
from .model import (
    CitationGraph,
    CompatibilityGraph,
    InvalidArc,
    ManipulationInstance,
    validate_instance,
)


class SchemaError(ValueError):
    """Shape violation in an instance or profile document, with its JSON path."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class DuplicateKey(ValueError):
    """Two profile articles share an external key."""


class DanglingCitation(ValueError):
    """A profile citation references an unknown article key."""


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise SchemaError(path, message)


def _int_at(value, path: str, minimum: int = 0) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool), path, "expected an integer")
    _expect(value >= minimum, path, f"expected an integer >= {minimum}")
    return value


def _pairs_at(value, path: str) -> list[tuple[int, int]]:
    _expect(isinstance(value, list), path, "expected a list of [u, v] pairs")
    out = []
    for i, item in enumerate(value):
        here = f"{path}[{i}]"
        _expect(isinstance(item, list) and len(item) == 2, here, "expected a [u, v] pair")
        out.append((_int_at(item[0], f"{here}[0]"), _int_at(item[1], f"{here}[1]")))
    return out


def instance_from_dict(doc: dict) -> ManipulationInstance:
    _expect(isinstance(doc, dict), "$", "expected a JSON object")
    _expect("n" in doc, "$.n", "missing required key")
    n = _int_at(doc["n"], "$.n")
    _expect("own" in doc, "$.own", "missing required key")
    _expect(isinstance(doc["own"], list), "$.own", "expected a list of article ids")
    own = frozenset(_int_at(v, f"$.own[{i}]") for i, v in enumerate(doc["own"]))
    _expect("citations" in doc, "$.citations", "missing required key")
    arcs = _pairs_at(doc["citations"], "$.citations")

    has_edges = "compat_edges" in doc
    has_clique = doc.get("compat") == "clique"
    if "compat" in doc and doc["compat"] != "clique":
        raise SchemaError("$.compat", 'the only supported value is "clique"')
    _expect(has_edges or has_clique, "$.compat_edges",
            'missing: provide "compat_edges" or "compat": "clique"')
    _expect(not (has_edges and has_clique), "$.compat_edges",
            'provide either "compat_edges" or "compat": "clique", not both')
    if has_clique:
        G = CompatibilityGraph.clique(n, own)
    else:
        G = CompatibilityGraph.from_edges(n, _pairs_at(doc["compat_edges"], "$.compat_edges"))

    h = None
    if doc.get("h") is not None:
        h = _int_at(doc["h"], "$.h")
    k = None
    if doc.get("k") is not None:
        k = _int_at(doc["k"], "$.k")

    inst = ManipulationInstance(
        D=CitationGraph.from_arcs(n, arcs), G=G, W=own, h=h, k=k
    )
    validate_instance(inst)
    return inst


def instance_to_dict(inst: ManipulationInstance) -> dict:
    doc = {
        "n": inst.n,
        "own": sorted(inst.W),
        "citations": [list(a) for a in sorted(inst.D.arcs)],
        "compat_edges": [list(e) for e in sorted(inst.G.edges)],
    }
    if inst.h is not None:
        doc["h"] = inst.h
    if inst.k is not None:
        doc["k"] = inst.k
    return doc


def parse_instance(text: str) -> ManipulationInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from None
    return instance_from_dict(doc)


def write_instance(inst: ManipulationInstance) -> str:
    return json.dumps(instance_to_dict(inst), sort_keys=True, separators=(",", ":")) + "\n"


@dataclass(frozen=True)
class ProfileArticle:
    key: str
    title: str
    own: bool


@dataclass(frozen=True)
class ProfileRecord:
    """A crawled publication profile: keyed articles plus citation pairs."""

    articles: tuple[ProfileArticle, ...]
    citations: tuple[tuple[str, str], ...]


def profile_from_dict(doc: dict) -> ProfileRecord:
    _expect(isinstance(doc, dict), "$", "expected a JSON object")
    _expect("articles" in doc, "$.articles", "missing required key")
    _expect(isinstance(doc["articles"], list), "$.articles", "expected a list")
    articles = []
    for i, item in enumerate(doc["articles"]):
        here = f"$.articles[{i}]"
        _expect(isinstance(item, dict), here, "expected an object")
        for key in ("key", "title", "own"):
            _expect(key in item, f"{here}.{key}", "missing required key")
        _expect(isinstance(item["key"], str), f"{here}.key", "expected a string")
        _expect(isinstance(item["title"], str), f"{here}.title", "expected a string")
        _expect(isinstance(item["own"], bool), f"{here}.own", "expected a boolean")
        articles.append(ProfileArticle(item["key"], item["title"], item["own"]))
    _expect("citations" in doc, "$.citations", "missing required key")
    _expect(isinstance(doc["citations"], list), "$.citations", "expected a list")
    citations = []
    for i, item in enumerate(doc["citations"]):
        here = f"$.citations[{i}]"
        _expect(
            isinstance(item, list) and len(item) == 2
            and all(isinstance(x, str) for x in item),
            here, "expected a [citing-key, cited-key] pair of strings",
        )
        citations.append((item[0], item[1]))
    return ProfileRecord(tuple(articles), tuple(citations))


def profile_to_dict(profile: ProfileRecord) -> dict:
    return {
        "articles": [
            {"key": a.key, "title": a.title, "own": a.own} for a in profile.articles
        ],
        "citations": [list(c) for c in profile.citations],
    }


def parse_profile(text: str) -> ProfileRecord:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from None
    return profile_from_dict(doc)


def write_profile(profile: ProfileRecord) -> str:
    return json.dumps(profile_to_dict(profile), sort_keys=True, separators=(",", ":")) + "\n"


def ingest_profile(
    profile: ProfileRecord,
    t: Union[Threshold, str, float, int],
) -> ManipulationInstance:
    """Turn a profile into an instance: dense ids in sorted-key order,
    citations as arcs, compatibility from title similarity at threshold t.

    Duplicate citation pairs collapse silently (crawled data repeats them);
    a self-citation is rejected.  The target H-index is left unset.
    """
    keys = [a.key for a in profile.articles]
    if len(set(keys)) != len(keys):
        dupes = sorted({k for k in keys if keys.count(k) > 1})
        raise DuplicateKey(f"duplicate article key(s): {dupes}")
    order = sorted(profile.articles, key=lambda a: a.key)
    index = {a.key: i for i, a in enumerate(order)}
    n = len(order)
    arcs = set()
    for citing, cited in profile.citations:
        if citing not in index:
            raise DanglingCitation(f"citation from unknown key {citing!r}")
        if cited not in index:
            raise DanglingCitation(f"citation to unknown key {cited!r}")
        u, v = index[citing], index[cited]
        if u == v:
            raise InvalidArc(f"article {citing!r} cites itself")
        arcs.add((u, v))
    own = frozenset(i for i, a in enumerate(order) if a.own)
    tokens = {i: tokenize_title(a.title) for i, a in enumerate(order) if a.own}
    return ManipulationInstance(
        D=CitationGraph(n, frozenset(arcs)),
        G=build_compat_graph(n, own, tokens, t),
        W=own,
    )
