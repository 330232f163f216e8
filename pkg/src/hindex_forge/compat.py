"""Title-based compatibility: bag-of-words tokens and Jaccard thresholding.

Two own articles are mergeable when their title-token overlap reaches a
threshold t of the union, compared in exact rational arithmetic so that
edge sets are bit-stable across platforms.  At t=0 the compatibility graph
is complete on the own articles; at t=1 only identical token sets connect.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .model import CompatibilityGraph

log = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[0-9a-z]+")


class MissingTitle(ValueError):
    """An own article has no title tokens to compare."""


def tokenize_title(title: str) -> frozenset[str]:
    """Lowercase, split on runs of non-alphanumeric characters, deduplicate.

    ASCII folding only; anything outside [0-9a-z] separates tokens.
    """
    return frozenset(_TOKEN_RE.findall(title.lower()))


@dataclass(frozen=True)
class TitleTokens:
    article: int
    tokens: frozenset[str]

    @classmethod
    def from_title(cls, article: int, title: str) -> "TitleTokens":
        return cls(article, tokenize_title(title))


@dataclass(frozen=True)
class Threshold:
    """Compatibility threshold t in [0, 1], held as an exact rational."""

    value: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.value <= 1:
            raise ValueError(f"threshold must lie in [0, 1], got {self.value}")

    @classmethod
    def of(cls, t: Union["Threshold", Fraction, int, str, float]) -> "Threshold":
        """Coerce to an exact threshold.

        Strings and floats are read as decimal literals ("0.3" and 0.3 both
        become 3/10), never as binary float approximations.
        """
        if isinstance(t, Threshold):
            return t
        if isinstance(t, float):
            return cls(Fraction(str(t)))
        return cls(Fraction(t))

    def __str__(self) -> str:
        return str(self.value)


def jaccard_compatible(
    tokens_u: frozenset[str], tokens_v: frozenset[str], t: Threshold
) -> bool:
    """True iff |Tu n Tv| >= t * |Tu u Tv|, evaluated exactly.

    Two empty token sets satisfy the inequality (0 >= t*0) and are
    therefore compatible at every threshold.
    """
    inter = len(tokens_u & tokens_v)
    union = len(tokens_u | tokens_v)
    frac = t.value
    return inter * frac.denominator >= frac.numerator * union


def build_compat_graph(
    n: int,
    own: Iterable[int],
    titles: Union[Mapping[int, frozenset[str]], Iterable[TitleTokens]],
    t: Union[Threshold, Fraction, int, str, float],
) -> CompatibilityGraph:
    """Compatibility graph from per-article title tokens.

    Edges are drawn between own articles only; every own article must have
    a token entry.  Empty token sets are legal but logged, since they make
    the article compatible with every other empty-titled article.
    """
    threshold = Threshold.of(t)
    own_ids = sorted(set(own))
    if isinstance(titles, Mapping):
        token_map = {int(a): frozenset(ts) for a, ts in titles.items()}
    else:
        token_map = {tt.article: tt.tokens for tt in titles}
    missing = [a for a in own_ids if a not in token_map]
    if missing:
        raise MissingTitle(f"no title tokens for own article(s) {missing}")
    empty = [a for a in own_ids if not token_map[a]]
    if empty:
        log.warning(
            "articles %s have empty title token sets; they are compatible "
            "with each other at every threshold", empty,
        )
    edges = []
    for i, u in enumerate(own_ids):
        tu = token_map[u]
        for v in own_ids[i + 1:]:
            if jaccard_compatible(tu, token_map[v], threshold):
                edges.append((u, v))
    return CompatibilityGraph(n, frozenset(edges))
