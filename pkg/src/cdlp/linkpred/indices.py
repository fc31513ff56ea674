from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from cdlp.errors import ContractError, InputError
from cdlp.graph.core import Graph, Partition, check_covers, common_neighbors


class AddIndex(str, Enum):
    A = "A"
    CN = "CN"


class RemoveIndex(str, Enum):
    D = "D"
    CN = "CN"


@dataclass(frozen=True, order=True)
class ScoredPair:
    a: int
    b: int
    score: float

    def __post_init__(self):
        if not self.a < self.b:
            raise InputError(f"scored pair must be canonical (a < b), got ({self.a}, {self.b})")
        if not math.isfinite(self.score) or self.score < 0:
            raise InputError(f"score must be finite and non-negative, got {self.score}")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.a, self.b)


def cn_score(g: Graph, a: int, b: int) -> int:
    """Common-neighbours similarity |Γ(a, b)|."""
    return len(common_neighbors(g, a, b))


def a_index(g: Graph, p: Partition, a: int, b: int) -> float:
    """
    Addition score for a same-community non-edge: twice the number of common
    neighbours that share the pair's community, over d(a) + d(b).
    """
    check_covers(g, p)
    shared = common_neighbors(g, a, b)
    if not p.same_community(a, b):
        raise ContractError(f"A index needs a same-community pair, ({a}, {b}) is split")
    if g.has_edge(a, b):
        raise ContractError(f"A index scores non-edges only, ({a}, {b}) is an edge")
    den = g.degree(a) + g.degree(b)
    if den == 0:
        return 0.0
    c = p.community_of(a)
    num = sum(1 for i in shared if p.community_of(i) == c)
    return 2.0 * num / den


def d_index(g: Graph, p: Partition, a: int, b: int) -> float:
    """
    Removal score for a cross-community edge: the larger count of common
    neighbours sitting in C(a) or in C(b), over |Γ(a, b)|. Zero when the pair
    shares no neighbour. Low scores mark likely spurious edges.
    """
    check_covers(g, p)
    shared = common_neighbors(g, a, b)
    if p.same_community(a, b):
        raise ContractError(f"D index needs a cross-community pair, ({a}, {b}) is not")
    if not g.has_edge(a, b):
        raise ContractError(f"D index scores existing edges only, ({a}, {b}) is not an edge")
    if not shared:
        return 0.0
    ca, cb = p.community_of(a), p.community_of(b)
    in_a = sum(1 for i in shared if p.community_of(i) == ca)
    in_b = sum(1 for i in shared if p.community_of(i) == cb)
    return max(in_a, in_b) / len(shared)
