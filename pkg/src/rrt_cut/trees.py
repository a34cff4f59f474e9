"""Recursive trees: representation, uniform generation, enumeration.

A recursive tree of size n is a rooted unordered tree on labels 1..n in which
labels increase along every root-to-node path; there are (n-1)! of them.  The
parent-array encoding stores parent(i) for i = 2..n, node 1 being the root.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator

# 9! = 362880 trees; enumeration beyond this is pointless for verification.
MAX_ENUM_N = 10


class BudgetExceededError(Exception):
    """Raised when an exact computation would exceed its enumeration cap."""


@dataclass(frozen=True)
class RecursiveTree:
    """Increasingly labelled rooted tree in parent-array encoding.

    ``parents[j]`` is the parent of node ``j + 2``, so the tuple has length
    ``n - 1``.  Values are immutable; instances are safe to share.
    """

    n: int
    parents: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("tree size must be >= 1")
        if len(self.parents) != self.n - 1:
            raise ValueError(
                f"expected {self.n - 1} parent entries, got {len(self.parents)}"
            )

    def parent(self, v: int) -> int:
        if not 2 <= v <= self.n:
            raise ValueError(f"node {v} has no parent entry")
        return self.parents[v - 2]

    def edges(self) -> list[tuple[int, int]]:
        """All (parent, child) pairs."""
        return [(self.parents[v - 2], v) for v in range(2, self.n + 1)]

    def children_map(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for u, v in self.edges():
            ch[u].append(v)
        return ch

    def validate(self) -> str | None:
        """None if the tree is a valid recursive tree, else a description."""
        for v in range(2, self.n + 1):
            p = self.parents[v - 2]
            if not 1 <= p <= v - 1:
                return f"parent({v}) = {p} is not in 1..{v - 1}"
        return None

    def to_text(self) -> str:
        """Canonical comma-separated parent list "p2,p3,...,pn" (n=1: "")."""
        return ",".join(str(p) for p in self.parents)

    @classmethod
    def from_text(cls, text: str) -> "RecursiveTree":
        parts = tuple(int(p) for p in text.split(",")) if text else ()
        return cls(n=len(parts) + 1, parents=parts)


def grow_random(n: int, rng: random.Random) -> RecursiveTree:
    """Uniform random recursive tree via the node-attachment growth rule.

    Node i attaches to a uniform node of the current tree of size i - 1,
    which makes every one of the (n-1)! trees equally likely.
    """
    if n < 1:
        raise ValueError("tree size must be >= 1")
    parents = tuple(rng.randrange(1, i) for i in range(2, n + 1))
    return RecursiveTree(n=n, parents=parents)


def enumerate_all(n: int) -> Iterator[RecursiveTree]:
    """Yield all (n-1)! recursive trees of size n once each.

    Order is lexicographic over the parent vector (parent(2), ..., parent(n)).
    """
    if n < 1:
        raise ValueError("tree size must be >= 1")
    if n > MAX_ENUM_N:
        raise BudgetExceededError(
            f"enumeration capped at n <= {MAX_ENUM_N} (requested {n})"
        )
    for parents in itertools.product(*(range(1, i) for i in range(2, n + 1))):
        yield RecursiveTree(n=n, parents=parents)
