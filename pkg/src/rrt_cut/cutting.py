"""The generalized edge-removal (cutting-down) procedure.

``isolate`` runs the process on one tree: repeatedly remove an edge chosen
uniformly at random among all edges of the current forest, discard any part
that contains no target node, and stop once every target is an isolated
vertex.  ``exact_pmf_for_tree`` is the independent per-tree oracle: it
computes the exact rational distribution of the cut count by recursion over
all edge choices.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from rrt_cut.splitting import Rat
from rrt_cut.trees import BudgetExceededError, RecursiveTree

# Exact recursion over edge choices; state count explodes past this.
MAX_ORACLE_N = 9

LabelSet = tuple[int, ...]


def as_label_set(labels, n: int) -> LabelSet:
    """Validate and normalize a target label collection for a size-n tree."""
    s = tuple(sorted(set(labels)))
    if not s:
        raise ValueError("label set must be non-empty")
    if len(s) != len(tuple(labels)):
        raise ValueError("labels must be distinct")
    if s[0] < 1 or s[-1] > n:
        raise ValueError(f"labels must lie in 1..{n}")
    return s


def select_labels(rule: str, n: int, ell: int, rng: random.Random | None = None) -> LabelSet:
    """Target selection: first -> {1..ell}, last -> {n+1-ell..n},
    random -> uniform ell-subset of {1..n}."""
    if not 1 <= ell <= n:
        raise ValueError(f"need 1 <= ell <= n, got ell={ell}, n={n}")
    if rule == "first":
        return tuple(range(1, ell + 1))
    if rule == "last":
        return tuple(range(n + 1 - ell, n + 1))
    if rule == "random":
        if rng is None:
            raise ValueError("rule 'random' needs an rng")
        return tuple(sorted(rng.sample(range(1, n + 1), ell)))
    raise ValueError(f"unknown rule {rule!r}")


@dataclass(frozen=True)
class Component:
    """One rooted piece of the forest: retained original labels + root."""

    root: int
    nodes: frozenset[int]

    def size(self) -> int:
        return len(self.nodes)


@dataclass
class Forest:
    """Forest state of the process: target-containing components only."""

    tree: RecursiveTree
    targets: frozenset[int]
    components: list[Component]

    @classmethod
    def initial(cls, tree: RecursiveTree, targets: LabelSet) -> "Forest":
        tg = frozenset(as_label_set(targets, tree.n))
        nodes = frozenset(range(1, tree.n + 1))
        return cls(tree=tree, targets=tg, components=[Component(1, nodes)])

    def edges(self) -> list[tuple[int, int]]:
        """Alive edges, in deterministic (child-label) order."""
        out = []
        for comp in self.components:
            for v in sorted(comp.nodes):
                if v != comp.root and self.tree.parent(v) in comp.nodes:
                    out.append((self.tree.parent(v), v))
        return out

    def done(self) -> bool:
        return all(c.size() == 1 for c in self.components)


def _descendants(tree: RecursiveTree, within: frozenset[int], w: int) -> frozenset[int]:
    ch = tree.children_map()
    out = set()
    stack = [w]
    while stack:
        x = stack.pop()
        out.add(x)
        stack.extend(c for c in ch[x] if c in within)
    return frozenset(out)


def cut_step(forest: Forest, edge: tuple[int, int]) -> list[Component]:
    """Remove one edge; keep each side of the split iff it holds a target.

    Mutates the forest and returns the kept parts of the split component.
    """
    u, w = edge
    for i, comp in enumerate(forest.components):
        if w in comp.nodes and w != comp.root and forest.tree.parent(w) == u:
            sub = _descendants(forest.tree, comp.nodes, w)
            rest = comp.nodes - sub
            kept = []
            if rest & forest.targets:
                kept.append(Component(comp.root, rest))
            if sub & forest.targets:
                kept.append(Component(w, sub))
            forest.components[i : i + 1] = kept
            return kept
    raise ValueError(f"edge {edge} is not present in the forest")


@dataclass
class CutRecord:
    """Outcome of one run of the isolation process."""

    cuts: int
    trace: list[dict] | None = field(default=None)

    def trace_jsonl(self) -> str:
        if self.trace is None:
            raise ValueError("run was executed without trace capture")
        return "\n".join(json.dumps(rec) for rec in self.trace)


def isolate(
    tree: RecursiveTree,
    labels: LabelSet,
    rng: random.Random,
    want_trace: bool = False,
) -> CutRecord:
    """Run the edge-removal procedure until all target nodes are isolated.

    Each step picks uniformly among ALL edges currently in the forest (not
    per component).  Reference implementation; the large-n hot path lives in
    ``rrt_cut.simulate``.
    """
    forest = Forest.initial(tree, labels)
    ell = len(forest.targets)
    trace: list[dict] | None = [] if want_trace else None
    cuts = 0
    while not forest.done():
        edges = forest.edges()
        edge = edges[rng.randrange(len(edges))]
        kept = cut_step(forest, edge)
        cuts += 1
        if trace is not None:
            trace.append(
                {"edge": list(edge), "kept": [sorted(c.nodes) for c in kept]}
            )
    assert ell - 1 <= cuts <= tree.n - 1
    return CutRecord(cuts=cuts, trace=trace)


# ---------------------------------------------------------------------------
# Exact per-tree oracle.
#
# A uniform edge choice over the whole forest, conditioned on hitting a given
# component, is uniform over that component's edges, and the total cut count
# is the independent sum of the per-component counts.  The oracle therefore
# recurses per component (uniform over its edges) and convolves the kept
# parts; memoization is on the canonicalized component (edge set over
# retained original labels, root, target subset), which recurs across edge
# orders and across trees.
# ---------------------------------------------------------------------------

_oracle_memo: dict = {}


def _convolve(a: dict[int, object], b: dict[int, object]) -> dict[int, object]:
    out: dict[int, object] = {}
    for m1, p1 in a.items():
        for m2, p2 in b.items():
            m = m1 + m2
            out[m] = out.get(m, 0) + p1 * p2
    return out


def _component_pmf(
    parent: dict[int, int], root: int, nodes: frozenset[int], targets: frozenset[int]
) -> dict[int, object]:
    if len(nodes) == 1:
        return {0: Rat(1, 1)}
    key = (
        root,
        frozenset((parent[v], v) for v in nodes if v != root),
        targets,
    )
    cached = _oracle_memo.get(key)
    if cached is not None:
        return cached
    ch: dict[int, list[int]] = {v: [] for v in nodes}
    for v in nodes:
        if v != root:
            ch[parent[v]].append(v)
    m = len(nodes) - 1
    acc: dict[int, object] = {}
    for w in nodes:
        if w == root:
            continue
        sub = set()
        stack = [w]
        while stack:
            x = stack.pop()
            sub.add(x)
            stack.extend(ch[x])
        sub = frozenset(sub)
        rest = nodes - sub
        pieces = [{0: Rat(1, 1)}]
        if rest & targets:
            pieces.append(_component_pmf(parent, root, rest, targets & rest))
        if sub & targets:
            pieces.append(_component_pmf(parent, w, sub, targets & sub))
        conv = pieces[0]
        for piece in pieces[1:]:
            conv = _convolve(conv, piece)
        w_edge = Rat(1, m)
        for mm, p in conv.items():
            acc[mm + 1] = acc.get(mm + 1, 0) + w_edge * p
    _oracle_memo[key] = acc
    return acc


def exact_pmf_for_tree(tree: RecursiveTree, labels: LabelSet) -> dict[int, object]:
    """Exact rational cut-count distribution for this tree and label set."""
    if tree.n > MAX_ORACLE_N:
        raise BudgetExceededError(
            f"exact oracle capped at n <= {MAX_ORACLE_N} (requested {tree.n})"
        )
    targets = frozenset(as_label_set(labels, tree.n))
    parent = {v: tree.parent(v) for v in range(2, tree.n + 1)}
    pmf = _component_pmf(parent, 1, frozenset(range(1, tree.n + 1)), targets)
    assert sum(pmf.values()) == 1
    return pmf
