import itertools
import json
import random

import pytest

from rrt_cut.cutting import (
    MAX_ORACLE_N,
    Forest,
    as_label_set,
    cut_step,
    exact_pmf_for_tree,
    isolate,
    select_labels,
)
from rrt_cut.splitting import Rat
from rrt_cut.trees import BudgetExceededError, RecursiveTree, enumerate_all, grow_random


def test_label_set_validation():
    assert as_label_set([3, 1], 5) == (1, 3)
    with pytest.raises(ValueError):
        as_label_set([], 5)
    with pytest.raises(ValueError):
        as_label_set([1, 1], 5)
    with pytest.raises(ValueError):
        as_label_set([6], 5)


def test_select_labels_rules():
    assert select_labels("first", 6, 3) == (1, 2, 3)
    assert select_labels("last", 6, 2) == (5, 6)
    rng = random.Random(0)
    chosen = select_labels("random", 6, 4, rng)
    assert len(chosen) == 4 and all(1 <= v <= 6 for v in chosen)
    with pytest.raises(ValueError):
        select_labels("random", 6, 2)


def test_isolate_path_tree_bounds():
    tree = RecursiveTree(n=5, parents=(1, 2, 3, 4))
    rng = random.Random(3)
    for _ in range(50):
        rec = isolate(tree, (1,), rng)
        assert 1 <= rec.cuts <= 4
        rec = isolate(tree, (1, 2, 3, 4, 5), rng)
        assert rec.cuts == 4  # every split keeps both sides


def test_isolate_two_node_tree():
    tree = RecursiveTree(n=2, parents=(1,))
    assert isolate(tree, (1,), random.Random(0)).cuts == 1


def test_trace_schema():
    tree = RecursiveTree(n=4, parents=(1, 1, 2))
    rec = isolate(tree, (1, 4), random.Random(5), want_trace=True)
    lines = rec.trace_jsonl().splitlines()
    assert len(lines) == rec.cuts
    for line in lines:
        d = json.loads(line)
        assert set(d) == {"edge", "kept"}
        u, v = d["edge"]
        assert 1 <= u < v <= 4
        assert 1 <= len(d["kept"]) <= 2


def test_trace_absent_unless_requested():
    tree = RecursiveTree(n=3, parents=(1, 1))
    rec = isolate(tree, (1,), random.Random(1))
    assert rec.trace is None
    with pytest.raises(ValueError):
        rec.trace_jsonl()


def test_cut_step_discards_targetless_side():
    tree = RecursiveTree(n=4, parents=(1, 1, 3))
    forest = Forest.initial(tree, (2,))
    kept = cut_step(forest, (1, 3))
    assert len(kept) == 1
    assert kept[0].nodes == frozenset({1, 2})


def test_oracle_two_and_three_nodes():
    t2 = RecursiveTree(n=2, parents=(1,))
    assert exact_pmf_for_tree(t2, (1,)) == {1: Rat(1, 1)}
    path3 = RecursiveTree(n=3, parents=(1, 2))
    star3 = RecursiveTree(n=3, parents=(1, 1))
    # root of the path: first cut splits at either edge with prob 1/2
    assert exact_pmf_for_tree(path3, (1,)) == {1: Rat(1, 2), 2: Rat(1, 2)}
    assert exact_pmf_for_tree(star3, (1,)) == {2: Rat(1, 1)}


def test_oracle_budget():
    big = RecursiveTree(n=MAX_ORACLE_N + 1, parents=tuple([1] * MAX_ORACLE_N))
    with pytest.raises(BudgetExceededError):
        exact_pmf_for_tree(big, (1,))


def test_oracle_matches_simulation_frequencies():
    tree = RecursiveTree(n=6, parents=(1, 2, 2, 4, 1))
    labels = (2, 5)
    pmf = exact_pmf_for_tree(tree, labels)
    assert sum(pmf.values()) == 1
    rng = random.Random(11)
    m = 20000
    freq: dict[int, int] = {}
    for _ in range(m):
        c = isolate(tree, labels, rng).cuts
        freq[c] = freq.get(c, 0) + 1
    for cuts, p in pmf.items():
        assert abs(freq.get(cuts, 0) / m - float(p)) < 0.02


# --- static mark-order characterization -----------------------------------
#
# Assign distinct marks to the edges and always cut the smallest-mark alive
# edge: that run cuts edge e iff mark(e) < max over targets t of the minimum
# mark on the path from e to t.  This is the identity the compiled kernel
# relies on, checked here against the reference forest process.


def _root_path_edges(tree, v):
    out = set()
    while v != 1:
        out.add(v)  # edge identified by its child label
        v = tree.parent(v)
    return out


def _cuts_by_criterion(tree, targets, marks):
    cuts = 0
    for w in range(2, tree.n + 1):
        u = tree.parent(w)
        pw = _root_path_edges(tree, w)
        pu = _root_path_edges(tree, u)
        best = 0
        for t in targets:
            pt = _root_path_edges(tree, t)
            tw_side = w in (pt | {t})  # t below w iff edge w on t's root path
            path = (pt ^ pw) if tw_side else (pt ^ pu)
            path.discard(w)
            best = max(best, min((marks[e] for e in path), default=float("inf")))
        if marks[w] < best:
            cuts += 1
    return cuts


def _cuts_by_min_mark_process(tree, targets, marks):
    forest = Forest.initial(tree, targets)
    cuts = 0
    while not forest.done():
        edge = min(forest.edges(), key=lambda e: marks[e[1]])
        cut_step(forest, edge)
        cuts += 1
    return cuts


def test_mark_characterization_matches_process():
    rng = random.Random(2024)
    for _ in range(300):
        n = rng.randrange(2, 9)
        tree = grow_random(n, rng)
        ell = rng.randrange(1, n + 1)
        targets = tuple(sorted(rng.sample(range(1, n + 1), ell)))
        order = list(range(2, n + 1))
        rng.shuffle(order)
        marks = {w: i for i, w in enumerate(order)}
        assert _cuts_by_criterion(tree, targets, marks) == _cuts_by_min_mark_process(
            tree, targets, marks
        )


def test_mark_characterization_exhaustive_small():
    for tree in enumerate_all(4):
        for ell in (1, 2, 3):
            for targets in itertools.combinations(range(1, 5), ell):
                for perm in itertools.permutations(range(3)):
                    marks = {w + 2: perm[w] for w in range(3)}
                    assert _cuts_by_criterion(
                        tree, targets, marks
                    ) == _cuts_by_min_mark_process(tree, targets, marks)
