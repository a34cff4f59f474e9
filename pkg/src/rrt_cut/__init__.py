"""Isolating several nodes in random recursive trees by random edge removal.

The package provides three mutually cross-checking computation paths for the
number of cuts needed to isolate a set of target nodes:

* Monte Carlo simulation of the edge-removal process (``simulate``),
* exact dynamic programming over the distributional recurrences
  (``distributions``), driven by closed-form splitting probabilities
  (``splitting``),
* an exact formal-power-series realization of the associated generating
  functions (``series``),

plus the closed-form limit-law targets (``limits``) and a per-tree
exact-process oracle (``cutting``).
"""

from rrt_cut.trees import RecursiveTree, grow_random, enumerate_all
from rrt_cut.cutting import CutRecord, isolate, select_labels, exact_pmf_for_tree
from rrt_cut.distributions import ExactPmf, pmf_R, pmf_L, pmf_Y

__all__ = [
    "RecursiveTree",
    "grow_random",
    "enumerate_all",
    "CutRecord",
    "isolate",
    "select_labels",
    "exact_pmf_for_tree",
    "ExactPmf",
    "pmf_R",
    "pmf_L",
    "pmf_Y",
]

__version__ = "0.1.0"
