"""Random-walk tree sampling: the loop-erased spanning sampler plus the
single-root variants built on it.

Three dependency-tree samplers share the walk core:

* :func:`wilson_rc` -- picks the ROOT edge by raw weight.  Kept only as a
  bias demonstration: it over-samples root edges whose subtree mass is
  small relative to their raw weight.
* :func:`wilson_marginal` -- picks the ROOT edge from its exact marginal
  (computed once per graph via the single-root Matrix-Tree route), then
  completes the tree on the ROOT-edge-deleted graph.  Unbiased.
* :func:`wilson_reject` -- draws unconstrained spanning trees and keeps the
  first one with a single ROOT edge.  Unbiased; expected attempts Z_T/Z_D.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from . import mtt
from .errors import DegenerateDistributionError, RejectionBudgetError, StuckWalkError
from .graph import ROOT, WeightedGraph, _require_valid

DEFAULT_MAX_ATTEMPTS = 1000


@dataclass(frozen=True)
class SamplerReport:
    """One sampler draw: the tree, the proposal count, and the ROOT attachment."""

    heads: np.ndarray
    attempts: int
    root_edge: int


class _WalkTable:
    """Per-node cumulative head distributions for the head-selection chain.

    The walk at node u picks a predecessor v with probability
    w[v, u] / sum_v' w[v', u]; columns with zero total weight are marked as
    dead ends (stuck walks).  Candidates/cumulatives are plain lists: the
    walk is a tight scalar loop and bisect on lists beats numpy here.
    """

    __slots__ = ("n", "cand", "cum")

    def __init__(self, weights: np.ndarray):
        n = weights.shape[0] - 1
        self.n = n
        self.cand: list[list[int] | None] = [None] * (n + 1)
        self.cum: list[list[float] | None] = [None] * (n + 1)
        for u in range(1, n + 1):
            col = weights[:, u]
            nz = np.flatnonzero(col)
            if nz.size:
                c = np.cumsum(col[nz])
                c /= c[-1]
                c[-1] = 1.0
                self.cand[u] = nz.tolist()
                self.cum[u] = c.tolist()


def _sample_heads(table: _WalkTable, root: int, rng: np.random.Generator) -> list[int]:
    """One loop-erased random walk pass; returns heads indexed by node id.

    Cycles are erased implicitly: re-visiting a node overrides its parent
    pointer, and only the final pointers along the start->tree path are
    committed when the walk attaches.
    """
    n = table.n
    heads = [0] * (n + 1)
    in_tree = bytearray(n + 1)
    in_tree[root] = 1
    rand = rng.random
    cand, cum = table.cand, table.cum
    for start in range(1, n + 1):
        u = start
        while not in_tree[u]:
            cu = cum[u]
            if cu is None:
                raise StuckWalkError(f"node {u} has zero total incoming weight")
            heads[u] = cand[u][bisect_right(cu, rand())]
            u = heads[u]
        u = start
        while not in_tree[u]:
            in_tree[u] = 1
            u = heads[u]
    return heads


def _draw_index(cum: np.ndarray, rng: np.random.Generator) -> int:
    r = rng.random() * cum[-1]
    idx = int(np.searchsorted(cum, r, side="right"))
    return min(idx, len(cum) - 1)


class WilsonSampler:
    """Per-graph caches (walk tables, root distributions) for repeated draws.

    The module-level functions are one-shot conveniences; loops drawing many
    samples from one graph should go through an instance of this class so the
    O(n^3) marginals and the walk tables are built once.
    """

    def __init__(self, g: WeightedGraph):
        _require_valid(g)
        self.graph = g
        self._full_table: _WalkTable | None = None
        self._rootless_table: _WalkTable | None = None
        self._root_weight_cum: np.ndarray | None = None
        self._root_marginal_cum: np.ndarray | None = None

    # -- lazy caches ------------------------------------------------------

    def _full(self) -> _WalkTable:
        if self._full_table is None:
            self._full_table = _WalkTable(self.graph.weights)
        return self._full_table

    def _rootless(self) -> _WalkTable:
        if self._rootless_table is None:
            w = self.graph.weights.copy()
            w[ROOT, :] = 0.0
            self._rootless_table = _WalkTable(w)
        return self._rootless_table

    def _root_by_weight(self, rng) -> int:
        if self._root_weight_cum is None:
            rw = self.graph.weights[ROOT, 1:]
            if not rw.sum() > 0:
                raise DegenerateDistributionError("all ROOT edge weights are zero")
            self._root_weight_cum = np.cumsum(rw)
        return 1 + _draw_index(self._root_weight_cum, rng)

    def _root_by_marginal(self, rng, root_marginals=None) -> int:
        if root_marginals is not None:
            cum = np.cumsum(np.maximum(np.asarray(root_marginals, dtype=float), 0.0))
        else:
            if self._root_marginal_cum is None:
                p = np.maximum(mtt.root_marginals(self.graph), 0.0)
                self._root_marginal_cum = np.cumsum(p)
            cum = self._root_marginal_cum
        return 1 + _draw_index(cum, rng)

    # -- samplers ---------------------------------------------------------

    def spanning(self, rng: np.random.Generator, root: int = ROOT) -> np.ndarray:
        """Spanning tree ~ phi(t) over trees rooted at ``root``.

        With ``root`` = 0 any number of ROOT edges may appear.  With a word
        root the graph's ROOT row must already be deleted (the word's head
        slot is reported as 0, i.e. attached to ROOT).
        """
        table = self._full() if root == ROOT else self._rootless()
        return np.array(_sample_heads(table, root, rng)[1:], dtype=np.int64)

    def rc(self, rng: np.random.Generator) -> SamplerReport:
        """BIASED single-root sampler: ROOT edge chosen by raw weight."""
        r = self._root_by_weight(rng)
        heads = _sample_heads(self._rootless(), r, rng)
        return SamplerReport(np.array(heads[1:], dtype=np.int64), attempts=1, root_edge=r)

    def marginal(self, rng: np.random.Generator, root_marginals=None) -> SamplerReport:
        """Unbiased: ROOT edge ~ its exact marginal, remainder by random walk."""
        r = self._root_by_marginal(rng, root_marginals)
        heads = _sample_heads(self._rootless(), r, rng)
        return SamplerReport(np.array(heads[1:], dtype=np.int64), attempts=1, root_edge=r)

    def reject(self, rng: np.random.Generator, max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> SamplerReport:
        """Unbiased: spanning proposals accepted iff exactly one ROOT edge."""
        table = self._full()
        for attempt in range(1, max_attempts + 1):
            heads = _sample_heads(table, ROOT, rng)
            words = heads[1:]
            if words.count(0) == 1:
                return SamplerReport(
                    np.array(words, dtype=np.int64),
                    attempts=attempt,
                    root_edge=words.index(0) + 1,
                )
        raise RejectionBudgetError(
            f"no single-root tree in {max_attempts} proposals (pathological Z_T/Z_D?)"
        )


def wilson_spanning(g: WeightedGraph, root: int, rng: np.random.Generator) -> np.ndarray:
    return WilsonSampler(g).spanning(rng, root)


def wilson_rc(g: WeightedGraph, rng: np.random.Generator) -> SamplerReport:
    return WilsonSampler(g).rc(rng)


def wilson_marginal(g: WeightedGraph, rng: np.random.Generator, root_marginals=None) -> SamplerReport:
    return WilsonSampler(g).marginal(rng, root_marginals)


def wilson_reject(
    g: WeightedGraph, rng: np.random.Generator, max_attempts: int = DEFAULT_MAX_ATTEMPTS
) -> SamplerReport:
    return WilsonSampler(g).reject(rng, max_attempts)


def bias_demo_graph() -> WeightedGraph:
    """The 3-word counterexample on which raw-weight ROOT sampling is biased.

    Words A=1, B=2, C=3; unit edges R->A, R->C, A->B, A->C, C->B, B->A.
    Exactly three unit-weight dependency trees exist, two with root edge
    R->A and one with R->C, so the true ROOT marginals are (2/3, 0, 1/3)
    while raw ROOT weights split 1:1.  (Of the eight self-loop-free head
    combinations, three are cyclic, leaving five spanning trees.)
    """
    w = np.zeros((4, 4))
    w[0, 1] = 1.0  # R -> A
    w[0, 3] = 1.0  # R -> C
    w[1, 2] = 1.0  # A -> B
    w[1, 3] = 1.0  # A -> C
    w[3, 2] = 1.0  # C -> B
    w[2, 1] = 1.0  # B -> A
    return WeightedGraph(n=3, weights=w)
