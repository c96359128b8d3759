"""Head-array trees: structural predicates, weights, and JSON records.

A tree over ``n`` words is a length-``n`` integer array ``heads`` where
``heads[i-1] = j`` encodes the edge ``j -> i`` (word positions are 1-based,
0 is ROOT).  A *spanning* tree lets any number of words attach to ROOT; a
*dependency* tree has exactly one ROOT attachment.
"""

from __future__ import annotations

import json

import numpy as np

from .graph import ROOT, WeightedGraph


def as_heads(heads) -> np.ndarray:
    h = np.asarray(heads, dtype=np.int64)
    if h.ndim != 1:
        raise ValueError("heads must be a 1-d sequence")
    return h


def is_spanning_tree(heads, n: int | None = None) -> bool:
    """True iff following parent pointers from every word terminates at ROOT."""
    h = as_heads(heads)
    if n is None:
        n = len(h)
    if len(h) != n or n < 1:
        return False
    if np.any(h < 0) or np.any(h > n):
        return False
    ok = np.zeros(n + 1, dtype=bool)
    ok[ROOT] = True
    on_path = np.zeros(n + 1, dtype=bool)
    for start in range(1, n + 1):
        u = start
        path = []
        while not ok[u]:
            if on_path[u] or h[u - 1] == u:
                return False  # cycle (or self-loop)
            on_path[u] = True
            path.append(u)
            u = int(h[u - 1])
        for v in path:
            on_path[v] = False
            ok[v] = True
    return True


def is_dependency_tree(heads, n: int | None = None) -> bool:
    """Spanning tree with exactly one edge out of ROOT."""
    h = as_heads(heads)
    if n is None:
        n = len(h)
    return is_spanning_tree(h, n) and int(np.count_nonzero(h == ROOT)) == 1


def tree_weight(g: WeightedGraph, heads) -> float:
    """Product of the weights of the tree's edges."""
    h = as_heads(heads)
    if len(h) != g.n:
        raise ValueError(f"tree has {len(h)} words but graph has {g.n}")
    return float(np.prod(g.weights[h, np.arange(1, g.n + 1)]))


def log_tree_weight(g: WeightedGraph, heads) -> float:
    """Sum of log edge weights; -inf when any edge weight is 0.

    Preferred over ``log(tree_weight(...))`` for long sentences where the
    product underflows.
    """
    h = as_heads(heads)
    if len(h) != g.n:
        raise ValueError(f"tree has {len(h)} words but graph has {g.n}")
    w = g.weights[h, np.arange(1, g.n + 1)]
    if np.any(w == 0):
        return float("-inf")
    return float(np.sum(np.log(w)))


def tree_record(heads, **extra) -> dict:
    """Build a JSON-ready record ``{"heads": [...], **extra}``.

    Extra fields (``weight``, ``logprob``, ...) are passed through; None
    values are dropped.
    """
    rec = {"heads": [int(h) for h in heads]}
    for key, value in extra.items():
        if value is not None:
            rec[key] = value
    return rec


def write_tree(heads, **extra) -> str:
    """One JSON line for a tree record."""
    return json.dumps(tree_record(heads, **extra))


def read_tree(line: str | bytes) -> np.ndarray:
    """Parse a tree record; returns the heads array (extra fields ignored)."""
    doc = json.loads(line)
    if not isinstance(doc, dict) or "heads" not in doc:
        raise ValueError('tree record must be an object with "heads"')
    return as_heads(doc["heads"])
