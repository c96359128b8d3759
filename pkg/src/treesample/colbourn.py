"""Ancestral tree sampling as an autoregressive state machine.

Heads are chosen word by word from exact conditional marginals.  The state
carries the constrained weight matrix W, its single-root Laplacian L, and
B = inv(L)^T.  Fixing word i's head changes exactly one column of W and
therefore one column of L, so B is maintained with a rank-one
(Sherman-Morrison) update in O(n^2) instead of a fresh O(n^3) inversion.

The update denominator 1 + u^T B[:, i-1] equals the marginal probability of
the chosen edge; a near-zero denominator means a numerically impossible
transition and triggers a fresh inversion instead of the rank-one step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDistributionError
from .graph import WeightedGraph, _require_valid
from .mtt import laplacian_single_root, transition_column
from .stats import draw_categorical

logger = logging.getLogger(__name__)

_RESCUE_DENOMINATOR = 1e-10
_DRIFT_TOLERANCE = 1e-8
_PROB_FLOOR = 1e-12  # below this a conditional marginal is cancellation noise, not mass


@dataclass(frozen=True)
class ColbournState:
    """Immutable sampling state; transitions return new states.

    ``i`` is the next word position (1..n+1; n+1 marks a completed tree).
    Invariant: B @ L.T is the identity (restored by rescue re-inversion when
    the rank-one updates drift).
    """

    i: int
    W: np.ndarray = field(repr=False)
    L: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.W.shape[0] - 1

    @property
    def done(self) -> bool:
        return self.i > self.n


def _inverse_transpose(lap: np.ndarray) -> np.ndarray:
    try:
        b = np.linalg.inv(lap).T
    except np.linalg.LinAlgError as exc:
        raise DegenerateDistributionError("singular single-root Laplacian") from exc
    if not np.all(np.isfinite(b)):
        raise DegenerateDistributionError("singular single-root Laplacian")
    return b


def initial_state(g: WeightedGraph) -> ColbournState:
    """State before any head is fixed; the one O(n^3) inversion per graph."""
    _require_valid(g)
    lap = laplacian_single_root(g.weights)
    return ColbournState(i=1, W=g.weights.copy(), L=lap, B=_inverse_transpose(lap))


def transition_probs(s: ColbournState) -> np.ndarray:
    """Exact head distribution of word ``s.i`` given all previously fixed edges.

    Length n+1; entry j is the conditional marginal of the edge j -> i.
    Entries within float noise of zero (|p| < 1e-12 of the column mass) are
    clamped to 0 and the vector renormalized: structurally impossible heads
    come out of the inverse as cancellation residue, and treating that
    residue as support would let downstream samplers pin impossible edges.
    """
    if s.done:
        raise ValueError("state is final; no transitions remain")
    col = transition_column(s.W, s.B, s.i)
    np.maximum(col, 0.0, out=col)
    total = col.sum()
    if not total > 0:
        raise DegenerateDistributionError(f"word {s.i} has no available head")
    col[col < _PROB_FLOOR * total] = 0.0
    return col / col.sum()


def _laplacian_column(w: np.ndarray, i: int) -> np.ndarray:
    """Column i-1 of the single-root Laplacian of ``w``, computed directly."""
    n = w.shape[0] - 1
    c = i - 1
    col = np.empty(n)
    col[0] = w[0, i]
    col[1:] = -w[2:, i]
    if c >= 1:
        col[c] = w[1:, i].sum()
    return col


def transit_state(s: ColbournState, j: int) -> ColbournState:
    """Fix edge j -> i: zero the other incoming edges of word i, update B.

    Uses the standard subtractive Sherman-Morrison form on the changed
    Laplacian column; falls back to a fresh inversion when the denominator
    vanishes or the periodic drift check fails.
    """
    if s.done:
        raise ValueError("state is final; no transitions remain")
    i = s.i
    n = s.n
    if not 0 <= j <= n or j == i:
        raise ValueError(f"head {j} is not a legal choice for word {i}")
    if s.W[j, i] == 0:
        raise ValueError(f"edge {j} -> {i} has zero weight (zero-probability transition)")
    c = i - 1
    w_new = s.W.copy()
    keep = w_new[j, i]
    w_new[:, i] = 0.0
    w_new[j, i] = keep

    new_col = _laplacian_column(w_new, i)
    l_new = s.L.copy()
    l_new[:, c] = new_col

    u = new_col - s.L[:, c]
    b_col = s.B[:, c]
    denom = 1.0 + u @ b_col
    if abs(denom) < _RESCUE_DENOMINATOR:
        logger.debug("rank-one denominator %.3e at word %d; re-inverting", denom, i)
        b_new = _inverse_transpose(l_new)
    else:
        b_new = s.B - np.outer(b_col, u @ s.B) / denom
        if i % max(2, n // 2) == 0 and _has_drifted(b_new, l_new, i):
            logger.debug("inverse drift detected at word %d; re-inverting", i)
            b_new = _inverse_transpose(l_new)
    return ColbournState(i=i + 1, W=w_new, L=l_new, B=b_new)


def _has_drifted(b: np.ndarray, lap: np.ndarray, i: int) -> bool:
    # one row of B @ L.T against the identity; amortized O(n) per transition
    r = (i - 1) % lap.shape[0]
    row = b[r] @ lap.T
    row[r] -= 1.0
    return bool(np.abs(row).max() > _DRIFT_TOLERANCE)


def colbourn_sample(
    g: WeightedGraph, rng: np.random.Generator, initial: ColbournState | None = None
) -> np.ndarray:
    """Exact dependency-tree sample in O(n^3).

    Pass a precomputed ``initial_state(g)`` when drawing many samples from
    one graph; states are immutable so sharing is safe.
    """
    state = initial if initial is not None else initial_state(g)
    if state.i != 1:
        raise ValueError("initial state must start at word 1")
    n = state.n
    heads = np.empty(n, dtype=np.int64)
    for i in range(1, n + 1):
        probs = transition_probs(state)
        j = draw_categorical(probs, rng)
        heads[i - 1] = j
        if i < n:
            state = transit_state(state, j)
    return heads
