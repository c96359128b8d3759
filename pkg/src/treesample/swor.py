"""Sampling dependency trees without replacement.

Both algorithms run on the autoregressive state machine from
:mod:`treesample.colbourn`, so each of the k draws costs O(n^3) and no pass
over previously drawn samples is ever needed.

* :func:`trie_swor` draws trees one at a time.  A trie over the sampled
  prefixes stores, per node, the probability mass of completed samples
  beneath it (in log space); descents sample from the residual
  (p(edge) - subtracted child mass) / (1 - subtracted node mass).
* :func:`sbs_swor` draws k trees in one parallel beam sweep using
  Gumbel-top-k with max-truncated noise propagation: each child's perturbed
  score is conditioned so the maximum over siblings equals the parent's
  score, which makes the global top-k of completed trees an exact
  without-replacement sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .colbourn import ColbournState, initial_state, transit_state, transition_probs
from .graph import WeightedGraph
from .stats import draw_categorical

_RESIDUAL_EPS = 1e-12  # remaining mass below this means the support is exhausted


@dataclass(frozen=True)
class SworItem:
    """A drawn tree with its exact (unrestricted) log probability."""

    heads: np.ndarray
    logprob: float
    gumbel: float | None = None


@dataclass(frozen=True)
class SworResult:
    """Ordered draws plus a flag set when k exceeded the support size."""

    items: list[SworItem]
    truncated: bool = False

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, idx):
        return self.items[idx]

    def total_probability(self) -> float:
        return float(sum(math.exp(it.logprob) for it in self.items))


class _TrieNode:
    __slots__ = ("children", "log_subtracted")

    def __init__(self):
        self.children: dict[int, _TrieNode] = {}
        self.log_subtracted = -math.inf  # log mass of completed samples beneath


def trie_swor(
    g: WeightedGraph,
    k: int,
    rng: np.random.Generator,
    initial: ColbournState | None = None,
) -> SworResult:
    """k distinct trees, drawn incrementally; draw i is an exact sample from
    p(.) renormalized over trees not among the first i-1.

    Each item's ``logprob`` is the unrestricted log p(t).  If the support
    holds fewer than k trees, all of it is returned with ``truncated`` set.
    ``initial`` may carry a shared ``initial_state(g)`` across calls.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = g.n
    init = initial if initial is not None else initial_state(g)
    if init.i != 1:
        raise ValueError("initial state must start at word 1")
    root = _TrieNode()
    items: list[SworItem] = []
    truncated = False
    for _ in range(k):
        if -np.expm1(root.log_subtracted) <= _RESIDUAL_EPS:
            truncated = True
            break
        state = init
        node = root
        path = [root]
        logp = 0.0
        heads = np.empty(n, dtype=np.int64)
        for i in range(1, n + 1):
            probs = transition_probs(state)
            residual = probs
            if node.children:
                residual = probs.copy()
                for j, child in node.children.items():
                    # residual fraction of this child's unconditional mass;
                    # lm reproduces the leaf accumulation bit-for-bit, so a
                    # fully drawn child's residual is exactly zero
                    lm = logp + math.log(probs[j])
                    residual[j] = probs[j] * max(-math.expm1(child.log_subtracted - lm), 0.0)
            j = draw_categorical(residual, rng)
            heads[i - 1] = j
            logp += math.log(probs[j])
            child = node.children.get(j)
            if child is None:
                child = node.children[j] = _TrieNode()
            node = child
            path.append(node)
            if i < n:
                state = transit_state(state, j)
        for nd in path:
            nd.log_subtracted = float(np.logaddexp(nd.log_subtracted, logp))
        items.append(SworItem(heads=heads, logprob=logp))
    return SworResult(items, truncated)


def _log1mexp(x: np.ndarray) -> np.ndarray:
    """log(1 - exp(x)) for x <= 0, stable near both ends."""
    with np.errstate(divide="ignore", invalid="ignore"):
        near = np.log(-np.expm1(x))  # accurate for x in (-ln 2, 0]
        far = np.log1p(-np.exp(x))  # accurate for x <= -ln 2, exact at -inf
    return np.where(x > -math.log(2.0), near, far)


def _truncated_gumbel(parent: np.ndarray, z: np.ndarray, gum: np.ndarray) -> np.ndarray:
    """Condition children's Gumbels so their row-max equals the parent score.

    Computes -log(exp(-parent) - exp(-z) + exp(-gum)); the row argmax
    (gum == z) comes out as exactly the parent score, zero-probability
    children (gum = -inf) as -inf.
    """
    with np.errstate(invalid="ignore"):
        shifted = -gum + _log1mexp(gum - z)
    return -np.logaddexp(-parent, shifted)


@dataclass(frozen=True)
class BeamItem:
    """Beam entry: a prefix, its exact log probability, and its perturbed score.

    The max-truncation property guarantees ``gumbel`` never exceeds the
    parent's score, so beam search over these scores finds the exact top-k
    completed trees.
    """

    prefix: tuple[int, ...]
    logprob: float
    gumbel: float
    state: ColbournState | None = field(repr=False, default=None)


def sbs_swor(
    g: WeightedGraph,
    k: int,
    rng: np.random.Generator,
    initial: ColbournState | None = None,
) -> SworResult:
    """k distinct trees via stochastic beam search, ordered by descending score.

    The score of each returned item is its perturbed log-probability; taking
    the single top item is an exact sample from p(.), and the full set is a
    Gumbel-top-k without-replacement sample.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = g.n
    init = initial if initial is not None else initial_state(g)
    if init.i != 1:
        raise ValueError("initial state must start at word 1")
    beam = [BeamItem(prefix=(), logprob=0.0, gumbel=float(rng.gumbel()), state=init)]
    for i in range(1, n + 1):
        probs = np.empty((len(beam), n + 1))
        for bi, b in enumerate(beam):
            probs[bi] = transition_probs(b.state)
        with np.errstate(divide="ignore"):
            child_lp = np.log(probs) + np.array([b.logprob for b in beam])[:, None]
        gum = child_lp + rng.gumbel(size=child_lp.shape)
        z = gum.max(axis=1, keepdims=True)
        parent = np.array([b.gumbel for b in beam])[:, None]
        scores = np.where(probs > 0, _truncated_gumbel(parent, z, gum), -np.inf)
        flat = scores.ravel()
        order = np.argsort(-flat, kind="stable")[: min(k, int(np.isfinite(flat).sum()))]
        next_beam = []
        for f in order:
            bi, j = divmod(int(f), n + 1)
            src = beam[bi]
            next_beam.append(
                BeamItem(
                    prefix=src.prefix + (j,),
                    logprob=float(child_lp[bi, j]),
                    gumbel=float(flat[f]),
                    state=transit_state(src.state, j) if i < n else None,
                )
            )
        beam = next_beam
    items = [
        SworItem(heads=np.array(b.prefix, dtype=np.int64), logprob=b.logprob, gumbel=b.gumbel)
        for b in beam
    ]
    return SworResult(items, truncated=len(items) < k)
