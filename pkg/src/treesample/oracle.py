"""Brute-force ground truth by exhaustive enumeration.

Enumerates every head assignment over ``n`` words, keeps the acyclic ones,
and sums tree weights directly.  This is deliberately simple and slow
(capped at n=8); it exists to adjudicate the polynomial-time routes and the
samplers, so nothing here may reuse determinant or sampler code.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDistributionError
from .graph import WeightDistributionSpec, WeightedGraph, _require_valid

MAX_ENUM_WORDS = 8

_CHUNK_ROWS = 1 << 21


@functools.lru_cache(maxsize=None)
def _structures(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All spanning-tree head arrays over n words plus the single-root mask.

    Enumerates the n^n self-loop-free head assignments (in chunks, decoded
    from a mixed-radix odometer) and filters to acyclic ones by pointer
    jumping: squaring the parent map until every surviving pointer that can
    reach ROOT has done so.
    """
    if n < 1 or n > MAX_ENUM_WORDS:
        raise ValueError(f"oracle enumeration supports 1 <= n <= {MAX_ENUM_WORDS}, got {n}")
    cand = np.array([[h for h in range(n + 1) if h != w] for w in range(1, n + 1)], dtype=np.int8)
    place = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
    rounds = max(1, math.ceil(math.log2(n + 1)))
    total = n**n
    kept = []
    for lo in range(0, total, _CHUNK_ROWS):
        hi = min(lo + _CHUNK_ROWS, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        digits = (idx[:, None] // place[None, :]) % n
        heads = cand[np.arange(n)[None, :], digits]
        ptr = np.concatenate([np.zeros((heads.shape[0], 1), np.int8), heads], axis=1)
        for _ in range(rounds):
            ptr = np.take_along_axis(ptr, ptr, axis=1)
        kept.append(heads[~ptr.any(axis=1)])
    heads = np.concatenate(kept, axis=0)
    heads.setflags(write=False)
    is_dep = np.count_nonzero(heads == 0, axis=1) == 1
    is_dep.setflags(write=False)
    return heads, is_dep


def spanning_tree_count(n: int) -> int:
    """(n+1)^(n-1): number of spanning trees of the complete graph."""
    return (n + 1) ** (n - 1)


def dependency_tree_count(n: int) -> int:
    """n^(n-1): spanning trees satisfying the single-root constraint."""
    return n ** (n - 1)


@dataclass(frozen=True)
class ExactDistribution:
    """Exhaustive tree list with exact partitions and probabilities."""

    n: int
    heads: np.ndarray = field(repr=False)  # (num_spanning, n) — every spanning tree
    weights: np.ndarray = field(repr=False)  # phi(t) aligned with heads
    is_dependency: np.ndarray = field(repr=False)
    Z_T: float
    Z_D: float

    @property
    def num_spanning(self) -> int:
        return self.heads.shape[0]

    @property
    def num_dependency(self) -> int:
        return int(np.count_nonzero(self.is_dependency))

    @property
    def support_size(self) -> int:
        """Dependency trees with positive weight (the sampleable support)."""
        return int(np.count_nonzero(self.dependency_weights > 0))

    @property
    def dependency_heads(self) -> np.ndarray:
        return self.heads[self.is_dependency]

    @property
    def dependency_weights(self) -> np.ndarray:
        return self.weights[self.is_dependency]

    @property
    def probs(self) -> np.ndarray:
        """Normalized dependency-tree probabilities, aligned with dependency_heads."""
        if not self.Z_D > 0:
            raise DegenerateDistributionError("Z_D is not positive")
        return self.dependency_weights / self.Z_D

    @property
    def spanning_probs(self) -> np.ndarray:
        if not self.Z_T > 0:
            raise DegenerateDistributionError("Z_T is not positive")
        return self.weights / self.Z_T

    def dependency_table(self) -> dict[tuple[int, ...], float]:
        """Map from head tuple to exact probability, dependency distribution."""
        probs = self.probs
        return {
            tuple(int(h) for h in row): float(p)
            for row, p in zip(self.dependency_heads, probs)
            if p > 0
        }

    def spanning_table(self) -> dict[tuple[int, ...], float]:
        probs = self.spanning_probs
        return {
            tuple(int(h) for h in row): float(p)
            for row, p in zip(self.heads, probs)
            if p > 0
        }

    def tree_probability(self, heads) -> float:
        """Exact p(t) of one dependency tree (0.0 if t has no mass or is not in D)."""
        key = np.asarray(heads, dtype=np.int8)
        match = np.all(self.dependency_heads == key[None, :], axis=1)
        if not match.any():
            return 0.0
        return float(self.probs[match][0])


def _tree_weights(g: WeightedGraph, heads: np.ndarray) -> np.ndarray:
    cols = np.arange(1, g.n + 1)
    out = np.empty(heads.shape[0])
    for lo in range(0, heads.shape[0], _CHUNK_ROWS):
        hi = min(lo + _CHUNK_ROWS, heads.shape[0])
        out[lo:hi] = g.weights[heads[lo:hi].astype(np.intp), cols].prod(axis=1)
    return out


def enumerate_trees(g: WeightedGraph) -> ExactDistribution:
    """Exact distribution over all spanning/dependency trees of ``g`` (n <= 8)."""
    _require_valid(g)
    heads, is_dep = _structures(g.n)
    weights = _tree_weights(g, heads)
    z_t = float(weights.sum())
    z_d = float(weights[is_dep].sum())
    return ExactDistribution(n=g.n, heads=heads, weights=weights, is_dependency=is_dep, Z_T=z_t, Z_D=z_d)


def exact_marginals(dist: ExactDistribution) -> np.ndarray:
    """Edge marginals M[i, j] = sum of p(t) over dependency trees containing i -> j."""
    n = dist.n
    probs = dist.probs
    heads = dist.dependency_heads
    m = np.zeros((n + 1, n + 1))
    cols = np.broadcast_to(np.arange(1, n + 1), heads.shape)
    np.add.at(m, (heads.astype(np.intp).ravel(), cols.ravel()), np.repeat(probs, n))
    return m


def _partition_chunk(
    n: int,
    spec: WeightDistributionSpec,
    seed,
    num_chunks: int,
    chunk_index: int,
    lo: int,
    hi: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Z_T and Z_D for trials [lo, hi) of a batched random-graph simulation.

    Chunk boundaries and per-chunk seeds are derived from (seed, num_chunks,
    chunk_index) only, so results are identical however chunks are scheduled.
    """
    heads, is_dep = _structures(n)
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(num_chunks)[chunk_index])
    w = spec.draw(rng, size=(hi - lo, n + 1, n + 1))
    diag = np.arange(n + 1)
    w[:, diag, diag] = 0.0
    w[:, :, 0] = 0.0
    tw = w[:, heads.astype(np.intp), np.arange(1, n + 1)].prod(axis=2)
    return tw.sum(axis=1), tw[:, is_dep].sum(axis=1)


def _chunk_plan(n: int, trials: int) -> list[tuple[int, int]]:
    per_graph_bytes = spanning_tree_count(n) * n * 8
    batch = max(1, min(4096, (64 << 20) // max(per_graph_bytes, 1)))
    return [(lo, min(lo + batch, trials)) for lo in range(0, trials, batch)]


def partition_samples(n: int, spec: WeightDistributionSpec, trials: int, seed, jobs: int = 1):
    """Exact (Z_T, Z_D) pairs for ``trials`` random graphs; deterministic given seed."""
    if n > MAX_ENUM_WORDS:
        raise ValueError(f"n must be <= {MAX_ENUM_WORDS}")
    plan = _chunk_plan(n, trials)
    z_t = np.empty(trials)
    z_d = np.empty(trials)
    if jobs > 1 and len(plan) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_partition_chunk, n, spec, seed, len(plan), i, lo, hi)
                for i, (lo, hi) in enumerate(plan)
            ]
            for (lo, hi), fut in zip(plan, futures):
                z_t[lo:hi], z_d[lo:hi] = fut.result()
    else:
        for i, (lo, hi) in enumerate(plan):
            z_t[lo:hi], z_d[lo:hi] = _partition_chunk(n, spec, seed, len(plan), i, lo, hi)
    return z_t, z_d


@dataclass(frozen=True)
class RatioSummary:
    """Per-graph ratios of average spanning vs. dependency tree weight."""

    n: int
    spec: WeightDistributionSpec
    trials: int
    ratios: np.ndarray = field(repr=False)
    mean: float
    stddev: float

    def histogram(self, bins: int = 20):
        return np.histogram(self.ratios, bins=bins)


def ratio_simulation(n: int, spec: WeightDistributionSpec, trials: int, seed, jobs: int = 1) -> RatioSummary:
    """Simulate the ratio (Z_T/|T|) / (Z_D/|D|) over random graphs.

    The ratio compares the average spanning-tree weight with the average
    dependency-tree weight; across weight families its mean sits near 1,
    which is what makes rejection from the spanning proposal cheap.
    """
    z_t, z_d = partition_samples(n, spec, trials, seed, jobs=jobs)
    ratios = (z_t / spanning_tree_count(n)) / (z_d / dependency_tree_count(n))
    return RatioSummary(
        n=n,
        spec=spec,
        trials=trials,
        ratios=ratios,
        mean=float(ratios.mean()),
        stddev=float(ratios.std(ddof=1)) if trials > 1 else 0.0,
    )


@dataclass(frozen=True)
class RejectionRatioSummary:
    """Monte-Carlo estimate of E[Z_T/Z_D] with its analytic companions."""

    n: int
    spec: WeightDistributionSpec
    trials: int
    mean: float  # estimated E[Z_T / Z_D]
    weight_ratio_mean: float  # estimated E[w_avg^T / w_avg^D]
    cayley_factor: float  # |T|/|D| = ((n+1)/n)^(n-1)
    analytic_cap: float  # e * weight_ratio_mean, the loose upper bound


def expected_rejection_ratio(
    n: int, spec: WeightDistributionSpec, trials: int, seed, jobs: int = 1
) -> RejectionRatioSummary:
    """Estimate the expected number of spanning-tree draws per accepted dependency tree."""
    z_t, z_d = partition_samples(n, spec, trials, seed, jobs=jobs)
    ratios = z_t / z_d
    w_ratios = (z_t / spanning_tree_count(n)) / (z_d / dependency_tree_count(n))
    w_mean = float(w_ratios.mean())
    return RejectionRatioSummary(
        n=n,
        spec=spec,
        trials=trials,
        mean=float(ratios.mean()),
        weight_ratio_mean=w_mean,
        cayley_factor=((n + 1) / n) ** (n - 1),
        analytic_cap=math.e * w_mean,
    )
