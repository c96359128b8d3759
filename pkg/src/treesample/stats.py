"""Small statistical helpers shared by samplers, tests, and the verifier."""

from __future__ import annotations

import numpy as np
import scipy.stats


def draw_categorical(probs: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-CDF draw from an unnormalized non-negative weight vector."""
    cum = np.cumsum(probs)
    total = cum[-1]
    if not total > 0:
        raise ValueError("all categorical weights are zero")
    idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
    idx = min(idx, len(probs) - 1)
    while probs[idx] == 0:  # guard against landing on a trailing zero bin
        idx -= 1
    return idx


def empirical_counts(samples) -> dict[tuple[int, ...], int]:
    """Histogram of head arrays as tuples."""
    counts: dict[tuple[int, ...], int] = {}
    for heads in samples:
        key = tuple(int(h) for h in heads)
        counts[key] = counts.get(key, 0) + 1
    return counts


def tvd(counts: dict, exact: dict, nsamples: int) -> float:
    """Total variation distance between empirical counts and an exact table."""
    total = 0.0
    for key, c in counts.items():
        total += abs(c / nsamples - exact.get(key, 0.0))
    for key, p in exact.items():
        if key not in counts:
            total += p
    return total / 2.0


def chi_square_gof(counts: dict, exact: dict, nsamples: int, min_expected: float = 5.0):
    """Goodness-of-fit test of empirical counts against exact probabilities.

    Outcomes with expected count below ``min_expected`` are pooled into one
    bin.  Mass observed outside the exact support is unconditional evidence
    against fit (infinite statistic).  Returns (statistic, dof, pvalue).
    """
    outside = sum(c for key, c in counts.items() if key not in exact)
    if outside:
        return float("inf"), max(len(exact) - 1, 1), 0.0
    observed, expected = [], []
    pool_obs = pool_exp = 0.0
    for key, p in exact.items():
        e = p * nsamples
        o = counts.get(key, 0)
        if e < min_expected:
            pool_obs += o
            pool_exp += e
        else:
            observed.append(o)
            expected.append(e)
    if pool_exp > 0:
        observed.append(pool_obs)
        expected.append(pool_exp)
    if len(observed) < 2:
        return 0.0, 0, 1.0
    observed = np.asarray(observed, dtype=float)
    expected = np.asarray(expected, dtype=float)
    expected *= observed.sum() / expected.sum()  # exact table may not sum to 1 after pooling
    stat = float(((observed - expected) ** 2 / expected).sum())
    dof = len(observed) - 1
    return stat, dof, float(scipy.stats.chi2.sf(stat, dof))
