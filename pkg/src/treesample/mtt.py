"""Matrix-Tree Theorem kernel: Laplacians, partition functions, marginals.

Two Laplacian variants are used throughout:

* *unconstrained*: ``(degree - W)[1:, 1:]`` with degrees taken over the full
  matrix (ROOT edges included).  Its determinant is the spanning-tree
  partition Z_T.
* *single-root*: degrees taken over word-word edges only, first row replaced
  by the ROOT-edge weights.  Its determinant is the dependency-tree
  partition Z_D, and its inverse-transpose yields edge marginals.

Determinants go through LU-based ``slogdet``; columns are pre-scaled by
their max before factorization (tree probabilities are invariant under
per-word column scaling, so this is pure conditioning hygiene).
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateDistributionError
from .graph import WeightedGraph, _require_valid

_SINGULAR_DET = 1e-300


def laplacian_single_root(g: WeightedGraph | np.ndarray) -> np.ndarray:
    """n x n single-root Laplacian sub-matrix of the weight matrix.

    Degrees count only word-to-word edges; row 0 holds the ROOT-edge
    weights W[0, 1:].
    """
    w = g.weights if isinstance(g, WeightedGraph) else np.asarray(g, dtype=np.float64)
    wp = w[1:, 1:]
    lap = np.diag(wp.sum(axis=0)) - wp
    lap[0, :] = w[0, 1:]
    return lap


def laplacian_spanning(g: WeightedGraph | np.ndarray) -> np.ndarray:
    """n x n unconstrained Laplacian sub-matrix (degrees include ROOT edges)."""
    w = g.weights if isinstance(g, WeightedGraph) else np.asarray(g, dtype=np.float64)
    lap = np.diag(w.sum(axis=0)) - w
    return lap[1:, 1:]


def _column_scales(w: np.ndarray) -> np.ndarray:
    scales = w[:, 1:].max(axis=0)
    scales[scales == 0] = 1.0
    return scales


def _log_partition(g: WeightedGraph, single_root: bool) -> float:
    _require_valid(g)
    w = g.weights.copy()
    scales = _column_scales(w)
    w[:, 1:] /= scales
    lap = laplacian_single_root(w) if single_root else laplacian_spanning(w)
    sign, logabs = np.linalg.slogdet(lap)
    if sign <= 0 or not np.isfinite(logabs) or logabs < np.log(_SINGULAR_DET):
        which = "Z_D" if single_root else "Z_T"
        raise DegenerateDistributionError(f"degenerate distribution: {which} is not positive")
    return float(logabs + np.log(scales).sum())


def log_partition_dependency(g: WeightedGraph) -> float:
    """log Z_D; stable at lengths where the plain determinant overflows."""
    return _log_partition(g, single_root=True)


def log_partition_spanning(g: WeightedGraph) -> float:
    """log Z_T."""
    return _log_partition(g, single_root=False)


def partition_dependency(g: WeightedGraph) -> float:
    """Z_D, the dependency-tree partition function (must be positive)."""
    return float(np.exp(log_partition_dependency(g)))


def partition_spanning(g: WeightedGraph) -> float:
    """Z_T, the spanning-tree partition function."""
    return float(np.exp(log_partition_spanning(g)))


def marginals_from_inverse(w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Edge marginals given B, the inverse-transpose of the single-root Laplacian.

    M[0, j] = W[0, j] * B[0, j-1]
    M[i, j] = W[i, j] * (X[j-1] - Y[i-1, j-1])   for word-word edges,

    where X is diag(B) with entry 0 zeroed and Y is B with row 0 zeroed.
    Row 0 of the Laplacian was replaced by the ROOT weights, which removes
    word 1's own row from the cofactor structure (hence the zeroed entries)
    and makes row 0 of B the ROOT-edge sensitivities.
    """
    x = np.diagonal(b).copy()
    x[0] = 0.0
    y = b.copy()
    y[0, :] = 0.0
    m = np.zeros_like(w)
    m[1:, 1:] = w[1:, 1:] * (x[None, :] - y)
    m[0, 1:] = w[0, 1:] * b[0, :]
    return m


def transition_column(w: np.ndarray, b: np.ndarray, i: int) -> np.ndarray:
    """Column i of :func:`marginals_from_inverse` without forming the full table."""
    c = i - 1
    col = np.empty(w.shape[0])
    col[0] = w[0, i] * b[0, c]
    y = b[:, c].copy()
    y[0] = 0.0
    x = b[c, c] if c > 0 else 0.0
    col[1:] = w[1:, i] * (x - y)
    return col


def marginals(g: WeightedGraph) -> np.ndarray:
    """(n+1) x (n+1) table of exact edge marginals under the dependency distribution.

    Column j (j >= 1) sums to 1 (every word takes one head); row 0 sums to 1
    (single-root constraint).
    """
    _require_valid(g)
    w = g.weights.copy()
    scales = _column_scales(w)
    w[:, 1:] /= scales  # marginals are column-scale invariant
    lap = laplacian_single_root(w)
    try:
        b = np.linalg.inv(lap).T
    except np.linalg.LinAlgError as exc:
        raise DegenerateDistributionError("singular single-root Laplacian") from exc
    if not np.all(np.isfinite(b)):
        raise DegenerateDistributionError("singular single-root Laplacian")
    return marginals_from_inverse(w, b)


def root_marginals(g: WeightedGraph) -> np.ndarray:
    """Length-n vector of ROOT-edge marginals p(ROOT -> j), j = 1..n."""
    return marginals(g)[0, 1:]
