"""Weighted dependency graphs: representation, validation, random generation, JSON I/O.

A graph over ``n`` words is stored as a dense ``(n+1, n+1)`` matrix of
non-negative edge weights with the artificial ROOT at index 0.  Entry
``weights[i, j]`` is the weight of the directed edge ``i -> j``.  Self-loops
and edges into ROOT are structurally forbidden (those entries must be 0).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.stats

ROOT = 0

_DIST_KINDS = ("uniform", "truncated-normal", "exponential")


class GraphFormatError(ValueError):
    """Raised when a serialized graph document is malformed or inconsistent."""


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable weighted graph over ROOT + n word nodes.

    ``weights`` is coerced to a read-only float64 array; structural zeros
    (diagonal, column 0) are the caller's responsibility and are checked by
    :func:`validate`, not at construction time.
    """

    n: int
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {w.shape}")
        if w.shape[0] != self.n + 1:
            raise ValueError(f"weight matrix is {w.shape[0]}x{w.shape[0]} but n={self.n}")
        if self.n < 1:
            raise ValueError("graph needs at least one word")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def num_nodes(self) -> int:
        return self.n + 1

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.n, self.weights.tobytes()))


def validate(g: WeightedGraph) -> str | None:
    """Return the first violated graph invariant, or None if the graph is valid.

    Violation codes: ``"negative-weight"``, ``"diagonal"`` (nonzero self-loop
    weight), ``"root-in-edge"`` (nonzero weight on an edge into ROOT).
    """
    w = g.weights
    if not np.all(np.isfinite(w)):
        return "negative-weight"  # NaN/inf never represent a legal weight
    if np.any(w < 0):
        return "negative-weight"
    if np.any(np.diagonal(w) != 0):
        return "diagonal"
    if np.any(w[:, ROOT] != 0):
        return "root-in-edge"
    return None


def _require_valid(g: WeightedGraph) -> None:
    code = validate(g)
    if code is not None:
        raise ValueError(f"invalid graph: {code}")


@dataclass(frozen=True)
class WeightDistributionSpec:
    """Distribution family for random edge weights.

    Kinds: ``uniform(lo, hi)`` with 0 <= lo < hi, ``truncated-normal(mu, sigma)``
    (normal truncated to [0, inf)), ``exponential(rate)`` with rate > 0.
    """

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in _DIST_KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if self.kind == "uniform":
            lo, hi = params
            if not (0 <= lo < hi):
                raise ValueError("uniform requires 0 <= lo < hi")
        elif self.kind == "truncated-normal":
            _, sigma = params
            if not sigma > 0:
                raise ValueError("truncated-normal requires sigma > 0")
        elif self.kind == "exponential":
            (rate,) = params
            if not rate > 0:
                raise ValueError("exponential requires rate > 0")

    @classmethod
    def uniform(cls, lo: float = 0.0, hi: float = 1.0) -> "WeightDistributionSpec":
        return cls("uniform", (lo, hi))

    @classmethod
    def truncated_normal(cls, mu: float = 1.0, sigma: float = 1.0) -> "WeightDistributionSpec":
        return cls("truncated-normal", (mu, sigma))

    @classmethod
    def exponential(cls, rate: float = 1.0) -> "WeightDistributionSpec":
        return cls("exponential", (rate,))

    @classmethod
    def parse(cls, text: str) -> "WeightDistributionSpec":
        """Parse a CLI-style spec string, e.g. ``uniform:0,1`` or ``exponential:1``."""
        kind, _, rest = text.partition(":")
        kind = kind.strip()
        aliases = {"normal": "truncated-normal", "truncnorm": "truncated-normal"}
        kind = aliases.get(kind, kind)
        defaults = {"uniform": (0.0, 1.0), "truncated-normal": (1.0, 1.0), "exponential": (1.0,)}
        if kind not in defaults:
            raise ValueError(f"unknown distribution kind {kind!r}")
        if rest.strip():
            try:
                params = tuple(float(p) for p in rest.split(","))
            except ValueError as exc:
                raise ValueError(f"bad distribution parameters in {text!r}") from exc
        else:
            params = defaults[kind]
        return cls(kind, params)

    def __str__(self):
        return f"{self.kind}:{','.join(repr(p) for p in self.params)}"

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.kind == "uniform":
            lo, hi = self.params
            return rng.uniform(lo, hi, size=size)
        if self.kind == "truncated-normal":
            mu, sigma = self.params
            a = (0.0 - mu) / sigma
            return scipy.stats.truncnorm.rvs(a, np.inf, loc=mu, scale=sigma, size=size, random_state=rng)
        rate = self.params[0]
        return rng.exponential(scale=1.0 / rate, size=size)


def random_graph(n: int, spec: WeightDistributionSpec, seed) -> WeightedGraph:
    """Draw an i.i.d. weight for every legal edge slot; deterministic given seed.

    ``seed`` may be anything accepted by ``np.random.default_rng`` or an
    existing Generator.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    w = spec.draw(rng, size=(n + 1, n + 1))
    np.fill_diagonal(w, 0.0)
    w[:, ROOT] = 0.0
    return WeightedGraph(n=n, weights=w)


def write_graph(g: WeightedGraph) -> bytes:
    """Serialize to the JSON interchange format (UTF-8 bytes)."""
    doc = {"n": g.n, "weights": [list(row) for row in g.weights.tolist()]}
    return json.dumps(doc).encode("utf-8")


def read_graph(data: bytes | str) -> WeightedGraph:
    """Parse the JSON interchange format; validates dimensions and invariants.

    Round-trips :func:`write_graph` bit-exactly for finite doubles.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "weights" not in doc:
        raise GraphFormatError('document must be an object with "n" and "weights"')
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise GraphFormatError(f'"n" must be a positive integer, got {n!r}')
    rows = doc["weights"]
    if not isinstance(rows, list) or len(rows) != n + 1 or any(
        not isinstance(r, list) or len(r) != n + 1 for r in rows
    ):
        raise GraphFormatError(f'"weights" must be an (n+1)x(n+1) matrix with n={n}')
    try:
        w = np.array(rows, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise GraphFormatError("weights must be numbers") from exc
    if not np.all(np.isfinite(w)):
        raise GraphFormatError("weights must be finite")
    g = WeightedGraph(n=n, weights=w)
    code = validate(g)
    if code is not None:
        raise GraphFormatError(f"graph violates invariant: {code}")
    return g


def complete_unit_graph(n: int) -> WeightedGraph:
    """Complete graph with every legal edge weight set to 1."""
    w = np.ones((n + 1, n + 1))
    np.fill_diagonal(w, 0.0)
    w[:, ROOT] = 0.0
    return WeightedGraph(n=n, weights=w)


def with_root_weights(g: WeightedGraph, root_weights) -> WeightedGraph:
    """Copy of ``g`` with the ROOT-edge weight row replaced."""
    rw = np.asarray(root_weights, dtype=np.float64)
    if rw.shape != (g.n,):
        raise ValueError(f"need {g.n} root weights, got shape {rw.shape}")
    w = g.weights.copy()
    w[ROOT, 1:] = rw
    return WeightedGraph(n=g.n, weights=w)

