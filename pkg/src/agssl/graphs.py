"""Undirected weighted graphs and their Laplacian regularizers.

Graphs are small and dense here (tens to low hundreds of nodes), so the
adjacency representation is a plain float matrix and connectivity is a
breadth-first walk over an adjacency list.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .linalg import DEFAULT_POLICY, NumericPolicy

# refuse absurd node indices before allocating dense matrices
MAX_NODES = 1_000_000


class GraphParseError(ValueError):
    """Malformed edge-list or label text, annotated with the offending line."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected weighted graph with optional two-community labels.

    Parameters
    ----------
    n : int
        Node count; nodes are 0..n-1.
    edges : tuple of (i, j, w)
        Each undirected edge once, with i < j and w > 0.
    node_labels : ndarray or None
        Optional length-n vector of +1/-1 ground-truth community labels.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    node_labels: np.ndarray | None = None

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"node count must be positive, got {self.n}")
        seen = set()
        for i, j, w in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if i > j:
                raise ValueError(f"edge ({i}, {j}) not normalized to i < j")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            if not w > 0:
                raise ValueError(f"edge ({i}, {j}) has non-positive weight {w}")
            seen.add((i, j))
        if self.node_labels is not None:
            labels = np.asarray(self.node_labels, dtype=int)
            if labels.shape != (self.n,):
                raise ValueError(
                    f"labels have shape {labels.shape}, expected ({self.n},)")
            if not np.all(np.abs(labels) == 1):
                raise ValueError("labels must be +1 or -1")
            object.__setattr__(self, "node_labels", _frozen(labels))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j, w in self.edges:
            a[i, j] = a[j, i] = w
        return a

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n)
        for i, j, w in self.edges:
            d[i] += w
            d[j] += w
        return d

    def neighbor_lists(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


def is_connected(g: Graph) -> bool:
    """True iff every node is reachable from node 0."""
    adj = g.neighbor_lists()
    seen = bytearray(g.n)
    seen[0] = 1
    stack = [0]
    count = 1
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = 1
                count += 1
                stack.append(v)
    return count == g.n


def load_edge_list(text: str, n_hint: int | None = None,
                   one_indexed: bool = False) -> Graph:
    """Parse an edge-list: one "i j" or "i j w" per line, '#' comments.

    Node count is max index + 1, or n_hint if larger. Weight defaults to 1.
    """
    edges: list[tuple[int, int, float]] = []
    seen: dict[tuple[int, int], int] = {}
    max_idx = -1
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphParseError(
                f"expected 'i j' or 'i j w', got {raw.strip()!r}", line_no)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(
                f"node indices must be integers, got {raw.strip()!r}", line_no)
        if one_indexed:
            i, j = i - 1, j - 1
        if i < 0 or j < 0:
            raise GraphParseError(f"negative node index in {raw.strip()!r}",
                                  line_no)
        if i >= MAX_NODES or j >= MAX_NODES:
            raise GraphParseError(f"node index overflow in {raw.strip()!r}",
                                  line_no)
        if i == j:
            raise GraphParseError(f"self-loop at node {i}", line_no)
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise GraphParseError(
                    f"weight must be a number, got {parts[2]!r}", line_no)
            if not w > 0:
                raise GraphParseError(f"non-positive weight {w}", line_no)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise GraphParseError(
                f"duplicate edge ({i}, {j}), first seen on line {seen[key]}",
                line_no)
        seen[key] = line_no
        edges.append((key[0], key[1], w))
        max_idx = max(max_idx, i, j)
    if max_idx < 0:
        raise GraphParseError("edge list is empty")
    n = max_idx + 1
    if n_hint is not None and n_hint > n:
        n = n_hint
    return Graph(n=n, edges=tuple(edges))


def load_labels(text: str, n: int) -> np.ndarray:
    """Parse ground-truth labels: one +1/-1 per line, '#' comments."""
    values: list[int] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            v = int(line)
        except ValueError:
            raise GraphParseError(f"label must be an integer, got {line!r}",
                                  line_no)
        if v not in (1, -1):
            raise GraphParseError(f"label must be +1 or -1, got {v}", line_no)
        values.append(v)
    if len(values) != n:
        raise GraphParseError(
            f"expected {n} labels, got {len(values)}")
    return np.array(values, dtype=int)


def builtin_dataset(name: str) -> Graph:
    """Load a bundled community-detection benchmark by name.

    "karate": Zachary's karate club, 34 nodes / 78 weighted edges.
    "dolphin": Doubtful Sound dolphin social network, 62 nodes / 159 edges.
    """
    key = name.strip().lower()
    if key in ("karate",):
        stem = "karate"
    elif key in ("dolphin", "dolphins"):
        stem = "dolphins"
    else:
        raise ValueError(f"unknown dataset {name!r}; try 'karate' or 'dolphin'")
    data = resources.files("agssl.data")
    g = load_edge_list((data / f"{stem}.edges").read_text())
    labels = load_labels((data / f"{stem}.labels").read_text(), g.n)
    return Graph(n=g.n, edges=g.edges, node_labels=labels)


class RegularizerKind(enum.Enum):
    LAPLACIAN = "L"
    NORMALIZED_LAPLACIAN = "Ln"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class Regularizer:
    """A validated Stieltjes prior-precision matrix.

    matrix is symmetric PSD with non-positive off-diagonals and nullity 0 or
    1; these are exactly the conditions under which greedy sampling carries
    its approximation guarantee.
    """

    matrix: np.ndarray
    kind: RegularizerKind
    nullity: int

    def __post_init__(self):
        object.__setattr__(
            self, "matrix", _frozen(np.array(self.matrix, dtype=float)))
        if self.nullity not in (0, 1):
            raise ValueError(f"nullity must be 0 or 1, got {self.nullity}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _validate_regularizer(m: np.ndarray, kind: RegularizerKind,
                          policy: NumericPolicy) -> Regularizer:
    # asymmetric or positive off-diagonal input is a caller bug, not noise
    if not np.allclose(m, m.T, rtol=0.0, atol=policy.symmetry_atol):
        raise ValueError("regularizer must be symmetric")
    off = m - np.diag(np.diag(m))
    if off.size and off.max(initial=0.0) > policy.offdiag_tol:
        raise ValueError("regularizer off-diagonal entries must be <= 0")
    w = np.linalg.eigvalsh(0.5 * (m + m.T))
    w_max = max(float(w[-1]), 0.0)
    if float(w[0]) < -policy.psd_rtol * w_max:
        raise ValueError(f"regularizer is not PSD (min eigenvalue {w[0]:g})")
    nullity = int(np.count_nonzero(np.abs(w) <= policy.psd_rtol * w_max))
    if nullity > 1:
        raise ValueError(
            f"regularizer nullspace has dimension {nullity}; the model "
            "requires a connected graph (nullity 0 or 1)")
    return Regularizer(matrix=m, kind=kind, nullity=nullity)


def laplacian_matrix(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian D - A."""
    a = g.adjacency()
    return np.diag(a.sum(axis=1)) - a


def normalized_laplacian_matrix(g: Graph) -> np.ndarray:
    """Symmetric normalized Laplacian I - D^{-1/2} A D^{-1/2}.

    Built with an exact unit diagonal rather than by scaling D - A, so the
    trace is exactly n.
    """
    d = g.degrees()
    if np.any(d <= 0):
        isolated = int(np.argmax(d <= 0))
        raise ValueError(f"node {isolated} is isolated; normalization "
                         "requires positive degrees")
    s = 1.0 / np.sqrt(d)
    a = g.adjacency()
    m = -(s[:, None] * a * s[None, :])
    np.fill_diagonal(m, 1.0)
    return m


def laplacian(g: Graph, policy: NumericPolicy = DEFAULT_POLICY) -> Regularizer:
    """Combinatorial Laplacian of a connected graph as a Regularizer."""
    return _validate_regularizer(laplacian_matrix(g),
                                 RegularizerKind.LAPLACIAN, policy)


def normalized_laplacian(g: Graph,
                         policy: NumericPolicy = DEFAULT_POLICY) -> Regularizer:
    """Normalized Laplacian of a connected graph as a Regularizer."""
    return _validate_regularizer(normalized_laplacian_matrix(g),
                                 RegularizerKind.NORMALIZED_LAPLACIAN, policy)


def custom_regularizer(matrix: np.ndarray,
                       policy: NumericPolicy = DEFAULT_POLICY) -> Regularizer:
    """Wrap an arbitrary matrix after the full Stieltjes validation."""
    m = np.array(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return _validate_regularizer(m, RegularizerKind.CUSTOM, policy)
