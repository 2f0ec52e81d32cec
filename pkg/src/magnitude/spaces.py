"""Finite metric spaces: validation, generators, products, and matrix IO.

A space is a validated N x N distance matrix. Validation enforces the four
classical axioms (zero diagonal, symmetry, separation, triangle inequality);
the triangle check tolerates floating-point slack of 1e-12 times the largest
entry so that computed metrics (for example l2 grids) are not rejected for
rounding noise, while real violations are.

Generators cover the standard test geometries: points on a line, unweighted
graph metrics via all-pairs shortest paths, lp lattice grids, middle-thirds
endpoint sets, seeded uniform samples of lp balls, and explicit matrices.
Random kinds use numpy's counter-based Philox generator so a spec with a seed
reproduces the same matrix bit for bit on any platform.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _iterproduct
from typing import Sequence

import numpy as np

from ._backend import first_triangle_violation

TRIANGLE_TOL_FACTOR = 1e-12


class MetricError(ValueError):
    """A matrix failed metric validation; subclasses carry the witness."""


class NotSquare(MetricError):
    pass


class NonFiniteEntry(MetricError):
    pass


class NotSymmetric(MetricError):
    def __init__(self, i: int, j: int, dij: float, dji: float):
        self.witness = (i, j)
        super().__init__(f"d[{i},{j}]={dij!r} != d[{j},{i}]={dji!r}")


class NegativeEntry(MetricError):
    def __init__(self, i: int, j: int, value: float):
        self.witness = (i, j)
        super().__init__(f"d[{i},{j}]={value!r} < 0")


class NonzeroDiagonal(MetricError):
    def __init__(self, i: int, value: float):
        self.witness = (i,)
        super().__init__(f"d[{i},{i}]={value!r} != 0")


class ZeroDistanceDistinctPoints(MetricError):
    def __init__(self, i: int, j: int):
        self.witness = (i, j)
        super().__init__(f"d[{i},{j}]=0 but {i} != {j}")


class TriangleViolation(MetricError):
    """d(i,j) > d(i,k) + d(k,j) beyond tolerance; witness = (i, j, k)."""

    def __init__(self, i: int, j: int, k: int, excess: float):
        self.witness = (i, j, k)
        self.excess = excess
        super().__init__(
            f"d[{i},{j}] > d[{i},{k}] + d[{k},{j}] by {excess:.3e}"
        )


class NonpositiveScale(ValueError):
    pass


class BadSpec(ValueError):
    """Malformed SpaceSpec parameters."""


class DisconnectedGraph(BadSpec):
    """Graph metric undefined: some pair has no connecting path."""


class MatrixParseError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Validated finite metric space.

    ``distances`` is a read-only float64 array; build instances through
    :func:`validate_metric` or a generator, not directly, unless the matrix
    is already known to be a metric.
    """

    distances: np.ndarray
    labels: tuple | None = None

    def __post_init__(self):
        d = self.distances
        d.setflags(write=False)
        if self.labels is not None and len(self.labels) != d.shape[0]:
            raise ValueError("labels length != point count")

    @property
    def n_points(self) -> int:
        return self.distances.shape[0]

    @property
    def diameter(self) -> float:
        return float(self.distances.max())

    @property
    def min_distance(self) -> float:
        """Smallest off-diagonal distance; inf for a single point."""
        n = self.n_points
        if n < 2:
            return float("inf")
        d = self.distances.copy()
        np.fill_diagonal(d, np.inf)
        return float(d.min())

    def subspace(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        idx = list(indices)
        sub = self.distances[np.ix_(idx, idx)].copy()
        labs = tuple(self.labels[i] for i in idx) if self.labels else None
        return FiniteMetricSpace(sub, labs)

    def __repr__(self):  # keep reprs short; matrices can be large
        return f"FiniteMetricSpace(n={self.n_points}, diam={self.diameter:.6g})"


@dataclass(frozen=True)
class SpaceSpec:
    """Declarative space description: kind, per-kind params, optional seed."""

    kind: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    KINDS = (
        "points_1d",
        "graph_shortest_path",
        "lp_grid",
        "cantor_endpoints",
        "ball_sample",
        "explicit_matrix",
    )

    def to_json(self) -> str:
        return json.dumps(
            {"kind": self.kind, "params": self.params, "seed": self.seed}
        )

    @classmethod
    def from_json(cls, text: str) -> "SpaceSpec":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise BadSpec(f"invalid spec JSON: {exc}") from None
        if not isinstance(obj, dict) or "kind" not in obj:
            raise BadSpec("spec JSON must be an object with a 'kind' key")
        return cls(obj["kind"], obj.get("params", {}), obj.get("seed"))


def validate_metric(raw, tol_factor: float = TRIANGLE_TOL_FACTOR,
                    labels: tuple | None = None) -> FiniteMetricSpace:
    """Certify a raw matrix as a metric or raise the first violated axiom.

    Check order: shape/finiteness, diagonal, symmetry, nonnegativity,
    separation, triangle inequality. The triangle witness (i, j, k) means
    d(i,j) > d(i,k) + d(k,j).
    """
    d = np.array(raw, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise NotSquare(f"expected square matrix, got shape {d.shape}")
    if d.size and not np.isfinite(d).all():
        bad = np.argwhere(~np.isfinite(d))[0]
        raise NonFiniteEntry(f"non-finite entry at {tuple(bad)}")
    n = d.shape[0]
    if n == 0:
        raise NotSquare("empty matrix")
    diag = np.diagonal(d)
    if np.any(diag != 0):
        i = int(np.argmax(diag != 0))
        raise NonzeroDiagonal(i, float(diag[i]))
    asym = d != d.T
    if asym.any():
        i, j = map(int, np.argwhere(asym)[0])
        raise NotSymmetric(i, j, float(d[i, j]), float(d[j, i]))
    neg = d < 0
    if neg.any():
        i, j = map(int, np.argwhere(neg)[0])
        raise NegativeEntry(i, j, float(d[i, j]))
    zero_off = (d == 0) & ~np.eye(n, dtype=bool)
    if zero_off.any():
        i, j = map(int, np.argwhere(zero_off)[0])
        raise ZeroDistanceDistinctPoints(i, j)
    tol = tol_factor * float(d.max()) if n > 1 else 0.0
    i, j, k = first_triangle_violation(d, tol)
    if i >= 0:
        excess = float(d[i, j] - d[i, k] - d[k, j])
        raise TriangleViolation(i, j, k, excess)
    return FiniteMetricSpace(d, labels)


def scale_space(space: FiniteMetricSpace, t: float) -> FiniteMetricSpace:
    """Multiply every distance by t > 0."""
    if not t > 0:
        raise NonpositiveScale(f"scale must be positive, got {t!r}")
    return FiniteMetricSpace(space.distances * float(t), space.labels)


def l1_product(a: FiniteMetricSpace, b: FiniteMetricSpace) -> FiniteMetricSpace:
    """Product space with summed distances, points ordered a-major."""
    na, nb = a.n_points, b.n_points
    d = np.kron(a.distances, np.ones((nb, nb))) + np.kron(
        np.ones((na, na)), b.distances
    )
    labels = None
    if a.labels is not None and b.labels is not None:
        labels = tuple((la, lb) for la in a.labels for lb in b.labels)
    return FiniteMetricSpace(d, labels)


# ---------------------------------------------------------------------------
# generators


def points_on_line(coordinates) -> FiniteMetricSpace:
    x = np.asarray(list(coordinates), dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise BadSpec("points_1d needs a nonempty 1-d coordinate list")
    if len(np.unique(x)) != len(x):
        raise BadSpec("points_1d coordinates must be distinct")
    d = np.abs(x[:, None] - x[None, :])
    return FiniteMetricSpace(d, labels=tuple(float(v) for v in x))


def graph_metric(edges, n_vertices: int | None = None) -> FiniteMetricSpace:
    """Shortest-path metric of an undirected unit-weight graph."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import shortest_path

    edges = [(int(u), int(v)) for u, v in edges]
    if not edges and not n_vertices:
        raise BadSpec("graph needs edges or an explicit vertex count")
    seen = {u for e in edges for u in e}
    n = n_vertices if n_vertices is not None else (max(seen) + 1 if seen else 0)
    if n <= 0:
        raise BadSpec("graph has no vertices")
    if seen and max(seen) >= n:
        raise BadSpec("edge endpoint beyond vertex count")
    if any(u == v for u, v in edges):
        raise BadSpec("self-loops not allowed")
    rows = [u for u, v in edges] + [v for u, v in edges]
    cols = [v for u, v in edges] + [u for u, v in edges]
    adj = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    d = shortest_path(adj.tocsr(), method="D", unweighted=True, directed=False)
    if np.isinf(d).any():
        i, j = map(int, np.argwhere(np.isinf(d))[0])
        raise DisconnectedGraph(f"no path between vertices {i} and {j}")
    return FiniteMetricSpace(d)


def lp_grid(shape, p: int = 2, spacing: float = 1.0) -> FiniteMetricSpace:
    shape = [int(s) for s in shape]
    if not shape or any(s < 1 for s in shape):
        raise BadSpec("lp_grid shape must be positive integers")
    if p not in (1, 2):
        raise BadSpec("p must be 1 or 2")
    if not spacing > 0:
        raise BadSpec("spacing must be positive")
    pts = np.array(list(_iterproduct(*(range(s) for s in shape))), dtype=float)
    pts *= spacing
    diff = pts[:, None, :] - pts[None, :, :]
    if p == 1:
        d = np.abs(diff).sum(axis=2)
    else:
        d = np.sqrt((diff * diff).sum(axis=2))
    return FiniteMetricSpace(d, labels=tuple(map(tuple, pts)))


def cantor_intervals(depth: int, length: float = 1.0) -> list[tuple[float, float]]:
    """Closed intervals after `depth` middle-thirds removal steps on [0, length]."""
    if depth < 0:
        raise BadSpec("depth must be >= 0")
    iv = [(0.0, float(length))]
    for _ in range(depth):
        nxt = []
        for a, b in iv:
            third = (b - a) / 3.0
            nxt.append((a, a + third))
            nxt.append((b - third, b))
        iv = nxt
    return iv


def cantor_endpoints(depth: int, length: float = 1.0) -> FiniteMetricSpace:
    """The 2^(depth+1) interval endpoints of the depth-k construction."""
    if not length > 0:
        raise BadSpec("length must be positive")
    iv = cantor_intervals(depth, length)
    pts = sorted({a for a, _ in iv} | {b for _, b in iv})
    return points_on_line(pts)


def cantor_gaps(depth: int, length: float = 1.0) -> list[tuple[float, float]]:
    """Open middle-third gaps removed during the first `depth` steps."""
    gaps = []
    iv = [(0.0, float(length))]
    for _ in range(depth):
        nxt = []
        for a, b in iv:
            third = (b - a) / 3.0
            gaps.append((a + third, b - third))
            nxt.append((a, a + third))
            nxt.append((b - third, b))
        iv = nxt
    return sorted(gaps)


def ball_sample(n: int, radius: float, count: int, seed: int,
                p: int = 2) -> FiniteMetricSpace:
    """Uniform sample of the lp ball by rejection from the bounding cube.

    Philox keyed by `seed`; candidates are drawn in fixed blocks of 1024 so
    the accepted sequence depends only on the seed.
    """
    if n < 1 or count < 1:
        raise BadSpec("need n >= 1 and count >= 1")
    if not radius > 0:
        raise BadSpec("radius must be positive")
    if p not in (1, 2):
        raise BadSpec("p must be 1 or 2")
    if seed is None:
        raise BadSpec("ball_sample requires a seed")
    gen = np.random.Generator(np.random.Philox(int(seed)))
    chunks = []
    have = 0
    while have < count:
        cand = gen.uniform(-radius, radius, size=(1024, n))
        norms = (
            np.abs(cand).sum(axis=1) if p == 1
            else np.sqrt((cand * cand).sum(axis=1))
        )
        keep = cand[norms <= radius]
        chunks.append(keep)
        have += len(keep)
    pts = np.concatenate(chunks)[:count]
    diff = pts[:, None, :] - pts[None, :, :]
    if p == 1:
        d = np.abs(diff).sum(axis=2)
    else:
        d = np.sqrt((diff * diff).sum(axis=2))
    # rejection can in principle repeat a point; the chance is 0 for
    # continuous draws, but validate separation anyway
    off = d.copy()
    np.fill_diagonal(off, np.inf)
    if count > 1 and off.min() == 0.0:
        raise BadSpec("sample produced coincident points; change the seed")
    return FiniteMetricSpace(d, labels=tuple(map(tuple, pts)))


def generate_space(spec: SpaceSpec) -> FiniteMetricSpace:
    """Build the space a SpaceSpec describes. Pure function of the spec."""
    kind, p = spec.kind, spec.params
    try:
        if kind == "points_1d":
            return points_on_line(p["coordinates"])
        if kind == "graph_shortest_path":
            if "name" in p:
                return graph_metric(named_graph_edges(p["name"]))
            return graph_metric(p["edges"], p.get("n_vertices", p.get("n")))
        if kind == "lp_grid":
            return lp_grid(p["shape"], p.get("p", 2), p.get("spacing", 1.0))
        if kind == "cantor_endpoints":
            return cantor_endpoints(p["depth"], p.get("length", 1.0))
        if kind == "ball_sample":
            return ball_sample(
                p["n"], p["radius"], p["count"], spec.seed, p.get("p", 2)
            )
        if kind == "explicit_matrix":
            return validate_metric(p["matrix"])
    except KeyError as exc:
        raise BadSpec(f"{kind} spec missing parameter {exc}") from None
    raise BadSpec(f"unknown kind {kind!r}; expected one of {SpaceSpec.KINDS}")


# ---------------------------------------------------------------------------
# named graphs and matrix IO (CLI conveniences)


def named_graph_edges(name: str) -> list[tuple[int, int]]:
    """Edge list for compact graph names.

    k<n> complete, k<a>,<b> complete bipartite (k32 = k3,2), c<n> cycle,
    p<n> path.
    """
    s = name.strip().lower()
    if s.startswith("k") and "," in s:
        a, b = s[1:].split(",")
        a, b = int(a), int(b)
        return [(i, a + j) for i in range(a) for j in range(b)]
    if s.startswith("k") and len(s) == 3 and s[1:].isdigit() and "0" not in s[1:]:
        # two nonzero digits: complete bipartite shorthand, k32 = K_{3,2}
        a, b = int(s[1]), int(s[2])
        return [(i, a + j) for i in range(a) for j in range(b)]
    if s.startswith("k") and s[1:].isdigit():
        n = int(s[1:])
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if s.startswith("c") and s[1:].isdigit():
        n = int(s[1:])
        if n < 3:
            raise BadSpec("cycle needs at least 3 vertices")
        return [(i, (i + 1) % n) for i in range(n)]
    if s.startswith("p") and s[1:].isdigit():
        n = int(s[1:])
        if n < 2:
            raise BadSpec("path needs at least 2 vertices")
        return [(i, i + 1) for i in range(n - 1)]
    raise BadSpec(f"unknown graph name {name!r}")


def load_distance_csv(source) -> np.ndarray:
    """Read an N x N matrix: N comma-separated numeric rows, no header."""
    if isinstance(source, (str, bytes)):
        text = source if isinstance(source, str) else source.decode("utf-8")
    else:
        text = source.read()
    rows = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError as exc:
            raise MatrixParseError(f"line {lineno}: {exc}") from None
    if not rows:
        raise MatrixParseError("no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MatrixParseError("ragged rows")
    if len(rows) != width:
        raise MatrixParseError(f"matrix is {len(rows)}x{width}, expected square")
    return np.array(rows, dtype=float)


def save_distance_csv(space: FiniteMetricSpace) -> str:
    return "\n".join(
        ",".join(repr(float(v)) for v in row) for row in space.distances
    ) + "\n"
