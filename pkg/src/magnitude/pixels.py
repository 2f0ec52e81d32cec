"""Exact magnitude machinery for unions of axis-aligned grid cells in l1.

A pixel set is a finite union of closed cubes lam * [c, c+1], c in Z^n,
n in {1, 2, 3}, with the taxicab metric. Everything here is exact rational
arithmetic; floats appear only when a result is evaluated at a float scale.

Two independent computations of the same object:

* the weight measure, face by face: each relatively open face G of the
  cell complex carries mass coef(G) * (t lam)^dim(G), where coef(G) comes
  from inclusion-exclusion over the cells whose closure contains G. A
  single cell contributes (1/2)^dim(box) to every face of each box in the
  IE lattice, which is the product of the one-dimensional measure
  (atoms 1/2 at the ends, density t/2 inside).

* the expansion polynomial: the volume of the set grown by r/2 on every
  side (Minkowski sum with r * [-1/2, 1/2]^n) is a polynomial
  sum_i V_i r^(n-i) for 0 <= r < lam. Fitting it exactly at n+1 rational
  nodes recovers V_0 .. V_n (V_0 the Euler characteristic for these sets,
  V_n the volume). The magnitude of the t-scaled set is then
  sum_i V_i t^i / 2^i.

For l1-convex sets (every two cells joined by a monotone staircase of
cells) the two agree and give the magnitude exactly; for other sets the
polynomial value is an upper bound. Convex bodies with rational vertices
get two-sided bounds by sandwiching between an outer pixelation and a
shrunken copy of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product as _iterproduct
from math import gcd

import numpy as np

from .spaces import FiniteMetricSpace

STEINER_NODES = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))
IE_CELL_LIMIT = 20


class PixelError(ValueError):
    pass


class EmptySet(PixelError):
    pass


class MixedDimensions(PixelError):
    pass


class BadScale(PixelError):
    pass


class TooManyCells(PixelError):
    def __init__(self, count: int, limit: int = IE_CELL_LIMIT):
        super().__init__(
            f"subset enumeration over {count} cells exceeds the {limit}-cell limit"
        )


class ProbeOutsideSet(PixelError):
    pass


class DegenerateBody(PixelError):
    """Vertices do not span the ambient dimension."""


class NonConvexVertices(PixelError):
    """Some listed vertex lies strictly inside the hull of the others."""


def _as_scale(scale) -> Fraction:
    try:
        lam = Fraction(scale)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise BadScale(f"cannot read scale {scale!r}: {exc}") from None
    if lam <= 0:
        raise BadScale(f"scale must be positive, got {lam}")
    return lam


@dataclass(frozen=True)
class PixelSet:
    """Cells c in Z^n, each the closed box scale * [c, c+1]."""

    dim: int
    scale: Fraction
    cells: frozenset

    def __init__(self, dim: int, scale, cells):
        if dim not in (1, 2, 3):
            raise PixelError(f"dim must be 1, 2 or 3, got {dim!r}")
        lam = _as_scale(scale)
        cset = frozenset(tuple(int(x) for x in c) for c in cells)
        if not cset:
            raise EmptySet("pixel set needs at least one cell")
        if any(len(c) != dim for c in cset):
            got = sorted({len(c) for c in cset})
            raise MixedDimensions(f"cells of lengths {got} in a dim-{dim} set")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "scale", lam)
        object.__setattr__(self, "cells", cset)

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def volume(self) -> Fraction:
        return len(self.cells) * self.scale**self.dim

    def bounds(self) -> tuple[tuple[int, int], ...]:
        """Per-axis (min cell, max cell + 1) in lattice units."""
        return tuple(
            (min(c[i] for c in self.cells), max(c[i] for c in self.cells) + 1)
            for i in range(self.dim)
        )

    def translate(self, offset) -> "PixelSet":
        off = tuple(int(x) for x in offset)
        return PixelSet(
            self.dim, self.scale,
            [tuple(a + b for a, b in zip(c, off)) for c in self.cells],
        )


# ---------------------------------------------------------------------------
# ascii art and the pixel file format


def parse_ascii(art: str, scale=1, dim: int = 2) -> PixelSet:
    """Rows of '#' (cell) and '.' (hole); the top row has the highest y.

    "##\\n#." gives cells (0,1), (1,1), (0,0). dim=1 takes a single row of
    cells along the x axis.
    """
    rows = [r for r in art.splitlines() if r.strip()]
    if not rows:
        raise EmptySet("no art rows")
    bad = {ch for r in rows for ch in r} - {"#", "."}
    if bad:
        raise PixelError(f"art may use only '#' and '.', found {sorted(bad)}")
    if dim == 1:
        if len(rows) != 1:
            raise PixelError("dim-1 art must be a single row")
        cells = [(x,) for x, ch in enumerate(rows[0]) if ch == "#"]
        return PixelSet(1, scale, cells)
    if dim != 2:
        raise PixelError("art supports dim 1 or 2 only")
    height = len(rows)
    cells = [
        (x, height - 1 - y)
        for y, row in enumerate(rows)
        for x, ch in enumerate(row)
        if ch == "#"
    ]
    return PixelSet(2, scale, cells)


def render_ascii(p: PixelSet) -> str:
    if p.dim != 2:
        raise PixelError("can only render dim-2 sets")
    (x0, x1), (y0, y1) = p.bounds()
    out = []
    for y in range(y1 - 1, y0 - 1, -1):
        out.append(
            "".join("#" if (x, y) in p.cells else "." for x in range(x0, x1))
        )
    return "\n".join(out)


def parse_pixel_file(text: str) -> PixelSet:
    """Header "dim <n> scale <p>/<q>", then either art rows or one cell per
    line as whitespace-separated integers."""
    lines = [l.strip() for l in text.splitlines()]
    lines = [l for l in lines if l and not l.startswith("//")]
    if not lines:
        raise PixelError("empty pixel file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "dim" or head[2] != "scale":
        raise PixelError(f"bad header {lines[0]!r}; expected 'dim <n> scale <p>/<q>'")
    try:
        dim = int(head[1])
    except ValueError:
        raise PixelError(f"bad dimension {head[1]!r}") from None
    scale = _as_scale(head[3])
    body = lines[1:]
    if not body:
        raise EmptySet("pixel file has no cells")
    if all(set(l) <= {"#", "."} for l in body):
        if dim not in (1, 2):
            raise PixelError(f"art rows cannot describe a dim-{dim} set")
        return parse_ascii("\n".join(body), scale, dim=dim)
    cells = []
    for l in body:
        try:
            cells.append(tuple(int(tok) for tok in l.split()))
        except ValueError:
            raise PixelError(f"bad cell line {l!r}") from None
    return PixelSet(dim, scale, cells)


def format_pixel_file(p: PixelSet) -> str:
    head = f"dim {p.dim} scale {p.scale}"
    rows = [" ".join(str(x) for x in c) for c in sorted(p.cells)]
    return "\n".join([head] + rows) + "\n"


# ---------------------------------------------------------------------------
# weight measure on the face complex


def faces_of_cell(cell):
    """All 3^n relatively open faces of the closed unit box at `cell`.

    A face is (anchor, axes): anchor the lattice corner, axes the sorted
    tuple of directions in which the face is a unit open interval
    (anchor_i, anchor_i + 1); on the other axes it is the point anchor_i.
    """
    n = len(cell)
    for mask in _iterproduct((0, 1, 2), repeat=n):
        # per axis: 0 low vertex, 1 open interval, 2 high vertex
        anchor = tuple(c + (1 if m == 2 else 0) for c, m in zip(cell, mask))
        axes = tuple(i for i, m in enumerate(mask) if m == 1)
        yield anchor, axes


def _cells_containing_face(cells, n, anchor, axes):
    fixed = [i for i in range(n) if i not in axes]
    found = []
    for off in _iterproduct((0, -1), repeat=len(fixed)):
        c = list(anchor)
        for i, o in zip(fixed, off):
            c[i] += o
        c = tuple(c)
        if c in cells:
            found.append(c)
    return found


@dataclass(frozen=True)
class FaceMeasure:
    """Weight measure of a pixel set, stored per face.

    coefficients maps (anchor, axes) to an exact rational c; the face then
    carries mass c * (t * scale)^len(axes) at scale parameter t. Faces with
    coefficient zero are dropped.
    """

    dim: int
    scale: Fraction
    coefficients: dict
    cells: frozenset

    def coefficient(self, anchor, axes) -> Fraction:
        key = (tuple(anchor), tuple(axes))
        if key in self.coefficients:
            return self.coefficients[key]
        # distinguish an absent face from one that cancelled to zero
        if not _cells_containing_face(self.cells, self.dim, *key):
            raise ProbeOutsideSet(f"face {key} is not a face of the set")
        return Fraction(0)

    def total_mass_exact(self, t: Fraction = Fraction(1)) -> Fraction:
        t = Fraction(t)
        return sum(
            (c * (t * self.scale) ** len(axes)
             for (_, axes), c in self.coefficients.items()),
            Fraction(0),
        )

    def magnitude_at(self, t: float) -> float:
        lam = float(self.scale)
        return float(sum(
            float(c) * (t * lam) ** len(axes)
            for (_, axes), c in self.coefficients.items()
        ))

    def mass_by_dimension(self) -> dict:
        """Sum of coefficients per face dimension (scale factored out)."""
        out = {}
        for (_, axes), c in self.coefficients.items():
            out[len(axes)] = out.get(len(axes), Fraction(0)) + c
        return out


def weight_measure(p: PixelSet) -> FaceMeasure:
    """Face coefficients by local inclusion-exclusion.

    For face G, only the cells whose closure contains G matter:
    coef(G) = sum over nonempty subsets S of those cells of
    (-1)^(|S|+1) (1/2)^dim(cap S). Equivalent to full subset enumeration
    but linear in the number of faces.
    """
    cells = p.cells
    n = p.dim
    out = {}
    seen = set()
    for cell in cells:
        for anchor, axes in faces_of_cell(cell):
            key = (anchor, axes)
            if key in seen:
                continue
            seen.add(key)
            owners = _cells_containing_face(cells, n, anchor, axes)
            fixed = [i for i in range(n) if i not in axes]
            coef = Fraction(0)
            for r in range(1, len(owners) + 1):
                for sub in combinations(owners, r):
                    dim_cap = len(axes)
                    for i in fixed:
                        if len({c[i] for c in sub}) == 1:
                            dim_cap += 1
                    coef += Fraction((-1) ** (r + 1), 2**dim_cap)
            if coef != 0:
                out[key] = coef
    return FaceMeasure(n, p.scale, out, p.cells)


def weight_measure_ie(p: PixelSet) -> FaceMeasure:
    """Oracle by explicit inclusion-exclusion over all nonempty cell subsets.

    Exponential in the cell count; refuses more than 20 cells. Subsets with
    empty intersection are pruned together with all their supersets.
    """
    if p.n_cells > IE_CELL_LIMIT:
        raise TooManyCells(p.n_cells)
    cells = sorted(p.cells)
    n = p.dim
    out = {}

    def box_add(lo, hi, sign):
        # closed box prod [lo_i, hi_i], hi_i in {lo_i, lo_i + 1}; spread
        # sign / 2^dim onto each of its faces
        opts = []
        for i in range(n):
            if hi[i] == lo[i]:
                opts.append(((lo[i], False),))
            else:
                opts.append(((lo[i], False), (lo[i], True), (hi[i], False)))
        dim_box = sum(1 for i in range(n) if hi[i] > lo[i])
        w = Fraction(sign, 2**dim_box)
        for pick in _iterproduct(*opts):
            anchor = tuple(x for x, _ in pick)
            axes = tuple(i for i in range(n) if pick[i][1])
            key = (anchor, axes)
            out[key] = out.get(key, Fraction(0)) + w

    big = 1 << 40

    def rec(start, lo, hi, size):
        # adding one cell to a subset of `size` gives sign (-1)^size
        for j in range(start, len(cells)):
            c = cells[j]
            nlo = tuple(max(a, x) for a, x in zip(lo, c))
            nhi = tuple(min(b, x + 1) for b, x in zip(hi, c))
            if any(a > b for a, b in zip(nlo, nhi)):
                continue
            box_add(nlo, nhi, (-1) ** size)
            rec(j + 1, nlo, nhi, size + 1)

    rec(0, (-big,) * n, (big,) * n, 0)
    out = {k: v for k, v in out.items() if v != 0}
    return FaceMeasure(n, p.scale, out, p.cells)


def probe_grid(p: PixelSet, per_cell: int = 5) -> list:
    """per_cell^dim points per cell, centered strictly inside it, in the
    absolute coordinates of the scaled set."""
    if per_cell < 1:
        raise PixelError("per_cell must be >= 1")
    lam = float(p.scale)
    offs = [(j + 0.5) / per_cell for j in range(per_cell)]
    out = []
    for cell in sorted(p.cells):
        for g in _iterproduct(offs, repeat=p.dim):
            out.append(tuple(lam * (ci + gi) for ci, gi in zip(cell, g)))
    return out


def _exp_box_integral(a, b, c):
    # integral of e^{-|c-u|} du over [a, b], elementwise; exponents are
    # clamped at 0 so the branches np.where discards cannot overflow
    span = 1.0 - np.exp(a - b)
    below = np.exp(np.minimum(c - a, 0.0)) * span
    above = np.exp(np.minimum(b - c, 0.0)) * span
    inside = 2.0 - np.exp(np.minimum(a - c, 0.0)) - np.exp(np.minimum(c - b, 0.0))
    return np.where(c <= a, below, np.where(c >= b, above, inside))


def verify_weight_measure(p: PixelSet, fm: FaceMeasure, probes) -> float:
    """Max over probes of |integral of e^{-d(probe, x)} dmu(x) - 1|.

    mu puts density coef(G) of len(axes)-dimensional Lebesgue measure on
    each face G, so the integral splits into a product of one-dimensional
    factors: a closed-form integral along the face's free axes and a point
    evaluation along the fixed ones. Zero deviation characterizes a weight
    measure; non-convex sets may deviate, which is reported, not raised.
    """
    if fm.dim != p.dim:
        raise PixelError(f"measure is {fm.dim}-dimensional, set is {p.dim}")
    pts = np.asarray(list(probes), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != p.dim:
        raise PixelError(f"probes must be points in R^{p.dim}")
    lam = float(p.scale)
    cells = np.array(sorted(p.cells), dtype=float) * lam
    # closed-set membership, with float slack at cell boundaries
    inside = (
        (pts[:, None, :] >= cells[None, :, :] - 1e-12)
        & (pts[:, None, :] <= cells[None, :, :] + lam + 1e-12)
    ).all(axis=2).any(axis=1)
    if not inside.all():
        bad = pts[int(np.flatnonzero(~inside)[0])]
        raise ProbeOutsideSet(
            f"probe {tuple(float(x) for x in bad)} is outside the set"
        )

    faces = list(fm.coefficients.items())
    coefs = np.array([float(c) for _, c in faces])
    anchors = np.array([[a * lam for a in anchor] for (anchor, _), _ in faces])
    free = np.zeros((len(faces), p.dim), dtype=bool)
    for row, ((_, axes), _) in enumerate(faces):
        for i in axes:
            free[row, i] = True

    total = np.ones((len(pts), len(faces)))
    for i in range(p.dim):
        a = anchors[None, :, i]
        c = pts[:, i][:, None]
        factor = np.where(
            free[None, :, i],
            _exp_box_integral(a, a + lam, c),
            np.exp(-np.abs(c - a)),
        )
        total *= factor
    return float(np.max(np.abs(total @ coefs - 1.0)))


# ---------------------------------------------------------------------------
# expansion polynomial


def dilation_volume(p: PixelSet, r) -> Fraction:
    """Exact volume of the set expanded by r/2 on every side.

    The expanded set is the union of boxes [lam c - r/2, lam (c+1) + r/2];
    the volume comes from per-axis interval fragmentation with a bitmask
    per fragment recording which cells cover it.
    """
    r = Fraction(r)
    if r < 0:
        raise PixelError(f"expansion must be >= 0, got {r}")
    lam, n = p.scale, p.dim
    cells = sorted(p.cells)
    den = 2 * lam.denominator * r.denominator
    lam_i = int(lam * den)
    r_i = int(r * den)
    # doubled integer scale: coordinate x becomes 2 den x, so the box on
    # axis i spans [2 lam_i c - r_i, 2 lam_i (c+1) + r_i]
    masks = []
    for i in range(n):
        cuts = sorted(
            {2 * lam_i * c[i] - r_i for c in cells}
            | {2 * lam_i * (c[i] + 1) + r_i for c in cells}
        )
        frag = []
        for a, b in zip(cuts, cuts[1:]):
            bit = 0
            for j, c in enumerate(cells):
                if 2 * lam_i * c[i] - r_i <= a and b <= 2 * lam_i * (c[i] + 1) + r_i:
                    bit |= 1 << j
            if bit:
                frag.append((b - a, bit))
        masks.append(frag)
    total = 0
    if n == 1:
        total = sum(la for la, _ in masks[0])
    elif n == 2:
        for la, ba in masks[0]:
            for lb, bb in masks[1]:
                if ba & bb:
                    total += la * lb
    else:
        for la, ba in masks[0]:
            for lb, bb in masks[1]:
                ab = ba & bb
                if not ab:
                    continue
                s = 0
                for lc, bc in masks[2]:
                    if ab & bc:
                        s += lc
                total += la * lb * s
    return Fraction(total, (2 * den) ** n)


@dataclass(frozen=True)
class SteinerPolynomial:
    """Coefficients V_0 .. V_n of the expansion polynomial.

    expanded_volume(r) = sum_i V_i r^(n-i) for 0 <= r < scale; V_n is the
    set's volume and the magnitude of the t-scaled set is
    sum_i V_i t^i / 2^i (exact for l1-convex sets, an upper bound
    otherwise).
    """

    dim: int
    scale: Fraction
    coefficients: tuple

    def expanded_volume(self, r) -> Fraction:
        r = Fraction(r)
        n = self.dim
        return sum(
            (v * r ** (n - i) for i, v in enumerate(self.coefficients)),
            Fraction(0),
        )

    def magnitude_exact(self, t: Fraction = Fraction(1)) -> Fraction:
        t = Fraction(t)
        return sum(
            (v * t**i / 2**i for i, v in enumerate(self.coefficients)),
            Fraction(0),
        )

    def magnitude_at(self, t: float) -> float:
        return float(sum(
            float(v) * (float(t) / 2.0) ** i
            for i, v in enumerate(self.coefficients)
        ))

    @property
    def volume(self) -> Fraction:
        return self.coefficients[-1]


def steiner_polynomial(p: PixelSet) -> SteinerPolynomial:
    """Fit the expansion polynomial exactly at n+1 rational nodes.

    Nodes are scale * (1/4, 1/3, 1/2, 2/3)[: n+1]: all below the scale, so
    every node lies in the chamber where the volume is one polynomial
    (fragment overlaps change only at r = scale or beyond).
    """
    n = p.dim
    nodes = [p.scale * x for x in STEINER_NODES[: n + 1]]
    vols = [dilation_volume(p, r) for r in nodes]
    k = n + 1
    m = [[nodes[row] ** (n - i) for i in range(k)] + [vols[row]]
         for row in range(k)]
    for col in range(k):
        piv = next(r for r in range(col, k) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(k):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    coeffs = tuple(m[i][k] for i in range(k))
    return SteinerPolynomial(n, p.scale, coeffs)


# ---------------------------------------------------------------------------
# convexity in the taxicab sense, sampling, top-level magnitude


def is_l1_convex(p: PixelSet, witness: bool = False):
    """True when every two cells are joined by a monotone staircase.

    Each step moves one axis by one unit strictly toward the target cell
    and must stay inside the set. Equivalent to the set meeting every
    axis-parallel segment between its points in a segment. With
    witness=True returns (verdict, pair), pair being the first cell pair
    (in sorted order) that no staircase joins, or None.
    """
    cells = p.cells
    lst = sorted(cells)

    def reaches(a, b) -> bool:
        seen = set()
        stack = [a]
        while stack:
            c = stack.pop()
            if c == b:
                return True
            if c in seen:
                continue
            seen.add(c)
            for i in range(p.dim):
                if c[i] != b[i]:
                    step = 1 if b[i] > c[i] else -1
                    nxt = c[:i] + (c[i] + step,) + c[i + 1:]
                    if nxt in cells:
                        stack.append(nxt)
        return False

    for a, b in combinations(lst, 2):
        if not reaches(a, b):
            return (False, (a, b)) if witness else False
    return (True, None) if witness else True


def grid_sample(p: PixelSet, per_unit: int) -> FiniteMetricSpace:
    """Finite taxicab space of the lattice points at spacing scale/per_unit
    inside the closed set."""
    if per_unit < 1:
        raise PixelError("per_unit must be >= 1")
    k = per_unit
    pts = set()
    for c in p.cells:
        for g in _iterproduct(range(k + 1), repeat=p.dim):
            pts.add(tuple(Fraction(ci * k + gi, k) for ci, gi in zip(c, g)))
    lam = float(p.scale)
    arr = np.array(sorted(pts), dtype=float) * lam
    diff = arr[:, None, :] - arr[None, :, :]
    d = np.abs(diff).sum(axis=2)
    return FiniteMetricSpace(d, labels=tuple(map(tuple, arr)))


def pixel_magnitude(p: PixelSet, t: float = 1.0):
    """(value, exact) at scale t: exact for l1-convex sets, upper bound
    otherwise."""
    sp = steiner_polynomial(p)
    return sp.magnitude_at(t), is_l1_convex(p)


# ---------------------------------------------------------------------------
# convex bodies with rational vertices


@dataclass(frozen=True)
class ConvexBodySpec:
    """dim n, kind in {box, simplex_vertices, polytope_vertices}.

    box takes lengths (L_1 .. L_n); the vertex kinds take rational vertex
    tuples. All numbers may be strings like "3/2".
    """

    dim: int
    kind: str
    lengths: tuple = ()
    vertices: tuple = ()


@dataclass(frozen=True)
class ConvexBody:
    dim: int
    vertices: tuple          # tuples of Fractions
    facets: tuple            # (normal ints tuple, offset int): <a, x> <= b

    @property
    def centroid(self) -> tuple:
        n = len(self.vertices)
        return tuple(
            sum((v[i] for v in self.vertices), Fraction(0)) / n
            for i in range(self.dim)
        )


def _affine_rank(vertices, dim) -> int:
    if len(vertices) < 2:
        return 0
    base = vertices[0]
    rows = [[v[i] - base[i] for i in range(dim)] for v in vertices[1:]]
    rank = 0
    col = 0
    while rank < len(rows) and col < dim:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def _normal_through(points, dim):
    """Integer-free normal of the hyperplane through dim points, or None."""
    if dim == 1:
        return (Fraction(1),)
    base = points[0]
    rows = [[p[i] - base[i] for i in range(dim)] for p in points[1:]]
    if dim == 2:
        (dx, dy), = rows
        a = (dy, -dx)
    else:
        (u1, u2, u3), (v1, v2, v3) = rows
        a = (u2 * v3 - u3 * v2, u3 * v1 - u1 * v3, u1 * v2 - u2 * v1)
    if all(x == 0 for x in a):
        return None
    return tuple(Fraction(x) for x in a)


def _canonical_facet(a, b):
    den = 1
    for x in list(a) + [b]:
        den = den * x.denominator // gcd(den, x.denominator)
    ai = [int(x * den) for x in a]
    bi = int(b * den)
    g = 0
    for x in ai + [bi]:
        g = gcd(g, abs(x))
    g = g or 1
    return tuple(x // g for x in ai), bi // g


def build_body(spec: ConvexBodySpec) -> ConvexBody:
    """Vertex list to facet system, with convexity and fullness checks."""
    n = spec.dim
    if n not in (1, 2, 3):
        raise PixelError(f"dim must be 1, 2 or 3, got {n!r}")
    if spec.kind == "box":
        ls = tuple(Fraction(x) for x in spec.lengths)
        if len(ls) != n or any(l <= 0 for l in ls):
            raise DegenerateBody(f"box needs {n} positive lengths")
        vertices = tuple(
            tuple(ls[i] if bit else Fraction(0) for i, bit in enumerate(bits))
            for bits in _iterproduct((0, 1), repeat=n)
        )
    elif spec.kind in ("simplex_vertices", "polytope_vertices"):
        vertices = tuple(tuple(Fraction(x) for x in v) for v in spec.vertices)
        if any(len(v) != n for v in vertices):
            raise PixelError("vertex arity does not match dim")
        if spec.kind == "simplex_vertices" and len(vertices) != n + 1:
            raise PixelError(f"simplex in dim {n} needs exactly {n + 1} vertices")
    else:
        raise PixelError(f"unknown body kind {spec.kind!r}")
    if len(set(vertices)) != len(vertices):
        raise PixelError("repeated vertices")
    if _affine_rank(vertices, n) < n:
        raise DegenerateBody("vertices span less than the ambient dimension")

    facets = set()
    for sub in combinations(vertices, n):
        a = _normal_through(list(sub), n)
        if a is None:
            continue
        b = sum(ai * xi for ai, xi in zip(a, sub[0]))
        vals = [sum(ai * xi for ai, xi in zip(a, v)) for v in vertices]
        if all(v <= b for v in vals):
            facets.add(_canonical_facet(a, b))
        elif all(v >= b for v in vals):
            facets.add(_canonical_facet(tuple(-x for x in a), -b))
    if not facets:
        raise DegenerateBody("no supporting facets found")

    # a listed vertex strictly inside every facet is not a hull vertex
    inner = []
    for idx, v in enumerate(vertices):
        if all(
            sum(ai * xi for ai, xi in zip(a, v)) < b for a, b in facets
        ):
            inner.append(idx)
    if inner:
        raise NonConvexVertices(f"vertices at indices {inner} are interior")
    return ConvexBody(n, vertices, tuple(sorted(facets)))


def _fm_feasible(rows, n) -> bool:
    """Exact feasibility by variable elimination.

    Rows are (coefficients, b, strict) for sum_i a_i x_i <= b, or < b when
    strict. Eliminating a variable combines each positive-coefficient row
    with each negative one; the combination is strict when either parent
    is. Feasible when every remaining constant row holds.
    """
    rows = [([Fraction(c) for c in a], Fraction(b), s) for a, b, s in rows]
    for var in range(n):
        pos, neg, rest = [], [], []
        for row in rows:
            coef = row[0][var]
            (pos if coef > 0 else neg if coef < 0 else rest).append(row)
        new = rest
        for ap, bp, sp in pos:
            for an, bn, sn in neg:
                f_p, f_n = -an[var], ap[var]
                a = [f_p * x + f_n * y for x, y in zip(ap, an)]
                b = f_p * bp + f_n * bn
                new.append((a, b, sp or sn))
        # dedupe keeps the blowup tame at these sizes
        seen, rows = set(), []
        for a, b, s in new:
            key = (tuple(a), b, s)
            if key not in seen:
                seen.add(key)
                rows.append((a, b, s))
    return all(b > 0 if s else b >= 0 for _, b, s in rows)


def _box_intersects_body(body: ConvexBody, lam: Fraction, cell) -> bool:
    """Does the OPEN box of `cell` meet the body?

    Open, so that a body touching a cell only along its boundary does not
    drag that cell into the pixelation; the closed cells of the remaining
    set still cover a full-dimensional body.
    """
    n = body.dim
    rows = [(list(a), Fraction(b), False) for a, b in body.facets]
    for i in range(n):
        lo = [Fraction(0)] * n
        lo[i] = Fraction(-1)
        rows.append((lo, -lam * cell[i], True))
        hi = [Fraction(0)] * n
        hi[i] = Fraction(1)
        rows.append((hi, lam * (cell[i] + 1), True))
    return _fm_feasible(rows, n)


def outer_pixelation(body: ConvexBody, scale) -> PixelSet:
    """All cells whose closed box meets the body."""
    lam = _as_scale(scale)
    n = body.dim
    cells = []
    ranges = []
    for i in range(n):
        lo = min(v[i] for v in body.vertices)
        hi = max(v[i] for v in body.vertices)
        c0 = (lo / lam).__floor__()
        c1 = (hi / lam).__ceil__()
        ranges.append(range(c0 - 1, c1 + 1))
    for cell in _iterproduct(*ranges):
        if _box_intersects_body(body, lam, cell):
            cells.append(cell)
    return PixelSet(n, lam, cells)


@dataclass(frozen=True)
class BodyBounds:
    lower: float
    upper: float
    alpha: Fraction
    pixelation: PixelSet
    steiner: SteinerPolynomial


def body_magnitude_bounds(body: ConvexBody, scale, t: float = 1.0) -> BodyBounds:
    """Sandwich the body's magnitude between a shrunken copy of its outer
    pixelation and the pixelation itself.

    alpha is the sharpest factor with centroid + alpha (P - centroid)
    inside the body: per facet, the slack at the centroid divided by the
    worst reach of the pixelation's corners. Exact rational; alpha = 1
    exactly when the pixelation equals the body.
    """
    pix = outer_pixelation(body, scale)
    sp = steiner_polynomial(pix)
    c = body.centroid
    lam = pix.scale
    corners = set()
    for cell in pix.cells:
        for off in _iterproduct((0, 1), repeat=body.dim):
            corners.add(tuple(lam * (ci + oi) for ci, oi in zip(cell, off)))
    alpha = Fraction(1)
    for a, b in body.facets:
        slack = Fraction(b) - sum(ai * ci for ai, ci in zip(a, c))
        reach = max(
            sum(ai * (qi - ci) for ai, qi, ci in zip(a, q, c))
            for q in corners
        )
        if reach > 0:
            alpha = min(alpha, slack / reach)
    if alpha < 0:
        alpha = Fraction(0)
    tt = float(t)
    upper = sp.magnitude_at(tt)
    lower = float(sum(
        float(v) * float(alpha) ** i * (tt / 2.0) ** i
        for i, v in enumerate(sp.coefficients)
    ))
    return BodyBounds(lower, upper, alpha, pix, sp)
