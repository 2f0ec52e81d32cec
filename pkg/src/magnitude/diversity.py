"""Maximum diversity, covering numbers, and growth-based dimension.

The diversity of a distribution mu on the points of a space, at scale t,
is 1 / (mu' Z mu) with Z the similarity matrix: the reciprocal expected
similarity between two independent draws. Maximum diversity optimizes mu
over the probability simplex; for positive definite Z the optimum is
unique and never exceeds the magnitude, with equality exactly when the
weighting is nonnegative (subsets of the real line, for instance).

The optimizer is Frank-Wolfe with away steps on min mu' Z mu (see
_backend): sparse iterates, linear convergence on PD instances, and a
duality gap certificate. An independent oracle enumerates all supports
for small N and solves the stationarity system on each.

Dimension estimates fit the growth rate of a quantity against scale on a
log-log window: maximum diversity for diversity_growth, covering numbers
at radius 1/t for covering_growth. The two extreme samples are dropped
before the fit to blunt boundary effects.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._backend import FW_CONVERGED, fw_away_qp
from .engine import similarity_matrix
from .spaces import FiniteMetricSpace

EXACT_DIVERSITY_LIMIT = 15
EXACT_COVERING_LIMIT = 25


class DiversityError(Exception):
    pass


class NonConvergence(DiversityError):
    def __init__(self, iterations: int, gap: float):
        self.iterations = iterations
        self.gap = gap
        super().__init__(
            f"duality gap {gap:.3e} after {iterations} iterations"
        )


class TooLarge(DiversityError):
    def __init__(self, n: int, limit: int):
        super().__init__(f"exact method supports up to {limit} points, got {n}")


class WindowTooNarrow(DiversityError):
    pass


@dataclass(frozen=True)
class SimplexDistribution:
    weights: np.ndarray
    support: tuple

    def __post_init__(self):
        self.weights.setflags(write=False)


@dataclass(frozen=True)
class DiversityResult:
    value: float
    optimizer: SimplexDistribution
    kkt_gap: float
    iterations: int


@dataclass(frozen=True)
class DimensionEstimate:
    slope: float
    window: tuple
    fit_residual: float
    method: str


def kkt_gap(z: np.ndarray, mu: np.ndarray) -> float:
    """Frank-Wolfe duality gap of mu for min mu' Z mu on the simplex."""
    q = z @ mu
    return float(2.0 * (mu @ q - q.min()))


def max_diversity(space: FiniteMetricSpace, t: float = 1.0,
                  tol: float = 1e-9, max_iters: int = 100_000) -> DiversityResult:
    """Maximum diversity at scale t via away-step Frank-Wolfe.

    Raises NonConvergence if the duality gap is still above tol after
    max_iters iterations. On spaces whose similarity matrix is not
    positive semidefinite the returned point is stationary but the global
    certificate is void.
    """
    z = similarity_matrix(space, t).entries
    mu, f, gap, iters, nonconvex, status = fw_away_qp(z, tol, max_iters)
    if status != FW_CONVERGED:
        raise NonConvergence(iters, gap)
    support = tuple(int(i) for i in np.flatnonzero(mu > 0))
    return DiversityResult(1.0 / f, SimplexDistribution(mu, support),
                           gap, iters)


def max_diversity_exact(space: FiniteMetricSpace, t: float = 1.0,
                        feas_tol: float = 1e-12) -> DiversityResult:
    """Oracle by support enumeration, for spaces of at most 15 points.

    On each candidate support S the stationarity system Z_S y = 1 is
    solved; the candidate is kept when y is (numerically) nonnegative and
    every off-support point j satisfies (Z mu)_j >= mu' Z mu - tol, the
    first-order condition for not benefiting from new support. The value
    on a feasible support is sum(y), and the maximum over supports is the
    global maximum diversity.
    """
    n = space.n_points
    if n > EXACT_DIVERSITY_LIMIT:
        raise TooLarge(n, EXACT_DIVERSITY_LIMIT)
    z = similarity_matrix(space, t).entries
    best = None
    checked = 0
    for size in range(1, n + 1):
        for sub in combinations(range(n), size):
            checked += 1
            idx = np.array(sub)
            zs = z[np.ix_(idx, idx)]
            try:
                y = np.linalg.solve(zs, np.ones(size))
            except np.linalg.LinAlgError:
                continue
            if np.abs(zs @ y - 1.0).max() > 1e-8:
                continue  # near-singular garbage
            total = float(y.sum())
            if total <= 0 or (y < -feas_tol).any():
                continue
            mu = np.zeros(n)
            mu[idx] = np.clip(y, 0.0, None) / np.clip(y, 0.0, None).sum()
            m = 1.0 / total
            if ((z @ mu) < m - feas_tol).any():
                continue
            if best is None or total > best[0]:
                best = (total, mu, sub)
    if best is None:
        raise DiversityError("no feasible stationary support found")
    total, mu, sub = best
    return DiversityResult(total, SimplexDistribution(mu, sub),
                           kkt_gap(z, mu), checked)


# ---------------------------------------------------------------------------
# covering and packing with centers inside the space


def _balls(space: FiniteMetricSpace, eps: float) -> np.ndarray:
    if eps < 0:
        raise DiversityError("radius must be >= 0")
    return space.distances <= eps


def _greedy_cover(balls: np.ndarray) -> list:
    n = balls.shape[0]
    uncovered = np.ones(n, dtype=bool)
    centers = []
    while uncovered.any():
        gains = (balls & uncovered).sum(axis=1)
        c = int(np.argmax(gains))
        uncovered &= ~balls[c]
        centers.append(c)
    return centers


def greedy_covering_number(space: FiniteMetricSpace, eps: float) -> int:
    """Centers chosen greedily by residual coverage; an upper bound."""
    return len(_greedy_cover(_balls(space, eps)))


def packing_number(space: FiniteMetricSpace, eps: float) -> int:
    """Size of a greedy maximal family of closed eps-balls, centered in
    the space, that are pairwise disjoint as subsets of the space.

    No center can cover two members of such a family, so this is a valid
    covering lower bound; intrinsic disjointness (no witness point within
    eps of both centers) keeps it tight when midpoints are missing.
    """
    balls = _balls(space, eps)
    occupied = np.zeros(space.n_points, dtype=bool)
    count = 0
    for i in range(space.n_points):
        if not (balls[i] & occupied).any():
            occupied |= balls[i]
            count += 1
    return count


def covering_number(space: FiniteMetricSpace, eps: float,
                    with_centers: bool = False):
    """Minimum number of closed eps-balls centered in the space that
    cover it. Exact branch and bound; refuses more than 25 points.
    with_centers=True also returns one optimal center tuple."""
    n = space.n_points
    if n > EXACT_COVERING_LIMIT:
        raise TooLarge(n, EXACT_COVERING_LIMIT)
    balls = _balls(space, eps)
    covers = [np.flatnonzero(balls[:, j]) for j in range(n)]  # centers covering j
    best_centers = _greedy_cover(balls)
    best = len(best_centers)

    def packing_lb(uncovered) -> int:
        # uncovered points with pairwise-disjoint balls: each remaining
        # center handles at most one of them
        occupied = np.zeros(n, dtype=bool)
        count = 0
        for i in np.flatnonzero(uncovered):
            if not (balls[i] & occupied).any():
                occupied |= balls[i]
                count += 1
        return count

    def rec(uncovered, chosen):
        nonlocal best, best_centers
        if not uncovered.any():
            if len(chosen) < best:
                best = len(chosen)
                best_centers = list(chosen)
            return
        if len(chosen) + packing_lb(uncovered) >= best:
            return
        # branch on the hardest point: fewest balls cover it
        idx = np.flatnonzero(uncovered)
        j = idx[int(np.argmin([len(covers[i]) for i in idx]))]
        for c in covers[j]:
            chosen.append(int(c))
            rec(uncovered & ~balls[c], chosen)
            chosen.pop()

    rec(np.ones(n, dtype=bool), [])
    if with_centers:
        return best, tuple(sorted(best_centers))
    return best


# ---------------------------------------------------------------------------
# dimension from growth rates


def dimension_estimate(space: FiniteMetricSpace, t_min: float, t_max: float,
                       method: str = "diversity_growth", samples: int = 12,
                       tol: float = 1e-6, max_iters: int = 300_000) -> DimensionEstimate:
    """Least-squares slope of log(quantity) against log(scale).

    diversity_growth uses maximum diversity at each t; covering_growth
    uses the greedy covering number at radius 1/t. The first and last
    samples are dropped before fitting; fewer than 4 remaining points
    raises WindowTooNarrow. Estimates are meaningful only while the scale
    still resolves the finest structure, roughly t_max * (smallest gap)
    <= 1; the caller is expected to check that.
    """
    if not (0 < t_min < t_max):
        raise WindowTooNarrow(f"bad window [{t_min}, {t_max}]")
    if samples - 2 < 4:
        raise WindowTooNarrow(f"{samples} samples leave fewer than 4 usable")
    ts = np.geomspace(t_min, t_max, samples)
    if method == "diversity_growth":
        vals = [max_diversity(space, float(t), tol, max_iters).value for t in ts]
    elif method == "covering_growth":
        vals = [greedy_covering_number(space, 1.0 / float(t)) for t in ts]
    else:
        raise DiversityError(f"unknown method {method!r}")
    vals = np.asarray(vals, dtype=float)
    if (vals <= 0).any():
        raise DiversityError("nonpositive quantity in growth fit")
    lt, lq = np.log(ts[1:-1]), np.log(vals[1:-1])
    slope, intercept = np.polyfit(lt, lq, 1)
    resid = float(np.sqrt(np.mean((lq - (slope * lt + intercept)) ** 2)))
    return DimensionEstimate(float(slope), (float(t_min), float(t_max)),
                             resid, method)
