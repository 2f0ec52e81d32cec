"""Closed-form magnitude on the real line.

For finite X = {x_1 < ... < x_N} with gaps g_i = x_{i+1} - x_i, the weighting
at scale t is explicit:

    w_1 = (1 + tanh(t g_1 / 2)) / 2
    w_i = (tanh(t g_{i-1} / 2) + tanh(t g_i / 2)) / 2   (interior)
    w_N = (1 + tanh(t g_{N-1} / 2)) / 2

so the magnitude telescopes to 1 + sum_i tanh(t g_i / 2). Every weight is
strictly positive, which is why these sets are the reference geometry for
the optimization-based routines: maximum diversity equals magnitude here.

Compact unions of closed intervals follow the same pattern in the limit:
a closed interval [a, b] has magnitude 1 + t (b - a) / 2, carried by point
masses 1/2 at each endpoint plus uniform density t/2 inside, and each gap
of width g between consecutive components contributes tanh(t g / 2). The
middle-thirds set is the depth limit of such unions; its magnitude is the
convergent series 1 + sum_{i>=1} 2^(i-1) tanh(t L / (2 * 3^i)).
"""

from __future__ import annotations

import math

import numpy as np

from .spaces import NonpositiveScale


class LineError(ValueError):
    pass


class DuplicatePoints(LineError):
    def __init__(self, value: float):
        super().__init__(f"coordinate {value!r} appears more than once")


class ReversedInterval(LineError):
    def __init__(self, a: float, b: float):
        super().__init__(f"interval [{a!r}, {b!r}] has b < a")


class OverlappingGaps(LineError):
    def __init__(self, b_prev: float, a_next: float):
        super().__init__(
            f"component starting at {a_next!r} overlaps previous end {b_prev!r}"
        )


class NegativeGap(LineError):
    def __init__(self, g: float):
        super().__init__(f"gap must be >= 0, got {g!r}")


def _check_scale(t: float) -> float:
    t = float(t)
    if not t > 0:
        raise NonpositiveScale(f"scale must be positive, got {t!r}")
    return t


def _sorted_points(points) -> np.ndarray:
    x = np.sort(np.asarray(list(points), dtype=float))
    if x.size == 0:
        raise LineError("need at least one point")
    eq = np.flatnonzero(np.diff(x) == 0)
    if eq.size:
        raise DuplicatePoints(float(x[eq[0]]))
    return x


def line_weighting(points, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact weighting of a finite subset of R at scale t.

    Returns (sorted coordinates, weights). Weights are strictly positive.
    """
    t = _check_scale(t)
    x = _sorted_points(points)
    n = x.size
    if n == 1:
        return x, np.ones(1)
    half = np.tanh(t * np.diff(x) / 2.0)  # one term per gap
    w = np.empty(n)
    w[0] = (1.0 + half[0]) / 2.0
    w[-1] = (1.0 + half[-1]) / 2.0
    if n > 2:
        w[1:-1] = (half[:-1] + half[1:]) / 2.0
    return x, w


def line_magnitude(points, t: float) -> float:
    """1 + sum of tanh(t gap / 2) over consecutive gaps."""
    t = _check_scale(t)
    x = _sorted_points(points)
    return 1.0 + float(np.tanh(t * np.diff(x) / 2.0).sum())


def interval_magnitude(a: float, b: float, t: float) -> float:
    t = _check_scale(t)
    a, b = float(a), float(b)
    if b < a:
        raise ReversedInterval(a, b)
    return 1.0 + t * (b - a) / 2.0


def interval_weight_measure(a: float, b: float, t: float) -> dict:
    """Weight measure of [a, b]: endpoint atoms and interior density."""
    t = _check_scale(t)
    a, b = float(a), float(b)
    if b < a:
        raise ReversedInterval(a, b)
    return {
        "endpoint_mass": 0.5,
        "interior_density": t / 2.0,
        "interior_mass": t * (b - a) / 2.0,
        "total": 1.0 + t * (b - a) / 2.0,
    }


def _checked_components(components) -> list[tuple[float, float]]:
    comp = [(float(a), float(b)) for a, b in components]
    if not comp:
        raise LineError("need at least one component interval")
    for a, b in comp:
        if b < a:
            raise ReversedInterval(a, b)
    comp.sort()
    for (_, b1), (a2, _) in zip(comp, comp[1:]):
        if a2 < b1:
            raise OverlappingGaps(b1, a2)
    return comp


def compact_magnitude(components, t: float) -> float:
    """Magnitude of a finite union of disjoint closed intervals.

    1 + t * (total length) / 2 + sum over gaps of tanh(t gap / 2).
    Touching components (gap 0) are allowed; the gap term vanishes and the
    result matches the merged interval.
    """
    t = _check_scale(t)
    comp = _checked_components(components)
    vol = sum(b - a for a, b in comp)
    gaps = np.array([a2 - b1 for (_, b1), (a2, _) in zip(comp, comp[1:])])
    return 1.0 + t * vol / 2.0 + float(np.tanh(t * gaps / 2.0).sum())


def gap_union_magnitude(mag_a: float, mag_b: float, gap: float, t: float) -> float:
    """Magnitude of A union B when B sits a distance `gap` right of A.

    Both pieces must be compact subsets of R given by their own magnitudes
    at the same scale: the union costs mag_a + mag_b - 1 + tanh(t gap / 2).
    """
    t = _check_scale(t)
    gap = float(gap)
    if gap < 0:
        raise NegativeGap(gap)
    return float(mag_a) + float(mag_b) - 1.0 + math.tanh(t * gap / 2.0)


def cantor_magnitude(t: float, length: float = 1.0, tol: float = 1e-14,
                     max_terms: int = 100_000) -> float:
    """Magnitude of the middle-thirds set on [0, length] at scale t.

    Sums 1 + sum_{i>=1} 2^(i-1) tanh(t L / (2 3^i)) until the geometric
    tail bound (t L / 2) (2/3)^k drops below tol. tanh is bounded by its
    argument, so the tail after k terms is at most
    sum_{i>k} 2^(i-1) t L / (2 3^i) = (t L / 2)(2/3)^k.
    """
    t = _check_scale(t)
    if not length > 0:
        raise LineError("length must be positive")
    total = 1.0
    half_tl = t * length / 2.0
    for i in range(1, max_terms + 1):
        total += 2.0 ** (i - 1) * math.tanh(half_tl / 3.0**i)
        if half_tl * (2.0 / 3.0) ** i < tol:
            return total
    raise LineError("series did not meet tolerance within max_terms")


def cantor_magnitude_tail_bound(t: float, length: float, k: int) -> float:
    """Upper bound on the series remainder after k terms."""
    return (float(t) * float(length) / 2.0) * (2.0 / 3.0) ** k
