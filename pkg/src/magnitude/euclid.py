"""Closed forms and asymptotics for Euclidean balls and spheres.

Magnitudes here are functions of the radius R; the magnitude of the
t-scaled unit ball is the value at R = t. Odd-dimensional balls up to
dimension five have exact rational-in-R forms; even-dimensional spheres
(with their geodesic metric) have a closed product form whose polynomial
part dominates, leaving an exponentially small residual that must be
computed analytically, since naive subtraction underflows once R is
moderately large.

The intrinsic-volume comparison: guessing that magnitude aggregates the
classical intrinsic volumes as sum_i V_i / (i! omega_i) reproduces the
exact ball values in dimensions one and three and fails in dimension
five, and the helpers here exist to exhibit exactly that.
"""

from __future__ import annotations

import math
from fractions import Fraction


class EuclidError(ValueError):
    pass


class UnsupportedDimension(EuclidError):
    pass


class OddDimension(EuclidError):
    """An even dimension was required."""


def ball_magnitude_exact(n: int, radius) -> Fraction:
    """Exact magnitude of the odd-dimensional ball B^n of radius R.

    Known closed forms: n = 1, 3, 5. Even n has no closed form of this
    kind; odd n beyond five is not implemented.
    """
    r = Fraction(radius)
    if r < 0:
        raise EuclidError("radius must be >= 0")
    if n == 1:
        return 1 + r
    if n == 3:
        return 1 + 2 * r + r**2 + r**3 / 6
    if n == 5:
        return (24 + 72 * r + 72 * r**2 + 35 * r**3 + 9 * r**4 + r**5) \
            / (8 * (r + 3)) + r**5 / 120
    if n >= 0 and n % 2 == 0:
        raise UnsupportedDimension(
            f"no closed ball form in even dimension {n}"
        )
    raise UnsupportedDimension(f"ball forms implemented for n in (1, 3, 5), got {n}")


def ball_magnitude(n: int, radius: float) -> float:
    """Float version of ball_magnitude_exact."""
    r = float(radius)
    if r < 0:
        raise EuclidError("radius must be >= 0")
    if n == 1:
        return 1.0 + r
    if n == 3:
        return 1.0 + 2.0 * r + r**2 + r**3 / 6.0
    if n == 5:
        return (24 + 72 * r + 72 * r**2 + 35 * r**3 + 9 * r**4 + r**5) \
            / (8 * (r + 3)) + r**5 / 120
    ball_magnitude_exact(n, 0)  # raise the right error
    raise AssertionError("unreachable")


def _sphere_poly(n: int, radius: float) -> float:
    # prod over odd j < n of (1 + (R/j)^2)
    out = 1.0
    for j in range(1, n, 2):
        out *= 1.0 + (radius / j) ** 2
    return out


def sphere_magnitude(n: int, radius: float) -> float:
    """Magnitude of the even-dimensional geodesic sphere S^n, radius R:

        2 / (1 + exp(-pi R)) * prod over odd j < n of (1 + (R/j)^2).
    """
    if n % 2 != 0:
        raise OddDimension(f"sphere form needs even n, got {n}")
    if n < 2:
        raise UnsupportedDimension(f"sphere form needs n >= 2, got {n}")
    r = float(radius)
    if r < 0:
        raise EuclidError("radius must be >= 0")
    return 2.0 / (1.0 + math.exp(-math.pi * r)) * _sphere_poly(n, r)


def sphere_polynomial_part(n: int, radius: float) -> float:
    """The polynomial the sphere magnitude approaches from below:
    2 * prod over odd j < n of (1 + (R/j)^2)."""
    if n % 2 != 0:
        raise OddDimension(f"sphere form needs even n, got {n}")
    if n < 2:
        raise UnsupportedDimension(f"sphere form needs n >= 2, got {n}")
    return 2.0 * _sphere_poly(n, float(radius))


def sphere_residual(n: int, radius: float) -> float:
    """sphere_magnitude - sphere_polynomial_part, computed analytically:

        -2 e^(-pi R) / (1 + e^(-pi R)) * prod (1 + (R/j)^2)

    Exponentially small; subtracting the two floats instead would lose
    everything beyond R of about 16.
    """
    r = float(radius)
    if n % 2 != 0:
        raise OddDimension(f"sphere form needs even n, got {n}")
    if n < 2:
        raise UnsupportedDimension(f"sphere form needs n >= 2, got {n}")
    if r < 0:
        raise EuclidError("radius must be >= 0")
    x = math.exp(-math.pi * r)
    return -2.0 * x / (1.0 + x) * _sphere_poly(n, r)


# ---------------------------------------------------------------------------
# volumes and large-scale asymptotics


def unit_ball_volume(n: int) -> float:
    """omega_n, the volume of the Euclidean unit ball."""
    if n < 0:
        raise UnsupportedDimension(f"n must be >= 0, got {n}")
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def ball_volume(n: int, radius: float) -> float:
    return unit_ball_volume(n) * float(radius) ** n


def magnitude_leading_coefficient(n: int, p: int = 2) -> float:
    """c with |tA| ~ c vol(A) t^n as t grows, for full-dimensional A.

    p = 2: 1 / (n! omega_n). p = 1: 1 / 2^n.
    """
    if n < 1:
        raise UnsupportedDimension(f"n must be >= 1, got {n}")
    if p == 2:
        return 1.0 / (math.factorial(n) * unit_ball_volume(n))
    if p == 1:
        return 0.5**n
    raise EuclidError(f"p must be 1 or 2, got {p}")


def asymptotic_magnitude(n: int, volume: float, t: float, p: int = 2) -> float:
    return magnitude_leading_coefficient(n, p) * float(volume) * float(t) ** n


# ---------------------------------------------------------------------------
# the intrinsic-volume guess


def ball_intrinsic_volume(n: int, i: int, radius: float) -> float:
    """V_i(B^n_R) = binom(n, i) * omega_n / omega_(n-i) * R^i."""
    if not 0 <= i <= n:
        raise EuclidError(f"need 0 <= i <= n, got i={i}, n={n}")
    return (
        math.comb(n, i)
        * unit_ball_volume(n) / unit_ball_volume(n - i)
        * float(radius) ** i
    )


def conjectured_ball_magnitude(n: int, radius: float) -> float:
    """sum_i V_i(B^n_R) / (i! omega_i): exact in dimensions 1 and 3,
    provably wrong in dimension 5."""
    return sum(
        ball_intrinsic_volume(n, i, radius)
        / (math.factorial(i) * unit_ball_volume(i))
        for i in range(n + 1)
    )


def conjecture_compare(n: int, radius: float) -> tuple[float, float, float]:
    """(exact, conjectured, conjectured - exact) for the n-ball of the
    given radius. The difference vanishes for n in {1, 3} and is visibly
    nonzero for n = 5."""
    exact = ball_magnitude(n, radius)
    guess = conjectured_ball_magnitude(n, radius)
    return exact, guess, guess - exact
