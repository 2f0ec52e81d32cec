"""Closed forms and asymptotics for balls and spheres."""

import math
from fractions import Fraction

import pytest

from magnitude.euclid import (
    EuclidError,
    OddDimension,
    UnsupportedDimension,
    asymptotic_magnitude,
    ball_intrinsic_volume,
    ball_magnitude,
    ball_magnitude_exact,
    ball_volume,
    conjecture_compare,
    conjectured_ball_magnitude,
    magnitude_leading_coefficient,
    sphere_magnitude,
    sphere_polynomial_part,
    sphere_residual,
    unit_ball_volume,
)

F = Fraction


# ---------------------------------------------------------------------------
# odd-dimensional balls


def test_ball_closed_forms_at_unit_radius():
    assert ball_magnitude_exact(1, 1) == 2
    assert ball_magnitude_exact(3, 1) == F(25, 6)
    assert ball_magnitude_exact(5, 1) == F(3199, 480)
    assert ball_magnitude_exact(5, 1) == F(213, 32) + F(1, 120)


def _reverse_bessel(k: int, r: Fraction) -> Fraction:
    # theta_0 = 1, theta_1 = r + 1, theta_{n+1} = (2n+1) theta_n + r^2 theta_{n-1}
    a, b = Fraction(1), r + 1
    for n in range(1, k):
        a, b = b, (2 * n + 1) * b + r * r * a
    return b if k >= 1 else a


def test_ball_hankel_determinant_identity():
    """The odd ball forms agree with Hankel determinants of the reverse
    Bessel polynomials: det[theta_{i+j+1}] over 1, 6, 240(R+3) for
    n = 1, 3, 5. Independent derivation path for the n=5 numerator."""
    for r in (F(1), F(1, 2), F(3), F(7, 3)):
        th = [_reverse_bessel(k, r) for k in range(6)]
        det1 = th[1]
        det2 = th[1] * th[3] - th[2] ** 2
        det3 = (
            th[1] * (th[3] * th[5] - th[4] ** 2)
            - th[2] * (th[2] * th[5] - th[3] * th[4])
            + th[3] * (th[2] * th[4] - th[3] ** 2)
        )
        assert det1 == ball_magnitude_exact(1, r)
        assert det2 == 6 * ball_magnitude_exact(3, r)
        assert det3 == 240 * (r + 3) * ball_magnitude_exact(5, r)


def test_ball_exact_accepts_rationals():
    v = ball_magnitude_exact(3, F(1, 2))
    assert v == 1 + 2 * F(1, 2) + F(1, 2) ** 2 + F(1, 2) ** 3 / 6
    assert ball_magnitude(3, 0.5) == pytest.approx(float(v), abs=1e-15)


def test_ball_line_segment_case():
    # the 1-ball of radius R is an interval of length 2R at t=1
    for r in (0.5, 1.0, 7.0):
        assert ball_magnitude(1, r) == pytest.approx(1.0 + r)


def test_ball_dimension_errors():
    for n in (2, 4, 6):
        with pytest.raises(UnsupportedDimension):
            ball_magnitude(n, 1.0)
    with pytest.raises(UnsupportedDimension):
        ball_magnitude(7, 1.0)
    with pytest.raises(EuclidError):
        ball_magnitude(3, -1.0)


def test_ball_magnitude_increasing_and_at_least_one():
    for n in (1, 3, 5):
        prev = 1.0
        for r in (0.01, 0.1, 1.0, 10.0, 100.0, 1000.0):
            val = ball_magnitude(n, r)
            assert val >= max(1.0, prev)
            prev = val


def test_ball_volume_ratio_limit():
    # |B^3_R| / R^3 -> 1/6, the leading Steiner-like term
    assert ball_magnitude(3, 1e3) / 1e9 == pytest.approx(1.0 / 6.0, rel=1e-2)
    assert ball_magnitude(5, 1e4) / (1e20 / 120.0) == pytest.approx(1.0, rel=1e-2)


# ---------------------------------------------------------------------------
# even-dimensional spheres


def test_sphere_closed_form_small_dimensions():
    r = 1.3
    x = math.exp(-math.pi * r)
    expect2 = 2.0 / (1.0 + x) * (1.0 + r * r)
    assert sphere_magnitude(2, r) == pytest.approx(expect2, rel=1e-14)
    expect4 = 2.0 / (1.0 + x) * (1.0 + r * r) * (1.0 + r * r / 9.0)
    assert sphere_magnitude(4, r) == pytest.approx(expect4, rel=1e-14)


def test_sphere_polynomial_plus_residual_identity():
    for n in (2, 4, 6):
        for r in (0.3, 1.0, 2.5):
            total = sphere_polynomial_part(n, r) + sphere_residual(n, r)
            assert total == pytest.approx(sphere_magnitude(n, r), rel=1e-12)


def test_sphere_residual_values_and_decay():
    # analytic form avoids catastrophic cancellation at large radius
    assert sphere_residual(2, 10.0) == pytest.approx(-4.587624158014571e-12, rel=1e-9)
    r100 = sphere_residual(2, 100.0)
    assert r100 < 0
    assert abs(r100) < 1e-130
    prev = abs(sphere_residual(2, 1.0))
    for r in (2.0, 5.0, 10.0, 20.0):
        cur = abs(sphere_residual(2, r))
        assert cur < prev
        prev = cur


def test_sphere_rejects_odd_dimension():
    for n in (1, 3, 5):
        with pytest.raises(OddDimension):
            sphere_magnitude(n, 1.0)
        with pytest.raises(OddDimension):
            sphere_residual(n, 1.0)
    # both error kinds share the module base class
    assert issubclass(OddDimension, EuclidError)
    assert issubclass(UnsupportedDimension, EuclidError)


# ---------------------------------------------------------------------------
# volumes, leading coefficients, the additivity conjecture


def test_unit_ball_volumes():
    assert unit_ball_volume(1) == pytest.approx(2.0)
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0)
    assert ball_volume(3, 2.0) == pytest.approx(32.0 * math.pi / 3.0)


def test_leading_coefficients():
    # euclidean normalization 1 / (n! omega_n); taxicab 1 / 2^n
    assert magnitude_leading_coefficient(3, p=2) == pytest.approx(
        1.0 / (6.0 * unit_ball_volume(3))
    )
    assert magnitude_leading_coefficient(2, p=1) == pytest.approx(0.25)
    with pytest.raises(EuclidError):
        magnitude_leading_coefficient(3, p=3)


def test_asymptotic_magnitude_matches_ball_growth():
    r = 1e3
    approx = asymptotic_magnitude(3, ball_volume(3, r), 1.0)
    assert approx == pytest.approx(ball_magnitude(3, r), rel=1e-2)
    # half the volume at doubled scale lands in the same place
    assert asymptotic_magnitude(3, 8.0, 2.0) == pytest.approx(
        asymptotic_magnitude(3, 64.0, 1.0)
    )


def test_intrinsic_volume_values():
    # V_i = C(n,i) omega_n / omega_{n-i} R^i
    assert ball_intrinsic_volume(3, 0, 2.0) == pytest.approx(1.0)
    assert ball_intrinsic_volume(3, 3, 2.0) == pytest.approx(ball_volume(3, 2.0))
    assert ball_intrinsic_volume(1, 1, 5.0) == pytest.approx(10.0)  # length
    assert ball_intrinsic_volume(3, 2, 1.0) == pytest.approx(
        3.0 * unit_ball_volume(3) / unit_ball_volume(1)
    )


def test_conjectured_sum_exact_in_low_dimensions_fails_at_five():
    for n, r in ((1, 0.7), (1, 3.0), (3, 1.0), (3, 2.5)):
        assert conjectured_ball_magnitude(n, r) == pytest.approx(
            ball_magnitude(n, r), abs=1e-12
        )
    got = conjectured_ball_magnitude(5, 1.0)
    assert got == pytest.approx(6.452777777777779, abs=1e-12)
    assert abs(got - ball_magnitude(5, 1.0)) > 1e-3


def test_conjecture_compare_triple():
    exact, conj, diff = conjecture_compare(5, 1.0)
    assert exact == pytest.approx(float(F(3199, 480)), abs=1e-12)
    assert conj == pytest.approx(float(F(2323, 360)), abs=1e-12)
    assert diff == pytest.approx(conj - exact, abs=1e-15)
    assert abs(diff) > 1e-3
    # agreement in the low dimensions, across scales
    for n in (1, 3):
        for r in (0.1, 1.0, 7.5):
            exact, conj, diff = conjecture_compare(n, r)
            assert abs(diff) <= 1e-10 * max(1.0, exact)
