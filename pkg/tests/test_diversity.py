"""Maximum diversity, covering numbers, and growth-rate dimension."""

import numpy as np
import pytest

from magnitude.diversity import (
    EXACT_COVERING_LIMIT,
    EXACT_DIVERSITY_LIMIT,
    DiversityError,
    NonConvergence,
    TooLarge,
    WindowTooNarrow,
    covering_number,
    dimension_estimate,
    greedy_covering_number,
    kkt_gap,
    max_diversity,
    max_diversity_exact,
    packing_number,
)
from magnitude.engine import is_positive_definite, magnitude, similarity_matrix
from magnitude.spaces import (
    ball_sample,
    cantor_endpoints,
    graph_metric,
    named_graph_edges,
    points_on_line,
)

C5 = graph_metric(named_graph_edges("c5"))
K32 = graph_metric(named_graph_edges("k32"))


# ---------------------------------------------------------------------------
# maximum diversity


def test_uniform_distribution_optimal_on_homogeneous_spaces():
    res = max_diversity(C5, 1.0)
    assert res.optimizer.weights == pytest.approx(np.full(5, 0.2), abs=1e-12)
    assert res.optimizer.support == (0, 1, 2, 3, 4)
    assert res.kkt_gap <= 1e-9
    assert res.value == pytest.approx(magnitude(C5, 1.0), abs=1e-9)


def test_solver_matches_enumeration_oracle():
    spaces = [
        (C5, 1.0),
        (K32, 2.0),
        (K32, 0.1),
        (points_on_line([0.0, 0.3, 1.1, 2.0]), 0.7),
        (ball_sample(2, 1.0, 9, seed=8), 1.5),
    ]
    for sp, t in spaces:
        fw = max_diversity(sp, t)
        ex = max_diversity_exact(sp, t)
        assert fw.value == pytest.approx(ex.value, abs=1e-7)


def test_k32_diversity_exceeds_magnitude_below_the_pole():
    # 3-point support beats the full-support stationary point
    ex = max_diversity_exact(K32, 0.1)
    assert ex.optimizer.support == (0, 1, 2)
    assert ex.value == pytest.approx(1.1374573592819663, abs=1e-12)
    assert ex.value > magnitude(K32, 0.1) + 0.03
    assert not is_positive_definite(K32, 0.1)


def test_diversity_equals_magnitude_on_line_subsets():
    rng = np.random.default_rng(23)
    for _ in range(10):
        pts = np.unique(rng.random(int(rng.integers(2, 12))) * 4.0)
        sp = points_on_line(pts)
        t = float(rng.uniform(0.2, 3.0))
        assert max_diversity(sp, t).value == pytest.approx(
            magnitude(sp, t), abs=1e-7
        )


def test_diversity_at_most_magnitude_when_positive_definite():
    rng = np.random.default_rng(24)
    for seed in range(6):
        sp = ball_sample(3, 1.0, int(rng.integers(5, 25)), seed=seed + 100)
        t = float(rng.uniform(0.3, 3.0))
        assert is_positive_definite(sp, t)
        assert max_diversity(sp, t).value <= magnitude(sp, t) + 1e-8


def test_diversity_nondecreasing_in_scale():
    rng = np.random.default_rng(25)
    for sp in (K32, C5, ball_sample(2, 1.0, 15, seed=77)):
        ts = np.sort(rng.uniform(0.05, 6.0, size=8))
        vals = [max_diversity(sp, float(t)).value for t in ts]
        assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))


def test_diversity_between_one_and_n():
    rng = np.random.default_rng(26)
    for seed in range(5):
        sp = ball_sample(2, 1.0, 12, seed=seed + 300)
        t = float(rng.uniform(0.1, 5.0))
        val = max_diversity(sp, t).value
        assert 1.0 - 1e-12 <= val <= sp.n_points + 1e-9


def test_kkt_gap_zero_at_optimum_positive_elsewhere():
    z = similarity_matrix(C5, 1.0).entries
    assert kkt_gap(z, np.full(5, 0.2)) <= 1e-12
    lopsided = np.array([0.9, 0.1, 0.0, 0.0, 0.0])
    assert kkt_gap(z, lopsided) > 1e-3


def test_nonconvergence_carries_iterations_and_gap():
    sp = ball_sample(3, 1.0, 30, seed=55)
    with pytest.raises(NonConvergence) as err:
        max_diversity(sp, 1.0, tol=1e-15, max_iters=3)
    assert err.value.iterations == 3
    assert err.value.gap > 0


def test_exact_solver_size_limit():
    sp = ball_sample(2, 1.0, EXACT_DIVERSITY_LIMIT + 1, seed=4)
    with pytest.raises(TooLarge):
        max_diversity_exact(sp, 1.0)


# ---------------------------------------------------------------------------
# covering and packing


def test_grid_covering_numbers():
    grid = points_on_line(np.linspace(0.0, 1.0, 11))
    assert covering_number(grid, 0.25) == 3
    assert greedy_covering_number(grid, 0.25) >= 3
    assert packing_number(grid, 0.25) == 3


def test_whole_space_is_one_ball_beyond_diameter():
    assert covering_number(K32, 2.5) == 1
    assert covering_number(K32, 2.0) == 1  # closed balls


def test_cantor_covering_sixteen():
    c3 = cantor_endpoints(3)
    assert c3.n_points == 16
    assert covering_number(c3, 1.0 / 54.0) == 16
    assert packing_number(c3, 1.0 / 54.0) == 16
    # twice the radius merges endpoint pairs
    assert covering_number(c3, 1.0 / 27.0) == 8


def test_packing_never_exceeds_covering():
    rng = np.random.default_rng(31)
    for seed in range(8):
        sp = ball_sample(2, 1.0, int(rng.integers(4, 20)), seed=seed + 40)
        eps = float(rng.uniform(0.05, 1.2))
        assert packing_number(sp, eps) <= covering_number(sp, eps)
        assert covering_number(sp, eps) <= greedy_covering_number(sp, eps)


def test_covering_size_limit_and_bad_radius():
    sp = ball_sample(2, 1.0, EXACT_COVERING_LIMIT + 1, seed=6)
    with pytest.raises(TooLarge):
        covering_number(sp, 0.5)
    with pytest.raises(DiversityError):
        greedy_covering_number(K32, -0.1)
    with pytest.raises(DiversityError):
        packing_number(K32, -0.1)


# ---------------------------------------------------------------------------
# dimension estimates


def test_line_grid_covering_growth_slope_near_one():
    line = points_on_line(np.linspace(0.0, 1.0, 101))
    est = dimension_estimate(line, 5.0, 50.0, method="covering_growth")
    assert 0.8 <= est.slope <= 1.1
    assert est.method == "covering_growth"
    assert est.window == (5.0, 50.0)


def test_diversity_growth_slope_on_small_line():
    line = points_on_line(np.linspace(0.0, 1.0, 65))
    est = dimension_estimate(line, 4.0, 40.0, samples=8)
    assert 0.75 <= est.slope <= 1.1
    assert est.fit_residual < 0.2


def test_window_and_method_validation():
    line = points_on_line(np.linspace(0.0, 1.0, 9))
    with pytest.raises(WindowTooNarrow):
        dimension_estimate(line, 5.0, 1.0)
    with pytest.raises(WindowTooNarrow):
        dimension_estimate(line, 1.0, 5.0, samples=5)
    with pytest.raises(DiversityError):
        dimension_estimate(line, 1.0, 5.0, method="no_such_method")


def test_covering_certificate():
    grid = points_on_line(np.linspace(0.0, 1.0, 11))
    k, centers = covering_number(grid, 0.25, with_centers=True)
    assert k == 3 and len(centers) == 3
    d = grid.distances
    # certified centers really cover every point
    assert all(min(d[c, j] for c in centers) <= 0.25 for j in range(11))

    c3 = cantor_endpoints(3)
    k, centers = covering_number(c3, 1.0 / 54.0, with_centers=True)
    assert k == 16 and centers == tuple(range(16))

    k, centers = covering_number(grid, 5.0, with_centers=True)
    assert k == 1 and len(centers) == 1
