import math

import numpy as np
import pytest
from scipy import special

from skewkit import (
    Direction,
    LogNormal,
    Normal,
    SortedSample,
    build_grid,
    midpoint_probs,
)
from skewkit.asymptotics import (
    VarianceEstimate,
    XiKernel,
    auc_variance,
    cov_r1_r1,
    cov_r1_s,
    cov_r2_r2,
    cov_r2_s,
    cov_s_r1,
    cov_s_r2,
    cov_s_s,
    sigma1_sq,
    sigma2_sq,
    sigma_cross,
    xi,
)
from skewkit.errors import MissingProbabilityError, NumericalError
from skewkit.skewness import grid_for_probs, parse_measure, population_grid


# --- brute-force expansion engine: distribute Cov over linear combinations ---

def combo_s(p):
    return [(1.0, 1.0 - p), (1.0, p), (-2.0, 0.5)]


def combo_r1(p):
    return [(1.0, 1.0 - p), (-1.0, p)]


def combo_r2(p, direction=Direction.RIGHT):
    if direction is Direction.LEFT:
        return [(1.0, 1.0 - p), (-1.0, 0.5)]
    return [(1.0, 0.5), (-1.0, p)]


def cov_engine(kernel, combo_a, combo_b):
    """Exact (fsum) distribution of Cov over two linear combinations.

    Returns the value and the summed term magnitude, which scales the
    tolerance where the signed terms cancel heavily.
    """
    terms = [
        ca * cb * xi(kernel, pa, pb) for ca, pa in combo_a for cb, pb in combo_b
    ]
    return math.fsum(terms), math.fsum(abs(t) for t in terms)


def random_kernel(rng, p, q):
    probs = {p, q, 1.0 - p, 1.0 - q, 0.5}
    g_at = {prob: float(rng.uniform(0.2, 30.0)) for prob in probs}
    return XiKernel(n=int(rng.integers(10, 10_000)), g_at=g_at)


def test_xi_examples():
    k = XiKernel(n=1, g_at={0.5: 1.0})
    assert xi(k, 0.5, 0.5) == 0.25
    k2 = XiKernel(n=100, g_at={0.25: 2.0, 0.75: 2.0})
    assert xi(k2, 0.25, 0.75) == pytest.approx(0.25 * 0.25 * 4.0 / 100, rel=1e-15)
    rng = np.random.default_rng(1)
    for _ in range(50):
        p, q = rng.uniform(0.01, 0.99, size=2)
        k3 = XiKernel(n=7, g_at={float(p): 1.5, float(q): 2.5})
        assert xi(k3, float(p), float(q)) == xi(k3, float(q), float(p))


def test_xi_missing_probability():
    k = XiKernel(n=10, g_at={0.5: 1.0})
    with pytest.raises(MissingProbabilityError):
        xi(k, 0.25, 0.5)


def test_xi_kernel_rejects_nonpositive_density():
    with pytest.raises(ValueError):
        XiKernel(n=10, g_at={0.5: 0.0})


@pytest.mark.parametrize("seed", range(12))
def test_covariance_expansions_match_engine(seed):
    rng = np.random.default_rng((2024, seed))
    p, q = sorted(rng.uniform(0.02, 0.48, size=2))
    k = random_kernel(rng, p, q)
    checks = [
        (cov_s_s(k, p, q), combo_s(p), combo_s(q)),
        (cov_s_r1(k, p, q), combo_s(p), combo_r1(q)),
        (cov_r1_s(k, p, q), combo_r1(p), combo_s(q)),
        (cov_r1_r1(k, p, q), combo_r1(p), combo_r1(q)),
        (cov_s_r2(k, p, q), combo_s(p), combo_r2(q)),
        (cov_r2_s(k, p, q), combo_r2(p), combo_s(q)),
        (cov_r2_r2(k, p, q), combo_r2(p), combo_r2(q)),
        (cov_s_r2(k, p, q, Direction.LEFT), combo_s(p), combo_r2(q, Direction.LEFT)),
        (cov_r2_s(k, p, q, Direction.LEFT), combo_r2(p, Direction.LEFT), combo_s(q)),
        (
            cov_r2_r2(k, p, q, Direction.LEFT),
            combo_r2(p, Direction.LEFT),
            combo_r2(q, Direction.LEFT),
        ),
    ]
    for got, ca, cb in checks:
        want, magnitude = cov_engine(k, ca, cb)
        assert abs(got - want) <= max(1e-14 * abs(want), 5e-15 * magnitude)


def test_cov_r1_r1_variance_specialization():
    rng = np.random.default_rng(3)
    p = 0.2
    k = random_kernel(rng, p, p)
    var = xi(k, 1 - p, 1 - p) - 2 * xi(k, p, 1 - p) + xi(k, p, p)
    assert cov_r1_r1(k, p, p) == pytest.approx(var, rel=1e-14)


def test_cov_s_r1_vanishes_for_symmetric_kernel():
    # g(p) = g(1-p) makes every term cancel (e.g. any normal distribution)
    for p in (0.05, 0.2, 0.4):
        g = 1.0 / float(np.exp(-0.5 * special.ndtri(p) ** 2) / math.sqrt(2 * math.pi))
        k = XiKernel(n=50, g_at={p: g, 1 - p: g, 0.5: math.sqrt(2 * math.pi)})
        scale = abs(cov_s_s(k, p, p))
        assert abs(cov_s_r1(k, p, p)) <= 1e-14 * scale


def test_transpose_identity():
    rng = np.random.default_rng(4)
    for _ in range(20):
        p, q = rng.uniform(0.02, 0.48, size=2)
        k = random_kernel(rng, float(p), float(q))
        assert cov_s_r1(k, float(p), float(q)) == cov_r1_s(k, float(q), float(p))
        assert cov_s_r2(k, float(p), float(q)) == cov_r2_s(k, float(q), float(p))


def _sample_grid_and_kernel(seed=11, n=400, probs=(0.15, 0.35)):
    rng = np.random.default_rng(seed)
    s = SortedSample.from_data(rng.exponential(size=n))
    grid = grid_for_probs(s, list(probs))
    return grid, XiKernel.from_grid(grid)


def test_sigma_cross_diagonal_equals_pointwise_variances():
    grid, k = _sample_grid_and_kernel()
    for p in (0.15, 0.35):
        assert sigma_cross(k, grid, p, p, "gamma") == sigma1_sq(k, grid, p)
        assert sigma_cross(k, grid, p, p, "lambda") == sigma2_sq(k, grid, p)
        assert sigma_cross(k, grid, p, p, "lambda", Direction.LEFT) == sigma2_sq(
            k, grid, p, Direction.LEFT
        )


def test_sigma_cross_symmetric_in_p_q():
    grid, k = _sample_grid_and_kernel()
    a = sigma_cross(k, grid, 0.15, 0.35, "gamma")
    b = sigma_cross(k, grid, 0.35, 0.15, "gamma")
    assert a == pytest.approx(b, rel=1e-12)
    a = sigma_cross(k, grid, 0.15, 0.35, "lambda")
    b = sigma_cross(k, grid, 0.35, 0.15, "lambda")
    assert a == pytest.approx(b, rel=1e-12)


def test_sigma1_handles_symmetric_data():
    # the plug-in expansion never divides by s_p, so exactly symmetric data
    # falls back on nVar(s)/r^2
    values = np.concatenate([np.arange(1.0, 51.0), 102.0 - np.arange(1.0, 51.0)])
    s = SortedSample.from_data(values)
    grid = grid_for_probs(s, [0.25])
    k = XiKernel.from_grid(grid)
    got = sigma1_sq(k, grid, 0.25)
    want = k.n * cov_s_s(k, 0.25, 0.25) / (grid.x_high[0] - grid.x_low[0]) ** 2
    assert got == pytest.approx(want, rel=1e-12)
    assert got >= 0.0


def test_scale_equivariance_of_variances():
    rng = np.random.default_rng(12)
    data = rng.lognormal(size=500)
    s = SortedSample.from_data(data)
    t = s.transformed(7.5, 0.0)
    for fam in ("gamma", "lambda"):
        g1, k1 = grid_for_probs(s, [0.2]), None
        g2 = grid_for_probs(t, [0.2])
        k1 = XiKernel.from_grid(g1)
        k2 = XiKernel.from_grid(g2)
        a = sigma_cross(k1, g1, 0.2, 0.2, fam)
        b = sigma_cross(k2, g2, 0.2, 0.2, fam)
        assert b == pytest.approx(a, rel=1e-10)
    ga = build_grid(s, j_points=25)
    gb = build_grid(t, j_points=25)
    for fam, weighted in (("gamma", False), ("lambda", False), ("gamma", True)):
        va = auc_variance(XiKernel.from_grid(ga), ga, fam, weighted=weighted)
        vb = auc_variance(XiKernel.from_grid(gb), gb, fam, weighted=weighted)
        assert vb == pytest.approx(va, rel=1e-10)


def test_xi_matrix_positive_semidefinite():
    rng = np.random.default_rng(13)
    for _ in range(20):
        probs = np.sort(rng.uniform(0.01, 0.99, size=10))
        g = rng.uniform(0.1, 20.0, size=10)
        k = XiKernel(n=int(rng.integers(5, 500)), g_at={float(p): float(gv) for p, gv in zip(probs, g)})
        mat = np.array([[xi(k, float(a), float(b)) for b in probs] for a in probs])
        eigs = np.linalg.eigvalsh(mat)
        assert eigs.min() >= -1e-10 * max(1.0, eigs.max())


def test_auc_variance_matches_naive_double_loop():
    rng = np.random.default_rng(14)
    s = SortedSample.from_data(rng.exponential(size=300))
    grid = build_grid(s, j_points=25)
    k = XiKernel.from_grid(grid)
    pj = grid.base_probs
    for fam in ("gamma", "lambda"):
        naive = np.mean([
            [sigma_cross(k, grid, float(a), float(b), fam) for b in pj] for a in pj
        ])
        fast = auc_variance(k, grid, fam)
        assert fast == pytest.approx(float(naive), rel=1e-12)
    naive_w = np.mean([
        [a * b * sigma_cross(k, grid, float(a), float(b), "gamma") for b in pj] for a in pj
    ])
    assert auc_variance(k, grid, "gamma", weighted=True) == pytest.approx(
        float(naive_w), rel=1e-12
    )
    naive_left = np.mean([
        [sigma_cross(k, grid, float(a), float(b), "lambda", Direction.LEFT) for b in pj]
        for a in pj
    ])
    assert auc_variance(k, grid, "lambda", direction=Direction.LEFT) == pytest.approx(
        float(naive_left), rel=1e-12
    )


def test_auc_variance_two_point_grid_equals_mean_of_cells():
    rng = np.random.default_rng(15)
    s = SortedSample.from_data(rng.exponential(size=500))
    grid = build_grid(s, j_points=2)
    k = XiKernel.from_grid(grid)
    cells = [
        sigma_cross(k, grid, float(a), float(b), "gamma")
        for a in grid.base_probs for b in grid.base_probs
    ]
    assert auc_variance(k, grid, "gamma") == pytest.approx(np.mean(cells), rel=1e-13)


def test_variance_estimate_rejects_negative():
    m = parse_measure("auc_gamma")
    with pytest.raises(NumericalError):
        VarianceEstimate.from_asymptotic(m, -1e-3, 100)
    v = VarianceEstimate.from_asymptotic(m, 2.0, 50)
    assert v.variance == pytest.approx(0.04)
    assert v.se == pytest.approx(0.2)


# --- Monte Carlo oracles at the scale the estimator displays call for -------

def _type8_rows(X, probs):
    n = X.shape[-1]
    h = np.clip((n + 1.0 / 3.0) * probs + 1.0 / 3.0, 1.0, float(n))
    fl = np.floor(h).astype(int)
    fr = h - fl
    lo = X[..., fl - 1]
    hi = X[..., np.minimum(fl + 1, n) - 1]
    return lo + fr * (hi - lo)


def test_sigma1_matches_simulation_normal():
    # n Var(g_p) at p = 0.25 for the standard normal, exact-g plug-in,
    # against 20,000 replicated samples of n = 10,000
    dist = Normal(0.0, 1.0)
    p, n, reps = 0.25, 10_000, 20_000
    probs = np.array([p, 1 - p, 0.5])
    grid = population_grid(dist, base_probs=[p])
    k = XiKernel.exact(dist, [p, 1 - p, 0.5], n)
    predicted = sigma1_sq(k, grid, p)

    rng = np.random.default_rng(160)
    gvals = np.empty(reps)
    for lo in range(0, reps, 250):
        m = min(250, reps - lo)
        X = rng.standard_normal((m, n))
        X.sort(axis=1)
        Q = _type8_rows(X, probs)
        s = Q[:, 1] + Q[:, 0] - 2 * Q[:, 2]
        r1 = Q[:, 1] - Q[:, 0]
        gvals[lo : lo + m] = s / r1
    empirical = n * gvals.var(ddof=1)
    assert empirical == pytest.approx(predicted, rel=0.05)


def test_auc_variance_matches_simulation_lognormal():
    # n Var(AUC-hat_gamma) for LN(0,1), n = 1000, against 20,000 samples;
    # the double sum is at the (1/J)-mean statistic scale, so the simulated
    # statistic here is the plain mean of the gamma curve over the grid
    dist = LogNormal(0.0, 1.0)
    n, reps, J = 1000, 20_000, 100
    pj = midpoint_probs(J)
    probs = np.concatenate([pj, 1 - pj, [0.5]])
    grid = population_grid(dist, j_points=J)
    k = XiKernel.exact(dist, np.concatenate([pj, 1 - pj, [0.5]]), n)
    predicted = auc_variance(k, grid, "gamma")

    rng = np.random.default_rng(161)
    vals = np.empty(reps)
    for lo in range(0, reps, 500):
        m = min(500, reps - lo)
        X = np.exp(rng.standard_normal((m, n)))
        X.sort(axis=1)
        Q = _type8_rows(X, probs)
        xlo, xhi, xm = Q[:, :J], Q[:, J : 2 * J], Q[:, 2 * J]
        gam = (xhi + xlo - 2 * xm[:, None]) / (xhi - xlo)
        vals[lo : lo + m] = gam.mean(axis=1)
    empirical = n * vals.var(ddof=1)
    assert empirical == pytest.approx(predicted, rel=0.10)
