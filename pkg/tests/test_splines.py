"""Spline basis and pulse parameterization tests.

The basis matrix is checked against a brute-force scalar Cox-de Boor
recursion written independently here, and against scipy's BSpline.
"""

import numpy as np
import pytest
from scipy.interpolate import BSpline

from zreadout.splines import (
    SplineBasis,
    SplinePulse,
    embed_free_coeffs,
    eval_gc,
    eval_gc_derivs,
    fit_spline_to_function,
    reconstruct_gz,
)

T_F = 3.0e-8


def bspline_oracle(x, k, i, t):
    """Textbook recursive definition of B_{i,k}(x) on knot vector t."""
    if k == 0:
        return 1.0 if t[i] <= x < t[i + 1] else 0.0
    if t[i + k] == t[i]:
        c1 = 0.0
    else:
        c1 = (x - t[i]) / (t[i + k] - t[i]) * bspline_oracle(x, k - 1, i, t)
    if t[i + k + 1] == t[i + 1]:
        c2 = 0.0
    else:
        c2 = (t[i + k + 1] - x) / (t[i + k + 1] - t[i + 1]) * bspline_oracle(x, k - 1, i + 1, t)
    return c1 + c2


@pytest.fixture(scope="module")
def basis():
    return SplineBasis.uniform(16, T_F)


def test_uniform_knot_structure(basis):
    knots = basis.knots
    assert len(knots) == 16 + 4
    assert np.all(knots[:4] == 0.0)
    assert np.all(knots[-4:] == T_F)
    interior = knots[4:-4]
    assert np.allclose(np.diff(interior), interior[1] - interior[0])
    assert basis.n_basis == 16
    assert basis.t_f == T_F


def test_matrix_matches_bruteforce_recursion(basis):
    rng = np.random.default_rng(11)
    x = rng.uniform(0.0, T_F, 40) * (1 - 1e-12)  # interior points
    b = basis.matrix(x)
    for j, xv in enumerate(x):
        for i in range(basis.n_basis):
            expected = bspline_oracle(xv, 3, i, basis.knots)
            assert b[j, i] == pytest.approx(expected, rel=1e-12, abs=1e-14)


def test_matrix_matches_scipy(basis):
    rng = np.random.default_rng(3)
    coeffs = rng.normal(size=16)
    x = np.linspace(0.0, T_F, 257)
    ref = BSpline(basis.knots, coeffs, 3)
    for deriv in (0, 1, 2):
        ours = basis.matrix(x, deriv=deriv) @ coeffs
        theirs = ref.derivative(deriv)(x) if deriv else ref(x)
        scale = np.max(np.abs(theirs))
        assert np.max(np.abs(ours - theirs)) <= 1e-10 * scale


def test_partition_of_unity(basis):
    rng = np.random.default_rng(7)
    x = rng.uniform(0.0, T_F, 1000)
    sums = basis.matrix(x).sum(axis=1)
    assert np.max(np.abs(sums - 1.0)) <= 1e-12
    # constant coefficients reproduce the constant exactly (ignores the clamp)
    pulse = SplinePulse(basis=basis, coeffs=np.full(16, 2.5e8))
    assert np.max(np.abs(eval_gc(pulse, x) - 2.5e8)) <= 1e-12 * 2.5e8


def test_derivative_rows_sum_to_zero(basis):
    x = np.linspace(0.0, T_F, 101)
    for deriv in (1, 2):
        rows = basis.matrix(x, deriv=deriv)
        assert np.max(np.abs(rows.sum(axis=1))) <= 1e-12 * np.max(np.abs(rows))


def test_boundary_values_and_derivatives_exactly_zero(basis):
    rng = np.random.default_rng(5)
    pulse = embed_free_coeffs(basis, rng.normal(size=10) * 1e8)
    ends = np.array([0.0, T_F])
    assert np.all(eval_gc(pulse, ends) == 0.0)
    d1, d2 = eval_gc_derivs(pulse, ends)
    assert np.all(d1 == 0.0)
    assert np.all(d2 == 0.0)


def test_derivatives_match_finite_differences(basis):
    rng = np.random.default_rng(19)
    pulse = embed_free_coeffs(basis, rng.normal(size=10) * 1e8)
    x = np.linspace(0.05 * T_F, 0.95 * T_F, 301)
    h = 1e-5 * T_F
    d1, d2 = eval_gc_derivs(pulse, x)
    fd1 = (eval_gc(pulse, x + h) - eval_gc(pulse, x - h)) / (2 * h)
    assert np.max(np.abs(fd1 - d1)) <= 1e-6 * np.max(np.abs(d1))
    # second derivative from differences of the analytic first derivative,
    # away from knots where it is only C^0
    knots = np.unique(basis.knots)
    h2 = 1e-4 * T_F
    mask = np.all(np.abs(x[:, None] - knots[None, :]) > 2 * h2, axis=1)
    xm = x[mask]
    fd2 = (
        basis.matrix(xm + h2, deriv=1) @ pulse.coeffs
        - basis.matrix(xm - h2, deriv=1) @ pulse.coeffs
    ) / (2 * h2)
    assert np.max(np.abs(fd2 - d2[mask])) <= 1e-6 * np.max(np.abs(d2))


def test_c2_continuity_at_interior_knots(basis):
    rng = np.random.default_rng(23)
    pulse = embed_free_coeffs(basis, rng.normal(size=10) * 1e8)
    interior = np.unique(basis.knots)[1:-1]
    delta = 1e-12 * T_F
    for deriv in (0, 1, 2):
        left = basis.matrix(interior - delta, deriv=deriv) @ pulse.coeffs
        right = basis.matrix(interior + delta, deriv=deriv) @ pulse.coeffs
        scale = np.max(np.abs(basis.matrix(np.linspace(0, T_F, 101), deriv=deriv) @ pulse.coeffs))
        assert np.max(np.abs(left - right)) <= 1e-9 * scale


def test_reconstruct_gz_adds_curvature_term(basis):
    rng = np.random.default_rng(29)
    pulse = embed_free_coeffs(basis, rng.normal(size=10) * 1e8)
    x = np.linspace(0.0, T_F, 401)

    class P:
        omega_r = 6.6e9

    gz = reconstruct_gz(pulse, P, x)
    gc = eval_gc(pulse, x)
    _, d2 = eval_gc_derivs(pulse, x)
    assert np.allclose(gz, gc + d2 / P.omega_r**2, rtol=0, atol=0)
    assert gz[0] == 0.0 and gz[-1] == 0.0


def test_fit_recovers_exact_spline(basis):
    rng = np.random.default_rng(31)
    truth = embed_free_coeffs(basis, rng.normal(size=10) * 1e8)
    grid = np.linspace(0.0, T_F, 1201)
    fit = fit_spline_to_function(eval_gc(truth, grid), basis, grid)
    assert np.max(np.abs(fit.pulse.coeffs - truth.coeffs)) <= 1e-9 * np.max(np.abs(truth.coeffs))
    assert fit.residual_rms <= 1e-9 * np.max(np.abs(eval_gc(truth, grid)))
    assert fit.pulse.clamped


def test_fit_clamps_endpoint_coefficients(basis):
    grid = np.linspace(0.0, T_F, 501)
    target = np.sin(np.pi * grid / T_F) ** 3
    fit = fit_spline_to_function(target, basis, grid)
    assert np.all(fit.pulse.coeffs[:3] == 0.0)
    assert np.all(fit.pulse.coeffs[-3:] == 0.0)


def test_fit_rank_deficient_grid_raises(basis):
    # grid leaves the late-time basis functions unsampled
    grid = np.linspace(0.0, 0.3 * T_F, 200)
    with pytest.raises(np.linalg.LinAlgError, match="rank deficient"):
        fit_spline_to_function(np.ones_like(grid), basis, grid)


def test_domain_and_shape_errors(basis):
    with pytest.raises(ValueError):
        basis.matrix(np.array([-1e-9]))
    with pytest.raises(ValueError):
        basis.matrix(np.array([T_F * 1.0001]))
    with pytest.raises(ValueError):
        SplinePulse(basis=basis, coeffs=np.zeros(15))
    with pytest.raises(ValueError):
        embed_free_coeffs(basis, np.zeros(9))
    with pytest.raises(ValueError):
        SplineBasis.uniform(7, T_F)


def test_free_coeff_roundtrip(basis):
    rng = np.random.default_rng(37)
    free = rng.normal(size=10)
    pulse = embed_free_coeffs(basis, free)
    assert np.array_equal(pulse.free_coeffs, free)
    assert pulse.clamped


def test_deriv_beyond_degree_is_zero(basis):
    x = np.linspace(0.0, T_F, 11)
    assert np.all(basis.matrix(x, deriv=4) == 0.0)
