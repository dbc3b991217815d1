"""Clamped cubic B-spline pulse parameterization.

The drive g_c(t) is a cubic B-spline on [0, t_f] with a clamped knot
vector (4-fold endpoint knots, uniform interior knots).  Forcing the
first and last three coefficients to zero makes g_c, g_c' and g_c''
vanish at both endpoints, which keeps the reconstructed longitudinal
coupling g_z = g_c + g_c''/omega_r**2 zero at the window edges.

The basis is evaluated with the Cox-de Boor recursion; derivatives use
the standard degree-lowering recursion
B'_{k,p}(t) = p * [ B_{k,p-1}/(T_{k+p}-T_k) - B_{k+1,p-1}/(T_{k+p+1}-T_{k+1}) ],
with all 0/0 terms taken as 0.  The evaluation at t = t_f closes the last
non-empty knot span on the right, so values and derivatives there are the
left limits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SplineBasis",
    "SplinePulse",
    "SplineFit",
    "eval_gc",
    "eval_gc_derivs",
    "reconstruct_gz",
    "fit_spline_to_function",
    "embed_free_coeffs",
    "N_CLAMPED",
]

# coefficients pinned to zero at each end of the coefficient vector
N_CLAMPED = 3


def _zero_degree(knots: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Indicator functions of the knot spans, right-closed on the last
    non-empty span so that t = t_f belongs to the domain."""
    t_end = knots[-1]
    lo = knots[:-1]
    hi = knots[1:]
    inside = (x[:, None] >= lo[None, :]) & (x[:, None] < hi[None, :])
    at_end = (x[:, None] == t_end) & (lo[None, :] < hi[None, :]) & (hi[None, :] == t_end)
    return (inside | at_end).astype(float)


def _value_matrix(knots: np.ndarray, degree: int, x: np.ndarray) -> np.ndarray:
    b = _zero_degree(knots, x)
    for p in range(1, degree + 1):
        n_cols = len(knots) - p - 1
        nxt = np.zeros((x.size, n_cols))
        for k in range(n_cols):
            den_l = knots[k + p] - knots[k]
            den_r = knots[k + p + 1] - knots[k + 1]
            if den_l > 0:
                nxt[:, k] += (x - knots[k]) / den_l * b[:, k]
            if den_r > 0:
                nxt[:, k] += (knots[k + p + 1] - x) / den_r * b[:, k + 1]
        b = nxt
    return b


def _deriv_matrix(knots: np.ndarray, degree: int, x: np.ndarray, deriv: int) -> np.ndarray:
    if deriv == 0:
        return _value_matrix(knots, degree, x)
    if deriv > degree:
        return np.zeros((x.size, len(knots) - degree - 1))
    lower = _deriv_matrix(knots, degree - 1, x, deriv - 1)
    n_cols = len(knots) - degree - 1
    out = np.zeros((x.size, n_cols))
    for k in range(n_cols):
        den_l = knots[k + degree] - knots[k]
        den_r = knots[k + degree + 1] - knots[k + 1]
        if den_l > 0:
            out[:, k] += degree / den_l * lower[:, k]
        if den_r > 0:
            out[:, k] -= degree / den_r * lower[:, k + 1]
    return out


@dataclass(frozen=True)
class SplineBasis:
    """Cubic B-spline basis on a clamped knot vector."""

    knots: np.ndarray
    degree: int = 3

    def __post_init__(self) -> None:
        knots = np.asarray(self.knots, dtype=float)
        object.__setattr__(self, "knots", knots)
        if knots.ndim != 1 or len(knots) < 2 * (self.degree + 1):
            raise ValueError("knot vector too short for the requested degree")
        if np.any(np.diff(knots) < 0):
            raise ValueError("knot vector must be nondecreasing")

    @classmethod
    def uniform(cls, n_basis: int, t_f: float, degree: int = 3) -> "SplineBasis":
        """Clamped knot vector with uniform interior knots: (degree+1)-fold
        zeros, n_basis - degree - 1 interior knots, (degree+1)-fold t_f."""
        if n_basis < 2 * (degree + 1):
            raise ValueError(f"n_basis must be >= {2 * (degree + 1)} for degree {degree}")
        if not t_f > 0:
            raise ValueError("t_f > 0")
        interior = np.linspace(0.0, t_f, n_basis - degree + 1)[1:-1]
        knots = np.concatenate([
            np.zeros(degree + 1),
            interior,
            np.full(degree + 1, t_f),
        ])
        return cls(knots=knots, degree=degree)

    @property
    def n_basis(self) -> int:
        return len(self.knots) - self.degree - 1

    @property
    def t_f(self) -> float:
        return float(self.knots[-1])

    def matrix(self, grid: np.ndarray, deriv: int = 0) -> np.ndarray:
        """Basis (or basis-derivative) matrix of shape (len(grid), n_basis)."""
        x = np.atleast_1d(np.asarray(grid, dtype=float))
        if x.ndim != 1:
            raise ValueError("grid must be one-dimensional")
        if np.any(x < self.knots[0]) or np.any(x > self.knots[-1]):
            raise ValueError("evaluation points outside the knot domain")
        if deriv < 0:
            raise ValueError("deriv must be >= 0")
        return _deriv_matrix(self.knots, self.degree, x, deriv)


@dataclass(frozen=True)
class SplinePulse:
    """A drive waveform g_c(t) = sum_k c_k B_k(t).

    Coefficients carry the same rate units as g_c.  The boundary clamp
    (first and last three coefficients zero) is expected wherever a pulse
    feeds the dynamics, but is not enforced here so that raw basis
    combinations can be built in tests; check :attr:`clamped` when it
    matters.
    """

    basis: SplineBasis
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=float)
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs.shape != (self.basis.n_basis,):
            raise ValueError(
                f"coeffs shape {coeffs.shape} does not match n_basis {self.basis.n_basis}"
            )

    @property
    def t_f(self) -> float:
        return self.basis.t_f

    @property
    def clamped(self) -> bool:
        c = self.coeffs
        return bool(np.all(c[:N_CLAMPED] == 0.0) and np.all(c[-N_CLAMPED:] == 0.0))

    @property
    def free_coeffs(self) -> np.ndarray:
        return self.coeffs[N_CLAMPED:-N_CLAMPED].copy()


def embed_free_coeffs(basis: SplineBasis, free: np.ndarray) -> SplinePulse:
    """Build a clamped pulse from the interior coefficients only."""
    free = np.asarray(free, dtype=float)
    n_free = basis.n_basis - 2 * N_CLAMPED
    if free.shape != (n_free,):
        raise ValueError(f"expected {n_free} free coefficients, got {free.shape}")
    coeffs = np.zeros(basis.n_basis)
    coeffs[N_CLAMPED:-N_CLAMPED] = free
    return SplinePulse(basis=basis, coeffs=coeffs)


def eval_gc(pulse: SplinePulse, grid: np.ndarray) -> np.ndarray:
    return pulse.basis.matrix(grid) @ pulse.coeffs


def eval_gc_derivs(pulse: SplinePulse, grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First and second time derivatives of g_c on the grid."""
    d1 = pulse.basis.matrix(grid, deriv=1) @ pulse.coeffs
    d2 = pulse.basis.matrix(grid, deriv=2) @ pulse.coeffs
    return d1, d2


def reconstruct_gz(pulse: SplinePulse, params, grid: np.ndarray) -> np.ndarray:
    """Longitudinal coupling g_z = g_c + g_c'' / omega_r**2 that produces
    the cavity drive g_c under the inverse-engineering map."""
    _, d2 = eval_gc_derivs(pulse, grid)
    return eval_gc(pulse, grid) + d2 / params.omega_r**2


@dataclass(frozen=True)
class SplineFit:
    pulse: SplinePulse
    residual_rms: float


def fit_spline_to_function(
    target_values: np.ndarray, basis: SplineBasis, grid: np.ndarray
) -> SplineFit:
    """Least-squares projection of a sampled waveform onto the clamped
    basis.  Only the free coefficients are fit; the clamped ones stay at
    exactly zero."""
    y = np.asarray(target_values, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if y.shape != grid.shape:
        raise ValueError("target and grid must have the same shape")
    if len(grid) < basis.n_basis:
        raise ValueError("need at least n_basis sample points for the fit")
    b_full = basis.matrix(grid)
    b_free = b_full[:, N_CLAMPED:-N_CLAMPED]
    free, _, rank, _ = np.linalg.lstsq(b_free, y, rcond=None)
    if rank < b_free.shape[1]:
        raise np.linalg.LinAlgError(
            f"spline fit is rank deficient (rank {rank} < {b_free.shape[1]}); "
            "the grid does not resolve every basis function"
        )
    pulse = embed_free_coeffs(basis, free)
    residual = b_full @ pulse.coeffs - y
    return SplineFit(pulse=pulse, residual_rms=float(np.sqrt(np.mean(residual**2))))
