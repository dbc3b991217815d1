"""System parameters for the dispersive-cavity longitudinal readout model.

Rate convention
---------------
All rates are stored as the quoted ``x / 2pi`` values, used directly as
rates in 1/s.  The dynamics depend only on dimensionless products such as
``kappa * t_f`` and ratios ``g / kappa``, and this cyclic convention is the
one that reproduces the reference calibration (peak seed photon number
~= 1072 and rescaled drive amplitude ~= 4.54 MHz for the default
parameter set); the calibration tests pin this down.  Config keys carry
the explicit ``*_over_2pi_hz`` suffix and map onto these fields with a
conversion factor of exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SystemParams", "reference_params"]


@dataclass(frozen=True)
class SystemParams:
    """Fixed physical and numerical parameters of one readout configuration.

    Attributes
    ----------
    kappa:
        Cavity decay rate (1/s).  Enters the filter ``exp(-kappa t / 2)``.
    omega_r:
        Resonator frequency (1/s).  Sets the curvature correction in the
        inverse-engineering map g_z = g_c + g_c'' / omega_r**2.
    t_f:
        Readout window (s).  The pulse is defined on [0, t_f].
    n_grid:
        Number of uniform time samples, endpoints included.
    eta:
        Measurement efficiency, in (0, 1].
    s_eff:
        Effective output noise density (record-units^2 * s).  Usually set
        by calibrating the seed pulse to a target SNR, see
        :func:`zreadout.seed.calibrate_s_eff`.
    n_max:
        Intracavity photon cap used by the photon penalty and by
        feasibility checks.
    g_max:
        Optional cap on |g_z| (same units as kappa).  ``None`` disables
        the coupling penalty.
    omega_q:
        Qubit frequency (1/s).  Recorded for provenance; the linearized
        cavity equations do not depend on it.
    """

    kappa: float
    omega_r: float
    t_f: float
    n_grid: int = 5001
    eta: float = 1.0
    s_eff: float = 1.0
    n_max: float = 50.0
    g_max: float | None = None
    omega_q: float = field(default=0.0, repr=False)

    def __post_init__(self) -> None:
        problems = validate_params(self)
        if problems:
            raise ValueError("invalid SystemParams: " + "; ".join(problems))

    def grid(self) -> np.ndarray:
        """Uniform time grid on [0, t_f] with n_grid points."""
        return np.linspace(0.0, self.t_f, self.n_grid)


def validate_params(p: SystemParams) -> list[str]:
    """Collect every violated parameter invariant (empty list if valid)."""
    problems = []
    if not p.kappa > 0:
        problems.append("kappa > 0")
    if not p.omega_r > 0:
        problems.append("omega_r > 0")
    if not p.t_f > 0:
        problems.append("t_f > 0")
    if p.n_grid < 2:
        problems.append("n_grid >= 2")
    if not 0 < p.eta <= 1:
        problems.append("0 < eta <= 1")
    if not p.s_eff > 0:
        problems.append("s_eff > 0")
    if not p.n_max > 0:
        problems.append("n_max > 0")
    if p.g_max is not None and not p.g_max >= 0:
        problems.append("g_max >= 0")
    return problems


def reference_params(**overrides) -> SystemParams:
    """Reference parameter set: kappa/2pi = 1 MHz, omega_r/2pi = 6.6 GHz,
    t_f = 30 ns (kappa * t_f = 0.03), 5001 grid points, N_max = 50."""
    values = dict(
        kappa=1.0e6,
        omega_r=6.6e9,
        t_f=3.0e-8,
        n_grid=5001,
        eta=1.0,
        s_eff=1.0,
        n_max=50.0,
        g_max=None,
    )
    values.update(overrides)
    return SystemParams(**values)
