"""Independent cross-check: shooting across the interface jump.

Integrates the initial-value form of the equation with an adaptive
Runge-Kutta pair, applies the unit slope jump at the interface, and
root-finds the terminal boundary defect over lambda. Only smooth
potentials are supported; the fixed slope at the origin removes the
scaling freedom, so lambda is the single unknown.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .model import FLUX_JUMP, INTERFACE, SLOPE_AT_ZERO, TransmissionProblem


@dataclass
class ShotResult:
    """Terminal miss plus the sampled trajectory and step statistics."""

    miss: float
    x: np.ndarray
    u: np.ndarray
    du: np.ndarray
    nfev: int


def shoot(problem: TransmissionProblem, lam: float,
          tol: float = 1e-10) -> ShotResult:
    """Integrate from x=0 with (u, u') = (0, 1) and report u(1)."""
    q = problem.potential
    if q.is_singular:
        raise ValueError("shooting requires a potential that is finite on "
                         "each panel; validate singular problems through "
                         "the integrated residual instead")
    nl = problem.nonlinearity

    def rhs(x, y):
        u, du = y
        return (du, (float(q(x)) - lam) * u + nl(u))

    legs = []
    state = (0.0, SLOPE_AT_ZERO)
    for a, b in ((0.0, INTERFACE), (INTERFACE, 1.0)):
        sol = solve_ivp(rhs, (a, b), state, method="DOP853",
                        rtol=tol, atol=tol * 1e-3)
        if not sol.status == 0:
            raise RuntimeError(f"integration failed on [{a}, {b}]: "
                               f"{sol.message}")
        legs.append(sol)
        state = (sol.y[0, -1], sol.y[1, -1] + FLUX_JUMP)
    first, second = legs
    return ShotResult(
        miss=float(second.y[0, -1]),
        x=np.concatenate([first.t, second.t]),
        u=np.concatenate([first.y[0], second.y[0]]),
        du=np.concatenate([first.y[1], second.y[1]]),
        nfev=first.nfev + second.nfev,
    )


def find_eigenvalue(problem: TransmissionProblem,
                    bracket: tuple[float, float],
                    tol: float = 1e-12) -> float:
    """Root of the miss function on the bracket."""
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    shot_tol = max(tol, 1e-13)

    def miss(lam: float) -> float:
        return shoot(problem, lam, tol=shot_tol).miss

    f_lo, f_hi = miss(lo), miss(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise ValueError(f"miss does not change sign on [{lo}, {hi}]")
    return float(brentq(miss, lo, hi, xtol=tol))
