"""Problem definitions: potentials, nonlinearities, branch labels.

The boundary value problem lives on (0, 1) with an interface at x = 1/2.
The solution is continuous across the interface, its derivative jumps by
one, and the left boundary slope is fixed to one. Those constants are part
of the formulation, not user inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.integrate import quad

INTERFACE = 0.5

#: Fixed formulation data: u1(0) = 0, u2(1) = 0, u1'(0) = SLOPE_AT_ZERO,
#: [u](1/2) = 0 and [u'](1/2) = FLUX_JUMP.
FLUX_JUMP = 1.0
SLOPE_AT_ZERO = 1.0


class ModelError(ValueError):
    """Invalid problem description."""


@dataclass(frozen=True)
class PotentialSpec:
    """A potential q on (0, 1) with a computable L1 norm.

    kind is one of "polynomial" (coefficients c0..cd, low degree first),
    "inverse_sqrt_half" (q(x) = |1/2 - x|**-0.5), or "tabulated" (arbitrary
    evaluator supplied by the caller). A non-None singular_alpha declares an
    algebraic singularity |1/2 - x|**alpha at the interface.
    """

    kind: str
    coeffs: tuple[float, ...] = ()
    evaluator: Callable[[np.ndarray], np.ndarray] | None = None
    tabulated_l1: float | None = None
    singular_alpha: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("polynomial", "inverse_sqrt_half", "tabulated"):
            raise ModelError(f"unknown potential kind: {self.kind!r}")
        if self.kind == "tabulated" and self.evaluator is None:
            raise ModelError("tabulated potential needs an evaluator")
        if self.singular_alpha is not None and not -1.0 < self.singular_alpha < 0.0:
            raise ModelError("singular exponent must lie in (-1, 0)")

    @staticmethod
    def polynomial(coeffs) -> "PotentialSpec":
        return PotentialSpec(kind="polynomial", coeffs=tuple(float(c) for c in coeffs))

    @staticmethod
    def zero() -> "PotentialSpec":
        return PotentialSpec(kind="polynomial", coeffs=(0.0,))

    @staticmethod
    def inverse_sqrt_half() -> "PotentialSpec":
        return PotentialSpec(kind="inverse_sqrt_half", singular_alpha=-0.5)

    @staticmethod
    def tabulated(evaluator, l1: float | None = None) -> "PotentialSpec":
        return PotentialSpec(kind="tabulated", evaluator=evaluator, tabulated_l1=l1)

    @property
    def is_singular(self) -> bool:
        return self.singular_alpha is not None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "polynomial":
            return np.polynomial.polynomial.polyval(x, np.asarray(self.coeffs))
        if self.kind == "inverse_sqrt_half":
            with np.errstate(divide="ignore"):
                return np.abs(INTERFACE - x) ** -0.5
        return self.evaluator(x)


def l1_norm(q: PotentialSpec) -> float:
    """Integral of |q| over (0, 1), analytic for the built-in kinds."""
    if q.kind == "polynomial":
        poly = np.polynomial.Polynomial(q.coeffs)
        roots = [r.real for r in poly.roots()
                 if abs(r.imag) < 1e-12 and 1e-12 < r.real < 1 - 1e-12]
        cuts = [0.0, *sorted(set(roots)), 1.0]
        anti = poly.integ()
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            total += abs(anti(b) - anti(a))
        return float(total)
    if q.kind == "inverse_sqrt_half":
        # antiderivative -2*sqrt(1/2 - x) on each side of the interface
        return float(4.0 * math.sqrt(INTERFACE))
    if q.tabulated_l1 is not None:
        return float(q.tabulated_l1)
    value, err = quad(lambda x: abs(float(q(x))), 0.0, 1.0,
                      points=[INTERFACE], limit=200)
    if not math.isfinite(value) or err > 1e-6 * max(1.0, abs(value)):
        raise ModelError("tabulated potential is not reliably integrable; "
                         "supply its L1 norm explicitly")
    return float(value)


@dataclass(frozen=True)
class NonlinearitySpec:
    """Finite power series N(u) = sum a_i u^i with i >= 1 (no constant term).

    coeffs stores a_1..a_d. An all-zero or empty tuple means the linear
    problem. The majorant replaces every coefficient with its absolute
    value, which dominates N and all of its derivatives on |v| <= u.
    """

    coeffs: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))

    @staticmethod
    def empty() -> "NonlinearitySpec":
        return NonlinearitySpec(())

    @staticmethod
    def power(exponent: int, coefficient: float = 1.0) -> "NonlinearitySpec":
        if exponent < 1:
            raise ModelError("nonlinearity terms start at degree 1")
        a = [0.0] * exponent
        a[exponent - 1] = coefficient
        return NonlinearitySpec(tuple(a))

    @property
    def is_empty(self) -> bool:
        return all(a == 0.0 for a in self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def __call__(self, u):
        return eval_nonlinearity(self, u)

    def majorant_spec(self) -> "NonlinearitySpec":
        return NonlinearitySpec(tuple(abs(a) for a in self.coeffs))

    def majorant(self, u):
        return eval_majorant(self, u)

    def majorant_derivative(self, u):
        """d/du of the majorant series, sum i*|a_i|*u**(i-1)."""
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for i, a in enumerate(self.coeffs, start=1):
            if a != 0.0:
                out = out + i * abs(a) * u ** (i - 1)
        return out if out.ndim else float(out)


def _eval_series(coeffs, u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    power = u.copy()
    for a in coeffs:
        if a != 0.0:
            out = out + a * power
        power = power * u
    return out if out.ndim else float(out)


def eval_nonlinearity(n: NonlinearitySpec, u):
    """N(u) for scalar or array u."""
    return _eval_series(n.coeffs, u)


def eval_majorant(n: NonlinearitySpec, u):
    """Majorant series at u >= 0 (absolute coefficients)."""
    return _eval_series(tuple(abs(a) for a in n.coeffs), u)


@dataclass(frozen=True)
class BranchId:
    """Which zero-approximation branch to follow.

    Family I eigenvalues are 4*pi**2*(sign*2/3 + 2n)**2 with n >= 0; the
    sign only matters for n >= 1 (both signs coincide at n = 0, canonical
    form keeps +1). Family II eigenvalues are 4*pi**2*n**2 with n >= 1.
    """

    family: str
    n: int
    sign: int = 1

    def __post_init__(self) -> None:
        if self.family not in ("I", "II"):
            raise ModelError(f"unknown family: {self.family!r}")
        if self.sign not in (-1, 1):
            raise ModelError("sign must be +1 or -1")
        if self.n < 0:
            raise ModelError("branch index must be non-negative")
        if self.family == "II":
            if self.n < 1:
                raise ModelError("family II starts at n = 1")
            object.__setattr__(self, "sign", 1)
        elif self.n == 0 and self.sign == -1:
            object.__setattr__(self, "sign", 1)

    @property
    def tag(self) -> str:
        if self.family == "I":
            word = "plus" if self.sign > 0 else "minus"
            return f"I_{word}_{self.n}"
        return f"II_{self.n}"


@dataclass(frozen=True)
class TransmissionProblem:
    """Potential plus nonlinearity; the jump and boundary data are fixed."""

    potential: PotentialSpec
    nonlinearity: NonlinearitySpec = field(default_factory=NonlinearitySpec.empty)

    @property
    def is_linear(self) -> bool:
        return self.nonlinearity.is_empty

    @property
    def is_singular(self) -> bool:
        return self.potential.is_singular


def _potential_from_dict(data: dict) -> PotentialSpec:
    kind = data.get("kind")
    if kind == "polynomial":
        return PotentialSpec.polynomial(data.get("coeffs", [0.0]))
    if kind == "inverse_sqrt_half":
        return PotentialSpec.inverse_sqrt_half()
    raise ModelError(f"unsupported potential kind in problem file: {kind!r}")


def _branch_from_dict(data: dict) -> BranchId:
    try:
        family = data["family"]
        n = int(data["n"])
    except KeyError as exc:
        raise ModelError(f"branch record is missing {exc}") from exc
    sign = int(data.get("sign", 1))
    return BranchId(family=family, n=n, sign=sign)


def load_problem(path) -> tuple[TransmissionProblem, BranchId | None]:
    """Read a problem-definition JSON file.

    Returns the problem and the branch record if the file names one.
    """
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelError(f"cannot read problem file {path}: {exc}") from exc
    if "potential" not in data:
        raise ModelError("problem file lacks a potential record")
    potential = _potential_from_dict(data["potential"])
    nl = data.get("nonlinearity")
    if nl is None:
        nonlinearity = NonlinearitySpec.empty()
    else:
        nonlinearity = NonlinearitySpec(tuple(nl.get("coeffs_from_degree_1", ())))
    branch = _branch_from_dict(data["branch"]) if "branch" in data else None
    return TransmissionProblem(potential, nonlinearity), branch
