"""The correction recursion: series terms for the eigenvalue and eigenfunction.

Each rank first fixes the eigenvalue correction from a weighted integral of
the driving field (the weight is the zero approximation's own shape), then
assembles the full right-hand side, solves for the free amplitude of the
right panel, and finally produces the eigenfunction correction through the
sine-kernel convolution. The eigenvalue denominator is evaluated with the
same discrete rule as the numerator, which keeps the four homogeneous side
conditions of every correction at roundoff level on any mesh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import zero_eigenfunction
from .model import (BranchId, NonlinearitySpec, PotentialSpec,
                    TransmissionProblem)
from .quadrature import (GridFunction, PanelFn, PanelMesh, cumulative_simpson,
                         kernel_convolution, weighted_cumulative)

DEFAULT_MESH = 2048


class FdError(ValueError):
    """Recursion cannot proceed with the given inputs."""


def adomian(n: NonlinearitySpec, u_values):
    """Series term A_j of N applied to the truncated expansion.

    u_values holds the terms u(0)..u(j) (scalars or equal-shaped arrays) and
    the result is the coefficient of t**j in N(sum_k u(k) t**k), computed by
    truncated products of the power series. A_0 equals N(u(0)).
    """
    seq = [np.asarray(v, dtype=float) for v in u_values]
    if not seq:
        raise FdError("adomian needs at least the zero-order term")
    j = len(seq) - 1
    series = np.stack(np.broadcast_arrays(*seq)) if j else seq[0][None, ...]
    if n.is_empty:
        out = np.zeros_like(series[0])
        return out if out.ndim else 0.0
    total = np.zeros_like(series)
    power = series.copy()
    degree = n.degree
    for i, a in enumerate(n.coeffs, start=1):
        if a != 0.0:
            total = total + a * power
        if i < degree:
            power = _truncated_product(power, series)
    out = total[j]
    return out if out.ndim else float(out)


def _truncated_product(p, s):
    out = np.zeros_like(p)
    for k in range(p.shape[0]):
        for r in range(k + 1):
            out[k] = out[k] + p[r] * s[k - r]
    return out


@dataclass
class Correction:
    """One term of the expansion: eigenvalue, both panel pieces, amplitude."""

    j: int
    lambda_j: float
    u1: PanelFn
    u2: PanelFn
    du1: PanelFn
    du2: PanelFn
    c2_j: float
    rhs1: np.ndarray | None = None
    rhs2: np.ndarray | None = None


@dataclass
class RhsField:
    """Right-hand side of a correction problem, split smooth/weighted.

    The smooth parts are integrated directly; the weighted parts carry the
    factor that multiplies the singular interface weight and go through the
    substitution rule.
    """

    lambda0: float
    smooth1: PanelFn
    smooth2: PanelFn
    weighted1: PanelFn | None = None
    weighted2: PanelFn | None = None
    alpha: float | None = None


@dataclass
class FdSolution:
    """All corrections up to the requested rank plus the truncated sums."""

    problem: TransmissionProblem
    branch: BranchId
    rank: int
    mesh_m: int
    corrections: list[Correction]
    residual_norms: list[float] | None = None

    @property
    def lambda0(self) -> float:
        return self.corrections[0].lambda_j

    @property
    def lambda_total(self) -> float:
        return float(sum(c.lambda_j for c in self.corrections))

    def lambda_partial(self, k: int) -> float:
        return float(sum(c.lambda_j for c in self.corrections[: k + 1]))

    def u_total(self) -> GridFunction:
        left = PanelFn(self.corrections[0].u1.mesh,
                       sum(c.u1.values for c in self.corrections))
        right = PanelFn(self.corrections[0].u2.mesh,
                        sum(c.u2.values for c in self.corrections))
        return GridFunction(left, right)

    def du_total(self) -> tuple[PanelFn, PanelFn]:
        left = PanelFn(self.corrections[0].du1.mesh,
                       sum(c.du1.values for c in self.corrections))
        right = PanelFn(self.corrections[0].du2.mesh,
                        sum(c.du2.values for c in self.corrections))
        return left, right

    eigenfunction = u_total

    @property
    def sup_u1_by_rank(self) -> list[float]:
        return [c.u1.sup for c in self.corrections]

    @property
    def sup_u2_by_rank(self) -> list[float]:
        return [c.u2.sup for c in self.corrections]

    def truncate(self, k: int) -> "FdSolution":
        if not 0 <= k <= self.rank:
            raise FdError(f"cannot truncate rank-{self.rank} solution at {k}")
        return FdSolution(self.problem, self.branch, k, self.mesh_m,
                          self.corrections[: k + 1])


def _driving_field(corrections: list[Correction], q_left, q_right,
                   nl: NonlinearitySpec):
    """Everything on the right-hand side except the new eigenvalue term.

    q_left/q_right are node values of a smooth potential, or None for the
    singular built-in weight; in the latter case the weighted factors are
    returned separately.
    """
    j = len(corrections) - 1
    g1 = np.zeros_like(corrections[0].u1.values)
    g2 = np.zeros_like(corrections[0].u2.values)
    for p in range(1, j + 1):
        lam = corrections[j + 1 - p].lambda_j
        g1 -= lam * corrections[p].u1.values
        g2 -= lam * corrections[p].u2.values
    weighted1 = weighted2 = None
    if q_left is None:
        weighted1 = corrections[j].u1
        weighted2 = corrections[j].u2
    else:
        g1 += q_left * corrections[j].u1.values
        g2 += q_right * corrections[j].u2.values
    if not nl.is_empty:
        g1 += adomian(nl, [c.u1.values for c in corrections])
        g2 += adomian(nl, [c.u2.values for c in corrections])
    return g1, g2, weighted1, weighted2


class _Engine:
    """Shared per-solve state: meshes, trig tables, zero-order cumulants."""

    def __init__(self, problem: TransmissionProblem, branch: BranchId,
                 mesh_m: int = DEFAULT_MESH):
        if mesh_m % 2 or mesh_m < 4:
            raise FdError("mesh size must be even and at least 4")
        self.problem = problem
        self.branch = branch
        self.zero = zero_eigenfunction(branch)
        self.lambda0 = self.zero.lambda0
        self.omega = math.sqrt(self.lambda0)
        self.mesh_left = PanelMesh("left", mesh_m)
        self.mesh_right = PanelMesh("right", mesh_m)
        xl, xr = self.mesh_left.nodes, self.mesh_right.nodes
        w = self.omega
        self.cos_left, self.sin_left = np.cos(w * xl), np.sin(w * xl)
        self.cos_right, self.sin_right = np.cos(w * xr), np.sin(w * xr)
        self.sin_tail = np.sin(w * (1.0 - xr))
        self.cos_tail = np.cos(w * (1.0 - xr))
        self.u1_zero = PanelFn(self.mesh_left, self.zero.u1(xl))
        self.u2_zero = PanelFn(self.mesh_right, self.zero.u2(xr))
        h = self.mesh_left.h
        self.cu0_left = cumulative_simpson(self.u1_zero.values * self.cos_left, h)
        self.su0_left = cumulative_simpson(self.u1_zero.values * self.sin_left, h)
        self.cu0_right = cumulative_simpson(self.u2_zero.values * self.cos_right, h)
        self.su0_right = cumulative_simpson(self.u2_zero.values * self.sin_right, h)
        self.denominator = self._weight_total(
            self.cu0_left[-1], self.su0_left[-1],
            self.cu0_right[-1], self.su0_right[-1])
        q = problem.potential
        if q.is_singular:
            if q.kind != "inverse_sqrt_half":
                raise FdError("singular potentials are supported only for "
                              "the built-in interface weight")
            self.q_left = self.q_right = None
        else:
            self.q_left = np.asarray(q(xl), dtype=float)
            self.q_right = np.asarray(q(xr), dtype=float)

    def _weight_total(self, c_left, s_left, c_right, s_right) -> float:
        """Combine full-panel cumulants against the family weight function."""
        if self.branch.family == "I":
            sw, cw = math.sin(self.omega), math.cos(self.omega)
            return sw * (c_left + c_right) - cw * (s_left + s_right)
        return s_left + s_right

    def zero_correction(self) -> Correction:
        xl, xr = self.mesh_left.nodes, self.mesh_right.nodes
        return Correction(
            j=0, lambda_j=self.lambda0,
            u1=self.u1_zero,
            u2=self.u2_zero,
            du1=PanelFn(self.mesh_left, self.zero.du1(xl)),
            du2=PanelFn(self.mesh_right, self.zero.du2(xr)),
            c2_j=self.zero.c2_zero,
        )

    def _cumulants(self, g1, g2, weighted1, weighted2):
        h = self.mesh_left.h
        w = self.omega
        alpha = self.problem.potential.singular_alpha
        c1 = cumulative_simpson(g1 * self.cos_left, h)
        s1 = cumulative_simpson(g1 * self.sin_left, h)
        c2 = cumulative_simpson(g2 * self.cos_right, h)
        s2 = cumulative_simpson(g2 * self.sin_right, h)
        if weighted1 is not None:
            c1 = c1 + weighted_cumulative(weighted1, alpha=alpha,
                                          extra=lambda s: np.cos(w * s))
            s1 = s1 + weighted_cumulative(weighted1, alpha=alpha,
                                          extra=lambda s: np.sin(w * s))
            c2 = c2 + weighted_cumulative(weighted2, alpha=alpha,
                                          extra=lambda s: np.cos(w * s))
            s2 = s2 + weighted_cumulative(weighted2, alpha=alpha,
                                          extra=lambda s: np.sin(w * s))
        return c1, s1, c2, s2

    def lambda_next(self, corrections: list[Correction],
                    cumulants=None) -> float:
        if cumulants is None:
            field = _driving_field(corrections, self.q_left, self.q_right,
                                   self.problem.nonlinearity)
            cumulants = self._cumulants(*field)
        c1, s1, c2, s2 = cumulants
        numerator = self._weight_total(c1[-1], s1[-1], c2[-1], s2[-1])
        return numerator / self.denominator

    def c2_next(self, cf1, sf1, cf2, sf2) -> float:
        """Free amplitude from the full-panel cumulants of the final field."""
        w = self.omega
        if self.branch.family == "I":
            sh, ch = math.sin(w / 2.0), math.cos(w / 2.0)
            if abs(sh) < 1e-8:
                raise FdError("family I amplitude rule hit sin(omega/2) = 0; "
                              "branch data is inconsistent")
            return (sh * (cf1 + cf2) - ch * (sf1 + sf2)) / (w * sh)
        return -(cf1 + cf2) / w

    def step(self, corrections: list[Correction]) -> Correction:
        g1, g2, weighted1, weighted2 = _driving_field(
            corrections, self.q_left, self.q_right,
            self.problem.nonlinearity)
        cumulants = self._cumulants(g1, g2, weighted1, weighted2)
        lam = self.lambda_next(corrections, cumulants)
        c1, s1, c2, s2 = cumulants
        cf1 = c1 - lam * self.cu0_left
        sf1 = s1 - lam * self.su0_left
        cf2 = c2 - lam * self.cu0_right
        sf2 = s2 - lam * self.su0_right
        amp = self.c2_next(cf1[-1], sf1[-1], cf2[-1], sf2[-1])
        w = self.omega
        u1 = (self.sin_left * cf1 - self.cos_left * sf1) / w
        du1 = self.cos_left * cf1 + self.sin_left * sf1
        c_tail = cf2[-1] - cf2
        s_tail = sf2[-1] - sf2
        u2 = amp * self.sin_tail - (self.sin_right * c_tail
                                    - self.cos_right * s_tail) / w
        du2 = -amp * w * self.cos_tail - (self.cos_right * c_tail
                                          + self.sin_right * s_tail)
        if self.q_left is None:
            rhs1 = rhs2 = None
        else:
            rhs1 = g1 - lam * self.u1_zero.values
            rhs2 = g2 - lam * self.u2_zero.values
        return Correction(
            j=len(corrections), lambda_j=lam,
            u1=PanelFn(self.mesh_left, u1),
            u2=PanelFn(self.mesh_right, u2),
            du1=PanelFn(self.mesh_left, du1),
            du2=PanelFn(self.mesh_right, du2),
            c2_j=amp, rhs1=rhs1, rhs2=rhs2,
        )


def _engine_for(branch: BranchId, corrections: list[Correction],
                q: PotentialSpec, n: NonlinearitySpec) -> _Engine:
    if not corrections:
        raise FdError("need at least the zero-order correction")
    return _Engine(TransmissionProblem(q, n), branch,
                   corrections[0].u1.mesh.m)


def lambda_correction(branch: BranchId, corrections: list[Correction],
                      q: PotentialSpec, n: NonlinearitySpec) -> float:
    """Next eigenvalue term from the corrections computed so far."""
    return _engine_for(branch, corrections, q, n).lambda_next(corrections)


def rhs_assemble(j: int, corrections: list[Correction], lambda_next: float,
                 q: PotentialSpec, n: NonlinearitySpec) -> RhsField:
    """Right-hand side of the rank-(j+1) problem, given its eigenvalue."""
    if j != len(corrections) - 1:
        raise FdError("rhs_assemble expects corrections 0..j")
    zero = corrections[0]
    mesh_left, mesh_right = zero.u1.mesh, zero.u2.mesh
    if q.is_singular:
        q_left = q_right = None
    else:
        q_left = np.asarray(q(mesh_left.nodes), dtype=float)
        q_right = np.asarray(q(mesh_right.nodes), dtype=float)
    g1, g2, weighted1, weighted2 = _driving_field(corrections, q_left,
                                                  q_right, n)
    return RhsField(
        lambda0=zero.lambda_j,
        smooth1=PanelFn(mesh_left, g1 - lambda_next * zero.u1.values),
        smooth2=PanelFn(mesh_right, g2 - lambda_next * zero.u2.values),
        weighted1=weighted1, weighted2=weighted2,
        alpha=q.singular_alpha,
    )


def c2_correction(branch: BranchId, rhs: RhsField) -> float:
    """Right-panel amplitude for the assembled right-hand side."""
    w = math.sqrt(rhs.lambda0)
    h = rhs.smooth1.mesh.h
    xl, xr = rhs.smooth1.mesh.nodes, rhs.smooth2.mesh.nodes
    cf1 = cumulative_simpson(rhs.smooth1.values * np.cos(w * xl), h)[-1]
    sf1 = cumulative_simpson(rhs.smooth1.values * np.sin(w * xl), h)[-1]
    cf2 = cumulative_simpson(rhs.smooth2.values * np.cos(w * xr), h)[-1]
    sf2 = cumulative_simpson(rhs.smooth2.values * np.sin(w * xr), h)[-1]
    if rhs.weighted1 is not None:
        cf1 += weighted_cumulative(rhs.weighted1, alpha=rhs.alpha,
                                   extra=lambda s: np.cos(w * s))[-1]
        sf1 += weighted_cumulative(rhs.weighted1, alpha=rhs.alpha,
                                   extra=lambda s: np.sin(w * s))[-1]
        cf2 += weighted_cumulative(rhs.weighted2, alpha=rhs.alpha,
                                   extra=lambda s: np.cos(w * s))[-1]
        sf2 += weighted_cumulative(rhs.weighted2, alpha=rhs.alpha,
                                   extra=lambda s: np.sin(w * s))[-1]
    if branch.family == "I":
        sh, ch = math.sin(w / 2.0), math.cos(w / 2.0)
        if abs(sh) < 1e-8:
            raise FdError("family I amplitude rule hit sin(omega/2) = 0; "
                          "branch data is inconsistent")
        return (sh * (cf1 + cf2) - ch * (sf1 + sf2)) / (w * sh)
    return -(cf1 + cf2) / w


def u_correction(branch: BranchId, rhs: RhsField,
                 c2: float) -> tuple[PanelFn, PanelFn]:
    """Eigenfunction correction pieces for the assembled right-hand side."""
    w = math.sqrt(rhs.lambda0)
    u1 = kernel_convolution(rhs.lambda0, rhs.smooth1, "from-left",
                            weighted=rhs.weighted1, alpha=rhs.alpha)
    tail = kernel_convolution(rhs.lambda0, rhs.smooth2, "from-right",
                              weighted=rhs.weighted2, alpha=rhs.alpha)
    xr = rhs.smooth2.mesh.nodes
    u2 = PanelFn(rhs.smooth2.mesh,
                 c2 * np.sin(w * (1.0 - xr)) - tail.values)
    return u1, u2


def fd_solve(problem: TransmissionProblem, branch: BranchId, rank: int,
             mesh: int = DEFAULT_MESH) -> FdSolution:
    """Run the recursion to the requested rank on the given panel mesh."""
    if rank < 0:
        raise FdError("rank must be non-negative")
    engine = _Engine(problem, branch, mesh)
    corrections = [engine.zero_correction()]
    for _ in range(rank):
        corrections.append(engine.step(corrections))
    return FdSolution(problem=problem, branch=branch, rank=rank,
                      mesh_m=mesh, corrections=corrections)
