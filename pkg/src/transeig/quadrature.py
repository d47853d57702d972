"""Panel meshes, cumulative Simpson integration, and the sine-kernel convolution.

Everything operates on the two panels [0, 1/2] and [1/2, 1] with uniform
nodes. Running integrals anchor at the panel's left endpoint. The weighted
variant removes the built-in |1/2 - x|**-0.5 interface singularity with the
substitution t = sqrt(|1/2 - x|) and integrates a smooth function of t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np
from numpy.typing import NDArray

INTERFACE = 0.5


class QuadratureError(ValueError):
    """Unusable mesh, weight, or kernel parameter."""


@dataclass(frozen=True)
class PanelMesh:
    """Uniform mesh of an interface panel, m subintervals (even, >= 4)."""

    panel: str
    m: int

    def __post_init__(self) -> None:
        if self.panel not in ("left", "right"):
            raise QuadratureError(f"unknown panel: {self.panel!r}")
        if self.m < 4 or self.m % 2:
            raise QuadratureError("panel mesh needs an even m >= 4")

    @property
    def a(self) -> float:
        return 0.0 if self.panel == "left" else INTERFACE

    @property
    def b(self) -> float:
        return INTERFACE if self.panel == "left" else 1.0

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.m

    @property
    def nodes(self) -> NDArray[np.float64]:
        return np.linspace(self.a, self.b, self.m + 1)


def cumulative_simpson(values, h: float) -> NDArray[np.float64]:
    """Running integral over a uniform mesh, exact for cubics.

    Even prefixes use composite Simpson; odd prefixes use the last computed
    even prefix three nodes back plus a Simpson-3/8 block, except the first
    interval which uses the standard four-point opening rule.
    """
    f = np.asarray(values, dtype=float)
    n = f.size - 1
    if n < 4 or n % 2:
        raise QuadratureError("cumulative rule needs an even node count >= 5")
    out = np.empty_like(f)
    out[0] = 0.0
    pairs = (h / 3.0) * (f[0:-2:2] + 4.0 * f[1:-1:2] + f[2::2])
    out[2::2] = np.cumsum(pairs)
    out[1] = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3])
    k = np.arange(3, n + 1, 2)
    out[k] = out[k - 3] + (3.0 * h / 8.0) * (
        f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k]
    )
    return out


def interp_uniform(a: float, h: float, values: NDArray, x) -> NDArray[np.float64]:
    """Local cubic (four-point Lagrange) interpolation on a uniform grid."""
    f = np.asarray(values, dtype=float)
    xq = np.atleast_1d(np.asarray(x, dtype=float))
    npts = f.size
    cell = np.floor((xq - a) / h).astype(int)
    start = np.clip(cell - 1, 0, npts - 4)
    t = (xq - (a + start * h)) / h
    t0, t1, t2, t3 = t, t - 1.0, t - 2.0, t - 3.0
    w0 = -t1 * t2 * t3 / 6.0
    w1 = t0 * t2 * t3 / 2.0
    w2 = -t0 * t1 * t3 / 2.0
    w3 = t0 * t1 * t2 / 6.0
    out = (w0 * f[start] + w1 * f[start + 1]
           + w2 * f[start + 2] + w3 * f[start + 3])
    return out if np.ndim(x) else float(out[0])


@dataclass
class PanelFn:
    """Node values on one panel with cubic interpolation off the nodes."""

    mesh: PanelMesh
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.mesh.m + 1,):
            raise QuadratureError("value count does not match the mesh")

    @classmethod
    def from_callable(cls, mesh: PanelMesh, fn) -> "PanelFn":
        return cls(mesh, np.asarray(fn(mesh.nodes), dtype=float))

    @classmethod
    def zeros(cls, mesh: PanelMesh) -> "PanelFn":
        return cls(mesh, np.zeros(mesh.m + 1))

    def __call__(self, x):
        return interp_uniform(self.mesh.a, self.mesh.h, self.values, x)

    @property
    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def cumulative(self) -> "PanelFn":
        return PanelFn(self.mesh, cumulative_simpson(self.values, self.mesh.h))


@dataclass
class GridFunction:
    """A function on (0, 1) stored per panel, one-sided at the interface."""

    left: PanelFn
    right: PanelFn

    def __call__(self, x):
        xq = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(xq)
        mask = xq <= INTERFACE
        if mask.any():
            out[mask] = np.atleast_1d(self.left(xq[mask]))
        if (~mask).any():
            out[~mask] = np.atleast_1d(self.right(xq[~mask]))
        return out if np.ndim(x) else float(out[0])

    @property
    def sup_norm(self) -> float:
        return max(self.left.sup, self.right.sup)

    @property
    def panel_norms(self) -> tuple[float, float]:
        return self.left.sup, self.right.sup


def weighted_cumulative(g: PanelFn, alpha: float | None = None,
                        q=None, extra=None) -> NDArray[np.float64]:
    """Running integral of q(s)*extra(s)*g(s) from the panel's left endpoint.

    With alpha None the weight q must be a smooth callable and the product
    is integrated directly. With alpha == -1/2 the built-in interface weight
    |1/2 - s|**-0.5 is removed by t = sqrt(|1/2 - s|): the transformed
    integrand extra(x(t))*g(x(t)) is smooth, integrated on a uniform t-mesh,
    and mapped back to the panel nodes by cubic interpolation of the
    running t-integral. The optional extra factor is evaluated exactly at
    the transformed points, so only g itself is interpolated.
    """
    mesh = g.mesh
    nodes = mesh.nodes
    if alpha is None:
        if q is None:
            raise QuadratureError("smooth path needs the weight callable q")
        vals = np.asarray(q(nodes), dtype=float) * g.values
        if extra is not None:
            vals = vals * np.asarray(extra(nodes), dtype=float)
        return cumulative_simpson(vals, mesh.h)
    if abs(alpha + 0.5) > 1e-12:
        raise QuadratureError(f"unsupported weight exponent: {alpha}")

    t_top = sqrt(mesh.b - mesh.a)
    t = np.linspace(0.0, t_top, mesh.m + 1)
    ht = t_top / mesh.m
    xs = INTERFACE - t * t if mesh.panel == "left" else INTERFACE + t * t
    psi = np.atleast_1d(np.asarray(g(xs), dtype=float))
    if extra is not None:
        psi = psi * np.asarray(extra(xs), dtype=float)
    big_psi = cumulative_simpson(psi, ht)
    if mesh.panel == "left":
        tau = np.sqrt(np.maximum(INTERFACE - nodes, 0.0))
        out = 2.0 * (big_psi[-1] - interp_uniform(0.0, ht, big_psi, tau))
        out[0] = 0.0
    else:
        tau = np.sqrt(np.maximum(nodes - INTERFACE, 0.0))
        out = 2.0 * interp_uniform(0.0, ht, big_psi, tau)
        out[0] = 0.0
    return np.asarray(out, dtype=float)


def kernel_convolution(lambda0: float, f: PanelFn, direction: str,
                       weighted: PanelFn | None = None,
                       alpha: float | None = None, q=None,
                       with_derivative: bool = False):
    """Convolve the panel field with sin(w*(x - s))/w, w = sqrt(lambda0).

    direction "from-left" integrates from the panel start to x; "from-right"
    integrates from x to the panel end. The kernel splits into products of
    cos(w*s) and sin(w*s) with trigonometric factors of x, so the whole
    sweep costs two running integrals. A weighted component adds the
    singular part q(s)*weighted(s) of the integrand through
    weighted_cumulative. With with_derivative the analytic x-derivative of
    the convolution (cosine kernel) is returned alongside.
    """
    if lambda0 <= 0.0:
        raise QuadratureError("kernel needs lambda0 > 0")
    if direction not in ("from-left", "from-right"):
        raise QuadratureError(f"unknown direction: {direction!r}")
    w = sqrt(lambda0)
    mesh = f.mesh
    x = mesh.nodes
    cosx = np.cos(w * x)
    sinx = np.sin(w * x)
    c_run = cumulative_simpson(f.values * cosx, mesh.h)
    s_run = cumulative_simpson(f.values * sinx, mesh.h)
    if weighted is not None:
        c_run = c_run + weighted_cumulative(
            weighted, alpha=alpha, q=q, extra=lambda s: np.cos(w * s))
        s_run = s_run + weighted_cumulative(
            weighted, alpha=alpha, q=q, extra=lambda s: np.sin(w * s))
    if direction == "from-left":
        c_part, s_part = c_run, s_run
    else:
        c_part, s_part = c_run[-1] - c_run, s_run[-1] - s_run
    g = PanelFn(mesh, (sinx * c_part - cosx * s_part) / w)
    if not with_derivative:
        return g
    dg = PanelFn(mesh, cosx * c_part + sinx * s_part)
    return g, dg
