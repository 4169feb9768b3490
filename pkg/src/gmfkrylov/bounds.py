"""A-priori error bounds for the polynomial and rational projection methods.

Three families are evaluated:

* a half-plane-analyticity bound for the polynomial method, geometric with
  ratio 1/rho for any 1 < rho <= (b + a)/(b - a), with a constant sampled on
  the Bernstein-type ellipse with foci a^2, b^2;
* a quasi-optimal rational bound obtained by discrete least-squares
  approximation of f by q_{k-1}(z^2)^{-1} p(z) on a symmetric grid;
* the Shift-and-Invert bound 2 M rho^k / (1 - rho) with the two-branch rho,
  which at the pole xi = -sigma_min sigma_max collapses to the closed form
  2 ||b|| M sqrt(sigma_max/sigma_min) exp(-2 k sqrt(sigma_min/sigma_max)).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError
from .functions import companion_g

ELLIPSE_SAMPLES = 4096
RATIONAL_GRID = 2000
RHO_GRID_SIZE = 40


@dataclass(frozen=True)
class EllipseSampler:
    """Boundary samples of the ellipse with foci a^2, b^2 (image of E_rho)."""

    rho: float
    a: float
    b: float
    count: int = ELLIPSE_SAMPLES

    def __post_init__(self):
        if not (self.a < self.b):
            raise ArgumentError("interval collapses: need a < b")
        if not self.rho > 1:
            raise ArgumentError("need rho > 1")

    def rho_max(self):
        return (self.b + self.a) / (self.b - self.a)

    def samples(self):
        theta = np.linspace(0.0, 2.0 * np.pi, self.count, endpoint=False)
        unit = 0.5 * (self.rho * np.exp(1j * theta)
                      + np.exp(-1j * theta) / self.rho)
        a2, b2 = self.a ** 2, self.b ** 2
        return 0.5 * (a2 + b2) + 0.5 * (b2 - a2) * unit


@dataclass(frozen=True)
class BoundCurve:
    """Bound value per iteration with the constants used, for audit."""

    ks: np.ndarray
    values: np.ndarray
    constants: dict = field(default_factory=dict)

    def pairs(self):
        return list(zip(self.ks.tolist(), self.values.tolist()))


def chui_hasson_constant(f1_eval, f2_eval, a, b, rho, samples=ELLIPSE_SAMPLES):
    """Constant C = M1 + M2 + (N1 + N2)/a sampled on the ellipse.

    ``f2_eval`` is the analytic continuation of f to the right half-plane and
    is evaluated at sqrt(z); ``f1_eval`` covers the left half-plane and is
    evaluated at -sqrt(z). Returns +inf if any sample diverges (which happens
    e.g. at rho = (b+a)/(b-a), where the ellipse touches 0).
    """
    a, b = float(a), float(b)
    sampler = EllipseSampler(rho, a, b, samples)
    if rho > sampler.rho_max() * (1 + 1e-12):
        raise ArgumentError(f"rho must not exceed (b+a)/(b-a) = {sampler.rho_max():g}")
    z = sampler.samples()
    root = np.sqrt(z)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        f2 = np.asarray(f2_eval(root), dtype=complex)
        f1 = np.asarray(f1_eval(-root), dtype=complex)
        vals = [np.abs(f1), np.abs(f2),
                np.abs(f1 / root), np.abs(f2 / root)]
    M1, M2, N1, N2 = (float(np.max(v)) for v in vals)
    C = M1 + M2 + (N1 + N2) / a
    if not math.isfinite(C):
        return math.inf
    return C


def _default_rho_grid(rho_max):
    return np.geomspace(rho_max ** (1.0 / RHO_GRID_SIZE), rho_max, RHO_GRID_SIZE)


def polynomial_bound_curve(f, sigma_n, sigma_1, k_max, rho_grid=None,
                           norm_b=1.0, include_constant=True):
    """Geometric bound min over rho of 2 C ||b|| rho/(rho-1) rho^{-k}.

    With ``include_constant=False`` (or when f carries no complex evaluator)
    only the rate rho_max^{-k} is reported, which is how such curves are
    usually overlaid on convergence plots.
    """
    a, b = float(sigma_n), float(sigma_1)
    if not (0 < a < b):
        raise ArgumentError("need 0 < sigma_n < sigma_1")
    rho_max = (b + a) / (b - a)
    ks = np.arange(1, int(k_max) + 1)
    constants = {"rho_max": rho_max}

    have_constant = include_constant and getattr(f, "has_complex", False)
    if not have_constant:
        values = rho_max ** (-ks.astype(float))
        constants["constant_mode"] = "rate-only"
        return BoundCurve(ks, values, constants)

    if rho_grid is None:
        rho_grid = _default_rho_grid(rho_max)
    rho_grid = np.asarray(rho_grid, dtype=float)
    if rho_grid.size == 0:
        raise ArgumentError("empty rho grid")
    per_rho = []
    for rho in rho_grid:
        C = chui_hasson_constant(f.complex_eval_left, f.complex_eval, a, b, rho)
        pref = 2.0 * C * norm_b * rho / (rho - 1.0)
        per_rho.append(pref * rho ** (-ks.astype(float)))
    values = np.min(np.vstack(per_rho), axis=0)
    constants["constant_mode"] = "included"
    constants["rho_grid"] = rho_grid
    return BoundCurve(ks, values, constants)


def rho_of(sigma_min, sigma_max, xi):
    """Two-branch convergence ratio of the Shift-and-Invert bound."""
    s, S, xi = float(sigma_min), float(sigma_max), float(xi)
    if not (0 < s <= S):
        raise ArgumentError("need 0 < sigma_min <= sigma_max")
    if not xi < 0:
        raise ArgumentError("the Shift-and-Invert pole must be negative")
    rS = math.sqrt(S * S - xi)
    rs = math.sqrt(s * s - xi)
    branch1 = (rS - rs) / (rS + rs)
    branch2 = (S * rs - s * rS) / (S * rs + s * rS)
    return max(branch1, branch2)


def rho_branches(sigma_min, sigma_max, xi):
    s, S, xi = float(sigma_min), float(sigma_max), float(xi)
    rS = math.sqrt(S * S - xi)
    rs = math.sqrt(s * s - xi)
    return ((rS - rs) / (rS + rs),
            (S * rs - s * rS) / (S * rs + s * rS))


def si_style_bound(sigma_min, sigma_max, xi, M, k):
    """Approximation-theory bound 2 M rho^k / (1 - rho)."""
    if M <= 0:
        raise ArgumentError("M must be positive")
    rho = rho_of(sigma_min, sigma_max, xi)
    return 2.0 * M * rho ** int(k) / (1.0 - rho)


def si_closed_form_bound(sigma_min, sigma_max, M, k, norm_b=1.0):
    """2 ||b|| M sqrt(sigma_max/sigma_min) exp(-2 k sqrt(sigma_min/sigma_max))."""
    s, S = float(sigma_min), float(sigma_max)
    if not (0 < s <= S):
        raise ArgumentError("need 0 < sigma_min <= sigma_max")
    return (2.0 * norm_b * M * math.sqrt(S / s)
            * math.exp(-2.0 * int(k) * math.sqrt(s / S)))


def sample_h_sup(f, xi, samples=4001):
    """M = sup |h| on [0, 1/(-xi)] with h(t) = g(1/t + xi), g = f(sqrt z)/sqrt z."""
    xi = float(xi)
    if not xi < 0:
        raise ArgumentError("xi must be negative")
    g = companion_g(f)
    ts = np.linspace(0.0, 1.0 / (-xi), int(samples))[1:]
    w = 1.0 / ts + xi
    w = np.maximum(w, 1e-300)   # endpoint t = 1/(-xi) maps to w = 0
    return float(np.max(np.abs(g(w))))


def _chebyshev_grid(lo, hi, count):
    nodes = np.cos(np.arange(count) * np.pi / (count - 1))
    return lo + (hi - lo) * (nodes + 1.0) / 2.0


def _grid_rational_basis(w, poles, k):
    """Grid-orthonormal basis of {p(w)/prod_{j<k}(w - xi_j) : deg p <= k-1}.

    Built one pole factor at a time with re-orthonormalization on the grid
    (rational Arnoldi on the diagonal matrix diag(w)), which keeps every
    column at unit scale; a single Vandermonde-type matrix divided by the
    full denominator would span dozens of orders of magnitude and lose the
    fit entirely for repeated poles.
    """
    cols = [np.ones_like(w) / math.sqrt(w.size)]
    v = cols[0]
    for j in range(k - 1):
        xi = poles[j]
        if xi == math.inf:
            cand = w * v
        elif xi == 0.0:
            cand = v / w
        else:
            cand = (w * v) / (w - xi)
        for _ in range(2):
            for c in cols:
                cand = cand - (c @ cand) * c
        nrm = np.linalg.norm(cand)
        if nrm <= 1e-14:
            break
        v = cand / nrm
        cols.append(v)
    return np.column_stack(cols)


def quasi_optimal_rational_bound(f, poles, sigma_n, sigma_1, k, grid_size=RATIONAL_GRID,
                                 norm_b=1.0):
    """2 ||b|| sup over a symmetric grid of |f - q_{k-1}(z^2)^{-1} p(z)|.

    The minimum over p of degree <= 2k-1 is replaced by a discrete least
    squares fit on Chebyshev-distributed points over [-sigma_1, -sigma_n]
    and [sigma_n, sigma_1]. Odd symmetry reduces the fit to the odd block
    z * po(z^2)/q(z^2) on the positive half grid. The result approximates
    the best uniform deviation from above only up to the discretization.
    """
    a, b = float(sigma_n), float(sigma_1)
    if not (0 < a <= b):
        raise ArgumentError("need 0 < sigma_n <= sigma_1")
    k = int(k)
    if k - 1 > len(list(poles)):
        raise ArgumentError("pole sequence too short for the requested k")
    z = _chebyshev_grid(a, b, int(grid_size))
    w = z * z
    phi = _grid_rational_basis(w, list(poles), k)
    design = z[:, None] * phi
    fz = f(z)
    coef, *_ = np.linalg.lstsq(design, fz, rcond=None)
    residual = fz - design @ coef
    return 2.0 * norm_b * float(np.max(np.abs(residual)))
