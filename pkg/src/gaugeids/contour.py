"""Contour integrals of the resolvent trace and the accompanying series identities.

For an analytic block family ``z -> H(z)`` with real roots ``tau_j`` of
``det(H(z) - rho^{2w}) = 0`` inside the circle ``gamma``,

    sum_j tau_j^{K+1} = (2 pi i)^{-1} oint_gamma z^{K+1} tr[H'(z) (H(z) - rho^{2w})^{-1}] dz.

The trapezoid rule on a circle converges geometrically for such integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np

from .blocks import RadialFamily
from .cutoffs import CutoffFamily
from .params import ScaleParams


class QuadratureError(RuntimeError):
    pass


def contour_fraction(w: float) -> float:
    """``t = (8 max{(2w - 2)/3, 1})^{-1}``."""
    return 1.0 / (8.0 * max((2 * w - 2) / 3.0, 1.0))


@dataclass(frozen=True)
class ContourSpec:
    """Circle ``|z - center| = radius`` traversed positively with N trapezoid nodes."""

    center: float
    radius: float
    n_nodes: int = 64

    def __post_init__(self):
        n = self.n_nodes
        if n < 64 or n & (n - 1):
            raise ValueError("node count must be a power of two >= 64")

    @classmethod
    def standard(cls, rho: float, rho_n: float, w: float, n_nodes: int = 64) -> "ContourSpec":
        return cls(rho, contour_fraction(w) * rho_n, n_nodes)

    def nodes(self, n: Optional[int] = None):
        n = n or self.n_nodes
        phase = np.exp(2j * np.pi * np.arange(n) / n)
        return self.center + self.radius * phase, self.radius * phase / n


@dataclass
class ContourResult:
    value: float
    imag: float
    count: float
    min_abs_det: float
    n_nodes: int
    change: float


def _trace_integrand(fam: RadialFamily, z: np.ndarray, target: float, index: int = 0):
    """``tr[H'(z) (H(z) - target)^{-1}]`` and ``|det(H(z) - target)|`` at nodes z."""
    n = len(z)
    sub = RadialFamily(fam.X[index:index + 1].repeat(n, 0), fam.a[index:index + 1].repeat(n, 0),
                       fam.Phi[index:index + 1].repeat(n, 0), fam.w, fam.W)
    H = sub.matrix(z)
    dH = sub.derivative(z)
    s = H.shape[-1]
    M = H - target * np.eye(s)
    sol = np.linalg.solve(M, dH)
    tr = np.trace(sol, axis1=-2, axis2=-1)
    det = np.abs(np.linalg.det(M))
    return tr, det


def contour_power_sum(fam: RadialFamily, rho: float, K: int, cs: ContourSpec, index: int = 0,
                      rtol: float = 1e-10, max_nodes: int = 4096) -> ContourResult:
    """``(2 pi i)^{-1} oint z^{K+1} tr[H'(H - rho^{2w})^{-1}] dz`` for node ``index`` of the family.

    The node count doubles until the relative change drops below ``rtol``.
    """
    target = rho ** (2 * fam.w)
    n = cs.n_nodes
    prev = None
    while True:
        z, wts = cs.nodes(n)
        tr, det = _trace_integrand(fam, z, target, index)
        val = np.sum(wts * z ** (K + 1) * tr)
        cnt = np.sum(wts * tr)
        if prev is not None:
            change = abs(val - prev) / max(abs(val), 1e-300)
            if change <= rtol:
                break
            if 2 * n > max_nodes:
                raise QuadratureError(f"contour quadrature did not converge (change {change:.2e})")
        else:
            change = np.inf
        prev = val
        n *= 2
    return ContourResult(float(val.real), float(val.imag), float(cnt.real), float(det.min()), n, change)


# ---------------------------------------------------------------------------
# series identities


def gbinom(p: float, j: int) -> float:
    """Generalised binomial coefficient ``p (p-1) ... (p-j+1) / j!``."""
    out = 1.0
    for k in range(j):
        out *= (p - k) / (k + 1)
    return out


def a_coefficients(l: int, j_max: int, w: float) -> np.ndarray:
    """``A_{l j}`` for ``j = 0..j_max`` in the expansion

    ``(z^{2w} - rho^{2w})^{-l} = rho^{-2wl} sum_j A_{lj} ((z - rho)/rho)^{j - l}``.

    The inner sum over compositions ``q_1 + ... + q_p = j`` is the coefficient
    of ``x^j`` in ``(sum_{q>=1} binom(2w, q+1) x^q)^p``.
    """
    if l < 1:
        raise ValueError("l must be a positive integer")
    c = np.zeros(j_max + 1)
    for q in range(1, j_max + 1):
        c[q] = gbinom(2 * w, q + 1)
    out = np.zeros(j_max + 1)
    out[0] = (2 * w) ** (-l)
    power = np.zeros(j_max + 1)
    power[0] = 1.0
    for p in range(1, j_max + 1):
        power = np.convolve(power, c)[: j_max + 1]
        out[1:] += gbinom(-l, p) / (2 * w) ** p * power[1:]
    out[1:] /= (2 * w) ** l
    return out


def a_coefficient(l: int, j: int, w: float) -> float:
    return float(a_coefficients(l, j, w)[j])


def a_series(z, rho: float, l: int, w: float, j_max: int = 40) -> np.ndarray:
    """Truncated right-hand side of the ``A_{lj}`` expansion at points z."""
    A = a_coefficients(l, j_max, w)
    u = (np.asarray(z) - rho) / rho
    powers = u[..., None] ** (np.arange(j_max + 1) - l)
    return rho ** (-2 * w * l) * powers @ A


@dataclass
class DenominatorCheck:
    defect: float
    D: complex
    terms: int


def denominator_series_check(theta, phi, X, a, r: float, Phi, w: float,
                             cf: Optional[CutoffFamily] = None, tol: float = 1e-14) -> DenominatorCheck:
    """Compare ``(|xi+phi+theta|^{2w} - |xi+phi|^{2w})^{-1}`` with its D-series.

    ``xi = X + a + r Phi``.  With ``N = 2r<a,Phi> + 2<xi,phi> + |X|^2 + |a|^2 + |phi|^2``
    and ``P = 2<xi,theta> + 2<phi,theta> + |theta|^2`` the series reads
    ``w^{-1} r^{2-2w} P^{-1} sum_a (-D)^a`` with
    ``D = w^{-1} sum_{j>=2} binom(w,j) r^{2-2j} sum_{k<j} binom(j,k) N^k P^{j-k-1}``.
    The left-hand side is evaluated with 50 significant digits.
    """
    theta = np.asarray(theta, float)
    phi = np.asarray(phi, float)
    X = np.asarray(X, float)
    a = np.asarray(a, float)
    Phi = np.asarray(Phi, float)
    xi = X + a + r * Phi
    if cf is not None:
        ep = cf.e_phi(theta[None, :], xi[None, :])[0, 0]
        if ep == 0:
            raise ValueError("point outside the support of e_theta phi_theta")
    N = 2 * r * a @ Phi + 2 * xi @ phi + X @ X + a @ a + phi @ phi
    P = 2 * xi @ theta + 2 * phi @ theta + theta @ theta
    D = 0.0
    j = 2
    while True:
        coef = gbinom(w, j)
        if coef == 0:
            if float(w).is_integer() and j > w:
                break
            j += 1
            continue
        with np.errstate(over="ignore", invalid="ignore"):
            inner = sum(gbinom(j, k) * N ** k * P ** (j - k - 1) for k in range(j))
        term = coef * r ** (2 - 2 * j) * inner / w
        if not abs(term) < 1e3:
            raise ValueError(f"D-series diverges at j = {j}: outside its regime")
        D += term
        if abs(term) <= 1e-18 * max(abs(D), 1e-300) or j > 2000:
            break
        j += 1
    if abs(D) >= 1:
        raise ValueError(f"|D| = {abs(D):.3f} >= 1: series outside its regime")
    geo = 0.0
    n_terms = 0
    term = 1.0
    while True:
        geo += term
        n_terms += 1
        term *= -D
        if abs(term) < tol * 1e-2 or n_terms > 10_000:
            break
    rhs = geo / (w * r ** (2 * w - 2) * P)
    with mpmath.workdps(50):
        xm = [mpmath.mpf(float(v)) for v in xi]
        pm = [mpmath.mpf(float(v)) for v in phi]
        tm = [mpmath.mpf(float(v)) for v in theta]
        A2 = sum((x + p + t) ** 2 for x, p, t in zip(xm, pm, tm))
        B2 = sum((x + p) ** 2 for x, p in zip(xm, pm))
        wm = mpmath.mpf(w)
        lhs = 1 / (A2 ** wm - B2 ** wm)
        defect = abs((mpmath.mpf(rhs) - lhs) / lhs)
    return DenominatorCheck(float(defect), D, n_terms)
