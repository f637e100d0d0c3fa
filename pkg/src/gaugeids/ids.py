"""Integrated density of states from the volume of ``G_lambda = {g <= lambda}``.

``vol G_lambda = omega_d rho^d + sum_{V, p} (vol A^+_p - vol A^-_p)`` and on a
charted component

    vol A^+_p - vol A^-_p = (K+1)^{-1} int_{M_p} dPhi int_{Omega(V)} dX (tau^{K+1} - tau_0^{K+1}),

where the X-integrand is replaced by its average over the V-class of X.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.special import gamma
from scipy.stats import qmc

from .blocks import InterpolatedFamily, RadialFamily, tau_roots
from .geometry import (Component, CoordinateChart, GeometryError, ResonanceGeometry, build_chart,
                       ordering)
from .symbols import Symbol

QMC_SEED = 0x1D05


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / gamma(d / 2 + 1)


def free_ids(lam, d: int, w: float):
    """``(2 pi)^{-d} omega_d lambda^{d / 2w}``."""
    lam = np.asarray(lam, dtype=float)
    return (2 * np.pi) ** (-d) * unit_ball_volume(d) * np.power(lam, d / (2 * w))


@dataclass
class IdsResult:
    lambdas: np.ndarray
    N: np.ndarray
    method: str
    err: np.ndarray
    excluded: int = 0
    details: Dict[str, object] = field(default_factory=dict)

    def rows(self):
        for lam, n, e in zip(self.lambdas, self.N, self.err):
            yield float(lam), float(n), self.method, float(e)

    def monotone(self, tol: float = 1e-8) -> bool:
        return bool(np.all(np.diff(self.N) >= -tol))


@dataclass
class ChartNodes:
    """Quadrature nodes on ``Omega(V) x M_p`` with their V-classes."""

    chart: CoordinateChart
    K: int
    weights: np.ndarray  # (n,)
    Phi: np.ndarray  # (n, d)
    groups: List[tuple]  # (node indices, class points (B, s, d))
    chart_signs: tuple = ()


def _simplex_map(u: np.ndarray) -> np.ndarray:
    """Uniform cube ``[0,1]^K`` to the standard simplex in R^{K+1} via sorted spacings."""
    s = np.sort(u, axis=1)
    edges = np.hstack([np.zeros((len(u), 1)), s, np.ones((len(u), 1))])
    return np.diff(edges, axis=1)


def chart_nodes(geom: ResonanceGeometry, chart: CoordinateChart, n_nodes: int,
                seed: int = QMC_SEED) -> ChartNodes:
    i = chart.region
    m, K = chart.m, chart.K
    dim = m + K
    if dim == 0:
        u = np.zeros((1, 0))
    else:
        sob = qmc.Sobol(d=dim, scramble=True, seed=seed)
        u = sob.random_base2(int(round(math.log2(n_nodes))))
    n = len(u)
    weights = np.full(n, 1.0 / n)
    # Phi on the spherical simplex spanned by the vertices
    if K == 0:
        Phi = np.repeat(chart.vertices[:1], n, axis=0)
    else:
        t = _simplex_map(u[:, m:])
        vec = t @ chart.vertices
        norm = np.linalg.norm(vec, axis=1)
        Phi = vec / norm[:, None]
        Vloc = chart.vertices @ chart.perp_basis.T
        jac = abs(np.linalg.det(Vloc)) / norm ** (K + 1) / math.factorial(K)
        weights = weights * jac
    # X in the box [-m L_m, m L_m]^m of V coordinates, restricted to Omega(V)
    if m == 0:
        X = np.zeros((n, geom.d))
    else:
        half = m * geom.L[m - 1]
        coords = (2 * u[:, :m] - 1) * half
        X = coords @ chart.V_basis
        inside = geom.omega_member(i, X)
        weights = weights * inside * (2 * half) ** m
    live = np.flatnonzero(weights > 0)
    by_size: Dict[int, List] = {}
    for k in live:
        if m == 0:
            pts = X[k:k + 1]
        else:
            cls = geom.congruence_class(X[k], within=i)
            pts = cls.points[ordering(cls.points)]
        by_size.setdefault(len(pts), []).append((k, pts))
    groups = [(np.array([k for k, _ in items]), np.array([p for _, p in items]))
              for _, items in sorted(by_size.items())]
    return ChartNodes(chart, K, weights, Phi, groups)


@dataclass
class VolumeTerm:
    region: int
    signs: tuple
    K: int
    values: np.ndarray  # per rho
    errors: np.ndarray
    interp_error: float = 0.0


def volume_A_pm(nodes: ChartNodes, rhos: Sequence[float], w: float, W: Optional[Symbol],
                interp_nodes: int = 6, pad: Optional[float] = None) -> VolumeTerm:
    """``vol A^+_p - vol A^-_p`` for each rho, with a half-sample error estimate.

    Roots are found on an r-interpolant of the couplings over the window of
    free roots widened by ``pad`` (default ``0.02 rho_min + 1``).
    """
    rhos = np.atleast_1d(np.asarray(rhos, dtype=float))
    K = nodes.K
    n = len(nodes.weights)
    vals = np.zeros(len(rhos))
    half = np.zeros(len(rhos))
    first = np.arange(n) < max(n // 2, 1)
    if W is None or W.is_zero:
        return VolumeTerm(nodes.chart.region, (), K, vals, vals.copy())
    pad = 0.02 * rhos.min() + 1.0 if pad is None else pad
    interp_err = 0.0
    for idx, pts in nodes.groups:
        fam = RadialFamily(pts, np.broadcast_to(nodes.chart.apex, (len(idx), pts.shape[2])),
                           nodes.Phi[idx], w, W)
        # the couplings vary on the scale rho; interpolate them over the root window
        t_lo = fam.free_roots(rhos.min()).min(axis=1) - pad
        t_hi = fam.free_roots(rhos.max()).max(axis=1) + pad
        surrogate = InterpolatedFamily(fam, np.maximum(t_lo, 1e-3), t_hi, interp_nodes)
        interp_err = max(interp_err, surrogate.rel_error)
        for r_i, rho in enumerate(rhos):
            tau = tau_roots(surrogate, rho)
            tau0 = fam.free_roots(rho)
            f = (np.mean(tau ** (K + 1), axis=1) - np.mean(tau0 ** (K + 1), axis=1)) / (K + 1)
            contrib = nodes.weights[idx] * f
            vals[r_i] += contrib.sum()
            half[r_i] += 2 * contrib[first[idx]].sum()
    return VolumeTerm(nodes.chart.region, nodes.chart_signs, K, vals, np.abs(vals - half), interp_err)


@dataclass
class GaugeIdsEngine:
    """Pre-computed charts and quadrature nodes for repeated IDS evaluation."""

    geom: ResonanceGeometry
    W: Optional[Symbol]
    n_nodes: int = 2 ** 14
    seed: int = QMC_SEED
    nodes: List[ChartNodes] = field(default_factory=list)
    excluded: int = 0

    def prepare(self) -> "GaugeIdsEngine":
        if self.W is None or self.W.is_zero:
            return self
        d = self.geom.d
        for i, V in enumerate(self.geom.subspaces):
            if V.dim >= d:
                continue
            for comp in self.geom.components(i):
                if not comp.minimal:
                    self.excluded += 1
                    continue
                chart = build_chart(self.geom, comp)
                self.nodes.append(chart_nodes(self.geom, chart, self.n_nodes, self.seed))
        return self

    def volume_correction(self, rhos) -> tuple:
        rhos = np.atleast_1d(np.asarray(rhos, dtype=float))
        total = np.zeros(len(rhos))
        err = np.zeros(len(rhos))
        for nd in self.nodes:
            term = volume_A_pm(nd, rhos, self.geom.params.w, self.W)
            total += term.values
            err += term.errors
        return total, err


def ids_gauge(lambdas, geom: ResonanceGeometry, W: Optional[Symbol], n_nodes: int = 2 ** 14,
              seed: int = QMC_SEED, engine: Optional[GaugeIdsEngine] = None) -> IdsResult:
    """``N(lambda) = (2 pi)^{-d} (omega_d rho^d + sum (vol A^+_p - vol A^-_p))`` with ``rho = lambda^{1/2w}``."""
    sp = geom.params
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    if np.any(np.diff(lam) < 0):
        raise ValueError("lambda grid must be ascending")
    d, w = geom.d, sp.w
    rho = lam ** (1 / (2 * w))
    base = unit_ball_volume(d) * rho ** d
    if W is None or W.is_zero:
        N = (2 * np.pi) ** (-d) * base
        return IdsResult(lam, N, "gauge-volume", np.zeros_like(N))
    lo, hi = sp.rho_n * (1 - 1e-12), 4 * sp.rho_n * (1 + 1e-12)
    if np.any(rho < lo) or np.any(rho > hi):
        raise ValueError("rho = lambda^{1/2w} must lie in [rho_n, 4 rho_n]")
    engine = engine or GaugeIdsEngine(geom, W, n_nodes, seed).prepare()
    corr, err = engine.volume_correction(rho)
    N = (2 * np.pi) ** (-d) * (base + corr)
    return IdsResult(lam, N, "gauge-volume", (2 * np.pi) ** (-d) * err, engine.excluded,
                     {"correction": corr})
