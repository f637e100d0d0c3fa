"""Least-squares fit of ``N(rho^{2w})`` in the basis ``rho^gamma ln^q rho``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np


class FitError(ValueError):
    pass


def expansion_basis(d: int, w: float, iotas: Sequence[float] = (0.0,), h_max: int = 1,
                    j_max: int = 2, q_max: int = 0) -> List[Tuple[float, int]]:
    """Exponents ``gamma = d + (2 - 2w) h + iota_1 + ... + iota_h - j`` with log powers ``q <= q_max``.

    Coinciding exponents are merged (the smallest h is kept) and exponents
    above d are dropped since their coefficients vanish.  The leading Weyl
    term ``rho^d`` carries no logarithm, so log columns start below d.  The
    list is sorted by decreasing gamma, then increasing q.
    """
    gammas = set()
    for h in range(h_max + 1):
        for combo in itertools.combinations_with_replacement(sorted(set(iotas)), h):
            for j in range(j_max + 1):
                g = round(d + (2 - 2 * w) * h + sum(combo) - j, 12)
                if g <= d:
                    gammas.add(g)
    out = [(g, q) for g in sorted(gammas, reverse=True) for q in range(q_max + 1) if q == 0 or g < d]
    return out


@dataclass
class ExpansionFit:
    basis: List[Tuple[float, int]]
    coeffs: np.ndarray
    stderr: np.ndarray
    residual: float
    cond: float
    window: Tuple[float, float]
    n_samples: int

    def coefficient(self, gamma: float, q: int = 0) -> float:
        for (g, qq), c in zip(self.basis, self.coeffs):
            if abs(g - gamma) < 1e-12 and qq == q:
                return float(c)
        raise KeyError((gamma, q))

    @property
    def leading(self) -> float:
        return float(self.coeffs[0])

    def log_terms(self):
        """``(gamma, q, coefficient, standard error)`` for every q >= 1 column."""
        return [(g, q, float(c), float(s)) for (g, q), c, s in zip(self.basis, self.coeffs, self.stderr) if q >= 1]

    def to_json(self) -> Dict:
        return {
            "basis": [[float(g), int(q)] for g, q in self.basis],
            "coeffs": [float(c) for c in self.coeffs],
            "stderr": [float(s) for s in self.stderr],
            "residual": float(self.residual),
            "cond": float(self.cond),
            "window": [float(self.window[0]), float(self.window[1])],
            "n_samples": int(self.n_samples),
        }


def design_matrix(rho: np.ndarray, basis: Sequence[Tuple[float, int]]) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    lr = np.log(rho)
    return np.stack([rho ** g * lr ** q for g, q in basis], axis=1)


def fit_expansion(rho, N, basis: Sequence[Tuple[float, int]], max_cond: float = 1e12,
                  min_ratio: int = 3) -> ExpansionFit:
    """Ordinary least squares with OLS standard errors.

    The condition number is that of the column-normalised design matrix.
    Fits with fewer than ``min_ratio`` samples per basis function, windows
    wider than one dyadic interval ``[rho_n, 4 rho_n]`` or ill-conditioned
    bases are refused.
    """
    rho = np.asarray(rho, dtype=float)
    N = np.asarray(N, dtype=float)
    basis = list(basis)
    p = len(basis)
    if len(rho) != len(N):
        raise FitError("rho and N must have the same length")
    if len(rho) < min_ratio * p:
        raise FitError(f"insufficient samples: {len(rho)} < {min_ratio} x {p} basis functions")
    if np.any(rho <= 0):
        raise FitError("rho must be positive")
    if rho.max() > 4 * rho.min() * (1 + 1e-12):
        raise FitError("fit window exceeds one dyadic interval [rho_n, 4 rho_n]")
    A = design_matrix(rho, basis)
    scale = np.linalg.norm(A, axis=0)
    As = A / scale
    cond = float(np.linalg.cond(As))
    if not np.isfinite(cond) or cond > max_cond:
        raise FitError(f"basis collapse: condition number {cond:.3e} exceeds {max_cond:.1e}")
    sol, *_ = np.linalg.lstsq(As, N, rcond=None)
    resid = N - As @ sol
    dof = max(len(rho) - p, 1)
    sigma2 = float(resid @ resid) / dof
    cov = sigma2 * np.linalg.inv(As.T @ As)
    coeffs = sol / scale
    stderr = np.sqrt(np.maximum(np.diag(cov), 0.0)) / scale
    return ExpansionFit(basis, coeffs, stderr, float(np.linalg.norm(resid)), cond,
                        (float(rho.min()), float(rho.max())), len(rho))
