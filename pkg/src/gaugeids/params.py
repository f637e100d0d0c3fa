"""Scale parameters shared by every stage of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np


class ParameterError(ValueError):
    """Raised when a parameter set violates the admissible chain of exponents."""


@dataclass(frozen=True)
class ScaleParams:
    """All tuning constants of the construction in one validated record.

    Parameters
    ----------
    d : int
        Ambient dimension.
    w : float
        Order of the leading term, ``H_0 = (-Delta)^w``.
    kappa : float
        Order of the perturbation, ``0 <= kappa < 2w``.
    beta, alphas, theta_upper, sigma : float
        Exponent chain ``max(1 - w + kappa/2, 1/2) < beta < alpha_1 < ... < alpha_d
        < theta_upper < sigma < 1``.
    rho_n : float
        Base radius of the dyadic window ``I_n = [rho_n, 4 rho_n]``.
    C_0 : float
        Radius below which radial symbols are smoothly switched off.
    k, k_tilde, M : int
        Regularity index, gauge depth and remainder order.
    """

    d: int
    w: float
    kappa: float = 0.0
    beta: float = 0.51
    alphas: Tuple[float, ...] = ()
    theta_upper: float = 0.0
    sigma: float = 0.0
    rho_n: float = 200.0
    C_0: float = 4.0
    R_0: float = 1.0
    k: int = 4
    k_tilde: int = 2
    M: int = 2
    lower_bound: float = field(init=False, default=0.0)

    def __post_init__(self):
        if self.d < 1:
            raise ParameterError("dimension d must be >= 1")
        if not self.alphas:
            object.__setattr__(self, "alphas", default_alphas(self.d, self.beta))
        else:
            object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if self.theta_upper == 0.0:
            top = self.alphas[-1]
            object.__setattr__(self, "theta_upper", top + (1 - top) / 3)
        if self.sigma == 0.0:
            object.__setattr__(self, "sigma", self.theta_upper + (1 - self.theta_upper) / 2)
        object.__setattr__(self, "lower_bound", max(1 - self.w + self.kappa / 2, 0.5))
        self.validate()

    def validate(self) -> None:
        if self.d < 1:
            raise ParameterError("dimension d must be >= 1")
        if not self.w > 0:
            raise ParameterError("order w must be positive")
        if not 0 <= self.kappa < 2 * self.w:
            raise ParameterError(f"kappa must satisfy 0 <= kappa < 2w, got kappa={self.kappa}")
        if len(self.alphas) != self.d:
            raise ParameterError(f"need exactly d={self.d} alpha exponents, got {len(self.alphas)}")
        chain = (self.lower_bound, self.beta, *self.alphas, self.theta_upper, self.sigma, 1.0)
        names = ("max(1-w+kappa/2,1/2)", "beta",
                 *(f"alpha_{j + 1}" for j in range(self.d)), "theta_upper", "sigma", "1")
        for lo, hi, n_lo, n_hi in zip(chain[:-1], chain[1:], names[:-1], names[1:]):
            if not lo < hi:
                raise ParameterError(
                    f"exponent chain violated: need {n_lo} < {n_hi}, got {lo} >= {hi}")
        if self.rho_n <= 1:
            raise ParameterError("rho_n must exceed 1")
        if self.C_0 <= 0:
            raise ParameterError("C_0 must be positive")
        if self.k_tilde < 1:
            raise ParameterError("k_tilde must be >= 1")

    @property
    def w_tilde(self) -> float:
        return (self.w + self.kappa) / 2

    @property
    def alpha(self) -> float:
        """Order of the perturbation measured in units of beta."""
        return self.kappa / self.beta

    @property
    def L(self) -> np.ndarray:
        """Slab widths ``L_j = rho_n^{alpha_j}`` for j = 1..d (index 0 is L_1)."""
        return self.rho_n ** np.asarray(self.alphas)

    def L_j(self, j: int) -> float:
        """``L_j`` with one-based index j."""
        return float(self.rho_n ** self.alphas[j - 1])

    def with_(self, **changes) -> "ScaleParams":
        return replace(self, **changes)


def default_alphas(d: int, beta: float) -> Tuple[float, ...]:
    """Evenly spaced exponents between beta and the upper part of (beta, 1)."""
    top = beta + 0.4 * (1 - beta)
    return tuple(float(a) for a in np.linspace(beta, top, d + 1)[1:])
