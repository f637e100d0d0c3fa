"""Smooth step functions built from the ``exp(-1/t)`` bump.

All functions accept real or complex arrays.  Complex inputs are cut off
according to their real part: the cut-offs are only ever evaluated at complex
points where they sit on a plateau, so this is the natural extension.
"""

from __future__ import annotations

import numpy as np


def _psi(t: np.ndarray) -> np.ndarray:
    """``exp(-1/t)`` for t > 0 and 0 otherwise."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    with np.errstate(over="ignore"):  # denormal t: exp(-inf) = 0 is the right value
        out[pos] = np.exp(-1.0 / t[pos])
    return out


def step_down(z, lo: float, hi: float) -> np.ndarray:
    """C-infinity function equal to 1 for z <= lo, 0 for z >= hi, decreasing between."""
    z = np.real(np.asarray(z))
    a = _psi(hi - z)
    b = _psi(z - lo)
    return a / (a + b)


def varpi(z) -> np.ndarray:
    """Plateau function: 1 on (-inf, 1], 0 on [21/20, inf)."""
    return step_down(z, 1.0, 21.0 / 20.0)


def radial_chi(r, C_0: float) -> np.ndarray:
    """``chi(r) = r`` for r >= C_0 and 0 for r <= C_0 / 2, smooth in between."""
    r = np.asarray(r)
    return r * (1.0 - step_down(r, C_0 / 2, C_0))


def cmod(xi: np.ndarray) -> np.ndarray:
    """Modulus ``sqrt(sum xi_i^2)`` along the last axis.

    For real input this is the Euclidean norm.  For complex input it is the
    analytic continuation with the principal square root, which is what the
    complexified radial variable requires.
    """
    xi = np.asarray(xi)
    if np.iscomplexobj(xi):
        return np.sqrt(np.sum(xi * xi, axis=-1))
    return np.sqrt(np.sum(xi * xi, axis=-1))


def japanese(xi: np.ndarray) -> np.ndarray:
    """``<xi> = sqrt(1 + |xi|^2)`` for real points."""
    xi = np.asarray(xi, dtype=float)
    return np.sqrt(1.0 + np.sum(xi * xi, axis=-1))
