"""Cut-off functions and the five-way partition of a symbol.

For a frequency ``theta`` and momentum ``xi`` write
``u = (2|2 xi + theta| / rho_n - 15) / 13``.  Then

* ``e_theta = varpi(|u|)`` localises to the shell ``rho_n/3 < |xi + theta/2| < 8 rho_n``,
* ``l>_theta = 1 - varpi(u)`` lives far outside, ``l<_theta = 1 - varpi(-u)`` near 0,
* ``zeta_theta = varpi(|<theta, xi + theta/2>| / (rho_n^beta |theta|))`` marks the
  resonant slab and ``phi_theta = 1 - zeta_theta`` its complement.

A symbol splits as ``b = b^o + b^down + b^flat + b^natural + b^LE`` with
``b^natural = bhat e phi``, ``b^flat = bhat e zeta``, ``b^down = bhat l<`` and
``b^LE = bhat l>`` on nonzero frequencies, and ``b^o`` the zero-frequency part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ScaleParams
from .smooth import cmod, radial_chi, varpi
from .symbols import Frequency, Multiplied, Symbol, ZeroSymbol


def _nonzero_mask(freqs: np.ndarray) -> np.ndarray:
    return np.max(np.abs(freqs), axis=1) > 1e-12 if len(freqs) else np.zeros(0, dtype=bool)


class CutoffFamily:
    """The cut-offs ``e, l>, l<, zeta, phi`` for one set of scale parameters.

    Every accessor takes frequencies of shape ``(n, d)`` and points of shape
    ``(N, d)`` and returns an ``(n, N)`` array.  Complex points are cut off
    according to their real parts.
    """

    def __init__(self, params: ScaleParams):
        self.params = params
        self.rho_n = params.rho_n
        self.scale_beta = params.rho_n ** params.beta

    varpi = staticmethod(varpi)

    def chi(self, r):
        return radial_chi(r, self.params.C_0)

    def u(self, freqs, xi):
        freqs = np.atleast_2d(freqs)
        xi = np.atleast_2d(xi)
        pts = 2 * xi[None, :, :] + freqs[:, None, :]
        mod = np.real(cmod(pts))
        return (2 * mod / self.rho_n - 15.0) / 13.0

    def e(self, freqs, xi):
        return varpi(np.abs(self.u(freqs, xi)))

    def l_gt(self, freqs, xi):
        return 1.0 - varpi(self.u(freqs, xi))

    def l_lt(self, freqs, xi):
        return 1.0 - varpi(-self.u(freqs, xi))

    def zeta(self, freqs, xi):
        freqs = np.atleast_2d(freqs)
        xi = np.atleast_2d(xi)
        norms = np.linalg.norm(freqs, axis=1)
        safe = np.where(norms > 0, norms, 1.0)
        inner = np.real(xi) @ freqs.T + 0.5 * norms[None, :] ** 2
        arg = np.abs(inner.T) / (self.scale_beta * safe[:, None])
        out = varpi(arg)
        out[norms == 0] = 0.0
        return out

    def phi(self, freqs, xi):
        return 1.0 - self.zeta(freqs, xi)

    def e_phi(self, freqs, xi):
        return self.e(freqs, xi) * self.phi(freqs, xi)


@dataclass(frozen=True)
class SymbolSplit:
    o: Symbol
    down: Symbol
    flat: Symbol
    natural: Symbol
    le: Symbol

    def parts(self):
        return [self.o, self.down, self.flat, self.natural, self.le]


def _part(b: Symbol, fn, keep, label) -> Symbol:
    if b.is_zero or not np.any(keep):
        return ZeroSymbol(b.d, b.freq_set)
    return Multiplied(b, fn, 0.0, b.self_adjoint, keep=keep, label=label)


def natural_part(b: Symbol, cf: CutoffFamily) -> Symbol:
    return _part(b, cf.e_phi, _nonzero_mask(b.freqs), "natural")


def partition_symbol(b: Symbol, cf: CutoffFamily) -> SymbolSplit:
    nz = _nonzero_mask(b.freqs)
    ones = lambda freqs, xi: np.ones((len(freqs), len(xi)))
    return SymbolSplit(
        o=_part(b, ones, ~nz, "o"),
        down=_part(b, cf.l_lt, nz, "down"),
        flat=_part(b, lambda f, x: cf.e(f, x) * cf.zeta(f, x), nz, "flat"),
        natural=_part(b, cf.e_phi, nz, "natural"),
        le=_part(b, cf.l_gt, nz, "le"),
    )


def free_difference(freqs, xi, w: float) -> np.ndarray:
    """``|xi + theta|^{2w} - |xi|^{2w}`` without subtractive cancellation.

    Uses ``A^w - B^w = B^w expm1(w log1p((A - B)/B))`` with
    ``A - B = 2<xi, theta> + |theta|^2`` computed directly.
    """
    freqs = np.atleast_2d(freqs)
    xi = np.atleast_2d(xi)
    B = np.sum(xi * xi, axis=-1)[None, :]
    diff = 2 * (xi @ freqs.T).T + np.sum(freqs * freqs, axis=1)[:, None]
    if w == 1:
        return diff
    A = np.sum((xi[None, :, :] + freqs[:, None, :]) ** 2, axis=-1)
    safe_B = np.where(B == 0, 1.0, B)
    ratio = diff / safe_B
    # cancellation only matters when A and B are close
    small = (np.abs(ratio) < 0.5) & (B > 0)
    val = np.power(safe_B, w) * np.expm1(w * np.log1p(np.where(small, ratio, 0.0)))
    return np.where(small, val, np.power(A, w) - np.power(B, w))


def chi_tilde_matrix(freqs, xi, cf: CutoffFamily) -> np.ndarray:
    """``chi~_theta(xi) = e phi / (|xi+theta|^{2w} - |xi|^{2w})``, zero for theta = 0 and off support."""
    freqs = np.atleast_2d(freqs)
    xi = np.atleast_2d(xi)
    ep = cf.e_phi(freqs, xi)
    den = free_difference(freqs, xi, cf.params.w)
    on = (ep != 0) & _nonzero_mask(freqs)[:, None]
    out = np.zeros(ep.shape, dtype=den.dtype if np.iscomplexobj(den) else float)
    out[on] = ep[on] / den[on]
    return out


def chi_tilde(theta, xi, sp: ScaleParams) -> complex:
    """Scalar version of :func:`chi_tilde_matrix`."""
    if isinstance(theta, Frequency):
        theta = theta.array
    cf = CutoffFamily(sp)
    val = chi_tilde_matrix(np.asarray(theta, float).reshape(1, -1), np.asarray(xi).reshape(1, -1), cf)
    return val[0, 0]
