"""Gauge transform: order-by-order removal of the non-resonant part of the symbol.

With ``H_0 = (-Delta)^w`` and ``B_1 = op(b)`` the recursion is

* ``B_l = sum_{j=1}^{l-1} 1/j! sum_{k_1+..+k_j = l-1} ad(b; Psi_{k_1}, .., Psi_{k_j})``,
* ``T_l = sum_{j=2}^{l} 1/j! sum_{k_1+..+k_j = l} ad(H_0; Psi_{k_1}, .., Psi_{k_j})``,
* ``ad(H_0; Psi_l) + (B_l + T_l)^natural = 0`` (``T_1 = 0``),

and the reduced symbol is ``w = y - y^natural`` with ``y = sum B_l + sum_{l>=2} T_l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .cutoffs import CutoffFamily, _nonzero_mask, chi_tilde_matrix, natural_part
from .params import ScaleParams
from .symbols import (
    Multiplied,
    Symbol,
    SymbolError,
    ZeroSymbol,
    apply_to_exponential,
    check_symmetry,
    free_symbol,
    linear_combination,
    multiple_commutator,
    symbol_commutator,
)


class GaugeError(ValueError):
    pass


def compositions(n: int, parts: int):
    """Ordered tuples of ``parts`` positive integers summing to ``n``."""
    if parts == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def solve_commutator_equation(a: Symbol, cf: CutoffFamily) -> Symbol:
    """``psihat(theta, xi) = i ahat(theta, xi) chi~_theta(xi)``, solving ``ad(H_0; Psi) + a^natural = 0``."""
    if a.is_zero:
        return ZeroSymbol(a.d, a.freq_set)
    keep = _nonzero_mask(a.freqs)
    if not np.any(keep):
        return ZeroSymbol(a.d, a.freq_set)
    mult = lambda freqs, xi: 1j * chi_tilde_matrix(freqs, xi, cf)
    shift = -(2 * cf.params.w - 2 + cf.params.beta)
    return Multiplied(a, mult, shift, a.self_adjoint, keep=keep, label="psi")


def reduced_part(y: Symbol, cf: CutoffFamily) -> Symbol:
    """``w = y - y^natural``: nonzero frequencies are multiplied by ``1 - e phi``."""
    if y.is_zero:
        return ZeroSymbol(y.d, y.freq_set)
    def mult(freqs, xi):
        out = 1.0 - cf.e_phi(freqs, xi)
        out[~_nonzero_mask(freqs)] = 1.0
        return out

    return Multiplied(y, mult, 0.0, y.self_adjoint, label="w")


@dataclass
class GaugeResult:
    params: ScaleParams
    b: Symbol
    h0: Symbol
    psi: List[Symbol]
    b_terms: List[Symbol]
    t_terms: List[Symbol]
    y: Symbol
    w: Symbol
    cutoffs: CutoffFamily
    residuals: List[float] = field(default_factory=list)

    @property
    def k_tilde(self) -> int:
        return len(self.psi)

    def level_source(self, l: int) -> Symbol:
        """``B_l + T_l`` (with ``T_1 = 0``), the right-hand side at level l."""
        parts = [(1.0, self.b_terms[l - 1])]
        if l >= 2:
            parts.append((1.0, self.t_terms[l - 2]))
        return linear_combination(parts, self.b.d)


def gauge_recursion(b: Symbol, sp: ScaleParams, k_tilde: Optional[int] = None,
                    cf: Optional[CutoffFamily] = None) -> GaugeResult:
    k_tilde = sp.k_tilde if k_tilde is None else k_tilde
    if k_tilde < 1:
        raise GaugeError("k_tilde must be at least 1")
    if not b.self_adjoint:
        raise GaugeError("gauge recursion requires a self-adjoint symbol")
    if b.d != sp.d:
        raise GaugeError("symbol dimension does not match the scale parameters")
    cf = cf or CutoffFamily(sp)
    d = b.d
    h0 = free_symbol(d, sp.w)
    psi: Dict[int, Symbol] = {}
    B: Dict[int, Symbol] = {1: b}
    T: Dict[int, Symbol] = {}
    psi[1] = solve_commutator_equation(b, cf)
    for l in range(2, k_tilde + 1):
        parts = []
        for j in range(1, l):
            for comp in compositions(l - 1, j):
                parts.append((1.0 / math.factorial(j), multiple_commutator(b, [psi[k] for k in comp])))
        B[l] = linear_combination(parts, d)
        parts = []
        for j in range(2, l + 1):
            for comp in compositions(l, j):
                parts.append((1.0 / math.factorial(j), multiple_commutator(h0, [psi[k] for k in comp])))
        T[l] = linear_combination(parts, d)
        psi[l] = solve_commutator_equation(linear_combination([(1.0, B[l]), (1.0, T[l])], d), cf)
    y = linear_combination([(1.0, B[l]) for l in B] + [(1.0, T[l]) for l in T], d)
    w = reduced_part(y, cf)
    return GaugeResult(sp, b, h0, [psi[l] for l in sorted(psi)], [B[l] for l in sorted(B)],
                       [T[l] for l in sorted(T)], y, w, cf)


def shell_probes(sp: ScaleParams, n: int, seed: int = 0, lo: float = 1 / 3, hi: float = 8.0) -> np.ndarray:
    """Random points with ``lo rho_n <= |xi| <= hi rho_n``."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, sp.d))
    x /= np.linalg.norm(x, axis=1)[:, None]
    radii = sp.rho_n * rng.uniform(lo, hi, size=n)
    return x * radii[:, None]


def _vector_norm(vec: Dict) -> float:
    return float(np.sqrt(sum(abs(v) ** 2 for v in vec.values())))


def _vector_diff(a: Dict, b: Dict, tol: float = 1e-9) -> Dict:
    out = dict(a)
    for k, v in b.items():
        match = None
        for k2 in out:
            if max(abs(x - y) for x, y in zip(k, k2)) <= tol:
                match = k2
                break
        if match is None:
            out[k] = -v
        else:
            out[match] = out[match] - v
    return out


def commutator_residuals(gr: GaugeResult, probes: np.ndarray) -> List[float]:
    """Relative defects ``||(ad(H_0; Psi_l) + a_l^natural) e_nu|| / ||a_l^natural e_nu||`` per level.

    Each entry is the maximum over the probe points; probes where the natural
    part vanishes are skipped.
    """
    out = []
    for l in range(1, gr.k_tilde + 1):
        a_nat = natural_part(gr.level_source(l), gr.cutoffs)
        if a_nat.is_zero:
            out.append(0.0)
            continue
        lhs = symbol_commutator(gr.h0, gr.psi[l - 1])
        total = linear_combination([(1.0, lhs), (1.0, a_nat)], gr.b.d)
        num = np.linalg.norm(total.coeffs(probes), axis=0) if not total.is_zero else np.zeros(len(probes))
        ref = np.linalg.norm(a_nat.coeffs(probes), axis=0)
        live = ref > 0
        out.append(float(np.max(num[live] / ref[live])) if np.any(live) else 0.0)
    gr.residuals = out
    return out


def commutator_residual_exponentials(lhs: Symbol, a_nat: Symbol, nu) -> float:
    """Same defect computed through the action on a single exponential ``e_nu``."""
    u = apply_to_exponential(lhs, nu)
    v = apply_to_exponential(a_nat, nu)
    ref = _vector_norm(v)
    total = _vector_diff(u, {k: -x for k, x in v.items()})
    defect = _vector_norm(total)
    return defect / ref if ref > 0 else (0.0 if defect == 0 else np.inf)


def symmetry_defects(gr: GaugeResult, samples: int = 100, seed: int = 0) -> Dict[str, float]:
    scale = 2.0 * gr.params.rho_n
    out = {f"psi_{l + 1}": check_symmetry(p, samples, scale=scale, seed=seed) for l, p in enumerate(gr.psi)}
    out["w"] = check_symmetry(gr.w, samples, scale=scale, seed=seed)
    return out


def w_support_check(gr: GaugeResult, geom, samples: int = 1000, seed: int = 0,
                    lo: float = 5 / 6, hi: float = 5.0) -> float:
    """Largest ``|w(theta, xi)|`` over sampled configurations where w must vanish.

    Points are drawn in the shell ``lo rho_n <= |xi| <= hi rho_n``.  A
    configuration violates the support condition if theta is outside
    ``Theta_k`` or, for nonzero theta, ``xi`` or ``xi + theta`` is outside
    ``Lambda(theta)``.
    """
    W = gr.w
    if W.is_zero:
        return 0.0
    xi = shell_probes(gr.params, samples, seed, lo, hi)
    C = np.abs(W.coeffs(xi))  # (nf, n)
    known = geom.theta_k.array
    worst = 0.0
    for k, theta in enumerate(W.freqs):
        if not np.any(np.all(np.abs(known - theta) < 1e-9, axis=1)):
            worst = max(worst, float(C[k].max()))
            continue
        if not np.any(theta):
            continue
        bad = ~(geom.in_lambda(theta, xi) & geom.in_lambda(theta, xi + theta))
        if np.any(bad):
            worst = max(worst, float(C[k][bad].max()))
    return worst
