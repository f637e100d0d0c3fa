"""Brute-force IDS for periodic operators by Floquet-Bloch decomposition.

For frequencies in a lattice ``Gamma*`` the operator splits into fibers over
quasi-momenta q in a cell of ``Gamma*``.  Each fiber is the matrix
``|q + g|^{2w} delta + bhat(g' - g, q + g)`` over lattice points g, truncated
to ``|q + g| <= T``, and

    N(lambda) = (2 pi)^{-d} |cell| mean_q #{eigenvalues <= lambda}.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .ids import IdsResult
from .symbols import FrequencySet, Symbol


class OracleError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def integer_row_basis(rows: List[List[int]]) -> List[List[int]]:
    """Basis of the Z-module spanned by integer rows (echelon form by Euclid's algorithm)."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncol = len(rows[0])
    basis = []
    col = 0
    while rows and col < ncol:
        while True:
            nz = [r for r in rows if r[col] != 0]
            if len(nz) <= 1:
                break
            pivot = min(nz, key=lambda r: abs(r[col]))
            new = [pivot]
            for r in rows:
                if r is pivot:
                    continue
                if r[col] != 0:
                    f = r[col] // pivot[col]
                    r = [a - f * b for a, b in zip(r, pivot)]
                if any(r):
                    new.append(r)
            rows = new
        nz = [r for r in rows if r[col] != 0]
        if nz:
            basis.append(nz[0])
            rows = [r for r in rows if r is not nz[0]]
        col += 1
    return basis


def dual_lattice(fs: FrequencySet) -> np.ndarray:
    """Basis (rows) of the lattice generated by the frequencies; needs exact rationals."""
    if not fs.has_exact:
        raise OracleError("frequencies are not in a common lattice: exact rational coordinates required")
    den = 1
    for f in fs.elements:
        for q in f.exact:
            den = _lcm(den, Fraction(q).denominator)
    ints = [[int(Fraction(q) * den) for q in f.exact] for f in fs.elements]
    basis = integer_row_basis(ints)
    if len(basis) != fs.d:
        raise OracleError("frequencies do not generate a full-rank lattice")
    return np.array(basis, dtype=float) / den


def _lattice_points(basis: np.ndarray, q: np.ndarray, T: float):
    """Integer coordinates n with ``|q + n B| <= T``."""
    d = basis.shape[0]
    inv = np.linalg.inv(basis)
    qn = q @ inv
    bound = T * np.linalg.norm(inv, axis=0)
    ranges = [np.arange(math.floor(-qn[i] - bound[i]) - 1, math.ceil(-qn[i] + bound[i]) + 2) for i in range(d)]
    grid = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, d)
    pts = q + grid @ basis
    keep = np.sum(pts * pts, axis=1) <= T * T
    return grid[keep], pts[keep]


def fiber_eigenvalues(b: Optional[Symbol], basis: np.ndarray, q: np.ndarray, T: float, w: float) -> np.ndarray:
    """All eigenvalues of the truncated fiber at quasi-momentum q (sorted)."""
    ints, pts = _lattice_points(basis, q, T)
    diag = np.sum(pts * pts, axis=1) ** w
    if b is None or b.is_zero:
        return np.sort(diag)
    inv = np.linalg.inv(basis)
    n = len(pts)
    lo = ints.min(axis=0)
    shape = ints.max(axis=0) - lo + 1
    lookup = -np.ones(tuple(shape), dtype=np.int64)
    lookup[tuple((ints - lo).T)] = np.arange(n)
    C = b.coeffs(pts)  # (nf, n)
    rows, cols, vals = [], [], []
    for k, theta in enumerate(b.freqs):
        shift = np.rint(theta @ inv).astype(int)
        if not np.any(shift):
            diag = diag + C[k].real
            continue
        tgt = ints + shift - lo
        ok = np.all((tgt >= 0) & (tgt < shape), axis=1)
        j = np.full(n, -1)
        j[ok] = lookup[tuple(tgt[ok].T)]
        live = j >= 0
        rows.append(j[live])
        cols.append(np.flatnonzero(live))
        vals.append(C[k][live])
    if not rows:
        return np.sort(diag)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    if not np.any(vals.imag):
        vals = vals.real
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    ncomp, labels = connected_components(graph, directed=False)
    order = np.argsort(labels, kind="stable")
    sizes = np.bincount(labels, minlength=ncomp)
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    pos = np.empty(n, dtype=int)
    pos[order] = np.arange(n) - np.repeat(starts, sizes)
    # components of equal size share one batched eigensolve
    slot = np.empty(ncomp, dtype=int)
    out = []
    for s in np.unique(sizes):
        comps = np.flatnonzero(sizes == s)
        if s == 1:
            out.append(diag[order[starts[comps]]])
            continue
        slot[comps] = np.arange(len(comps))
        H = np.zeros((len(comps), s, s), dtype=vals.dtype)
        members = order[starts[comps][:, None] + np.arange(s)]
        H[:, np.arange(s), np.arange(s)] = diag[members]
        sel = sizes[labels[rows]] == s
        H[slot[labels[rows[sel]]], pos[rows[sel]], pos[cols[sel]]] += vals[sel]
        out.append(np.linalg.eigvalsh(H).ravel())
    return np.sort(np.concatenate(out))


def ids_oracle_floquet(lambdas, b: Optional[Symbol], fs: FrequencySet, w: float, grid: int = 64,
                       truncation: Optional[float] = None, threads: int = 1) -> IdsResult:
    """Floquet-Bloch IDS on a midpoint grid of ``grid^d`` quasi-momenta.

    The truncation radius defaults to ``3 lambda_max^{1/2w}``; smaller values
    are rejected as under-resolved.  Fibers are independent and may be solved
    on ``threads`` workers; the reduction order is fixed.
    """
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    if np.any(np.diff(lam) < 0):
        raise ValueError("lambda grid must be ascending")
    d = fs.d
    basis = dual_lattice(fs)
    rho_max = float(lam.max()) ** (1 / (2 * w))
    T = 3 * rho_max if truncation is None else float(truncation)
    if T < 3 * rho_max * (1 - 1e-12):
        raise OracleError(f"truncation radius {T:.3g} < 3 lambda^(1/2w) = {3 * rho_max:.3g} (under-resolved)")
    u = (np.arange(grid) + 0.5) / grid
    cells = np.stack(np.meshgrid(*([u] * d), indexing="ij"), axis=-1).reshape(-1, d)

    def count(c):
        return np.searchsorted(fiber_eigenvalues(b, basis, c @ basis, T, w), lam, side="right")

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            counts = np.array(list(pool.map(count, cells)), dtype=float)
    else:
        counts = np.array([count(c) for c in cells], dtype=float)
    vol = abs(np.linalg.det(basis))
    N = (2 * np.pi) ** (-d) * vol * counts.mean(axis=0)
    # a band edge moves the count of one cell; the midpoint rule is accurate to about one cell per band
    err = (2 * np.pi) ** (-d) * vol * np.std(counts, axis=0) / math.sqrt(len(cells))
    return IdsResult(lam, N, "floquet-oracle", err, details={"grid": grid, "truncation": T})


def find_plateaus(lambdas, N, min_width: float = 0.0, tol: float = 1e-12):
    """Maximal intervals ``[lam_i, lam_j]`` on which N is constant (spectral gaps)."""
    lam = np.asarray(lambdas, dtype=float)
    N = np.asarray(N, dtype=float)
    out = []
    i = 0
    while i < len(lam) - 1:
        j = i
        while j + 1 < len(lam) and abs(N[j + 1] - N[i]) <= tol:
            j += 1
        if j > i and lam[j] - lam[i] > min_width:
            out.append((float(lam[i]), float(lam[j])))
        i = j + 1 if j > i else i + 1
    return out
