"""Resonance geometry of momentum space.

For ``theta`` in ``Theta'_k`` the slab ``Lambda(theta) = {|<xi, n(theta)>| <= L_1}``
marks momenta nearly orthogonal to ``theta``.  Quasi-lattice subspaces ``V``
(spans of frequencies) and their flags ``X = V_0 < V_1 < ... < V_m = V`` give
``Lambda(F) = {|<xi, nu_j>| <= L_j}``, ``Xi_1(V)`` = union over flags and
``Xi(V) = Xi_1(V)`` minus the ``Xi_1`` of the subspaces one dimension higher.
The regions ``Xi(V)`` partition R^d, and congruence classes (points reachable
by integer frequency steps inside the slabs) index the invariant blocks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from .params import ScaleParams
from .symbols import Frequency, FrequencySet, PointIndex, SymbolError, unique_points

SUBSPACE_TOL = 1e-10


class GeometryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# algebraic closure


def theta_closure(theta: FrequencySet, k: int, cap: int = 100_000) -> FrequencySet:
    """``Theta_k``: all sums of at most k elements (0 is in Theta)."""
    if k < 1:
        raise GeometryError("closure order k must be >= 1")
    if k == 1:
        return theta
    current = list(theta.elements)
    base = list(theta.elements)
    for _ in range(k - 1):
        sums = [a + b for a in current for b in base]
        arr = np.array([s.coords for s in sums])
        keep, _ = unique_points(arr)
        current = [sums[i] for i in keep]
        if len(current) > cap:
            raise GeometryError(f"closure has more than {cap} elements")
    return FrequencySet(current, theta.d, validate=False)


# ---------------------------------------------------------------------------
# subspaces


def rref(mat: np.ndarray, tol: float = SUBSPACE_TOL) -> np.ndarray:
    """Reduced row echelon form of the row space (zero rows dropped)."""
    A = np.array(mat, dtype=float, copy=True)
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = r + int(np.argmax(np.abs(A[r:, c])))
        if abs(A[p, c]) <= tol * max(1.0, np.abs(A).max()):
            continue
        A[[r, p]] = A[[p, r]]
        A[r] /= A[r, c]
        for i in range(rows):
            if i != r:
                A[i] -= A[i, c] * A[r]
        r += 1
    out = A[:r]
    out[np.abs(out) < 1e-13] = 0.0
    return out


@dataclass(frozen=True)
class Subspace:
    """A quasi-lattice subspace given by generators from ``Theta_k``."""

    generators: np.ndarray
    basis: np.ndarray
    key: Tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def span(cls, generators: np.ndarray, d: int) -> "Subspace":
        gens = np.asarray(generators, dtype=float).reshape(-1, d)
        if len(gens) == 0:
            return cls(gens, np.zeros((0, d)), (0,))
        R = rref(gens)
        u, s, vt = np.linalg.svd(gens, full_matrices=False)
        rank = int(np.sum(s > SUBSPACE_TOL * max(1.0, s.max())))
        basis = vt[:rank]
        key = (rank,) + tuple(np.round(R, 8).ravel().tolist())
        return cls(gens, basis, key)

    def project(self, xi: np.ndarray) -> np.ndarray:
        return (xi @ self.basis.T) @ self.basis

    def contains(self, vecs: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        vecs = np.atleast_2d(vecs)
        resid = vecs - self.project(vecs)
        return np.linalg.norm(resid, axis=1) <= tol * np.maximum(1.0, np.linalg.norm(vecs, axis=1))

    def complement_basis(self) -> np.ndarray:
        d = self.basis.shape[1]
        if self.dim == 0:
            return np.eye(d)
        u, s, vt = np.linalg.svd(self.basis, full_matrices=True)
        return vt[self.dim:]

    def is_subspace_of(self, other: "Subspace") -> bool:
        if self.dim == 0:
            return True
        return self.dim <= other.dim and bool(np.all(other.contains(self.basis)))


def enumerate_subspaces(theta_k: FrequencySet, cap: int = 20_000) -> List[List[Subspace]]:
    """All quasi-lattice subspaces, grouped by dimension (index m)."""
    d = theta_k.d
    nz = theta_k.array[np.linalg.norm(theta_k.array, axis=1) > SUBSPACE_TOL]
    levels: List[List[Subspace]] = [[Subspace.span(np.zeros((0, d)), d)]]
    total = 1
    for m in range(1, d + 1):
        seen: Dict[Tuple, Subspace] = {}
        for V in levels[m - 1]:
            outside = nz[~V.contains(nz)] if V.dim else nz
            for theta in outside:
                W = Subspace.span(np.vstack([V.generators, theta]), d)
                if W.dim == m and W.key not in seen:
                    seen[W.key] = W
        if not seen:
            break
        levels.append(list(seen.values()))
        total += len(seen)
        if total > cap:
            raise GeometryError(f"more than {cap} quasi-lattice subspaces")
    return levels


@dataclass(frozen=True)
class Flag:
    chain: Tuple[Subspace, ...]
    nus: np.ndarray  # (m, d)


def _unit_complement(V: Subspace, U: Subspace) -> np.ndarray:
    """Unit vector in ``U minus V`` for ``V < U`` with ``dim U = dim V + 1``."""
    for g in U.basis:
        r = g - V.project(g[None, :])[0] if V.dim else g.copy()
        n = np.linalg.norm(r)
        if n > 1e-8:
            return r / n
    raise GeometryError("subspaces are not nested with codimension 1")


def _intersection(V: Subspace, U: Subspace) -> Subspace:
    d = V.basis.shape[1]
    if V.dim == 0 or U.dim == 0:
        return Subspace.span(np.zeros((0, d)), d)
    M = np.hstack([V.basis.T, -U.basis.T])
    u, s, vt = np.linalg.svd(M)
    rank = int(np.sum(s > 1e-9))
    null = vt[rank:]
    if len(null) == 0:
        return Subspace.span(np.zeros((0, d)), d)
    vecs = null[:, :V.dim] @ V.basis
    return Subspace.span(vecs, d)


def _orth_difference(V: Subspace, W: Subspace) -> np.ndarray:
    """Orthonormal basis of ``V minus W`` (W inside V)."""
    vecs = V.basis - (W.project(V.basis) if W.dim else 0.0)
    u, s, vt = np.linalg.svd(vecs, full_matrices=False)
    rank = int(np.sum(s > 1e-9))
    return vt[:rank]


# ---------------------------------------------------------------------------
# geometry object


@dataclass
class CongruenceClass:
    seed: np.ndarray
    points: np.ndarray
    witness: List[Tuple[int, int, int]]  # (parent index, theta index, l)
    region: int = -1
    capped: bool = False

    @property
    def size(self) -> int:
        return len(self.points)

    def diameter(self) -> float:
        if len(self.points) < 2:
            return 0.0
        diff = self.points[:, None, :] - self.points[None, :, :]
        return float(np.max(np.linalg.norm(diff, axis=-1)))

    def ordered(self) -> np.ndarray:
        """Points sorted by modulus, ties broken lexicographically."""
        return self.points[ordering(self.points)]


def ordering(points: np.ndarray) -> np.ndarray:
    """Permutation sorting by |eta| then lexicographically by coordinates."""
    points = np.asarray(points)
    mod = np.round(np.linalg.norm(points, axis=1), 10)
    keys = [points[:, k] for k in range(points.shape[1] - 1, -1, -1)] + [mod]
    return np.lexsort(keys)


class ResonanceGeometry:
    """All region data for a closed frequency set ``Theta_k`` and scale parameters."""

    def __init__(self, theta_k: FrequencySet, params: ScaleParams, class_cap: int = 20_000):
        self.theta_k = theta_k
        self.params = params
        self.d = theta_k.d
        self.L = params.L
        self.class_cap = class_cap
        arr = theta_k.array
        nz = arr[np.linalg.norm(arr, axis=1) > SUBSPACE_TOL]
        # one representative per +/- pair
        reps = []
        idx = PointIndex(nz)
        used = np.zeros(len(nz), dtype=bool)
        for i, t in enumerate(nz):
            if used[i]:
                continue
            used[i] = True
            j = idx.lookup(-t[None, :])[0]
            if j >= 0:
                used[j] = True
            reps.append(t)
        self.moves = np.array(reps).reshape(-1, self.d)
        self.move_norms = np.linalg.norm(self.moves, axis=1)
        self.move_dirs = self.moves / self.move_norms[:, None]
        self.levels = enumerate_subspaces(theta_k)
        self.subspaces: List[Subspace] = [V for lvl in self.levels for V in lvl]
        self._flags = {}
        for i, V in enumerate(self.subspaces):
            self._flags[i] = self._build_flags(i)
        self._parents = {i: [j for j, U in enumerate(self.subspaces)
                             if U.dim == V.dim + 1 and V.is_subspace_of(U)]
                         for i, V in enumerate(self.subspaces)}
        self._supersets = {i: [j for j, U in enumerate(self.subspaces)
                               if U.dim > V.dim and V.is_subspace_of(U)]
                           for i, V in enumerate(self.subspaces)}

    # -- flags and membership -----------------------------------------------
    def _build_flags(self, i: int) -> np.ndarray:
        V = self.subspaces[i]
        if V.dim == 0:
            return np.zeros((1, 0, self.d))
        out = []
        for j, U in enumerate(self.subspaces):
            if U.dim == V.dim - 1 and U.is_subspace_of(V):
                sub = self._flags.get(j)
                if sub is None:
                    sub = self._build_flags(j)
                nu = _unit_complement(U, V)
                for f in sub:
                    out.append(np.vstack([f, nu[None, :]]))
        return np.array(out)

    def flags(self, i: int) -> np.ndarray:
        """Array ``(n_flags, m, d)`` of the unit vectors nu_j of every flag of V_i."""
        return self._flags[i]

    def index_of(self, V: Subspace) -> int:
        for i, U in enumerate(self.subspaces):
            if U.key == V.key:
                return i
        raise GeometryError("subspace not in the collection")

    def xi1_member(self, i: int, xi: np.ndarray) -> np.ndarray:
        xi = np.atleast_2d(xi)
        F = self._flags[i]
        m = F.shape[1]
        if m == 0:
            return np.ones(len(xi), dtype=bool)
        proj = np.abs(np.einsum("fmd,nd->nfm", F, xi))
        tol = 1e-9 * self.L[0]
        ok = np.all(proj <= self.L[:m][None, None, :] + tol, axis=2)
        return np.any(ok, axis=1)

    def in_lambda(self, theta: np.ndarray, xi: np.ndarray) -> np.ndarray:
        """Membership of points in ``Lambda(theta)`` for one nonzero theta."""
        n = np.asarray(theta, float) / np.linalg.norm(theta)
        return np.abs(np.atleast_2d(xi) @ n) <= self.L[0] * (1 + 1e-9)

    def region_membership(self, xi: np.ndarray, mode: str = "codim1") -> np.ndarray:
        """Boolean ``(n_subspaces, N)``: ``xi`` in ``Xi(V)``.

        ``mode='codim1'`` removes only the codimension-one extensions, ``'all'``
        removes every strict superset; both definitions agree when the
        parameters are in the asymptotic regime.
        """
        xi = np.atleast_2d(xi)
        base = np.array([self.xi1_member(i, xi) for i in range(len(self.subspaces))])
        out = np.zeros_like(base)
        for i in range(len(self.subspaces)):
            others = self._parents[i] if mode == "codim1" else self._supersets[i]
            excl = np.any(base[others], axis=0) if others else np.zeros(len(xi), dtype=bool)
            out[i] = base[i] & ~excl
        return out

    def classify_region(self, xi: np.ndarray) -> np.ndarray:
        """Index of the region containing each point, or -1 if not exactly one."""
        mem = self.region_membership(xi)
        count = mem.sum(axis=0)
        idx = np.argmax(mem, axis=0)
        return np.where(count == 1, idx, -1)

    def region_dim(self, i: int) -> int:
        return self.subspaces[i].dim

    # -- congruence classes -------------------------------------------------
    def moves_in(self, i: int) -> np.ndarray:
        """Indices of the move frequencies lying in subspace i."""
        V = self.subspaces[i]
        if V.dim == 0:
            return np.zeros(0, dtype=int)
        return np.flatnonzero(V.contains(self.moves))

    def congruence_class(self, xi, within: Optional[int] = None) -> CongruenceClass:
        """Breadth-first closure of ``xi`` under steps ``l theta`` inside ``Lambda(theta)``.

        With ``within`` only frequencies of that subspace are used as moves.
        """
        xi = np.asarray(xi, dtype=float)
        L1 = self.L[0]
        slack = 1e-9 * L1
        allowed = np.arange(len(self.moves)) if within is None else self.moves_in(within)
        dirs = self.move_dirs[allowed]
        points = [xi]
        witness = [(-1, -1, 0)]
        keys = {self._key(xi): 0}
        frontier = [0]
        moves = self.moves
        while frontier:
            nxt = []
            for p in frontier:
                pt = points[p]
                proj = dirs @ pt
                for t, s_t in zip(allowed, proj):
                    if abs(s_t) > L1 + slack:
                        continue
                    nrm = self.move_norms[t]
                    lo = math.ceil((-L1 - slack - s_t) / nrm)
                    hi = math.floor((L1 + slack - s_t) / nrm)
                    ls = [l for l in range(lo, hi + 1) if l != 0]
                    if not ls:
                        continue
                    cand = pt + np.array(ls, dtype=float)[:, None] * moves[t]
                    for l, q, row in zip(ls, cand, cand.tolist()):
                        key = tuple(round(v, 7) for v in row)
                        if key in keys:
                            continue
                        keys[key] = len(points)
                        points.append(q)
                        witness.append((p, int(t), l))
                        nxt.append(len(points) - 1)
                    if len(points) > self.class_cap:
                        raise GeometryError(
                            f"congruence class exceeds cap {self.class_cap}; point too close to "
                            "Xi(R^d) or parameters inconsistent")
            frontier = nxt
        return CongruenceClass(xi, np.array(points), witness)

    @staticmethod
    def _key(p: np.ndarray) -> Tuple:
        return tuple(round(v, 7) for v in np.asarray(p, dtype=float).tolist())

    # -- components and charts ---------------------------------------------
    def normals(self, i: int) -> np.ndarray:
        """Unit normals ``n(theta_{V perp})`` for theta outside V (deduplicated up to sign)."""
        V = self.subspaces[i]
        arr = self.moves
        if V.dim:
            outside = arr[~V.contains(arr)]
            perp = outside - V.project(outside)
        else:
            perp = arr
        if len(perp) == 0:
            return np.zeros((0, self.d))
        n = perp / np.linalg.norm(perp, axis=1)[:, None]
        # canonical sign: first significant coordinate positive
        for row in n:
            k = int(np.argmax(np.abs(row) > 1e-9))
            if row[k] < 0:
                row *= -1
        keep, _ = unique_points(n, 1e-9)
        return n[keep]

    def components(self, i: int) -> List["Component"]:
        V = self.subspaces[i]
        if V.dim == self.d:
            return []
        Q = V.complement_basis()  # (K+1, d)
        normals = self.normals(i)
        local = normals @ Q.T  # coordinates in V-perp
        Lm = self.L[V.dim]
        cells = _arrangement_cells(local)
        comps = []
        for signs in cells:
            n_local = local * np.array(signs)[:, None]
            defining = _non_redundant(n_local, Lm)
            mus = n_local[defining] @ Q
            comps.append(Component(i, tuple(signs), mus, len(defining) == Q.shape[0]))
        return comps

    def omega_member(self, i: int, X: np.ndarray) -> np.ndarray:
        """Membership of points X (already in V) in ``Omega(V) = Xi_1(V) cap V``."""
        return self.xi1_member(i, X)


@dataclass
class Component:
    region: int
    signs: Tuple[int, ...]
    mus: np.ndarray  # defining unit vectors (J_p, d)
    minimal: bool


def _feasible_cell(normals: np.ndarray, signs: Sequence[int]) -> bool:
    k = normals.shape[1]
    A = -(np.array(signs)[:, None] * normals)
    res = linprog(np.zeros(k), A_ub=A, b_ub=-np.ones(len(signs)), bounds=[(None, None)] * k,
                  method="highs")
    return res.status == 0


def _arrangement_cells(normals: np.ndarray) -> List[Tuple[int, ...]]:
    """Sign vectors of the nonempty open cells of a central hyperplane arrangement."""
    n, k = normals.shape
    if n == 0:
        return [()]
    if k == 1:
        return [tuple(int(np.sign(v)) * s for v in normals[:, 0]) for s in (1, -1)]
    cells: List[Tuple[int, ...]] = [()]
    for j in range(n):
        new = []
        for c in cells:
            for s in (1, -1):
                cand = c + (s,)
                if _feasible_cell(normals[: j + 1], cand):
                    new.append(cand)
        cells = new
    return cells


def _non_redundant(normals: np.ndarray, L: float) -> List[int]:
    """Indices of constraints ``<eta, n_j> > L`` that touch the boundary of the region."""
    n, k = normals.shape
    if n <= k:
        return list(range(n))
    keep = []
    for j in range(n):
        others = [i for i in range(n) if i != j]
        res = linprog(normals[j], A_ub=-normals[others], b_ub=-L * np.ones(len(others)),
                      bounds=[(None, None)] * k, method="highs")
        if res.status == 3 or (res.status == 0 and res.fun < L * (1 - 1e-9)):
            keep.append(j)
    return keep


@dataclass
class CoordinateChart:
    """Shifted cylindrical coordinates ``xi = X + a + r Phi`` on one component."""

    region: int
    V_basis: np.ndarray  # (m, d)
    perp_basis: np.ndarray  # (K+1, d)
    mus: np.ndarray  # (K+1, d)
    apex: np.ndarray  # (d,)
    vertices: np.ndarray  # (K+1, d)
    L: float

    @property
    def K(self) -> int:
        return len(self.perp_basis) - 1

    @property
    def m(self) -> int:
        return len(self.V_basis)

    def to_chart(self, xi: np.ndarray):
        xi = np.atleast_2d(xi)
        X = xi @ self.V_basis.T if self.m else np.zeros((len(xi), 0))
        perp = xi - (X @ self.V_basis if self.m else 0.0)
        eta = perp - self.apex
        r = np.linalg.norm(eta, axis=1)
        return X, r, eta / r[:, None]

    def from_chart(self, X: np.ndarray, r, Phi: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        base = X @ self.V_basis if self.m else np.zeros((X.shape[0], len(self.apex)))
        r = np.asarray(r)
        return base + self.apex + r[..., None] * Phi

    def in_simplex(self, Phi: np.ndarray) -> np.ndarray:
        return np.all(np.atleast_2d(Phi) @ self.mus.T > 0, axis=1)


def build_chart(geom: ResonanceGeometry, comp: Component) -> CoordinateChart:
    V = geom.subspaces[comp.region]
    Q = V.complement_basis()
    mus = np.asarray(comp.mus, dtype=float)
    if not comp.minimal or len(mus) != Q.shape[0]:
        raise GeometryError("chart requires a minimal defining set (J_p = K + 1)")
    if not np.allclose(np.linalg.norm(mus, axis=1), 1.0, atol=1e-10):
        raise GeometryError("defining vectors must be unit vectors")
    G = mus @ Q.T
    if abs(np.linalg.det(G)) < 1e-12:
        raise GeometryError("defining vectors are not linearly independent")
    Ginv = np.linalg.inv(G)
    L = float(geom.L[V.dim])
    apex = (Ginv @ (L * np.ones(len(mus)))) @ Q
    verts = (Ginv.T @ Q)
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    return CoordinateChart(comp.region, V.basis, Q, mus, apex, verts, L)


def chart_from_vectors(V_basis: np.ndarray, mus: np.ndarray, L: float, d: int) -> CoordinateChart:
    """Chart for explicit data (used in tests and synthetic blocks)."""
    V = Subspace.span(V_basis, d) if len(V_basis) else Subspace.span(np.zeros((0, d)), d)
    Q = V.complement_basis()
    mus = np.atleast_2d(np.asarray(mus, dtype=float))
    G = mus @ Q.T
    Ginv = np.linalg.inv(G)
    apex = (Ginv @ (L * np.ones(len(mus)))) @ Q
    verts = Ginv.T @ Q
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    return CoordinateChart(-1, V.basis, Q, mus, apex, verts, L)


# ---------------------------------------------------------------------------
# constants and Condition A


def geometry_constants(theta_k: FrequencySet, subspaces: Sequence[Subspace], rho: float,
                       k: int) -> Dict[str, object]:
    arr = theta_k.array
    norms = np.linalg.norm(arr, axis=1)
    nz = norms[norms > SUBSPACE_TOL]
    r = float(nz.min()) if len(nz) else 1.0
    R = float(norms.max())
    s = 1.0
    vacuous = True
    proper = [V for V in subspaces if 0 < V.dim < theta_k.d]
    for V, U in itertools.combinations(proper, 2):
        if V.is_subspace_of(U) or U.is_subspace_of(V):
            continue
        W = _intersection(V, U)
        A = _orth_difference(V, W)
        B = _orth_difference(U, W)
        cos = float(np.linalg.svd(A @ B.T, compute_uv=False).max())
        s = min(s, math.sqrt(max(0.0, 1 - min(cos, 1.0) ** 2)))
        vacuous = False
    bound = rho ** (-1.0 / k)
    return {
        "s": s, "r": r, "R": R, "card": len(theta_k), "s_vacuous": vacuous,
        "s_ok": s >= bound, "r_ok": r >= bound, "card_ok": len(theta_k) <= rho ** (1.0 / k),
    }


def _rational_rank_and_kernel(rows: List[Tuple[Fraction, ...]]):
    """Gaussian elimination over Q on the matrix with columns = given vectors.

    Returns ``(rank, kernel_vector or None)`` where the kernel vector has
    integer entries with ``sum n_j v_j = 0``.
    """
    d = len(rows[0])
    n = len(rows)
    M = [[rows[j][i] for j in range(n)] for i in range(d)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, d) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(d):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == d:
            break
    rank = len(pivots)
    if rank == n:
        return rank, None
    free = next(c for c in range(n) if c not in pivots)
    vec = [Fraction(0)] * n
    vec[free] = Fraction(1)
    for row, c in enumerate(pivots):
        vec[c] = -M[row][free]
    lcm = 1
    for q in vec:
        lcm = lcm * q.denominator // math.gcd(lcm, q.denominator)
    ints = [int(q * lcm) for q in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    return rank, [v // g for v in ints]


@dataclass
class ConditionAResult:
    passed: bool
    checked: int
    dependent: List[Tuple[Tuple, List[int]]] = field(default_factory=list)
    witness: Optional[Tuple] = None


def check_condition_A(theta: FrequencySet, k_max: int = 2) -> ConditionAResult:
    """Check that every dependent d-tuple from ``Theta'_{k_max}`` has an integer relation."""
    if not theta.has_exact:
        raise GeometryError("rational coords missing: Condition A needs exact frequencies")
    closed = theta_closure(theta, k_max)
    reps: Dict[Tuple, Tuple[Fraction, ...]] = {}
    for f in closed.elements:
        if all(q == 0 for q in f.exact):
            continue
        neg = tuple(-q for q in f.exact)
        if neg not in reps:
            reps[f.exact] = f.exact
    vecs = list(reps.values())
    d = theta.d
    result = ConditionAResult(True, 0)
    for combo in itertools.combinations(vecs, d):
        result.checked += 1
        rank, kernel = _rational_rank_and_kernel(list(combo))
        if rank == d:
            continue
        if kernel is None:
            result.passed = False
            result.witness = combo
            return result
        check = [sum(n * v[i] for n, v in zip(kernel, combo)) for i in range(d)]
        if any(c != 0 for c in check):
            result.passed = False
            result.witness = combo
            return result
        if len(result.dependent) < 20:
            result.dependent.append((combo, kernel))
    return result
