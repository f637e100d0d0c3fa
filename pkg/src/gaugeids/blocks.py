"""Invariant blocks of the reduced operator and the g-map.

For a congruence class ``Upsilon = {eta_1, ..., eta_s}`` the reduced operator
``H_2 = (-Delta)^w + W`` leaves ``span{e_eta}`` invariant; its matrix is
``H(eta', eta) = |eta|^{2w} delta + what(eta' - eta, eta)``.  Along a ray
``eta = X' + a + r Phi`` (X' in V, a and Phi orthogonal to V) the block is an
analytic family in r, increasing in the operator sense.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import CongruenceClass, ResonanceGeometry, ordering
from .symbols import Symbol


class BlockError(ValueError):
    pass


class RootError(RuntimeError):
    """Bracketing failed: the eigenvalue branch is not monotone on the bracket."""


@dataclass
class Block:
    points: np.ndarray  # (s, d), ordered by modulus then lexicographically
    matrix: np.ndarray  # (s, s) Hermitian
    invariance_defect: float = 0.0

    @property
    def size(self) -> int:
        return len(self.points)

    def hermiticity_defect(self) -> float:
        H = self.matrix
        scale = max(np.linalg.norm(H), 1.0)
        return float(np.max(np.abs(H - H.conj().T)) / scale)


def modulus_power(points: np.ndarray, w: float) -> np.ndarray:
    """``|eta|_C^{2w} = (sum eta_i^2)^w`` with the principal branch for complex points."""
    r2 = np.sum(points * points, axis=-1)
    if np.iscomplexobj(r2) or w != int(w):
        return np.power(r2.astype(complex), w)
    return np.power(r2, w)


def coupling_index(W: Optional[Symbol], points: np.ndarray) -> Optional[np.ndarray]:
    """Index into ``W.freqs`` of every difference ``eta_i - eta_j`` (-1 if absent)."""
    if W is None or W.is_zero:
        return None
    d = points.shape[-1]
    diffs = np.real(points[..., :, None, :] - points[..., None, :, :])
    return W._index.lookup(diffs.reshape(-1, d)).reshape(diffs.shape[:-1])


def _coupling(W: Optional[Symbol], points: np.ndarray, idx: Optional[np.ndarray] = None) -> np.ndarray:
    """``what(eta_i - eta_j, eta_j)`` for a batch of point sets ``(..., s, d)``.

    ``idx`` from :func:`coupling_index` may be passed (broadcastable) to skip the lookup.
    """
    batch = points.shape[:-2]
    s, d = points.shape[-2:]
    out = np.zeros(batch + (s, s), dtype=complex)
    if W is None or W.is_zero:
        return out
    if idx is None:
        idx = coupling_index(W, points)
    idx = np.broadcast_to(idx, batch + (s, s))
    live = idx >= 0
    if not np.any(live):
        return out
    coeffs = W.coeffs(points)  # (nf, ..., s)
    if not np.any(live):
        return out
    cols = np.broadcast_to(np.arange(s), idx.shape)
    bidx = np.indices(idx.shape)[: len(batch)]
    sel = (idx[live],) + tuple(b[live] for b in bidx) + (cols[live],)
    out[live] = coeffs[sel]
    return out


def block_matrix(points: np.ndarray, w: float, W: Optional[Symbol]) -> np.ndarray:
    """Matrices of ``H_2`` on point sets ``(..., s, d)``; complex points are allowed."""
    points = np.asarray(points)
    diag = modulus_power(points, w)
    H = _coupling(W, points)
    s = points.shape[-2]
    H[..., np.arange(s), np.arange(s)] += diag
    return H


def assemble_block(cls: CongruenceClass, W: Optional[Symbol], w: float,
                   tol: float = 1e-10, check: bool = True) -> Block:
    """Matrix of ``H_2`` on ``span{e_eta : eta in Upsilon}``.

    With ``check`` the invariance of the span is verified: every coefficient
    ``what(theta, eta)`` with ``eta + theta`` outside the class must vanish.
    """
    pts = cls.ordered()
    H = block_matrix(pts, w, W)
    defect = 0.0
    if W is not None and not W.is_zero:
        C = W.coeffs(pts)  # (nf, s)
        targets = pts[None, :, :] + W.freqs[:, None, :]
        from .symbols import PointIndex

        inside = PointIndex(pts, 1e-7).lookup(targets.reshape(-1, pts.shape[1])).reshape(targets.shape[:2]) >= 0
        if np.any(~inside):
            defect = float(np.max(np.abs(C[~inside])))
    if check and defect > tol:
        raise BlockError(f"class is not invariant under H_2: leaking coefficient {defect:.3e}")
    return Block(pts, H, defect)


def block_eigenvalues(B, r=None) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian block (a Block, a matrix, or a family at r)."""
    if isinstance(B, RadialFamily):
        H = B.matrix(np.asarray([r], dtype=float))[0]
    elif isinstance(B, Block):
        H = B.matrix
    else:
        H = np.asarray(B)
    scale = max(np.linalg.norm(H), 1.0)
    if np.max(np.abs(H - H.conj().T)) > 1e-12 * scale:
        raise BlockError("block is not Hermitian")
    return np.linalg.eigvalsh(H)


# ---------------------------------------------------------------------------
# radial families


@dataclass
class RadialFamily:
    """Blocks along rays ``eta_i(z) = X_i + a + z Phi`` for a batch of nodes.

    ``X`` has shape ``(B, s, d)`` (the class points inside V, ordered), ``a``
    and ``Phi`` shape ``(B, d)``.  Every node shares the class size s.
    """

    X: np.ndarray
    a: np.ndarray
    Phi: np.ndarray
    w: float
    W: Optional[Symbol] = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        if self.X.ndim == 2:
            self.X = self.X[None]
        B = self.X.shape[0]
        self.a = np.broadcast_to(np.asarray(self.a, dtype=float), (B, self.X.shape[2])).copy()
        self.Phi = np.broadcast_to(np.asarray(self.Phi, dtype=float), (B, self.X.shape[2])).copy()
        self._idx = coupling_index(self.W, self.X)  # differences do not depend on z

    def coupling(self, z) -> np.ndarray:
        z = np.asarray(z)
        idx = self._idx if z.ndim == 1 or self._idx is None else self._idx[:, None]
        return _coupling(self.W, self.points(z), idx)

    @property
    def size(self) -> int:
        return self.X.shape[1]

    @property
    def batch(self) -> int:
        return self.X.shape[0]

    def points(self, z) -> np.ndarray:
        """Points for z of shape ``(B,)`` or ``(B, k)``; returns ``(B, [k,] s, d)``."""
        z = np.asarray(z)
        base = self.X + self.a[:, None, :]
        if z.ndim == 1:
            return base + z[:, None, None] * self.Phi[:, None, :]
        return base[:, None] + z[:, :, None, None] * self.Phi[:, None, None, :]

    def matrix(self, z) -> np.ndarray:
        pts = self.points(z)
        H = self.coupling(z)
        s = self.size
        H[..., np.arange(s), np.arange(s)] += modulus_power(pts, self.w)
        return H

    def derivative(self, z) -> np.ndarray:
        """``dH/dz``: analytic for the free part, fourth-order differences for W."""
        z = np.asarray(z)
        pts = self.points(z)
        r2 = np.sum(pts * pts, axis=-1)
        dr2 = 2 * np.sum(pts * (self.Phi[:, None, :] if z.ndim == 1 else self.Phi[:, None, None, :]), axis=-1)
        if self.w == 1:
            ddiag = dr2.astype(complex)
        else:
            ddiag = self.w * np.power(r2.astype(complex), self.w - 1) * dr2
        s = self.size
        out = np.zeros(pts.shape[:-2] + (s, s), dtype=complex)
        out[..., np.arange(s), np.arange(s)] = ddiag
        if self.W is not None and not self.W.is_zero:
            scale = np.maximum(np.abs(z), 1.0)
            h = 1e-3 * scale
            shape = h.shape + (1, 1)
            f = self.coupling
            out += (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h.reshape(shape))
        return out

    def free_roots(self, rho: float) -> np.ndarray:
        """``tau_0`` for every class point: ``|X_i + a + tau_0 Phi| = rho``, shape ``(B, s)``."""
        ap = np.sum(self.a * self.Phi, axis=1)[:, None]
        c = np.sum(self.a * self.a, axis=1)[:, None] + np.sum(self.X * self.X, axis=2) - rho ** 2
        disc = ap ** 2 - c
        if np.any(disc < 0):
            raise RootError("free root does not exist: ray misses the sphere")
        return -ap + np.sqrt(disc)


class InterpolatedFamily:
    """Real-r surrogate of a :class:`RadialFamily` with W interpolated in r.

    The coupling matrices are sampled at Chebyshev points of ``[lo, hi]`` (per
    node) and evaluated by barycentric interpolation; the free diagonal stays
    exact.  ``error`` is the maximal deviation from the exact couplings at the
    three probe points of the interval.
    """

    def __init__(self, fam: RadialFamily, lo: np.ndarray, hi: np.ndarray, n: int = 6):
        self.fam = fam
        self.w = fam.w
        self.W = fam.W
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        k = np.arange(n)
        self.t = np.cos((2 * k + 1) * np.pi / (2 * n))  # Chebyshev points of the first kind
        self.bw = (-1.0) ** k * np.sin((2 * k + 1) * np.pi / (2 * n))
        nodes = self._to_r(self.t[None, :])
        self.C = fam.coupling(nodes)  # (B, n, s, s)
        mid = self._to_r(np.array([[-0.9, 0.05, 0.9]]))
        exact = fam.coupling(mid)
        approx = self._interp(mid)
        scale = max(float(np.max(np.abs(self.C))), 1e-300)
        self.error = float(np.max(np.abs(exact - approx))) if exact.size else 0.0
        self.rel_error = self.error / scale

    @property
    def batch(self):
        return self.fam.batch

    @property
    def size(self):
        return self.fam.size

    def _to_r(self, t):
        return 0.5 * (self.lo + self.hi)[:, None] + 0.5 * (self.hi - self.lo)[:, None] * t

    def _interp(self, r):
        """Couplings at r of shape ``(B, k)``."""
        t = (2 * r - (self.lo + self.hi)[:, None]) / (self.hi - self.lo)[:, None]
        diff = t[:, :, None] - self.t[None, None, :]
        hit = np.abs(diff) < 1e-15
        diff = np.where(hit, 1.0, diff)
        q = self.bw / diff
        q = np.where(hit.any(axis=2, keepdims=True), hit.astype(float), q)
        q /= q.sum(axis=2, keepdims=True)
        B, n, s, _ = self.C.shape
        return (q @ self.C.reshape(B, n, s * s)).reshape(B, -1, s, s)

    def free_roots(self, rho):
        return self.fam.free_roots(rho)

    def matrix(self, r):
        r = np.asarray(r, dtype=float)
        pts = self.fam.points(r)
        H = self._interp(r)
        s = self.size
        H[..., np.arange(s), np.arange(s)] += modulus_power(pts, self.w)
        return H


def tau_roots(fam, rho: float, rtol: float = 1e-13, max_iter: int = 200,
              bracket: Optional[float] = None) -> np.ndarray:
    """Roots ``tau_j`` of ``lambda_j(H(r)) = rho^{2w}`` for every branch j, shape ``(B, s)``.

    Branch j (j-th smallest eigenvalue) is bracketed around the j-th largest
    free root and refined by the Illinois variant of regula falsi, which keeps
    the bracket.  Failure to bracket raises :class:`RootError`.
    """
    target = rho ** (2 * fam.w)
    B, s = fam.batch, fam.size
    tau0 = -np.sort(-fam.free_roots(rho), axis=1)
    jj = np.broadcast_to(np.arange(s), (B, s))

    def f(r):
        H = fam.matrix(r)  # (B, s, s, s)
        ev = np.linalg.eigvalsh(H)
        return np.take_along_axis(ev, jj[..., None], axis=-1)[..., 0] - target

    if fam.W is None or fam.W.is_zero:
        return tau0
    delta = np.full((B, s), bracket if bracket is not None else max(1e-3 * rho, 1.0))
    lo, hi = tau0 - delta, tau0 + delta
    flo, fhi = f(lo), f(hi)
    for _ in range(40):
        bad_lo = flo > 0
        bad_hi = fhi < 0
        if not (np.any(bad_lo) or np.any(bad_hi)):
            break
        delta = np.where(bad_lo | bad_hi, 2 * delta, delta)
        lo = np.where(bad_lo, tau0 - delta, lo)
        hi = np.where(bad_hi, tau0 + delta, hi)
        lo = np.maximum(lo, 0.0)
        flo, fhi = f(lo), f(hi)
    else:
        raise RootError("could not bracket eigenvalue branch; monotonicity in r violated")
    if np.any(flo > 0) or np.any(fhi < 0):
        raise RootError("could not bracket eigenvalue branch; monotonicity in r violated")
    side = np.zeros((B, s), dtype=int)
    x = hi
    for _ in range(max_iter):
        x = (lo * fhi - hi * flo) / (fhi - flo)
        x = np.where(np.isfinite(x), x, 0.5 * (lo + hi))
        fx = f(x)
        left = fx < 0
        # Illinois: halve the stale endpoint value after two moves on the same side
        lo = np.where(left, x, lo)
        flo = np.where(left, fx, np.where(side == -1, 0.5 * flo, flo))
        hi = np.where(left, hi, x)
        fhi = np.where(left, np.where(side == 1, 0.5 * fhi, fhi), fx)
        side = np.where(left, 1, -1)
        if np.all((np.abs(fx) <= rtol * target) | (hi - lo <= rtol * rho)):
            break
    else:
        raise RootError("root refinement did not converge")
    return x


def tau_solve(fam: RadialFamily, rho: float, **kw) -> np.ndarray:
    """Root of the branch carried by each class point (rank by modulus), shape ``(B, s)``.

    Point i of the ordered class has rank i, so it carries eigenvalue branch i.
    """
    return tau_roots(fam, rho, **kw)


def free_tau(X: np.ndarray, a: np.ndarray, Phi: np.ndarray, rho: float) -> np.ndarray:
    """Positive root of ``|X + a + tau_0 Phi| = rho`` (X orthogonal to a and Phi)."""
    X = np.atleast_2d(X)
    ap = float(np.dot(a, Phi))
    c = float(np.dot(a, a)) + np.sum(X * X, axis=1) - rho ** 2
    return -ap + np.sqrt(ap ** 2 - c)


# ---------------------------------------------------------------------------
# g-map


def in_shell_set(geom: ResonanceGeometry, cls: CongruenceClass) -> bool:
    """Whether the class meets ``{(5/6) rho_n <= |eta| <= 5 rho_n}`` (so lies in A)."""
    rn = geom.params.rho_n
    mods = np.linalg.norm(cls.points, axis=1)
    return bool(np.any((mods >= 5 * rn / 6) & (mods <= 5 * rn)))


def g_of_xi(xi, geom: ResonanceGeometry, W: Optional[Symbol], check: bool = True) -> float:
    """``g(xi)``: eigenvalue of rank ``t(xi)`` of the block of ``Upsilon(xi)`` in A, else ``|xi|^{2w}``."""
    xi = np.asarray(xi, dtype=float)
    w = geom.params.w
    cls = geom.congruence_class(xi)
    if not in_shell_set(geom, cls):
        return float(np.sum(xi * xi) ** w)
    blk = assemble_block(cls, W, w, check=check)
    ev = block_eigenvalues(blk)
    t = int(np.flatnonzero(np.all(np.abs(blk.points - xi) < 1e-7, axis=1))[0])
    return float(ev[t])


def class_g_values(cls: CongruenceClass, W: Optional[Symbol], w: float) -> np.ndarray:
    """g on every point of the ordered class (the pairing with sorted eigenvalues)."""
    blk = assemble_block(cls, W, w)
    return block_eigenvalues(blk)


def is_monotone(fam: RadialFamily, r: float, delta: float) -> bool:
    """Finite-difference monotonicity of every eigenvalue between r and r + delta."""
    rr = np.full(fam.batch, r)
    e0 = np.linalg.eigvalsh(fam.matrix(rr))
    e1 = np.linalg.eigvalsh(fam.matrix(rr + delta))
    return bool(np.all(e1 >= e0))
