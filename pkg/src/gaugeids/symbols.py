"""Almost-periodic symbols with finite frequency sets and their calculus.

A symbol ``b(x, xi) = sum_theta bhat(theta, xi) e^{i theta x}`` is stored as a
finite list of frequencies together with a vectorised evaluator returning all
Fourier coefficients at a batch of points.  Derived symbols (products,
commutators, finite differences, cut-off multiples) are expression nodes that
evaluate their operands lazily at shifted points, so no grid is ever fixed.

Operator action on exponentials ``e_nu(x) = e^{i nu x}`` is
``op(b) e_nu = sum_theta bhat(theta, nu) e_{nu + theta}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from .smooth import cmod, japanese, radial_chi

FREQ_TOL = 1e-10


class SymbolError(ValueError):
    pass


# ---------------------------------------------------------------------------
# frequencies


def parse_rational(value) -> Tuple[float, Optional[Fraction]]:
    """Parse a coordinate given as int, float, Fraction or a ``"p/q"`` string."""
    if isinstance(value, Fraction):
        return float(value), value
    if isinstance(value, bool):
        raise SymbolError(f"invalid coordinate {value!r}")
    if isinstance(value, int):
        return float(value), Fraction(value)
    if isinstance(value, str):
        try:
            frac = Fraction(value.strip())
        except ValueError as exc:
            raise SymbolError(f"cannot parse coordinate {value!r}") from exc
        return float(frac), frac
    return float(value), None


@dataclass(frozen=True)
class Frequency:
    coords: Tuple[float, ...]
    exact: Optional[Tuple[Fraction, ...]] = None

    def __post_init__(self):
        if self.exact is not None:
            if len(self.exact) != len(self.coords):
                raise SymbolError("exact coordinates have the wrong dimension")
            if max(abs(float(q) - c) for q, c in zip(self.exact, self.coords)) > 1e-12:
                raise SymbolError("exact and float coordinates disagree")

    @classmethod
    def parse(cls, values: Sequence) -> "Frequency":
        parsed = [parse_rational(v) for v in values]
        coords = tuple(p[0] for p in parsed)
        exacts = [p[1] for p in parsed]
        exact = tuple(exacts) if all(e is not None for e in exacts) else None
        return cls(coords, exact)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def __neg__(self) -> "Frequency":
        exact = tuple(-q for q in self.exact) if self.exact is not None else None
        return Frequency(tuple(-c for c in self.coords), exact)

    def __add__(self, other: "Frequency") -> "Frequency":
        exact = None
        if self.exact is not None and other.exact is not None:
            exact = tuple(a + b for a, b in zip(self.exact, other.exact))
            return Frequency(tuple(float(q) for q in exact), exact)
        return Frequency(tuple(a + b for a, b in zip(self.coords, other.coords)), exact)

    @property
    def is_zero(self) -> bool:
        return max(abs(c) for c in self.coords) <= FREQ_TOL


def unique_points(points: np.ndarray, tol: float = FREQ_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Deduplicate rows of ``points`` within ``tol``.

    Returns ``(keep, inverse)`` where ``keep`` are indices of representatives
    (first occurrence order) and ``inverse[i]`` is the representative slot of
    row ``i``.
    """
    points = np.asarray(points, dtype=float)
    n = len(points)
    if n == 0:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
    tree = cKDTree(points)
    parent = np.arange(n)
    for i, j in sorted(tree.query_pairs(tol)):
        ri, rj = i, j
        while parent[ri] != ri:
            ri = parent[ri]
        while parent[rj] != rj:
            rj = parent[rj]
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([_find(parent, i) for i in range(n)])
    keep, inverse = np.unique(roots, return_inverse=True)
    return keep, inverse


def _find(parent: np.ndarray, i: int) -> int:
    while parent[i] != i:
        i = parent[i]
    return i


class PointIndex:
    """Nearest-point lookup with a tolerance, used to match frequency sums."""

    def __init__(self, points: np.ndarray, tol: float = FREQ_TOL):
        points = np.asarray(points, dtype=float)
        self.points = points.reshape(len(points), -1) if points.size else points.reshape(0, 0)
        self.tol = tol
        self._tree = cKDTree(self.points) if len(self.points) else None

    def lookup(self, queries: np.ndarray) -> np.ndarray:
        """Index of the matching point for each query row, or -1."""
        queries = np.atleast_2d(np.asarray(queries, dtype=float))
        if self._tree is None:
            return -np.ones(len(queries), dtype=int)
        dist, idx = self._tree.query(queries)
        idx = np.where(dist <= self.tol, idx, -1)
        return idx.astype(int)


class FrequencySet:
    """Finite, symmetric frequency set containing 0 and spanning R^d."""

    def __init__(self, elements: Sequence[Frequency], d: Optional[int] = None,
                 validate: bool = True):
        elements = list(elements)
        if d is None:
            if not elements:
                raise SymbolError("cannot infer dimension of an empty frequency set")
            d = len(elements[0].coords)
        self.d = d
        arr = np.array([e.coords for e in elements], dtype=float).reshape(len(elements), d)
        keep, _ = unique_points(arr)
        self.elements: List[Frequency] = [elements[i] for i in keep]
        self.array = arr[keep]
        if validate:
            self.validate()

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence], d: Optional[int] = None) -> "FrequencySet":
        """Symmetric closure of the given frequencies together with 0."""
        gens = [Frequency.parse(g) for g in generators]
        if d is None:
            d = len(gens[0].coords)
        zero = Frequency(tuple(0.0 for _ in range(d)), tuple(Fraction(0) for _ in range(d)))
        elems = [zero]
        for g in gens:
            elems.extend([g, -g])
        return cls(elems, d)

    def validate(self) -> None:
        if any(len(e.coords) != self.d for e in self.elements):
            raise SymbolError("frequency dimension mismatch")
        idx = PointIndex(self.array)
        if idx.lookup(np.zeros((1, self.d)))[0] < 0:
            raise SymbolError("frequency set must contain the zero frequency")
        if np.any(idx.lookup(-self.array) < 0):
            raise SymbolError("frequency set must be symmetric under theta -> -theta")
        if np.linalg.matrix_rank(self.array, tol=1e-10) < self.d:
            raise SymbolError("frequencies must span R^d (rank-deficient frequency set)")

    @property
    def has_exact(self) -> bool:
        return all(e.exact is not None for e in self.elements)

    @property
    def nonzero(self) -> List[Frequency]:
        return [e for e in self.elements if not e.is_zero]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


# ---------------------------------------------------------------------------
# symbols


class Symbol:
    """Base class: a finite list of frequencies and a batched coefficient evaluator.

    Subclasses implement :meth:`_coeffs`, which maps points of shape ``(N, d)``
    (real or complex) to coefficients of shape ``(n_freq, N)``.  ``freqs`` lists
    the frequencies that may carry a nonzero coefficient; every other
    frequency has coefficient exactly zero.
    """

    def __init__(self, d: int, freqs: np.ndarray, order: float = 0.0,
                 self_adjoint: bool = False, freq_set: Optional[FrequencySet] = None):
        self.d = d
        self.freqs = np.asarray(freqs, dtype=float).reshape(-1, d)
        self.order = float(order)
        self.self_adjoint = self_adjoint
        self.freq_set = freq_set
        self._index = PointIndex(self.freqs)

    # -- evaluation ---------------------------------------------------------
    def coeffs(self, xi) -> np.ndarray:
        """All coefficients at the points ``xi`` (shape ``(..., d)``).

        Returns an array of shape ``(n_freq, ...)``.
        """
        xi = np.asarray(xi)
        batch = xi.shape[:-1]
        flat = xi.reshape(-1, self.d)
        if len(self.freqs) == 0:
            return np.zeros((0,) + batch, dtype=complex)
        out = self._coeffs(flat)
        return out.reshape((len(self.freqs),) + batch)

    def _coeffs(self, xi: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def index_of(self, theta) -> int:
        return int(self._index.lookup(np.asarray(theta, dtype=float).reshape(1, -1))[0])

    def fourier_coeff(self, theta, xi) -> complex:
        """``bhat(theta, xi)``; zero when theta is not among the frequencies."""
        if isinstance(theta, Frequency):
            theta = theta.array
        i = self.index_of(theta)
        if i < 0:
            return 0j
        xi = np.asarray(xi)
        return complex(self.coeffs(xi.reshape(1, self.d))[i, 0])

    @property
    def is_zero(self) -> bool:
        """True when the symbol has no frequencies at all (structurally zero)."""
        return len(self.freqs) == 0

    # -- algebra ------------------------------------------------------------
    def __add__(self, other: "Symbol") -> "Symbol":
        return linear_combination([(1.0, self), (1.0, other)])

    def __sub__(self, other: "Symbol") -> "Symbol":
        return linear_combination([(1.0, self), (-1.0, other)])

    def __mul__(self, c) -> "Symbol":
        return linear_combination([(c, self)])

    __rmul__ = __mul__

    def __neg__(self) -> "Symbol":
        return linear_combination([(-1.0, self)])

    def __matmul__(self, other: "Symbol") -> "Symbol":
        return symbol_product(self, other)


class ZeroSymbol(Symbol):
    def __init__(self, d: int, freq_set: Optional[FrequencySet] = None):
        super().__init__(d, np.zeros((0, d)), 0.0, True, freq_set)

    def _coeffs(self, xi):
        return np.zeros((0, len(xi)), dtype=complex)


@dataclass
class RadialTerm:
    """One homogeneous layer ``chi(|xi|)^iota sum_tau c(theta, tau) (xi/|xi|)^tau``.

    ``coeffs`` maps ``(theta_index, tau)`` to a complex number, where
    ``theta_index`` refers to the enclosing frequency set.
    """

    iota: float
    coeffs: Dict[Tuple[int, Tuple[int, ...]], complex] = field(default_factory=dict)


class RadialSymbol(Symbol):
    """Symbol given in the radial classical form above ``C_0``."""

    def __init__(self, freq_set: FrequencySet, terms: Sequence[RadialTerm], C_0: float,
                 kappa: Optional[float] = None, self_adjoint: bool = True):
        d = freq_set.d
        used = sorted({ti for t in terms for (ti, _), c in t.coeffs.items() if c != 0})
        for t in terms:
            if kappa is not None and t.iota > kappa + 1e-12:
                raise SymbolError(f"radial exponent iota={t.iota} exceeds kappa={kappa}")
            for (ti, tau), _ in t.coeffs.items():
                if not 0 <= ti < len(freq_set):
                    raise SymbolError(f"radial term refers to unknown frequency {ti}")
                if len(tau) != d or min(tau, default=0) < 0:
                    raise SymbolError(f"invalid multi-index {tau}")
        order = max((t.iota for t in terms), default=0.0)
        super().__init__(d, freq_set.array[used], order, self_adjoint, freq_set)
        self.C_0 = float(C_0)
        self.terms = list(terms)
        slot = {ti: k for k, ti in enumerate(used)}
        self._layers = []
        for t in terms:
            taus = sorted({tau for (_, tau) in t.coeffs})
            if not taus:
                continue
            mat = np.zeros((len(used), len(taus)), dtype=complex)
            for (ti, tau), c in t.coeffs.items():
                if c != 0:
                    mat[slot[ti], taus.index(tau)] += c
            self._layers.append((float(t.iota), np.array(taus, dtype=int).reshape(-1, d), mat))

    def _coeffs(self, xi):
        r = cmod(xi)
        out = np.zeros((len(self.freqs), len(xi)), dtype=complex)
        safe_r = np.where(r == 0, 1.0, r)
        eta = xi / safe_r[:, None]
        chi = radial_chi(r, self.C_0)
        for iota, taus, mat in self._layers:
            if iota == 0:
                factor = np.ones(len(xi), dtype=complex)
            else:
                nz = chi != 0
                factor = np.zeros(len(xi), dtype=complex)
                factor[nz] = np.power(chi[nz].astype(complex), iota)
            mono = np.ones((len(taus), len(xi)), dtype=complex)
            for k in range(self.d):
                powers = taus[:, k]
                if np.any(powers):
                    mono *= eta[None, :, k] ** powers[:, None]
            if np.any(taus.sum(axis=1) > 0):
                mono[:, r == 0] = np.where(taus.sum(axis=1) > 0, 0.0, 1.0)[:, None]
            out += (mat @ mono) * factor[None, :]
        return out


class FreeSymbol(Symbol):
    """The symbol ``|xi|^{2w}`` of ``(-Delta)^w`` (frequency 0 only)."""

    def __init__(self, d: int, w: float):
        super().__init__(d, np.zeros((1, d)), 2 * w, True)
        self.w = float(w)

    def _coeffs(self, xi):
        r2 = np.sum(xi * xi, axis=-1)
        if np.iscomplexobj(r2):
            return np.power(r2, self.w)[None, :]
        return np.power(r2, self.w)[None, :].astype(complex)


class LinearCombination(Symbol):
    def __init__(self, parts: Sequence[Tuple[complex, Symbol]]):
        d = parts[0][1].d
        allf = np.concatenate([p.freqs for _, p in parts]) if parts else np.zeros((0, d))
        keep, inverse = unique_points(allf)
        sa = all(p.self_adjoint and np.isreal(c) for c, p in parts)
        order = max((p.order for _, p in parts), default=0.0)
        super().__init__(d, allf[keep], order, sa, _common_set(p for _, p in parts))
        self.parts = list(parts)
        self._slots = []
        start = 0
        for _, p in parts:
            n = len(p.freqs)
            self._slots.append(inverse[start:start + n])
            start += n

    def _coeffs(self, xi):
        out = np.zeros((len(self.freqs), len(xi)), dtype=complex)
        for (c, p), slots in zip(self.parts, self._slots):
            if len(slots):
                out[slots] += c * p.coeffs(xi)
        return out


def linear_combination(parts: Iterable[Tuple[complex, Symbol]], d: Optional[int] = None) -> Symbol:
    """Sum ``sum_i c_i s_i``; vanishing parts are dropped, all-zero input gives a zero symbol."""
    parts = list(parts)
    if d is None:
        if not parts:
            raise SymbolError("dimension required for an empty linear combination")
        d = parts[0][1].d
    parts = [(c, p) for c, p in parts if c != 0 and not p.is_zero]
    if not parts:
        return ZeroSymbol(d)
    return LinearCombination(parts)


def _common_set(symbols: Iterable[Symbol]) -> Optional[FrequencySet]:
    for s in symbols:
        if s.freq_set is not None:
            return s.freq_set
    return None


def _sum_table(left: np.ndarray, right: np.ndarray):
    """Frequencies of all pairwise sums and the slot of each pair."""
    sums = (left[:, None, :] + right[None, :, :]).reshape(-1, left.shape[1])
    keep, inverse = unique_points(sums)
    return sums[keep], inverse.reshape(len(left), len(right))


class Product(Symbol):
    """Composition symbol ``(b o g)^(chi, xi) = sum_{theta+phi=chi} bhat(theta, xi+phi) ghat(phi, xi)``."""

    def __init__(self, b: Symbol, g: Symbol):
        freqs, self._slot = _sum_table(b.freqs, g.freqs)
        super().__init__(b.d, freqs, b.order + g.order, False, _common_set([b, g]))
        self.b, self.g = b, g

    def _coeffs(self, xi):
        out = np.zeros((len(self.freqs), len(xi)), dtype=complex)
        G = self.g.coeffs(xi)
        for k, phi in enumerate(self.g.freqs):
            out[self._slot[:, k]] += self.b.coeffs(xi + phi) * G[k][None, :]
        return out


class Commutator(Symbol):
    """``ad(b, g) = i (b o g - g o b)`` evaluated through finite differences.

    ``ad(b,g)^(chi, xi) = i sum_theta [(nabla_{chi-theta} b)^(theta, xi) ghat(chi-theta, xi)
    - bhat(theta, xi) (nabla_theta g)^(chi-theta, xi)]``.
    """

    def __init__(self, b: Symbol, g: Symbol):
        freqs, self._slot = _sum_table(b.freqs, g.freqs)
        super().__init__(b.d, freqs, b.order + g.order - 1, b.self_adjoint and g.self_adjoint,
                         _common_set([b, g]))
        self.b, self.g = b, g

    def _coeffs(self, xi):
        out = np.zeros((len(self.freqs), len(xi)), dtype=complex)
        B0 = self.b.coeffs(xi)
        G0 = self.g.coeffs(xi)
        # first half: (b(theta, xi+phi) - b(theta, xi)) g(phi, xi)
        for k, phi in enumerate(self.g.freqs):
            dB = self.b.coeffs(xi + phi) - B0
            out[self._slot[:, k]] += dB * G0[k][None, :]
        # second half: - b(theta, xi) (g(phi, xi+theta) - g(phi, xi))
        for i, theta in enumerate(self.b.freqs):
            dG = self.g.coeffs(xi + theta) - G0
            out[self._slot[i, :]] -= B0[i][None, :] * dG
        return 1j * out


class Nabla(Symbol):
    """``(nabla_theta b)^(phi, xi) = bhat(phi, xi+theta) - bhat(phi, xi)``."""

    def __init__(self, b: Symbol, theta):
        super().__init__(b.d, b.freqs, b.order - 1, False, b.freq_set)
        self.b = b
        self.theta = np.asarray(theta, dtype=float)

    def _coeffs(self, xi):
        return self.b.coeffs(xi + self.theta) - self.b.coeffs(xi)


class Multiplied(Symbol):
    """Coefficient-wise multiple ``bhat(theta, xi) * m(theta, xi)``.

    ``multiplier(freqs, xi)`` returns an array of shape ``(n_freq, N)``.  This
    node realises cut-off products and division by nonvanishing factors.
    ``keep`` optionally restricts the frequency list (entries dropped there
    are structurally zero).
    """

    def __init__(self, b: Symbol, multiplier: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 order_shift: float = 0.0, self_adjoint: bool = False,
                 keep: Optional[np.ndarray] = None, label: str = ""):
        sel = np.arange(len(b.freqs)) if keep is None else np.flatnonzero(keep)
        super().__init__(b.d, b.freqs[sel], b.order + order_shift, self_adjoint, b.freq_set)
        self.b = b
        self.sel = sel
        self.multiplier = multiplier
        self.label = label

    def _coeffs(self, xi):
        B = self.b.coeffs(xi)[self.sel]
        return B * self.multiplier(self.freqs, xi)


# ---------------------------------------------------------------------------
# public operations


def zero_symbol(d: int, freq_set: Optional[FrequencySet] = None) -> Symbol:
    return ZeroSymbol(d, freq_set)


def free_symbol(d: int, w: float) -> Symbol:
    return FreeSymbol(d, w)


def build_symbol(freq_set: FrequencySet, terms: Sequence[RadialTerm], C_0: float,
                 kappa: Optional[float] = None, self_adjoint: bool = True) -> Symbol:
    """Radial classical symbol; an empty term list yields the zero symbol."""
    freq_set.validate()
    if not any(c != 0 for t in terms for c in t.coeffs.values()):
        return ZeroSymbol(freq_set.d, freq_set)
    return RadialSymbol(freq_set, terms, C_0, kappa, self_adjoint)


def fourier_coeff(b: Symbol, theta, xi) -> complex:
    return b.fourier_coeff(theta, xi)


def apply_to_exponential(b: Symbol, nu) -> Dict[Tuple[float, ...], complex]:
    """``op(b) e_nu`` as a map ``nu + theta -> bhat(theta, nu)`` (nonzero entries only)."""
    nu = np.asarray(nu, dtype=float)
    if b.is_zero:
        return {}
    c = b.coeffs(nu.reshape(1, -1))[:, 0]
    out = {}
    for theta, amp in zip(b.freqs, c):
        if amp != 0:
            out[tuple(nu + theta)] = complex(amp)
    return out


def apply_to_vector(b: Symbol, vec: Mapping[Tuple[float, ...], complex]) -> Dict[Tuple[float, ...], complex]:
    """Apply ``op(b)`` to a finite combination of exponentials.

    Points that coincide within the frequency tolerance are merged.
    """
    pts, amps = [], []
    for nu, a in vec.items():
        for p, v in apply_to_exponential(b, nu).items():
            pts.append(p)
            amps.append(a * v)
    if not pts:
        return {}
    pts_arr = np.array(pts)
    keep, inverse = unique_points(pts_arr)
    total = np.zeros(len(keep), dtype=complex)
    np.add.at(total, inverse, amps)
    return {tuple(pts_arr[k]): complex(t) for k, t in zip(keep, total)}


def symbol_product(b: Symbol, g: Symbol) -> Symbol:
    if b.is_zero or g.is_zero:
        return ZeroSymbol(b.d)
    return Product(b, g)


def symbol_commutator(b: Symbol, g: Symbol) -> Symbol:
    if b.is_zero or g.is_zero:
        return ZeroSymbol(b.d)
    return Commutator(b, g)


def multiple_commutator(a: Symbol, psis: Sequence[Symbol]) -> Symbol:
    """``ad(a; psi_1, ..., psi_N)`` by left fold: ``ad(ad(a; psi_1..psi_{N-1}); psi_N)``."""
    out = a
    for p in psis:
        out = symbol_commutator(out, p)
    return out


def nabla_theta(b: Symbol, theta) -> Symbol:
    if isinstance(theta, Frequency):
        theta = theta.array
    if b.is_zero:
        return ZeroSymbol(b.d)
    return Nabla(b, theta)


def norm_grid(d: int, rho_n: float, n_radii: int = 64) -> np.ndarray:
    """Log-radial sample grid: radii in [1, 32 rho_n] times 2d+2 directions."""
    radii = np.geomspace(1.0, 32.0 * rho_n, n_radii)
    dirs = [np.eye(d)[i] * s for i in range(d) for s in (1.0, -1.0)]
    diag = np.ones(d) / np.sqrt(d)
    dirs += [diag, -diag]
    dirs = np.array(dirs)
    return (radii[:, None, None] * dirs[None, :, :]).reshape(-1, d)


MAX_DERIVATIVE = 3


def _derivative(b: Symbol, xi: np.ndarray, s: Tuple[int, ...]) -> np.ndarray:
    """``D^s bhat(., xi)`` by nested central differences with ``h = 1e-4 <xi>``."""
    h = 1e-4 * japanese(xi)
    steps = [k for k, n in enumerate(s) for _ in range(n)]

    def rec(points, remaining):
        if not remaining:
            return b.coeffs(points)
        k = remaining[0]
        e = np.zeros(b.d)
        e[k] = 1.0
        shift = h[:, None] * e[None, :]
        return (rec(points + shift, remaining[1:]) - rec(points - shift, remaining[1:])) / (2 * h)

    return rec(xi, steps)


def symbol_norm(b: Symbol, alpha: float, l: float, s: int, *, beta: float = 1.0,
                rho_n: float = 1.0, n_radii: int = 64) -> float:
    """Grid estimate (a lower bound) of the weighted symbol norm.

    ``max_{|s'| <= s} sum_theta <theta>^l sup_xi <xi>^{(-alpha+|s'|) beta} |D^{s'} bhat(theta, xi)|``.
    """
    if s > MAX_DERIVATIVE:
        raise SymbolError(f"derivative order {s} exceeds supported maximum {MAX_DERIVATIVE}")
    if b.is_zero:
        return 0.0
    xi = norm_grid(b.d, rho_n, n_radii)
    weight_theta = japanese(b.freqs) ** l
    best = 0.0
    for order in range(s + 1):
        for multi in _multi_indices(b.d, order):
            D = np.abs(_derivative(b, xi, multi))
            wxi = japanese(xi) ** ((-alpha + order) * beta)
            sup = np.max(D * wxi[None, :], axis=1)
            best = max(best, float(np.sum(weight_theta * sup)))
    return best


def _multi_indices(d: int, order: int):
    for combo in itertools.combinations_with_replacement(range(d), order):
        s = [0] * d
        for k in combo:
            s[k] += 1
        yield tuple(s)


def check_symmetry(b: Symbol, samples: int = 200, *, scale: float = 50.0, seed: int = 0,
                   xi: Optional[np.ndarray] = None) -> float:
    """Max of ``|bhat(theta, xi) - conj(bhat(-theta, xi+theta))|`` over random samples."""
    if b.is_zero:
        return 0.0
    rng = np.random.default_rng(seed)
    if xi is None:
        xi = rng.normal(size=(samples, b.d))
        xi *= (scale * rng.uniform(0.2, 1.0, size=samples) / np.linalg.norm(xi, axis=1))[:, None]
    C = b.coeffs(xi)
    neg = b._index.lookup(-b.freqs)
    worst = 0.0
    for i, theta in enumerate(b.freqs):
        if neg[i] < 0:
            other = np.zeros(len(xi))
        else:
            other = b.coeffs(xi + theta)[neg[i]]
        worst = max(worst, float(np.max(np.abs(C[i] - np.conj(other)))))
    return worst
