"""Ready-made operators used by tests, scripts and the CLI."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .symbols import Frequency, FrequencySet, RadialTerm, Symbol, build_symbol


def frequency_set(generators: Sequence[Sequence], d: int) -> FrequencySet:
    """``{0} u {+-g}`` for the given generators (floats or "p/q" strings)."""
    return FrequencySet.from_generators(generators, d)


def cosine_potential(d: int, amplitudes: Sequence[float], directions: Sequence[Sequence] = None,
                     C_0: float = 4.0) -> Symbol:
    """Multiplication operator ``sum_k 2 c_k cos(<theta_k, x>)``.

    ``directions`` defaults to the coordinate vectors; every coordinate vector
    is declared in the frequency set (with zero coefficient if unused) so that
    the set spans R^d.
    """
    if directions is None:
        directions = [tuple(1 if i == k else 0 for i in range(d)) for k in range(len(amplitudes))]
    gens = [tuple(str(x) if isinstance(x, str) else x for x in g) for g in directions]
    basis = [tuple(1 if i == k else 0 for i in range(d)) for k in range(d)]
    fs = frequency_set(list(gens) + basis, d)
    coeffs = {}
    zero_tau = (0,) * d
    for c, g in zip(amplitudes, gens):
        f = Frequency.parse(g)
        for sign in (1, -1):
            target = f.array * sign
            idx = int(np.flatnonzero(np.all(np.abs(fs.array - target) < 1e-12, axis=1))[0])
            coeffs[(idx, zero_tau)] = coeffs.get((idx, zero_tau), 0) + complex(c)
    return build_symbol(fs, [RadialTerm(0.0, coeffs)], C_0, kappa=0.0)


def mathieu_potential(amplitude: float = 1.0) -> Symbol:
    """``2 a cos x`` in one dimension."""
    return cosine_potential(1, [amplitude], [(1,)])
