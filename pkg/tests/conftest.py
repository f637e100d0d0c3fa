from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from gaugeids.blocks import RadialFamily
from gaugeids.config import load_config
from gaugeids.gauge import gauge_recursion
from gaugeids.geometry import ResonanceGeometry, theta_closure
from gaugeids.params import ScaleParams
from gaugeids.problems import cosine_potential
from gaugeids.symbols import FrequencySet, RadialTerm, build_symbol

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

# criterion number -> (name, passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail}")


@pytest.fixture(scope="session")
def configs_dir():
    return CONFIGS


@pytest.fixture(scope="session")
def lift_config():
    return load_config(CONFIGS / "lift_d2.toml")


@pytest.fixture(scope="session")
def lift_setup(lift_config):
    """Scale parameters, symbol, gauge result and geometry of the d=2 cos(x_1) lift."""
    sp = lift_config.scale_params()
    b = lift_config.symbol()
    gr = gauge_recursion(b, sp)
    geom = ResonanceGeometry(theta_closure(b.freq_set, sp.k_tilde), sp)
    return sp, b, gr, geom


@pytest.fixture(scope="session")
def toy_gauge():
    """``2 cos x_1`` in d=2 at rho_n = 200 with two gauge levels."""
    b = cosine_potential(2, [1.0])
    sp = ScaleParams(d=2, w=1.0, rho_n=200.0, k_tilde=2)
    return sp, b, gauge_recursion(b, sp)


def shell_points(n, d, lo, hi, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, d))
    x /= np.linalg.norm(x, axis=1)[:, None]
    return x * rng.uniform(lo, hi, n)[:, None]


def random_family(rng, s, w, amplitude=2.0):
    """A block of s points on a line in the e_1 direction, coupled by random Hermitian Fourier modes."""
    gens = [(k, 0) for k in range(1, max(s, 2))] + [(0, 1)]
    fs = FrequencySet.from_generators(gens, 2)
    coeffs = {}
    for k in range(1, s):
        c = amplitude * complex(rng.normal(), rng.normal())
        for sign, val in ((1, c), (-1, np.conj(c))):
            idx = int(np.flatnonzero(np.all(np.abs(fs.array - (sign * k, 0)) < 1e-12, axis=1))[0])
            coeffs[(idx, (0, 0))] = val
    W = build_symbol(fs, [RadialTerm(0.0, coeffs)], 4.0)
    X = np.zeros((1, s, 2))
    X[0, :, 0] = np.sort(rng.choice(np.arange(-6, 7), s, replace=False))
    a = np.array([0.0, rng.uniform(-3, 3)])
    return RadialFamily(X, a, [0.0, 1.0], w, W)
