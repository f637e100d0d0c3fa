"""Spectral gaps of -u'' + 2a cos(x) u from the Floquet oracle against Mathieu characteristic values."""

import argparse
from dataclasses import dataclass

import numpy as np
from scipy.special import mathieu_a, mathieu_b

from gaugeids.oracle import find_plateaus, ids_oracle_floquet
from gaugeids.problems import mathieu_potential


@dataclass
class GapConfig:
    amplitude: float = 1.0
    lam_min: float = -1.5
    lam_max: float = 6.0
    n_lambda: int = 751
    grid: int = 64


def exact_gaps(amplitude: float, n: int):
    # x = 2t maps the operator to Mathieu's equation with a = 4 lambda, q = 4 amplitude
    q = 4 * amplitude
    return [(mathieu_b(k, q) / 4, mathieu_a(k, q) / 4) for k in range(1, n + 1)]


def run(cfg: GapConfig):
    b = mathieu_potential(cfg.amplitude)
    lam = np.linspace(cfg.lam_min, cfg.lam_max, cfg.n_lambda)
    res = ids_oracle_floquet(lam, b, b.freq_set, 1.0, grid=cfg.grid)
    found = []
    for lo, hi in find_plateaus(lam, res.N):
        # inside a band the finite grid also gives short plateaus; in a gap N is k / (2 pi)
        k = res.N[np.searchsorted(lam, lo)] * 2 * np.pi
        if lo > lam[0] and abs(k - round(k)) < 1e-9:
            found.append((lo, hi))
    return found, exact_gaps(cfg.amplitude, len(found))


def main():
    p = argparse.ArgumentParser(description=__doc__)
    for name, val in vars(GapConfig()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(val), default=val)
    cfg = GapConfig(**vars(p.parse_args()))
    found, exact = run(cfg)
    print(f"{'k':>2} {'oracle gap':>24} {'Mathieu gap':>24}")
    for k, ((lo, hi), (elo, ehi)) in enumerate(zip(found, exact), start=1):
        print(f"{k:2d} [{lo:10.5f}, {hi:10.5f}] [{elo:10.5f}, {ehi:10.5f}]")


if __name__ == "__main__":
    main()
