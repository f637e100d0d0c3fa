"""Fit the large-lambda expansion of the Mathieu IDS and compare the leading coefficient with 1/pi."""

import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gaugeids.config import load_config
from gaugeids.fitting import expansion_basis, fit_expansion
from gaugeids.oracle import ids_oracle_floquet

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class FitConfig:
    config: Path = ROOT / "configs" / "mathieu.toml"
    grid: int = 1024


def run(cfg: FitConfig):
    rc = load_config(cfg.config)
    b, lam, opts = rc.symbol(), rc.lambdas(), rc.section("fit")
    res = ids_oracle_floquet(lam, b, b.freq_set, rc.w, grid=cfg.grid)
    rho = lam ** (1 / (2 * rc.w))
    lo, hi = opts.get("window", (rho.min(), rho.max()))
    keep = (rho >= lo) & (rho <= hi)
    basis = expansion_basis(rc.d, rc.w, opts.get("iotas", [0.0]), opts.get("h_max", 1),
                            opts.get("j_max", 2), opts.get("q_max", 0))
    return fit_expansion(rho[keep], res.N[keep], basis)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    d = FitConfig()
    p.add_argument("--config", type=Path, default=d.config)
    p.add_argument("--grid", type=int, default=d.grid)
    fit = run(FitConfig(**vars(p.parse_args())))
    for (g, q), c, s in zip(fit.basis, fit.coeffs, fit.stderr):
        print(f"rho^{g:g} ln^{q} rho  {c: .6e} +- {s:.1e}")
    print(f"leading / (1/pi) - 1 = {fit.leading * np.pi - 1:.2e}  cond {fit.cond:.2e}")


if __name__ == "__main__":
    main()
