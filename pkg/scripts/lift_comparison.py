"""Gauge-transform IDS against the Floquet oracle for a configured operator, over node and grid counts."""

import argparse
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List

import numpy as np

from gaugeids.config import load_config
from gaugeids.gauge import gauge_recursion
from gaugeids.geometry import ResonanceGeometry, theta_closure
from gaugeids.ids import GaugeIdsEngine, free_ids, ids_gauge
from gaugeids.oracle import ids_oracle_floquet

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class LiftConfig:
    config: Path = ROOT / "configs" / "lift_d2.toml"
    nodes: List[int] = field(default_factory=lambda: [2 ** 10, 2 ** 12, 2 ** 14])
    grids: List[int] = field(default_factory=lambda: [8, 16])


def run(cfg: LiftConfig):
    rc = load_config(cfg.config)
    sp, b, lam = rc.scale_params(), rc.symbol(), rc.lambdas()
    gr = gauge_recursion(b, sp)
    geom = ResonanceGeometry(theta_closure(b.freq_set, sp.k_tilde), sp)
    print("free", " ".join(f"{x:.6f}" for x in free_ids(lam, rc.d, rc.w)))
    for n in cfg.nodes:
        t = time.perf_counter()
        res = ids_gauge(lam, geom, gr.w, engine=GaugeIdsEngine(geom, gr.w, n).prepare())
        print(f"gauge nodes={n:6d}", " ".join(f"{x:.6f}+-{e:.1e}" for x, e in zip(res.N, res.err)),
              f"({time.perf_counter() - t:.1f} s)")
    for g in cfg.grids:
        t = time.perf_counter()
        res = ids_oracle_floquet(lam, b, b.freq_set, rc.w, grid=g)
        print(f"oracle grid={g:4d}", " ".join(f"{x:.6f}+-{e:.1e}" for x, e in zip(res.N, res.err)),
              f"({time.perf_counter() - t:.1f} s)")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    d = LiftConfig()
    p.add_argument("--config", type=Path, default=d.config)
    p.add_argument("--nodes", type=int, nargs="+", default=d.nodes)
    p.add_argument("--grids", type=int, nargs="+", default=d.grids)
    run(LiftConfig(**vars(p.parse_args())))


if __name__ == "__main__":
    main()
