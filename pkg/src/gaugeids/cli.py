"""Command line interface: ``gaugeids {validate,symbols,gauge,regions,ids,fit}``.

Exit codes: 0 ok, 2 configuration or usage error, 3 precondition failure,
4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .blocks import BlockError, RootError
from .config import ConfigError, RunConfig, load_config
from .contour import QuadratureError
from .fitting import FitError, expansion_basis, fit_expansion
from .gauge import (GaugeError, commutator_residuals, gauge_recursion, shell_probes, symmetry_defects,
                    w_support_check)
from .geometry import GeometryError, ResonanceGeometry, check_condition_A, geometry_constants, theta_closure
from .ids import QMC_SEED, GaugeIdsEngine, ids_gauge
from .oracle import OracleError, ids_oracle_floquet
from .params import ParameterError
from .symbols import SymbolError, check_symmetry

log = logging.getLogger("gaugeids")

EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 2, 3, 4


class UsageError(ValueError):
    pass


def fmt(x) -> str:
    """Shortest round-trip representation; keeps CSV output byte-stable."""
    return repr(float(x))


def write_csv(path: Path, header: List[str], rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow(row)
    text = buf.getvalue()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return text


def _params(cfg: RunConfig, args):
    return cfg.scale_params(k_tilde=getattr(args, "ktilde", None))


# ---------------------------------------------------------------------------
# commands


def cmd_validate(cfg: RunConfig, args) -> int:
    checks: List[tuple] = []
    advisory: List[tuple] = []
    sp = None
    try:
        sp = _params(cfg, args)
        checks.append(("parameter_chain", True, f"beta={sp.beta} alphas={list(sp.alphas)}"))
    except ParameterError as exc:
        checks.append(("parameter_chain", False, str(exc)))
    fs = None
    try:
        fs = cfg.frequency_set()
        cfg.symbol()
        checks.append(("frequency_set", True, f"{len(fs)} frequencies"))
    except SymbolError as exc:
        checks.append(("frequency_set", False, str(exc)))
    opts = cfg.section("validate")
    if fs is not None and opts.get("condition_a", False):
        try:
            res = check_condition_A(fs, int(opts.get("k_max", 2)))
            checks.append(("condition_A", res.passed,
                           f"{res.checked} tuples" if res.passed else f"witness {res.witness}"))
        except GeometryError as exc:
            checks.append(("condition_A", False, str(exc)))
    if fs is not None and sp is not None:
        theta_k = theta_closure(fs, sp.k_tilde)
        geom = ResonanceGeometry(theta_k, sp)
        xi = shell_probes(sp, int(opts.get("samples", 2000)), 0, 2 / 3, 6.0)
        bad = int(np.sum(geom.classify_region(xi) < 0))
        checks.append(("region_partition", bad == 0, f"{bad} of {len(xi)} shell points not in exactly one region"))
        # asymptotic size conditions; informative at desk-scale rho_n
        c = geometry_constants(theta_k, geom.subspaces, sp.rho_n, sp.k)
        advisory.append(("geometry_s", bool(c["s_ok"]), f"s={c['s']:.6g} vacuous={c['s_vacuous']}"))
        advisory.append(("geometry_r", bool(c["r_ok"]), f"r={c['r']:.6g}"))
        advisory.append(("geometry_card", bool(c["card_ok"]), f"card={c['card']}"))
    ok = all(p for _, p, _ in checks)
    rows = [(n, "pass" if p else "FAIL", d) for n, p, d in checks]
    rows += [(n, "pass" if p else "advisory", d) for n, p, d in advisory]
    text = write_csv(args.out / "validate.csv", ["check", "passed", "detail"], rows)
    sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_PRECONDITION


def cmd_symbols(cfg: RunConfig, args) -> int:
    sp = _params(cfg, args)
    b = cfg.symbol()
    opts = cfg.section("symbols")
    n = int(opts.get("samples", 200))
    seed = int(opts.get("seed", args.seed if args.seed is not None else 0))
    xi = shell_probes(sp, n, seed, 1 / 3, 8.0)
    C = np.abs(b.coeffs(xi)) if not b.is_zero else np.zeros((0, n))
    defect = check_symmetry(b, samples=n, seed=seed) if not b.is_zero else 0.0
    rows = [tuple(fmt(x) for x in theta) + (fmt(C[k].max()),) for k, theta in enumerate(b.freqs)]
    header = [f"theta_{i + 1}" for i in range(cfg.d)] + ["max_abs_coeff"]
    text = write_csv(args.out / "symbols.csv", header, rows)
    sys.stdout.write(text)
    sys.stdout.write(f"# symmetry defect {float(np.max(defect)) if np.size(defect) else 0.0:.3e}\n")
    return EXIT_OK


def cmd_gauge(cfg: RunConfig, args) -> int:
    if args.ktilde is not None and args.ktilde < 1:
        raise UsageError("--ktilde must be at least 1")
    sp = _params(cfg, args)
    b = cfg.symbol()
    opts = cfg.section("gauge")
    seed = int(opts.get("seed", args.seed if args.seed is not None else 0))
    gr = gauge_recursion(b, sp)
    probes = shell_probes(sp, int(opts.get("probes", 50)), seed)
    res = commutator_residuals(gr, probes)
    sym = symmetry_defects(gr, samples=int(opts.get("samples", 100)), seed=seed)
    geom = ResonanceGeometry(theta_closure(b.freq_set, sp.k_tilde), sp)
    support = w_support_check(gr, geom, int(opts.get("samples", 100)), seed)
    rows = [("residual", f"level_{l + 1}", fmt(r)) for l, r in enumerate(res)]
    rows += [("symmetry", k, fmt(v)) for k, v in sym.items()]
    rows.append(("support", "w", fmt(support)))
    text = write_csv(args.out / "gauge.csv", ["kind", "name", "value"], rows)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_regions(cfg: RunConfig, args) -> int:
    sp = _params(cfg, args)
    fs = cfg.frequency_set()
    opts = cfg.section("regions")
    seed = int(opts.get("seed", args.seed if args.seed is not None else 0))
    geom = ResonanceGeometry(theta_closure(fs, sp.k_tilde), sp, class_cap=int(opts.get("class_cap", 20000)))
    xi = shell_probes(sp, int(opts.get("samples", 10000)), seed, 2 / 3, 6.0)
    labels = geom.classify_region(xi)
    counts = np.bincount(labels[labels >= 0], minlength=len(geom.subspaces))
    rows = [(i, V.dim, int(counts[i])) for i, V in enumerate(geom.subspaces)]
    rows.append(("unclassified", "", int(np.sum(labels < 0))))
    text = write_csv(args.out / "regions.csv", ["subspace", "dim", "count"], rows)
    sys.stdout.write(text)
    return EXIT_OK if np.all(labels >= 0) else EXIT_PRECONDITION


def run_ids(cfg: RunConfig, seed: int, grid: Optional[int] = None, threads: int = 1,
            ktilde: Optional[int] = None) -> tuple:
    """Both engines as requested by ``[ids] engine``; returns ``(header, rows)``."""
    sp = cfg.scale_params(k_tilde=ktilde)
    b = cfg.symbol()
    lam = cfg.lambdas()
    opts = cfg.section("ids")
    engine = opts.get("engine", "gauge")
    if engine not in ("gauge", "oracle", "both"):
        raise ConfigError(f"[ids] engine must be gauge, oracle or both, got {engine!r}")
    if np.any(np.diff(lam) < 0):
        raise ValueError("lambda grid must be ascending")
    results = []
    if engine in ("gauge", "both"):
        W = None if b.is_zero else gauge_recursion(b, sp).w
        geom = ResonanceGeometry(theta_closure(b.freq_set, sp.k_tilde), sp)
        eng = GaugeIdsEngine(geom, W, int(opts.get("nodes", 2 ** 14)), seed).prepare()
        results.append(ids_gauge(lam, geom, W, engine=eng))
    if engine in ("oracle", "both"):
        g = grid if grid is not None else int(opts.get("grid", 64 if cfg.d == 1 else 16))
        trunc = opts.get("truncation")
        results.append(ids_oracle_floquet(lam, None if b.is_zero else b, b.freq_set, cfg.w, grid=g,
                                          truncation=trunc, threads=threads))
    header = ["lambda", "N", "method", "err_estimate"]
    rows = [[fmt(l), fmt(n), m, fmt(e)] for r in results for l, n, m, e in r.rows()]
    if len(results) == 2:
        header.append("discrepancy")
        disc = np.abs(results[0].N - results[1].N)
        rows = [row + [fmt(disc[i % len(lam)])] for i, row in enumerate(rows)]
    return header, rows


def cmd_ids(cfg: RunConfig, args) -> int:
    seed = args.seed if args.seed is not None else int(cfg.section("ids").get("seed", QMC_SEED))
    header, rows = run_ids(cfg, seed, args.grid, args.threads, args.ktilde)
    text = write_csv(args.out / "ids.csv", header, rows)
    sys.stdout.write(text)
    return EXIT_OK


def read_ids_csv(path) -> Dict[str, tuple]:
    """``method -> (lambda, N)`` from an ids CSV."""
    out: Dict[str, list] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            lam, N = out.setdefault(row["method"], ([], []))
            lam.append(float(row["lambda"]))
            N.append(float(row["N"]))
    return {k: (np.array(v[0]), np.array(v[1])) for k, v in out.items()}


def cmd_fit(cfg: RunConfig, args) -> int:
    opts = cfg.section("fit")
    path = args.input or opts.get("input")
    if path is None:
        raise UsageError("fit needs an ids CSV (positional argument or [fit] input)")
    data = read_ids_csv(path)
    basis = expansion_basis(cfg.d, cfg.w, opts.get("iotas", [0.0]), int(opts.get("h_max", 1)),
                            int(opts.get("j_max", 2)), int(opts.get("q_max", 0)))
    out = {}
    for method, (lam, N) in sorted(data.items()):
        rho = lam ** (1 / (2 * cfg.w))
        if "window" in opts:
            lo, hi = opts["window"]
            if lo < rho.min() - 1e-12 or hi > rho.max() + 1e-12:
                raise FitError(f"fit window [{lo}, {hi}] outside data range [{rho.min()}, {rho.max()}]")
            keep = (rho >= lo) & (rho <= hi)
            rho, N = rho[keep], N[keep]
        fit = fit_expansion(rho, N, basis, max_cond=float(opts.get("max_cond", 1e12)))
        out[method] = fit.to_json()
    text = json.dumps(out, indent=2, sort_keys=True) + "\n"
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "fit.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "symbols": cmd_symbols, "gauge": cmd_gauge,
            "regions": cmd_regions, "ids": cmd_ids, "fit": cmd_fit}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaugeids", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("input", nargs="?", help="ids CSV for the fit command")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--out", type=Path, default=Path("out"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--grid", type=int, default=None, help="quasi-momentum grid per dimension")
    p.add_argument("--ktilde", type=int, default=None, help="gauge depth")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        if args.ktilde is not None and args.ktilde < 1:
            raise UsageError("--ktilde must be at least 1")
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, UsageError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except (RootError, QuadratureError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except (ParameterError, OracleError, GeometryError, FitError, SymbolError, GaugeError, BlockError,
            ValueError) as exc:
        sys.stderr.write(f"precondition failed: {exc}\n")
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
