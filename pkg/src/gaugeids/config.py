"""TOML run configuration.

Example::

    [operator]
    d = 2
    w = 1.0
    frequencies = [["1", "0"], ["0", "1"]]   # generators; 0 and -theta are added

    [[operator.cosines]]                      # 2 c cos(<theta, x>)
    direction = ["1", "0"]
    amplitude = 0.5

    [[operator.terms]]                        # general radial layer
    iota = 0.0
    coeffs = [{theta = ["1", "0"], tau = [0, 0], re = 0.5, im = 0.0}]

    [params]
    rho_n = 16.0

    [ids]
    lambdas = [900.0, 1024.0]
    engine = "both"

Coordinates are numbers or ``"p/q"`` strings; only the latter (and integers)
count as exact.  Unknown keys are rejected.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .params import ScaleParams
from .symbols import Frequency, FrequencySet, RadialTerm, Symbol, build_symbol


class ConfigError(ValueError):
    pass


_SCHEMA: Dict[str, Any] = {
    "operator": {"d", "w", "kappa", "C_0", "frequencies", "cosines", "terms"},
    "params": {"beta", "alphas", "theta_upper", "sigma", "rho_n", "R_0", "k", "k_tilde", "M"},
    "validate": {"condition_a", "k_max", "samples"},
    "symbols": {"samples", "seed"},
    "gauge": {"probes", "samples", "seed"},
    "regions": {"samples", "seed", "class_cap"},
    "ids": {"lambdas", "lambda_min", "lambda_max", "n_lambda", "engine", "nodes", "seed", "grid",
            "truncation"},
    "fit": {"input", "h_max", "j_max", "q_max", "iotas", "window", "max_cond"},
    "output": {"dir"},
}
_COSINE_KEYS = {"direction", "amplitude"}
_TERM_KEYS = {"iota", "coeffs"}
_COEFF_KEYS = {"theta", "tau", "re", "im"}


def _check_keys(table: Dict, allowed, where: str) -> None:
    unknown = sorted(set(table) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in [{where}]")


@dataclass
class RunConfig:
    d: int
    w: float
    kappa: float = 0.0
    C_0: float = 4.0
    frequencies: List[List[Any]] = field(default_factory=list)
    cosines: List[Dict] = field(default_factory=list)
    terms: List[Dict] = field(default_factory=list)
    params: Dict[str, Any] = field(default_factory=dict)
    sections: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def section(self, name: str) -> Dict[str, Any]:
        return self.sections.get(name, {})

    def scale_params(self, **overrides) -> ScaleParams:
        kw = dict(self.params)
        if "alphas" in kw:
            kw["alphas"] = tuple(kw["alphas"])
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return ScaleParams(d=self.d, w=self.w, kappa=self.kappa, C_0=self.C_0, **kw)

    def frequency_set(self) -> FrequencySet:
        gens = list(self.frequencies) + [c["direction"] for c in self.cosines]
        for t in self.terms:
            gens.extend(c["theta"] for c in t.get("coeffs", []))
        gens = [g for g in gens if any(Frequency.parse(g).coords)]
        if not gens:
            gens = [tuple(1 if i == k else 0 for i in range(self.d)) for k in range(self.d)]
        for g in gens:
            if len(g) != self.d:
                raise ConfigError(f"frequency {g} does not have d={self.d} coordinates")
        return FrequencySet.from_generators(gens, self.d)

    def symbol(self) -> Symbol:
        fs = self.frequency_set()
        zero_tau = (0,) * self.d
        layers: Dict[float, Dict] = {}

        def add(iota, theta, tau, value):
            target = Frequency.parse(theta).array
            hit = np.flatnonzero(np.all(np.abs(fs.array - target) < 1e-12, axis=1))
            coeffs = layers.setdefault(float(iota), {})
            key = (int(hit[0]), tuple(int(t) for t in tau))
            coeffs[key] = coeffs.get(key, 0) + value

        for c in self.cosines:
            f = Frequency.parse(c["direction"])
            amp = float(c["amplitude"])
            add(0.0, c["direction"], zero_tau, amp)
            add(0.0, tuple(-x for x in (f.exact or f.coords)), zero_tau, amp)
        for t in self.terms:
            for c in t.get("coeffs", []):
                tau = c.get("tau", zero_tau)
                if len(tau) != self.d:
                    raise ConfigError(f"tau {tau} does not have d={self.d} entries")
                add(t.get("iota", 0.0), c["theta"], tau, complex(c.get("re", 0.0), c.get("im", 0.0)))
        terms = [RadialTerm(iota, coeffs) for iota, coeffs in sorted(layers.items(), reverse=True)]
        return build_symbol(fs, terms, self.C_0, kappa=self.kappa)

    def lambdas(self) -> np.ndarray:
        s = self.section("ids")
        if "lambdas" in s:
            return np.asarray(s["lambdas"], dtype=float)
        if "lambda_min" in s and "lambda_max" in s:
            return np.linspace(float(s["lambda_min"]), float(s["lambda_max"]), int(s.get("n_lambda", 20)))
        raise ConfigError("[ids] needs 'lambdas' or 'lambda_min' and 'lambda_max'")


def parse_config(text: str) -> RunConfig:
    """Parse TOML text; syntax errors carry the line and column."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    _check_keys(raw, _SCHEMA, "top level")
    for name, table in raw.items():
        if not isinstance(table, dict):
            raise ConfigError(f"[{name}] must be a table")
        _check_keys(table, _SCHEMA[name], name)
    op = raw.get("operator")
    if op is None or "d" not in op or "w" not in op:
        raise ConfigError("[operator] must define d and w")
    for c in op.get("cosines", []):
        _check_keys(c, _COSINE_KEYS, "operator.cosines")
        if "direction" not in c or "amplitude" not in c:
            raise ConfigError("[[operator.cosines]] needs direction and amplitude")
    for t in op.get("terms", []):
        _check_keys(t, _TERM_KEYS, "operator.terms")
        for c in t.get("coeffs", []):
            _check_keys(c, _COEFF_KEYS, "operator.terms.coeffs")
            if "theta" not in c:
                raise ConfigError("every term coefficient needs theta")
    return RunConfig(
        d=int(op["d"]), w=float(op["w"]), kappa=float(op.get("kappa", 0.0)), C_0=float(op.get("C_0", 4.0)),
        frequencies=list(op.get("frequencies", [])), cosines=list(op.get("cosines", [])),
        terms=list(op.get("terms", [])), params=dict(raw.get("params", {})),
        sections={k: v for k, v in raw.items() if k not in ("operator", "params")},
    )


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            text = fh.read().decode("utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
