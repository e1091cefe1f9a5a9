"""Experiment configs and reports.

Configs are JSON objects with the keys in :data:`CONFIG_KEYS`.  Reports
are JSON documents with a fixed field order; integers that can outgrow a
double (heights, counts, exponents) are written as decimal strings and
complex numbers as ``[re, im]``.
"""
from __future__ import annotations

import json
import math
import os
import re
import time
from dataclasses import dataclass, field
from typing import Any

from .cocycle import CocycleSystem, frequency_table
from .cyclic import CyclicProduct, annihilator, has_star_property, is_coupling, subgroup_closure
from .odometer import _rho_prime_value, build_spec
from .poly import IntPolynomial, evaluate, to_vector
from .spectral import (DEFAULT_SLACK, CharacterSumResult, character_sum_exact,
                       character_sum_mc, classify_limit, polynomial_of)

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "POLYRIGID_OUTPUT_DIR"
DEFAULT_REPORT_NAME = "report.json"
#: Exact character sums are listed for every ``j`` only when ``|V|`` is at most this.
EXACT_TABLE_BOUND = 256

CONFIG_KEYS = ("N", "moduli", "coupling", "stages", "rho_prime", "seed", "samples",
               "polynomials", "output")
_REQUIRED = ("N", "moduli", "coupling", "stages")


class ConfigError(ValueError):
    """A config file that does not parse to valid inputs."""

    def __init__(self, message: str, source: str = "<config>", line: int | None = None):
        self.source = source
        self.line = line
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class ExperimentConfig:
    N: int
    moduli: tuple[int, ...]
    coupling: tuple[tuple[int, ...], ...]
    stages: int
    rho_prime: Any = 1
    seed: int = 0
    samples: int = 10000
    polynomials: tuple[tuple[int, ...], ...] = ()
    output: str | None = None

    def to_dict(self) -> dict:
        rp = self.rho_prime
        return {
            "N": self.N,
            "moduli": list(self.moduli),
            "coupling": [list(g) for g in self.coupling],
            "stages": self.stages,
            "rho_prime": list(rp) if isinstance(rp, tuple) else rp,
            "seed": self.seed,
            "samples": self.samples,
            "polynomials": [list(p) for p in self.polynomials],
            "output": self.output,
        }


def _key_line(text: str, key: str) -> int | None:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{what} must be an integer, got {value!r}")
    return value


def _int_list(value, what: str) -> tuple[int, ...]:
    if not isinstance(value, list):
        raise ValueError(f"{what} must be a list of integers, got {value!r}")
    return tuple(_int(v, what) for v in value)


def parse_config(text: str, source: str = "<config>", overrides: dict | None = None) -> ExperimentConfig:
    """Parse and validate a JSON config; ``overrides`` replace keys after parsing."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (column {exc.colno})", source, exc.lineno) from None
    if not isinstance(raw, dict):
        raise ConfigError("top level must be an object", source, 1)
    for key in raw:
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}", source, _key_line(text, key))
    for key in _REQUIRED:
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}", source)
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})

    def check(key, fn):
        try:
            return fn(raw[key]) if key in raw else None
        except ValueError as exc:
            raise ConfigError(str(exc), source, _key_line(text, key)) from None

    N = check("N", lambda v: _int(v, "N"))
    if not 1 <= N <= 8:
        raise ConfigError(f"N = {N} outside 1..8", source, _key_line(text, "N"))

    def moduli(v):
        ks = _int_list(v, "moduli")
        if len(ks) != N or any(k < 1 for k in ks):
            raise ValueError(f"moduli must be {N} positive integers, got {list(ks)}")
        return ks

    ks = check("moduli", moduli)

    def coupling(v):
        if not isinstance(v, list) or not v:
            raise ValueError("coupling must be a nonempty list of generators")
        gens = tuple(_int_list(g, "coupling generator") for g in v)
        for g in gens:
            if len(g) != N or any(not 0 <= x < k for x, k in zip(g, ks)):
                raise ValueError(f"generator {list(g)} is not a reduced element of Z_{ks}")
        return gens

    def stages(v):
        T = _int(v, "stages")
        if not 1 <= T <= 16:
            raise ValueError(f"stages = {T} outside 1..16")
        return T

    def rho_prime(v):
        rule = tuple(_int_list(v, "rho_prime")) if isinstance(v, list) else v
        if not isinstance(rule, (tuple, str)):
            _int(rule, "rho_prime")
        for t in range(2, T + 1):
            if _rho_prime_value(rule, t) < 1:
                raise ValueError(f"rho'_{t} must be positive")
        return rule

    def at_least(name, low):
        def f(v):
            x = _int(v, name)
            if x < low:
                raise ValueError(f"{name} must be >= {low}, got {x}")
            return x
        return f

    def polys(v):
        if not isinstance(v, list):
            raise ValueError("polynomials must be a list of coefficient lists")
        out = tuple(_int_list(p, "polynomial") for p in v)
        for p in out:
            if len(p) > N:
                raise ValueError(f"polynomial {list(p)} has degree above N = {N}")
        return out

    def output(v):
        if v is not None and not isinstance(v, str):
            raise ValueError("output must be a path string or null")
        return v

    gens = check("coupling", coupling)
    T = check("stages", stages)
    rp = check("rho_prime", rho_prime)
    return ExperimentConfig(
        N, ks, gens, T,
        1 if rp is None else rp,
        0 if "seed" not in raw else check("seed", at_least("seed", 0)),
        10000 if "samples" not in raw else check("samples", at_least("samples", 1)),
        () if "polynomials" not in raw else check("polynomials", polys),
        check("output", output),
    )


def load_config(path: str, overrides: dict | None = None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", path) from None
    return parse_config(text, path, overrides)


def default_output_path(cfg: ExperimentConfig) -> str:
    if cfg.output:
        return cfg.output
    return os.path.join(os.environ.get(OUTPUT_DIR_ENV, "."), DEFAULT_REPORT_NAME)


# -- reports --------------------------------------------------------------------


@dataclass
class ExperimentReport:
    data: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ExperimentReport:
        return cls(json.loads(text))

    def without_timing(self) -> dict:
        return {k: v for k, v in self.data.items() if k != "timing"}


def _cx(z: complex) -> list[float]:
    return [z.real, z.imag]


def _frac(x) -> float:
    return float(x)


def _result_fields(res: CharacterSumResult) -> dict:
    out = {
        "method": res.method.value,
        "stage": res.stage,
        "m": None if res.m is None else str(res.m),
        "value": _cx(res.value),
        "error_bound": res.error_bound,
    }
    if res.samples is not None:
        out.update(samples=res.samples, seed=res.seed, sd=res.sd)
    return out


def _frequency_entry(ft) -> dict:
    return {
        "stage": ft.stage,
        "method": ft.method,
        "total": str(ft.total),
        "star_count": str(ft.star_count),
        "counts": [[list(e), str(c)] for e, c in ft.counts.items()],
        "star_fraction": _frac(ft.star_fraction),
        "pattern_bound": _frac(ft.pattern_bound),
        "discrepancy": _frac(ft.discrepancy),
        "error_bound": _frac(ft.error_bound),
        "tv_distance": _frac(ft.tv_distance()),
    }


def run_simulation(cfg: ExperimentConfig, workers: int = 1, record_timing: bool = True,
                   slack: float = DEFAULT_SLACK) -> ExperimentReport:
    """Build the odometer and cocycle for ``cfg`` and collect every statistic."""
    start = time.perf_counter()
    from . import __version__

    V = CyclicProduct(cfg.moduli)
    K = subgroup_closure(V, cfg.coupling)
    G = annihilator(K)
    spec = build_spec(cfg.N, cfg.moduli, cfg.stages, cfg.rho_prime)
    sys = CocycleSystem(spec, K)
    T = spec.T
    tables = [frequency_table(sys, t) for t in range(1, T)]

    sums = []
    if T >= 2 and V.order <= EXACT_TABLE_BOUND:
        t = T - 1
        for j in V.elements():
            res = character_sum_exact(sys, t, j)
            verdict = classify_limit(G, None, polynomial_of(j))
            sums.append({
                "kind": "column",
                "j": list(j),
                **_result_fields(res),
                "target": verdict.value,
                "nearest": res.nearest_verdict().value,
                "consistent": res.consistent_with(verdict.target, slack),
            })
    verdicts = []
    ones = (1,) * cfg.N
    for coeffs in cfg.polynomials:
        P = IntPolynomial(coeffs)
        verdict = classify_limit(G, None, P)
        verdicts.append({
            "polynomial": list(coeffs),
            "reduced": list(V.reduce(to_vector(P, cfg.N))),
            "verdict": verdict.value,
        })
        t = max(T - 1, 1)
        m = evaluate(P, spec.n(t))
        res = character_sum_mc(sys, abs(m), ones, cfg.samples, cfg.seed, workers=workers)
        value = res.value.conjugate() if m < 0 else res.value
        entry = {"kind": "polynomial", "polynomial": list(coeffs), "n_t": str(spec.n(t)),
                 **_result_fields(res)}
        entry["m"] = str(m)
        entry["value"] = _cx(value)
        entry.update(target=verdict.value,
                     consistent=abs(value - verdict.target) <= res.error_bound + slack)
        sums.append(entry)

    data = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "polyrigid", "version": __version__},
        # where the report is written is not part of the experiment
        "config": {k: v for k, v in cfg.to_dict().items() if k != "output"},
        "algebra": {
            "moduli": list(cfg.moduli),
            "coupling": [list(e) for e in K.elements],
            "is_coupling": is_coupling(K),
            "annihilator": [list(e) for e in G.elements],
            "annihilator_has_star": has_star_property(G),
            "period": list(cfg.moduli),
        },
        "odometer": {
            "N": spec.N,
            "rho": [str(r) for r in spec.rho],
            "rho_prime": [str(r) for r in spec.rho_prime[1:]],
            "heights": [str(n) for n in spec.heights],
            "lcm_divides_n1": spec.n(1) % math.lcm(*cfg.moduli) == 0,
        },
        "frequency_tables": [_frequency_entry(ft) for ft in tables],
        "character_sums": sums,
        "limit_verdicts": verdicts,
        "timing": {"wall_clock_seconds": time.perf_counter() - start if record_timing else None},
    }
    return ExperimentReport(data)


def write_report(report: ExperimentReport, path: str) -> str:
    directory = os.path.dirname(path)
    try:
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w") as fh:
            fh.write(report.to_json())
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report to {path}: {exc.strerror}") from None
    return path


def read_report(path: str) -> ExperimentReport:
    with open(path) as fh:
        return ExperimentReport.from_json(fh.read())
