"""Suite configuration, execution and report serialization.

``report.json`` layout (``schema_version`` 1)::

    {"schema_version": 1,
     "config": {...},                      # echo of the run configuration
     "records": [CheckResult, ...],        # in execution order
     "summary": {"total", "passed", "failed"},
     "timing": {"total_seconds", "per_check_seconds"}}

Everything except ``timing`` is a deterministic function of the
configuration; :func:`stable_hash` hashes the file with ``timing`` removed.
Complex values are ``[re, im]`` pairs and every float is written with 17
significant digits.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import re
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import checks
from .errors import BudgetError, ConfigError, PoleError
from .models import SpinModel, make_model
from .sampling import SplitMix64, sample_rapidities
from .vertex import DENSE_BUDGET

__all__ = [
    "SCHEMA_VERSION",
    "SuiteConfig",
    "Report",
    "build_model",
    "run_suite",
    "emit_report",
    "dumps_report",
    "stable_hash",
    "write_residuals_csv",
    "parse_complex",
    "format_complex",
]

SCHEMA_VERSION = 1
MODELS = ("potts", "at", "at_iso", "fz", "km")
CHAIN_BUDGET = 256  # n**L limit for chain and [H, T] checks


def parse_complex(value) -> complex:
    """Accept ``"re,im"``, ``[re, im]``, a bare real or a python complex."""
    if isinstance(value, complex):
        return value
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        parts = value.split(",")
        try:
            if len(parts) == 1:
                return complex(float(parts[0]))
            if len(parts) == 2:
                return complex(float(parts[0]), float(parts[1]))
        except ValueError:
            pass
    raise ConfigError(f"cannot read complex value from {value!r} (expected 're,im')")


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


@dataclass
class SuiteConfig:
    model: str
    n: int | None = None
    xi: float | None = None
    q: float | None = None
    x0: complex = 0.1j
    L_list: list = field(default_factory=lambda: [2, 3])
    samples: int = 5
    seed: int = 0
    tol_identity: float = checks.TOL_IDENTITY
    tol_fd: float = checks.TOL_FD
    out_dir: str = "out"
    km_sum_offset: int = 0

    def validate(self) -> "SuiteConfig":
        for name, kind in (("n", int), ("xi", float), ("q", float)):
            if getattr(self, name) is not None:
                setattr(self, name, kind(getattr(self, name)))
        self.samples, self.seed = int(self.samples), int(self.seed)
        self.km_sum_offset = int(self.km_sum_offset)
        self.L_list = [int(L) for L in self.L_list]
        self.tol_identity, self.tol_fd = float(self.tol_identity), float(self.tol_fd)
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {', '.join(MODELS)}; got {self.model!r}")
        need = {"potts": ["n"], "fz": ["n"], "km": ["n", "q"], "at": ["xi", "q"], "at_iso": ["xi"]}
        missing = [k for k in need[self.model] if getattr(self, k) is None]
        if missing:
            raise ConfigError(f"model {self.model} requires {', '.join('--' + k for k in missing)}")
        if self.model in ("at", "at_iso"):
            if self.n not in (None, 4):
                raise ConfigError(f"model {self.model} has n=4, got n={self.n}")
            self.n = 4
        if self.n < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}")
        if self.q is not None and not abs(self.q) < 1:
            raise ConfigError(f"nome must satisfy |q| < 1, got {self.q}")
        if self.model == "km" and not 0 < self.q < 1:
            raise ConfigError(f"model km needs a real nome 0 < q < 1, got {self.q}")
        if self.samples < 0:
            raise ConfigError("samples must be non-negative")
        if not (0 <= self.seed < 2**64):
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if not self.L_list or any(L < 1 for L in self.L_list):
            raise ConfigError(f"L values must be positive, got {self.L_list}")
        for L in self.L_list:
            if self.n**L > DENSE_BUDGET:
                raise ConfigError(f"n**L = {self.n}**{L} exceeds the dense budget {DENSE_BUDGET}")
        self.x0 = parse_complex(self.x0)
        return self

    def echo(self) -> dict:
        """Configuration as written into the report (output path omitted)."""
        d = asdict(self)
        d.pop("out_dir")
        return d


@dataclass
class Report:
    config: dict
    records: list = field(default_factory=list)
    timings: list = field(default_factory=list)
    total_seconds: float = 0.0

    @property
    def summary(self) -> dict:
        passed = sum(1 for r in self.records if r.passed)
        return {"total": len(self.records), "passed": passed, "failed": len(self.records) - passed}

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list:
        return [r for r in self.records if not r.passed]


def build_model(cfg: SuiteConfig) -> SpinModel:
    if cfg.model == "km":
        return make_model("km", n=cfg.n, q=cfg.q, sum_offset=cfg.km_sum_offset)
    return make_model(cfg.model, n=cfg.n, xi=cfg.xi, q=cfg.q)


# --------------------------------------------------------------------------
# suite


def _plan(cfg: SuiteConfig, model: SpinModel):
    """Yield ``(check_name, inputs, thunk)`` in execution order."""
    tol, tol_fd = cfg.tol_identity, cfg.tol_fd
    rng = SplitMix64(cfg.seed)
    tuples = sample_rapidities(model, cfg.samples, 3, rng)

    yield "weight_axioms", {"samples": cfg.samples, "seed": cfg.seed}, \
        lambda: checks.check_weight_axioms(model, cfg.samples, cfg.seed, tol)
    for x, _, _ in tuples:
        yield "inversion", {"x": x}, lambda x=x: checks.check_inversion(model, x, tol)
    for x, y, _ in tuples:
        yield "star_triangle", {"x": x, "y": y}, \
            lambda x=x, y=y: checks.check_star_triangle(model, x, y, tol)
    for x, y, _ in tuples:
        yield "yb_algebra", {"x": x, "y": y}, \
            lambda x=x, y=y: checks.check_yb_algebra(model, x, y, tol)
    for x, y, _ in tuples:
        yield "unitarity", {"x": x, "y": y}, \
            lambda x=x, y=y: checks.check_unitarity(model, x, y, tol)
    for x, y, z in tuples:
        yield "ybe", {"x": x, "y": y, "z": z}, \
            lambda x=x, y=y, z=z: checks.check_ybe(model, x, y, z, tol)
    for x, y, z in tuples:
        yield "ybe_reduced", {"x": x, "y": y, "z": z}, \
            lambda x=x, y=y, z=z: checks.check_ybe_reduced(model, x, y, z, tol)
    for x, _, _ in tuples:
        yield "reductions", {"x": x}, lambda x=x: checks.check_reductions(model, x)
    if model.reflection_symmetric:
        for x, y, z in tuples:
            y1s = (0.0, z, -z)
            yield "double_rapidity_reduction", {"x": x, "y": y}, \
                lambda x=x, y=y, y1s=y1s: checks.check_double_rapidity_reduction(model, x, y, y1s, tol)

    if tuples:
        x, y, _ = tuples[0]
        for L in cfg.L_list:
            yield "transfer_commutation", {"x": x, "y": y, "L": L}, \
                lambda L=L: checks.check_transfer_commutation(model, x, y, L, tol)
        for L in cfg.L_list:
            yield "partition_equality", {"x": x, "L": L}, \
                lambda L=L: checks.check_partition_equality(model, x, L)

    if cfg.model == "potts":
        for L in cfg.L_list:
            yield "tl_relations", {"n": model.n, "L": L}, \
                lambda L=L: checks.check_tl_relations(model.n, L)
        for x, y, _ in tuples:
            yield "potts_tl_r", {"x": x, "y": y}, \
                lambda x=x, y=y: checks.check_potts_tl_r(model, x, y)

    x0 = cfg.x0
    chain_L = [L for L in cfg.L_list if L >= 2 and model.n**L <= CHAIN_BUDGET]
    explicit = cfg.model in ("potts", "at_iso")
    for L in chain_L:
        if explicit and x0.real == 0:
            yield "chain_hermiticity", {"x0": x0, "L": L}, \
                lambda L=L: checks.check_chain_hermiticity(model, x0, L)
        if explicit:
            yield "chain_affine", {"x0": x0, "L": L}, \
                lambda L=L: checks.check_chain_affine(model, x0, L, tol_fd)
        if tuples:
            x = tuples[0][0]
            yield "chain_commutation", {"x0": x0, "x": x, "L": L}, \
                lambda L=L, x=x: checks.check_chain_commutation(model, x0, x, L, tol_fd)


def _failed(name: str, tag: str, inputs: dict, tol: float, exc: Exception) -> checks.CheckResult:
    return checks.CheckResult(name, tag, inputs, math.inf, tol,
                              note=f"{type(exc).__name__}: {exc}")


def run_suite(cfg: SuiteConfig) -> Report:
    """Run every applicable check for ``cfg`` and collect the results.

    Checks run sequentially in a fixed order, so the record list (and the
    sampled rapidities) depend only on the configuration.
    """
    cfg.validate()
    model = build_model(cfg)
    report = Report(config=cfg.echo())
    t_start = time.perf_counter()
    for name, inputs, thunk in _plan(cfg, model):
        t0 = time.perf_counter()
        try:
            result = thunk()
        except (PoleError, BudgetError, FloatingPointError, np.linalg.LinAlgError) as exc:
            result = _failed(name, model.tag, inputs, cfg.tol_identity, exc)
        report.records.append(result)
        report.timings.append(time.perf_counter() - t0)
    report.total_seconds = time.perf_counter() - t_start
    return report


# --------------------------------------------------------------------------
# serialization

_FLOAT_TOKEN = "\x00F"
_TOKEN_RE = re.compile(r'"\\u0000F([^"]*)"')




def _jsonable(obj):
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        # JSON has no non-finite numbers; write them as strings
        return _FLOAT_TOKEN + format(v, ".17g") if math.isfinite(v) else str(v)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_jsonable(float(obj.real)), _jsonable(float(obj.imag))]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    return obj


def record_dict(r: checks.CheckResult) -> dict:
    return {
        "check_name": r.check_name,
        "model_tag": r.model_tag,
        "inputs": [{"name": k, "value": v} for k, v in r.inputs.items()],
        "residual": r.residual,
        "tolerance": r.tolerance,
        "pass": r.passed,
        "estimated_scalars": r.estimated_scalars,
        "details": r.details,
        "note": r.note,
    }


def _dumps(tree) -> str:
    text = json.dumps(_jsonable(tree), indent=2, ensure_ascii=True)

    return _TOKEN_RE.sub(lambda m: m.group(1), text) + "\n"


def report_tree(report: Report, include_timing: bool = True) -> dict:
    tree = {
        "schema_version": SCHEMA_VERSION,
        "config": report.config,
        "records": [record_dict(r) for r in report.records],
        "summary": report.summary,
    }
    if include_timing:
        tree["timing"] = {"total_seconds": report.total_seconds,
                          "per_check_seconds": list(report.timings)}
    return tree


def dumps_report(report: Report, include_timing: bool = True) -> str:
    return _dumps(report_tree(report, include_timing))


def stable_hash(path_or_text) -> str:
    """SHA-256 of a report.json with the ``timing`` field removed."""
    text = Path(path_or_text).read_text() if isinstance(path_or_text, Path) else path_or_text
    tree = json.loads(text)
    tree.pop("timing", None)
    return hashlib.sha256(json.dumps(tree, sort_keys=True).encode()).hexdigest()


def _csv_value(v) -> str:
    if isinstance(v, list) and len(v) == 2 and all(isinstance(u, (int, float)) for u in v):
        return format_complex(complex(v[0], v[1]))
    if isinstance(v, complex):
        return format_complex(v)
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_residuals_csv(records: list, path: Path) -> None:
    """``records`` are report.json record dicts (already serialized)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "model", "inputs", "residual", "tolerance", "pass"])
    for r in records:
        inputs = ";".join(f"{i['name']}={_csv_value(i['value'])}" for i in r["inputs"])
        w.writerow([r["check_name"], r["model_tag"], inputs,
                    _csv_value(r["residual"]), _csv_value(r["tolerance"]),
                    "true" if r["pass"] else "false"])
    path.write_text(buf.getvalue())


def emit_report(report: Report, out_dir) -> dict:
    """Write ``report.json`` and ``residuals.csv``; return their paths."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        text = dumps_report(report)
        jpath = out / "report.json"
        jpath.write_text(text)
        cpath = out / "residuals.csv"
        write_residuals_csv(json.loads(text)["records"], cpath)
    except OSError as exc:
        raise OSError(f"cannot write report to {out}: {exc}") from exc
    return {"json": jpath, "csv": cpath}


def write_spectrum_csv(path: Path, rows) -> None:
    """``rows`` are ``(sector, index, eigenvalue)``; complex eigenvalues as ``re+imi``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sector", "index", "eigenvalue"])
    for sector, idx, val in rows:
        val = format_complex(val) if isinstance(val, complex) else format(float(val), ".17g")
        w.writerow([sector, idx, val])
    path.write_text(buf.getvalue())
