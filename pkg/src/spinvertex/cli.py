"""Command line entry point: ``spinvertex {verify,spectrum,partition,report}``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for
configuration or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import chains
from .errors import BudgetError, ConfigError, PoleError
from .report import (
    SuiteConfig,
    build_model,
    emit_report,
    format_complex,
    parse_complex,
    run_suite,
    write_residuals_csv,
    write_spectrum_csv,
)
from .vertex import ENUMERATION_BUDGET, brute_force_partition, partition_trace, transfer_dia, transfer_row

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

# flag name -> SuiteConfig field
_FIELDS = {
    "model": "model", "n": "n", "xi": "xi", "q": "q", "x0": "x0", "L": "L_list",
    "samples": "samples", "seed": "seed", "tol": "tol_identity", "tol_fd": "tol_fd",
    "out": "out_dir", "km_sum_offset": "km_sum_offset",
}


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON file with configuration values")
    p.add_argument("--model", choices=["potts", "at", "at_iso", "fz", "km"])
    p.add_argument("--n", type=int)
    p.add_argument("--xi", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--x0", help="chain point as 're,im'")
    p.add_argument("--L", type=_int_list, help="comma-separated system sizes")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float, help="identity tolerance")
    p.add_argument("--tol-fd", dest="tol_fd", type=float, help="finite-difference tolerance")
    p.add_argument("--out", help="output directory")
    p.add_argument("--km-sum-offset", dest="km_sum_offset", type=int,
                   help="shift of the a+b product limit in the KM weights (nonzero breaks the model)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinvertex",
                                     description="Numerical checks for integrable spin and vertex models.")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run the identity suite and write a report")
    _model_flags(v)
    s = sub.add_parser("spectrum", help="diagonalize the quantum chain and dump eigenvalues")
    _model_flags(s)
    p = sub.add_parser("partition", help="print partition functions and the oracle comparison")
    _model_flags(p)
    p.add_argument("--x", help="rapidity as 're,im' (default 0.2)")
    r = sub.add_parser("report", help="re-render a saved report.json to CSV")
    r.add_argument("path", type=Path, help="report.json to read")
    r.add_argument("--out", help="directory for residuals.csv (default: next to the input)")
    return parser


def load_config(args: argparse.Namespace) -> SuiteConfig:
    """Layer flags over the optional JSON config file."""
    values: dict = {}
    if getattr(args, "config", None) is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {args.config} must hold a JSON object")
        for key, val in data.items():
            field = _FIELDS.get(key, key)
            if field not in _FIELDS.values():
                raise ConfigError(f"unknown config key {key!r}")
            values[field] = val
    for flag, field in _FIELDS.items():
        val = getattr(args, flag, None)
        if val is not None:
            values[field] = val
    if "model" not in values:
        raise ConfigError("--model is required")
    if "x0" in values:
        values["x0"] = parse_complex(values["x0"])
    if isinstance(values.get("L_list"), int):
        values["L_list"] = [values["L_list"]]
    try:
        return SuiteConfig(**values).validate()
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid configuration value: {exc}") from exc


def cmd_verify(args) -> int:
    cfg = load_config(args)
    report = run_suite(cfg)
    paths = emit_report(report, cfg.out_dir)
    s = report.summary
    print(f"{s['passed']}/{s['total']} checks passed; report at {paths['json']}")
    for r in report.failures():
        print(f"FAILED {r}" + (f" ({r.note})" if r.note else ""), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def _chain_operator(cfg: SuiteConfig, L: int):
    if cfg.model == "potts":
        return chains.potts_chain(cfg.n, cfg.x0, L)
    if cfg.model == "at_iso":
        return chains.at_chain(cfg.xi, cfg.x0, L)
    return chains.hamiltonian_from_transfer(build_model(cfg), cfg.x0, L)


def cmd_spectrum(args) -> int:
    cfg = load_config(args)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for L in cfg.L_list:
        if L < 2:
            raise ConfigError("spectrum needs L >= 2")
        op = _chain_operator(cfg, L)
        rows = []
        if op.hermitian and cfg.model == "potts":
            for sector, vals in chains.sector_spectrum(op).items():
                rows += [(sector, i, float(v)) for i, v in enumerate(vals)]
        elif op.hermitian:
            rows = [("all", i, float(v)) for i, v in enumerate(chains.diagonalize_hermitian(op))]
        else:
            vals = np.linalg.eigvals(op.matrix)
            vals = vals[np.lexsort((vals.imag, vals.real))]
            rows = [("all", i, complex(v)) for i, v in enumerate(vals)]
        label = f"{cfg.model}{cfg.n}_L{L}"
        path = out / f"spectrum_{label}.csv"
        write_spectrum_csv(path, rows)
        lowest = min(rows, key=lambda r: np.real(r[2]))[2]
        print(f"{label}: dim {op.dim}, hermitian={op.hermitian}, lowest={lowest:.17g} -> {path}")
    return EXIT_OK


def cmd_partition(args) -> int:
    cfg = load_config(args)
    x = parse_complex(args.x) if args.x is not None else 0.2 + 0j
    model = build_model(cfg)
    ok = True
    for L in cfg.L_list:
        zd = partition_trace(transfer_dia(model, x, L), L)
        zr = partition_trace(transfer_row(model, x, 0.0, L), L)
        rel = abs(zd - zr) / abs(zd) if zd != 0 else abs(zr)
        line = f"L={L} Z_dia={format_complex(zd)} Z_row={format_complex(zr)} rel={rel:.3e}"
        ok &= rel < 1e-10
        if model.n ** (L * L) <= ENUMERATION_BUDGET:
            zb = brute_force_partition(model, x, L)
            relb = abs(zb - zd) / abs(zd) if zd != 0 else abs(zb)
            line += f" Z_brute={format_complex(zb)} rel_brute={relb:.3e}"
            ok &= relb < 1e-10
        print(line)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_report(args) -> int:
    try:
        data = json.loads(args.path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read report {args.path}: {exc}") from exc
    if data.get("schema_version") != 1:
        raise ConfigError(f"unsupported schema_version {data.get('schema_version')!r}")
    out = Path(args.out) if args.out else args.path.parent
    out.mkdir(parents=True, exist_ok=True)
    write_residuals_csv(data["records"], out / "residuals.csv")
    s = data["summary"]
    print(f"{s['passed']}/{s['total']} passed -> {out / 'residuals.csv'}")
    return EXIT_OK if s["failed"] == 0 else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse exits with status 2 on bad flags
    handler = {"verify": cmd_verify, "spectrum": cmd_spectrum,
               "partition": cmd_partition, "report": cmd_report}[args.command]
    try:
        return handler(args)
    except (ConfigError, BudgetError) as exc:
        print(f"spinvertex: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PoleError as exc:
        print(f"spinvertex: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
