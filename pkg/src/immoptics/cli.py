"""Command-line interface.

Every subcommand is a thin adapter over a library call; channel indices
given with ``--rows``/``--cols`` are 1-based.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import characters as chars
from .errors import ImmopticsError, SizeLimitError
from .immanants import immanant
from .interferometer import decompose, submatrix
from .io import load_matrix
from .optics import SpectralProfile, normalized_rate, rate_direct, state_norm
from .sampler import estimate_rate

SEED_ENV = "IMMOPTICS_SEED"
SIG_DIGITS = 15


class ConfigError(ValueError):
    """Invalid user input; reported with exit status 2."""


@dataclass
class RunConfig:
    command: str
    matrix: str | None = None
    lam: str | None = None
    n: int | None = None
    tau: float | None = None
    tau_start: float = 0.0
    tau_stop: float = 3.0
    steps: int = 121
    sigma0: float = 1.0
    omega0: float = 0.0
    rows: list[int] | None = None
    cols: list[int] | None = None
    trials: int = 10_000
    seed: int | None = None
    z: float = 1.96
    wilson: bool = False
    normalized: bool = False
    output_format: str = "text"
    out: str | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


def fmt(x: float) -> str:
    return format(float(x), f".{SIG_DIGITS}g")


def _round(x: float) -> float:
    return float(fmt(x))


def _index_list(text: str, name: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{name}: expected comma-separated integers, got {text!r}") from None


def _load_inputs(cfg: RunConfig):
    if not cfg.matrix:
        raise ConfigError("--matrix is required")
    path = Path(cfg.matrix)
    if not path.exists():
        raise ConfigError(f"--matrix: file not found: {path}")
    try:
        U = load_matrix(path)
    except (ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(f"--matrix: {exc}") from None
    if cfg.rows is not None or cfg.cols is not None:
        if cfg.rows is None or cfg.cols is None:
            raise ConfigError("--rows and --cols must be given together")
        try:
            U = submatrix(U, [r - 1 for r in cfg.rows], [c - 1 for c in cfg.cols])
        except ValueError as exc:
            raise ConfigError(f"--rows/--cols: {exc}") from None
    if U.shape[0] != U.shape[1]:
        raise ConfigError(f"--matrix: expected a square matrix, got {U.shape[0]}x{U.shape[1]}")
    lam = None
    if cfg.lam is not None:
        try:
            lam = chars.Partition(cfg.lam)
        except ValueError as exc:
            raise ConfigError(f"--lambda: {exc}") from None
        if lam.n != U.shape[0]:
            raise ConfigError(f"--lambda: {lam} is not a partition of the matrix size {U.shape[0]}")
    return U, lam


def _require_lambda(lam):
    if lam is None:
        raise ConfigError("--lambda is required")
    return lam


def _profile(cfg: RunConfig) -> SpectralProfile:
    try:
        return SpectralProfile(cfg.omega0, cfg.sigma0)
    except ValueError as exc:
        raise ConfigError(f"--sigma0: {exc}") from None


def _cmd_characters(cfg: RunConfig, out) -> None:
    if cfg.n is None:
        raise ConfigError("--n is required")
    try:
        irreps, classes, table = chars.character_table(cfg.n)
    except SizeLimitError as exc:
        raise ConfigError(f"--n: {exc}") from None
    if cfg.output_format == "json":
        data = {
            "n": cfg.n,
            "classes": [list(c) for c in classes],
            "irreps": [list(r) for r in irreps],
            "table": table.tolist(),
        }
        out.write(json.dumps(data) + "\n")
        return
    headers = ["irrep\\class"] + [str(c) for c in classes]
    rows = [[str(lam)] + [str(v) for v in row] for lam, row in zip(irreps, table)]
    widths = [max(len(r[k]) for r in [headers] + rows) for k in range(len(headers))]
    for r in [headers] + rows:
        out.write("  ".join(cell.rjust(w) for cell, w in zip(r, widths)) + "\n")


def _cmd_imm(cfg: RunConfig, out) -> None:
    U, lam = _load_inputs(cfg)
    value = immanant(U, _require_lambda(lam))
    if cfg.output_format == "json":
        out.write(json.dumps({"lambda": list(lam), "re": _round(value.real), "im": _round(value.imag)}) + "\n")
    else:
        out.write(f"{fmt(value.real)} {fmt(value.imag)}\n")


def _cmd_rate(cfg: RunConfig, out) -> None:
    U, lam = _load_inputs(cfg)
    lam = _require_lambda(lam)
    if cfg.tau is None:
        raise ConfigError("--tau is required")
    if cfg.tau < 0:
        raise ConfigError("--tau must be nonnegative")
    profile = _profile(cfg)
    value = normalized_rate(U, lam, cfg.tau, profile) if cfg.normalized else rate_direct(U, lam, cfg.tau, profile)
    if cfg.output_format == "json":
        key = "rate_normalized" if cfg.normalized else "rate_raw"
        out.write(json.dumps({"lambda": list(lam), "tau": cfg.tau, key: _round(value)}) + "\n")
    else:
        out.write(fmt(value) + "\n")


def scan_rows(U, lam, taus, profile: SpectralProfile):
    """``(tau, raw, normalized, gtilde)`` rows; normalized is NaN for a vanishing norm."""
    for tau in taus:
        raw = rate_direct(U, lam, tau, profile)
        norm = state_norm(lam, tau, profile)
        normed = raw / norm if norm > 1e-12 else math.nan
        yield float(tau), raw, normed, math.exp(-(profile.sigma0**2) * tau**2)


def _cmd_scan(cfg: RunConfig, out) -> None:
    U, lam = _load_inputs(cfg)
    lam = _require_lambda(lam)
    if cfg.steps < 1:
        raise ConfigError("--steps must be positive")
    if cfg.tau_start < 0 or cfg.tau_stop < 0:
        raise ConfigError("--tau-start/--tau-stop must be nonnegative")
    taus = np.linspace(cfg.tau_start, cfg.tau_stop, cfg.steps)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["tau", "rate_raw", "rate_normalized", "gtilde"])
    for row in scan_rows(U, lam, taus, _profile(cfg)):
        writer.writerow([fmt(v) for v in row])


def _cmd_sample(cfg: RunConfig, out) -> None:
    U, lam = _load_inputs(cfg)
    lam = _require_lambda(lam)
    if cfg.tau is None:
        raise ConfigError("--tau is required")
    if cfg.trials < 1:
        raise ConfigError("--trials must be positive")
    seed = cfg.seed
    if seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            seed = int(env) if env is not None else 0
        except ValueError:
            raise ConfigError(f"{SEED_ENV}: expected an integer, got {env!r}") from None
    rep = estimate_rate(
        U, lam, cfg.tau, _profile(cfg), cfg.trials, seed, cfg.z, "wilson" if cfg.wilson else "wald"
    )
    data = rep.to_dict()
    for key in ("estimate", "half_width", "center", "p"):
        if data[key] is not None:
            data[key] = _round(data[key])
    data["low"], data["high"] = _round(rep.low), _round(rep.high)
    out.write(json.dumps(data) + "\n")


def _cmd_decompose(cfg: RunConfig, out) -> None:
    U, _ = _load_inputs(cfg)
    data = decompose(U).to_dict()
    data["layers"] = [{**d, "theta": _round(d["theta"]), "phi": _round(d["phi"])} for d in data["layers"]]
    data["phases"] = [_round(p) for p in data["phases"]]
    out.write(json.dumps(data, indent=1) + "\n")


COMMANDS = {
    "characters": _cmd_characters,
    "imm": _cmd_imm,
    "rate": _cmd_rate,
    "scan": _cmd_scan,
    "sample": _cmd_sample,
    "decompose": _cmd_decompose,
}


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute ``cfg``; returns the process exit status."""
    stdout = sys.stdout if stdout is None else stdout
    buffer = io.StringIO()
    try:
        if cfg.command not in COMMANDS:
            raise ConfigError(f"command: unknown subcommand {cfg.command!r}")
        if cfg.output_format not in ("text", "json", "csv"):
            raise ConfigError(f"--format: unknown output format {cfg.output_format!r}")
        COMMANDS[cfg.command](cfg, buffer)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ImmopticsError, ValueError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if cfg.out:
        Path(cfg.out).write_text(buffer.getvalue())
    else:
        stdout.write(buffer.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="immoptics",
        description="Immanants and coincidence rates of time-bin-entangled photons in linear interferometers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_matrix(p, lam=True):
        p.add_argument("--matrix", required=True, help='matrix JSON file: {"rows": [[[re, im], ...], ...]}')
        if lam:
            p.add_argument("--lambda", dest="lam", required=True, help='partition, e.g. "2,1"')
        p.add_argument("--rows", type=lambda s: _index_list(s, "--rows"), help="1-based input channels to keep")
        p.add_argument("--cols", type=lambda s: _index_list(s, "--cols"), help="1-based output channels to keep")

    def add_profile(p):
        p.add_argument("--sigma0", type=float, default=1.0, help="Gaussian bandwidth (default 1)")
        p.add_argument("--omega0", type=float, default=0.0, help="carrier frequency (rates do not depend on it)")

    def add_out(p, formats=("text", "json")):
        p.add_argument("--format", dest="output_format", choices=formats, default=formats[0])
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("characters", help="print the character table of S_n (irreps as rows, cycle types as columns)")
    p.add_argument("--n", type=int, required=True)
    add_out(p)

    p = sub.add_parser("imm", help="immanant: sum over S_n of chi(sigma) prod_i U[i, sigma(i)]")
    add_matrix(p)
    add_out(p)

    p = sub.add_parser(
        "rate",
        help="coincidence rate: Hermitian form in immanants of row-permuted U weighted by Gaussian overlaps",
    )
    add_matrix(p)
    p.add_argument("--tau", type=float, required=True, help="delay unit; delays are equally spaced about zero")
    add_profile(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--raw", dest="normalized", action="store_false", help="unnormalized rate (default)")
    mode.add_argument("--normalized", dest="normalized", action="store_true", help="rate divided by the input-state norm")
    p.set_defaults(normalized=False)
    add_out(p)

    p = sub.add_parser("scan", help="sweep tau; CSV columns tau,rate_raw,rate_normalized,gtilde")
    add_matrix(p)
    p.add_argument("--tau-start", type=float, default=0.0)
    p.add_argument("--tau-stop", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=121)
    add_profile(p)
    add_out(p, formats=("csv",))

    p = sub.add_parser(
        "sample",
        help="simulate repeated trials of the normalized rate; binomial estimate l/L +/- (z/L) sqrt(l(L-l)/L)",
    )
    add_matrix(p)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--z", type=float, default=1.96)
    p.add_argument("--wilson", action="store_true", help="Wilson score interval instead of the Wald interval")
    add_profile(p)
    add_out(p, formats=("json",))

    p = sub.add_parser("decompose", help="triangular beamsplitter/phase-shifter factorization of a unitary")
    add_matrix(p, lam=False)
    add_out(p, formats=("json",))
    return parser


def parse_config(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = vars(args)
    known = {f.name for f in fields(RunConfig)}
    return RunConfig(**{k: v for k, v in values.items() if k in known})


def main(argv=None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
