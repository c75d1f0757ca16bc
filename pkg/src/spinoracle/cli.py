"""Command-line front end: every figure dataset and claim experiment.

Subcommands
    squeeze-scan   squeezing sweep CSV (s, mu_opt, v_min, p_c, overlap) plus
                   per-s probability histograms with the bounding template
    qfunc          spherical Q-function grid and basis-state distribution
                   for the coherent or optimally squeezed state
    solve          decision experiments for the restricted / unrestricted /
                   fourier variants (exhaustive where feasible, otherwise
                   seeded trials), JSON reports with summary
    classical      query-count comparison table, with the brute-force
                   minimum decision-tree depth where feasible

All randomness flows from --seed, so identical configs reproduce outputs
byte for byte.  Options may also come from a key=value config file
(--config); explicit flags win.  Exit codes: 0 ok, 2 config error,
3 resource guard, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys as _sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import classical_baseline, codewords, oracle_circuit, squeezing
from .errors import ConfigError, InvariantError, ResourceLimitError
from .qfunction import q_function
from .spin_core import coherent_state, make_spin_system

SCHEMA_VERSION = 1

_DEFAULTS = {
    "squeeze-scan": {"s_range": "3/2:511/2", "tol": 1e-8, "format": "csv"},
    "qfunc": {"n": 6, "state": "coherent", "grid": "64x64", "tol": 1e-8, "format": "csv"},
    "solve": {
        "n": 3,
        "variant": "restricted",
        "errors": None,
        "reps": 1,
        "trials": 1000,
        "error_mode": "worst",
        "format": "json",
    },
    "classical": {"s_range": "3/2:511/2", "trials": 32, "format": "csv"},
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int | None
    s_range: str | None
    variant: str | None
    errors: int | None
    reps: int
    trials: int
    seed: int
    grid: str | None
    tol: float
    out: Path
    format: str
    state: str | None
    error_mode: str | None

    def grid_shape(self) -> tuple[int, int]:
        try:
            t, p = self.grid.lower().split("x")
            return int(t), int(p)
        except (AttributeError, ValueError) as exc:
            raise ConfigError(f"grid must look like 128x128, got {self.grid!r}") from exc


def _parse_s(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse spin value {text!r}") from exc


def _s_range_exponents(text: str) -> list[int]:
    """Exponents n with s = (2^n - 1)/2 inside the given closed s interval."""
    parts = text.split(":")
    if len(parts) == 1:
        lo = hi = _parse_s(parts[0])
    elif len(parts) == 2:
        lo, hi = _parse_s(parts[0]), _parse_s(parts[1])
    else:
        raise ConfigError(f"s-range must be 'lo:hi' or a single value, got {text!r}")
    if lo > hi:
        raise ConfigError(f"empty s-range {text!r}")
    exps = [n for n in range(2, 15) if lo <= (2**n - 1) / 2 <= hi]
    if not exps:
        raise ConfigError(f"no power-of-two spin systems inside s-range {text!r}")
    return exps


def _read_config_file(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, val = line.split("=", 1)
        values[key.strip().replace("-", "_")] = val.strip()
    return values


_INT_KEYS = {"n", "errors", "reps", "trials", "seed"}
_FLOAT_KEYS = {"tol"}


def _coerce(key: str, value):
    if value is None or not isinstance(value, str):
        return value
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinoracle",
        description="Spin-squeezing analysis and codeword oracle-decision experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("squeeze-scan", "qfunc", "solve", "classical"):
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, help="spin-system exponent, N = 2^n")
        p.add_argument("--s-range", help="spin range 'lo:hi' as fractions, e.g. 3/2:511/2")
        p.add_argument("--variant", choices=codewords.VARIANTS)
        p.add_argument("--errors", type=int, help="error weight d (or l)")
        p.add_argument("--reps", type=int, help="pipeline repetitions per decision")
        p.add_argument("--trials", type=int, help="sampled instances per experiment")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--grid", help="Q-function grid, e.g. 128x128")
        p.add_argument("--tol", type=float, help="mu optimization tolerance")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--state", choices=("coherent", "squeezed"))
        p.add_argument("--error-mode", choices=("worst", "random"))
        p.add_argument("--config", help="key=value file; explicit flags override it")
    return parser


def load_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    merged = dict(_DEFAULTS[args.command])
    if args.config:
        merged.update(_read_config_file(args.config))
    for key in (
        "n", "s_range", "variant", "errors", "reps", "trials", "seed",
        "grid", "tol", "out", "format", "state", "error_mode",
    ):
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            merged[key] = cli_val
    merged = {k: _coerce(k, v) for k, v in merged.items()}
    return RunConfig(
        command=args.command,
        n=merged.get("n"),
        s_range=merged.get("s_range"),
        variant=merged.get("variant"),
        errors=merged.get("errors"),
        reps=int(merged.get("reps", 1)),
        trials=int(merged.get("trials", 1000)),
        seed=int(merged.get("seed", 0)),
        grid=merged.get("grid"),
        tol=float(merged.get("tol", 1e-8)),
        out=Path(merged.get("out", "out")),
        format=merged.get("format", "csv"),
        state=merged.get("state"),
        error_mode=merged.get("error_mode"),
    )


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".9g")
    return str(x)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> Path:
    lines = [f"# schema_version={SCHEMA_VERSION}", ",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


def _write_json(path: Path, doc: dict) -> Path:
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", newline="\n")
    return path


def _rows_to_json(path: Path, name: str, header: list[str], rows: list[list]) -> Path:
    records = [dict(zip(header, row)) for row in rows]
    return _write_json(path, {name: records})


def _emit_table(cfg: RunConfig, stem: str, header: list[str], rows: list[list]) -> Path:
    if cfg.format == "json":
        return _rows_to_json(cfg.out / f"{stem}.json", stem, header, rows)
    return _write_csv(cfg.out / f"{stem}.csv", header, rows)


def cmd_squeeze_scan(cfg: RunConfig) -> list[Path]:
    exponents = _s_range_exponents(cfg.s_range)
    written = []
    header = ["s", "mu_opt", "v_min", "p_c", "overlap"]
    rows = []
    bound = squeezing.bounding_epsilon()
    for n in exponents:
        sys = make_spin_system(n)
        res = squeezing.optimize_mu(sys, cfg.tol)
        rows.append([
            sys.s,
            res.mu,
            res.v_minus,
            squeezing.central_probability(res.distribution),
            squeezing.ideal_overlap(res.state),
        ])
        if sys.dim >= 8:
            template = [float(v) for v in bound.template(sys.dim)]
        else:
            template = [""] * sys.dim  # template needs at least 8 slots
        hist_rows = [
            [i, float(p), template[i]] for i, p in enumerate(res.distribution)
        ]
        written.append(
            _emit_table(cfg, f"hist_N{sys.dim}", ["index", "probability", "bound"], hist_rows)
        )
    written.insert(0, _emit_table(cfg, "squeeze_scan", header, rows))
    return written


def cmd_qfunc(cfg: RunConfig) -> list[Path]:
    sys = make_spin_system(cfg.n)
    if cfg.state == "squeezed":
        state = squeezing.optimize_mu(sys, cfg.tol).state
    elif cfg.state == "coherent":
        state = coherent_state(sys, math.pi / 2, 0.0)
    else:
        raise ConfigError(f"qfunc needs --state coherent|squeezed, got {cfg.state!r}")
    t_steps, p_steps = cfg.grid_shape()
    grid = q_function(state, sys, t_steps, p_steps)
    q_rows = [[theta, phi, q] for theta, phi, q in grid.rows()]
    dist_rows = [[i, float(p)] for i, p in enumerate(state.probabilities())]
    return [
        _emit_table(cfg, f"qfunc_{cfg.state}_N{sys.dim}", ["theta", "phi", "q"], q_rows),
        _emit_table(cfg, f"dist_{cfg.state}_N{sys.dim}", ["index", "probability"], dist_rows),
    ]


def _solve_restricted(cfg: RunConfig, dim: int, rng) -> list[dict]:
    if dim <= 16:
        instances = list(codewords.enumerate_instances("restricted", dim, cfg.errors))
    else:
        instances = [
            codewords.sample_instance("restricted", dim, cfg.errors, rng)
            for _ in range(cfg.trials)
        ]
    return [
        oracle_circuit.decide_restricted(inst).to_dict("restricted", dim, inst.hidden_j)
        | {"label": inst.label}
        for inst in instances
    ]


def _solve_unrestricted(cfg: RunConfig, dim: int, rng) -> tuple[list[dict], dict]:
    weight = cfg.errors if cfg.errors is not None else 0
    extra = {}
    if cfg.error_mode != "random":
        # exact output spectrum for the designated codeword under worst-case
        # in-phase errors; valid for any weight the mask construction admits,
        # independent of the decision trials below
        mask = oracle_circuit.worst_case_error_mask(dim, weight)
        z = codewords.apply_mask(
            codewords.hadamard_codeword(dim, codewords.designated_index(dim)).bits,
            mask.mask,
        )
        merged = oracle_circuit.merge_two_to_one(
            oracle_circuit.run_pipeline(z, "hadamard"), "symmetric"
        )
        extra["worst_case_spectrum"] = [float(p) for p in merged.probabilities()]
    reports = []
    for _ in range(cfg.trials):
        if cfg.error_mode == "random":
            inst = codewords.sample_instance("unrestricted", dim, weight, rng)
        else:
            mask = oracle_circuit.worst_case_error_mask(dim, weight)
            j = int(rng.integers(0, dim // 2))
            inst = codewords.instance_from_parts("unrestricted", dim, j, mask)
        rep = oracle_circuit.decide_unrestricted(inst, cfg.reps, rng)
        reports.append(rep.to_dict("unrestricted", dim, inst.hidden_j) | {"label": inst.label})
    return reports, extra


def _solve_fourier(dim: int) -> tuple[list[dict], list[float]]:
    reports = [
        oracle_circuit.decide_fourier(inst).to_dict("fourier", dim, inst.hidden_j)
        | {"label": inst.label}
        for inst in codewords.enumerate_instances("fourier", dim)
    ]
    table = [float(x) for x in oracle_circuit.fourier_probability_table(dim)]
    return reports, table


def cmd_solve(cfg: RunConfig) -> list[Path]:
    if cfg.variant not in codewords.VARIANTS:
        raise ConfigError(f"solve needs --variant, got {cfg.variant!r}")
    sys = make_spin_system(cfg.n)
    dim = sys.dim
    rng = np.random.default_rng(cfg.seed)
    table = None
    extra = {}
    if cfg.variant == "restricted":
        reports = _solve_restricted(cfg, dim, rng)
    elif cfg.variant == "unrestricted":
        reports, extra = _solve_unrestricted(cfg, dim, rng)
    else:
        reports, table = _solve_fourier(dim)
    summary = {"instances": len(reports)}
    if reports:
        correct = sum(rep["decision"] == rep["label"] for rep in reports)
        summary["accuracy"] = correct / len(reports)
        summary["mean_queries"] = sum(rep["queries"] for rep in reports) / len(reports)
    doc = {
        "command": "solve",
        "config": {
            "variant": cfg.variant,
            "N": dim,
            "errors": cfg.errors,
            "reps": cfg.reps,
            "trials": cfg.trials,
            "seed": cfg.seed,
            "error_mode": cfg.error_mode,
        },
        "summary": summary,
        "reports": reports,
        **extra,
    }
    if table is not None:
        doc["probability_table"] = table
    stem = f"solve_{cfg.variant}_N{dim}"
    if cfg.format == "csv":
        header = ["variant", "N", "hiddenJ", "label", "decision", "prTop", "queries", "repetitions"]
        rows = [[rep[k] for k in header] for rep in reports]
        return [_write_csv(cfg.out / f"{stem}.csv", header, rows)]
    return [_write_json(cfg.out / f"{stem}.json", doc)]


def cmd_classical(cfg: RunConfig) -> list[Path]:
    exponents = _s_range_exponents(cfg.s_range)
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for n in exponents:
        dim = 2**n
        for j in rng.integers(0, dim // 2, size=max(1, cfg.trials)):
            oracle = classical_baseline.BitOracle(codewords.hadamard_codeword(dim, int(j)).bits)
            result = classical_baseline.classical_identify(oracle, dim)
            if result.j != int(j):
                raise InvariantError(f"classical identification failed at N={dim}, j={j}")
        depth = (
            classical_baseline.min_decision_tree_depth(dim) if dim <= 16 else ""
        )
        rows.append([dim, 1, result.queries, depth])
    header = ["N", "quantum_queries", "classical_queries", "classical_min_depth"]
    return [_emit_table(cfg, "classical_comparison", header, rows)]


_COMMANDS = {
    "squeeze-scan": cmd_squeeze_scan,
    "qfunc": cmd_qfunc,
    "solve": cmd_solve,
    "classical": cmd_classical,
}


def main(argv=None) -> int:
    try:
        cfg = load_config(argv)
        cfg.out.mkdir(parents=True, exist_ok=True)
        written = _COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource guard: {exc}", file=_sys.stderr)
        return 3
    except InvariantError as exc:
        print(f"invariant violation: {exc}", file=_sys.stderr)
        return 4
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
