"""Command-line front end.

Subcommands::

    muhankel catalog       --group su2 --cutoff 6 --out-dir out/
    muhankel spectrum      --symbol sym.json --mu 1.0 --nu -0.5 --m 2 --n 2
    muhankel schatten-scan --p 2 --alpha 2 --ladder 64,128,256,512
    muhankel index         --symbol sym.json --mu 0 --nu 0
    muhankel recover       --data data.json --mu 0 --nu 0 --alpha 1e-6
    muhankel stability     --symbol sym.json --delta-grid 1e-4,1e-3,1e-2

Weight specs are either a power-law exponent (``--mu 0.5``) or a path to a
JSON table ``{"entries": [{"index": [...], "value": ...}]}``. Every run
writes a ``<command>-manifest.json`` next to its outputs; with a fixed
``--seed`` reruns are byte-identical.

Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 index
inapplicable on both routes, 5 attribution failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .duals import (
    SU2,
    DualCatalog,
    IrrepLabel,
    PowerLaw,
    TableWeight,
    Torus,
    Weight,
    enumerate_dual,
    parse_group,
)
from .fredholm import (
    FormulaInapplicableError,
    index_formula,
    numerical_index,
    winding_number,
)
from .operators import assemble
from .recovery import (
    AttributionError,
    RecoveryConfig,
    SpectralData,
    stability_scan,
    tikhonov_recover,
)
from .spectral import (
    compactness_report,
    norm_equivalence_check,
    schatten_norm,
    schatten_series_scan,
    schatten_series_table,
    schur_bound,
    spectrum,
)
from .symbols import Symbol, SymbolClassParams, symbol_difference

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_INDEX_INAPPLICABLE = 4
EXIT_ATTRIBUTION = 5


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _write_manifest(out_dir: Path, command: str, inputs: dict, outputs: dict,
                    seed: int, config: dict) -> Path:
    manifest = {
        "command": command,
        "tool_version": __version__,
        "seed": seed,
        "inputs": {k: str(v) for k, v in inputs.items()},
        "outputs": {k: str(v) for k, v in outputs.items()},
        "config": config,
    }
    path = out_dir / f"{command}-manifest.json"
    _write_json(path, manifest)
    return path


def _parse_weight(spec: str, catalog: DualCatalog) -> Weight:
    try:
        return PowerLaw(float(spec))
    except ValueError:
        pass
    payload = json.loads(Path(spec).read_text())
    values = {
        IrrepLabel(catalog.group, tuple(entry["index"])): float(entry["value"])
        for entry in payload["entries"]
    }
    return TableWeight(values)


def _parse_float_list(spec: str) -> list[float]:
    values = [float(part) for part in spec.split(",") if part.strip()]
    if not values:
        raise ValueError(f"empty list spec: {spec!r}")
    return values


def _load_symbol(path: str) -> Symbol:
    return Symbol.from_dict(json.loads(Path(path).read_text()))


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_catalog(args) -> int:
    group = parse_group(args.group)
    catalog = enumerate_dual(group, args.cutoff)
    out = _out_dir(args)
    cat_path = out / "catalog.json"
    _write_json(cat_path, catalog.to_dict())
    _write_manifest(
        out, "catalog", {}, {"catalog": cat_path}, args.seed,
        {"group": args.group, "cutoff": args.cutoff},
    )
    print(f"catalog: {len(catalog)} labels, dense dimension {catalog.dense_dim}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    sym = _load_symbol(args.symbol)
    mu = _parse_weight(args.mu, sym.codomain)
    nu = _parse_weight(args.nu, sym.domain)
    params = SymbolClassParams(args.m, args.n, mu, nu)
    op = assemble(sym, mu, nu)
    report = spectrum(op)
    ps = sorted({1.0, 2.0, args.p} if args.p is not None else {1.0, 2.0})
    schatten = {str(p): schatten_norm(report, p) for p in ps}
    criteria = [schur_bound(sym, params), norm_equivalence_check(sym, params)]
    criteria.append(compactness_report(op, params))

    out = _out_dir(args)
    outputs = {}
    payload = {
        "operator_norm": report.operator_norm,
        "singular_values": report.singular_values.tolist(),
        "schatten": schatten,
        "per_block": [
            {
                "pi_index": list(pi.index),
                "rho_index": list(rho.index),
                "singular_values": values.tolist(),
            }
            for (pi, rho), values in sorted(
                report.per_block.items(), key=lambda kv: (kv[0][0].index, kv[0][1].index)
            )
        ],
        "criteria": [v.to_dict() for v in criteria],
    }
    if args.format in ("json", "both"):
        outputs["report"] = out / "spectrum.json"
        _write_json(outputs["report"], payload)
    if args.format in ("csv", "both"):
        outputs["values_csv"] = out / "spectrum_values.csv"
        _write_csv(
            outputs["values_csv"],
            ["rank", "singular_value"],
            [[i, v] for i, v in enumerate(report.singular_values)],
        )
        outputs["criteria_csv"] = out / "spectrum_criteria.csv"
        _write_csv(
            outputs["criteria_csv"],
            ["name", "bound_value", "measured_value", "satisfied", "detail"],
            [
                [v.name, v.bound_value, v.measured_value, v.satisfied, v.detail]
                for v in criteria
            ],
        )
    _write_manifest(
        out, "spectrum", {"symbol": args.symbol}, outputs, args.seed,
        {"mu": args.mu, "nu": args.nu, "m": args.m, "n": args.n, "format": args.format},
    )
    print(f"operator norm {report.operator_norm:.12g}")
    for verdict in criteria:
        print(f"{verdict.name}: {'ok' if verdict.satisfied else 'NOT satisfied'} ({verdict.detail})")
    return EXIT_OK


def cmd_schatten_scan(args) -> int:
    ladder = tuple(_parse_float_list(args.ladder))
    group = SU2(half_integers=args.spins == "half")
    verdict = schatten_series_scan(args.alpha, args.p, ladder, group)
    rows = schatten_series_table(args.alpha, args.p, ladder, group)
    out = _out_dir(args)
    outputs = {}
    if args.format in ("json", "both"):
        outputs["verdict"] = out / "schatten_scan.json"
        _write_json(outputs["verdict"], {"verdict": verdict.to_dict(), "rows": rows})
    if args.format in ("csv", "both"):
        outputs["rows_csv"] = out / "schatten_scan.csv"
        _write_csv(
            outputs["rows_csv"],
            ["l_max", "partial_sum", "increment", "increment_ratio", "operator_schatten"],
            [
                [
                    row["l_max"],
                    row["partial_sum"],
                    row.get("increment", ""),
                    row.get("increment_ratio", ""),
                    row["operator_schatten"],
                ]
                for row in rows
            ],
        )
    _write_manifest(
        out, "schatten-scan", {}, outputs, args.seed,
        {"p": args.p, "alpha": args.alpha, "ladder": args.ladder, "spins": args.spins},
    )
    print(verdict.detail)
    return EXIT_OK


def _hankel_coefficients(sym: Symbol) -> dict[int, complex] | None:
    """Fourier coefficients k -> a(n, m) for torus symbols with Hankel
    structure a(n, m) = c(n + m); None when the structure does not hold."""
    if sym.codomain.group != Torus(1) or sym.domain.group != Torus(1):
        return None
    coeffs: dict[int, complex] = {}
    for (pi, rho), block in sym.blocks.items():
        k = pi.index[0] + rho.index[0]
        value = complex(block[0, 0])
        if k in coeffs:
            if abs(coeffs[k] - value) > 1e-12 * max(1.0, abs(value)):
                return None
        else:
            coeffs[k] = value
    return coeffs or None


def cmd_index(args) -> int:
    sym = _load_symbol(args.symbol)
    mu = _parse_weight(args.mu, sym.codomain)
    nu = _parse_weight(args.nu, sym.domain)
    op = assemble(sym, mu, nu)

    formula_index = None
    pairs = []
    formula_error = None
    try:
        formula_index, pairs = index_formula(op)
    except FormulaInapplicableError as exc:
        formula_error = str(exc)

    try:
        rank, kernel, cokernel, num_index = numerical_index(op, args.tolerance)
    except np.linalg.LinAlgError as exc:
        if formula_error is not None:
            print(f"index: formula inapplicable ({formula_error}); "
                  f"numerical SVD failed ({exc})", file=sys.stderr)
            return EXIT_INDEX_INAPPLICABLE
        raise

    payload = {
        "formula_index": formula_index,
        "formula_error": formula_error,
        "contributing_pairs": [
            {"pi_index": list(pi.index), "rho_index": list(rho.index), "weight": w}
            for pi, rho, w in pairs
        ],
        "numerical_rank": rank,
        "numerical_kernel_dim": kernel,
        "numerical_cokernel_dim": cokernel,
        "numerical_index": num_index,
        "rank_tolerance": args.tolerance,
    }

    coeffs = _hankel_coefficients(sym)
    if coeffs is not None:
        theta = 2.0 * np.pi * np.arange(args.samples) / args.samples
        samples = np.zeros(args.samples, dtype=complex)
        for k, c in coeffs.items():
            samples += c * np.exp(1j * k * theta)
        try:
            wind = winding_number(samples)
            payload["winding_number"] = wind
            payload["minus_winding"] = -wind
        except ValueError as exc:
            payload["winding_error"] = str(exc)

    out = _out_dir(args)
    report_path = out / "index.json"
    _write_json(report_path, payload)
    _write_manifest(
        out, "index", {"symbol": args.symbol}, {"report": report_path}, args.seed,
        {"mu": args.mu, "nu": args.nu, "tolerance": args.tolerance},
    )

    if formula_error is None:
        print(f"formula index {formula_index} ({len(pairs)} contributing pairs)")
        for pi, rho, w in pairs:
            print(f"  pair pi={list(pi.index)} rho={list(rho.index)} weight {w}")
    else:
        print(f"formula inapplicable: {formula_error}")
    print(f"numerical index {num_index} (kernel {kernel}, cokernel {cokernel}, rank {rank})")
    if "winding_number" in payload:
        print(
            f"winding number {payload['winding_number']}; "
            f"-winding = {payload['minus_winding']} vs numerical index {num_index}"
        )
    elif "winding_error" in payload:
        print(f"winding number unavailable: {payload['winding_error']}")
    return EXIT_OK


def cmd_recover(args) -> int:
    data = SpectralData.from_dict(json.loads(Path(args.data).read_text()))
    mu = _parse_weight(args.mu, data.codomain)
    nu = _parse_weight(args.nu, data.domain)
    config = RecoveryConfig(
        cutoff=max(data.codomain.cutoff, data.domain.cutoff),
        alpha=args.alpha,
        seed=args.seed,
        weighted_penalty=args.weighted_penalty,
    )
    recovered = tikhonov_recover(data, mu, nu, config.alpha, config.weighted_penalty)
    out = _out_dir(args)
    sym_path = out / "recovered_symbol.json"
    _write_json(sym_path, recovered.to_dict())
    inputs = {"data": args.data}
    if args.true_symbol:
        truth = _load_symbol(args.true_symbol)
        inputs["true_symbol"] = args.true_symbol
        diff = symbol_difference(recovered, truth)
        max_err = max(
            (float(np.max(np.abs(b))) for b in diff.blocks.values()), default=0.0
        )
        print(f"max entry error vs true symbol: {max_err:.6g}")
    else:
        noisy = np.zeros((data.codomain.dense_dim, data.domain.dense_dim), dtype=complex)
        for t in data.triples:
            noisy += t.s * np.outer(t.u, t.v.conj())
        residual = assemble(recovered, mu, nu).to_dense() - noisy
        print(f"max residual vs reassembled data: {np.max(np.abs(residual)) if residual.size else 0.0:.6g}")
    _write_manifest(
        out, "recover", inputs, {"symbol": sym_path}, args.seed,
        {"mu": args.mu, "nu": args.nu, "cutoff": config.cutoff,
         "alpha": config.alpha, "noise_delta": config.noise_delta,
         "weighted_penalty": config.weighted_penalty},
    )
    print(f"recovered {len(recovered.blocks)} blocks")
    return EXIT_OK


def cmd_stability(args) -> int:
    sym = _load_symbol(args.symbol)
    mu = _parse_weight(args.mu, sym.codomain)
    nu = _parse_weight(args.nu, sym.domain)
    deltas = _parse_float_list(args.delta_grid)
    rows, slope = stability_scan(
        sym, mu, nu, deltas, trials=args.trials, seed=args.seed,
        weighted_penalty=args.weighted_penalty,
    )
    out = _out_dir(args)
    outputs = {}
    if args.format in ("csv", "both"):
        outputs["table"] = out / "stability.csv"
        _write_csv(
            outputs["table"],
            ["delta", "alpha", "mean_error", "std_error"],
            [[r.delta, r.alpha, r.mean_error, r.std_error] for r in rows],
        )
    if args.format in ("json", "both"):
        outputs["summary"] = out / "stability.json"
        _write_json(
            outputs["summary"],
            {"rows": [r.to_dict() for r in rows], "slope": slope},
        )
    _write_manifest(
        out, "stability", {"symbol": args.symbol}, outputs, args.seed,
        {"mu": args.mu, "nu": args.nu, "delta_grid": args.delta_grid,
         "trials": args.trials, "weighted_penalty": args.weighted_penalty},
    )
    for row in rows:
        print(
            f"delta {row.delta:.3g}: alpha {row.alpha:.3g}, "
            f"mean error {row.mean_error:.6g} +- {row.std_error:.2g}"
        )
    print(f"log-log slope: {slope if slope is not None else 'n/a'}")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out-dir", default=".", help="directory for outputs")
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser.add_argument(
        "--format", choices=("json", "csv", "both"), default="both",
        help="which report formats to write",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="muhankel", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="enumerate a truncated dual")
    p.add_argument("--group", required=True, help="su2 | su2int | torus:d | axb with x")
    p.add_argument("--cutoff", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("spectrum", help="singular spectrum and norm criteria")
    p.add_argument("--symbol", required=True, help="symbol JSON path")
    p.add_argument("--mu", default="0", help="power-law exponent or table JSON path")
    p.add_argument("--nu", default="0", help="power-law exponent or table JSON path")
    p.add_argument("--m", type=float, default=0.0, help="codomain decay order")
    p.add_argument("--n", type=float, default=0.0, help="domain decay order")
    p.add_argument("--p", type=float, default=None, help="extra Schatten exponent")
    _add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("schatten-scan", help="diagonal Schatten series convergence scan")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--ladder", default="64,128,256,512", help="comma-separated spin cutoffs")
    p.add_argument("--spins", choices=("integer", "half"), default="integer")
    _add_common(p)
    p.set_defaults(func=cmd_schatten_scan)

    p = sub.add_parser("index", help="determinant-sign and numerical index")
    p.add_argument("--symbol", required=True)
    p.add_argument("--mu", default="0")
    p.add_argument("--nu", default="0")
    p.add_argument("--tolerance", type=float, default=1e-8, help="relative rank tolerance")
    p.add_argument("--samples", type=int, default=256, help="circle samples for winding")
    _add_common(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("recover", help="Tikhonov symbol recovery from spectral data")
    p.add_argument("--data", required=True, help="spectral data JSON path")
    p.add_argument("--mu", default="0")
    p.add_argument("--nu", default="0")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--weighted-penalty", action="store_true")
    p.add_argument("--true-symbol", default=None, help="reference symbol for error report")
    _add_common(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("stability", help="noise-response experiment")
    p.add_argument("--symbol", required=True, help="true symbol JSON path")
    p.add_argument("--mu", default="0")
    p.add_argument("--nu", default="0")
    p.add_argument("--delta-grid", default="1e-4,3e-4,1e-3,3e-3,1e-2")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--weighted-penalty", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_stability)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AttributionError as exc:
        print(f"attribution failure: {exc}", file=sys.stderr)
        return EXIT_ATTRIBUTION
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
