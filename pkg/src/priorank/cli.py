"""Command-line front door for the engine.

Every verb maps to one engine operation (or a fixed composition) and
writes JSON to stdout by default; ``--format csv`` emits flat tables
where the shape allows it and ``--pretty`` renders human-readable text
with 1-based indices.  Exit codes: 0 success, 1 invalid input, 2 usage
error.  Randomized verbs take ``--seed`` (falling back to the
PRIORANK_SEED environment variable, then 0) and echo the seed used, so
repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import core, elicitation, marketrate, metricspace, montecarlo, priority
from .core import ComparisonMatrix, Normalization, PriorityVector, ValidationError

#: Which engine operations each verb exposes; the test suite checks the
#: mapping is a partition (every operation reachable from exactly one verb).
VERB_OPERATIONS = {
    "weights": ("eigen_weights", "llsm_weights"),
    "consistency": ("consistency_report", "intransitivity"),
    "nearest": ("nearest_transitive",),
    "deviation": ("deviation_matrix", "revision_hint"),
    "coin": ("coin_to_matrix",),
    "aggregate": ("aggregate_panel",),
    "synthesize": ("synthesize_hierarchy",),
    "hilbert": ("hilbert_distance",),
    "induced": ("induced_max_distance", "induced_integral_distance"),
    "decompose": ("decompose_rate",),
    "eigenbasis": ("complex_eigenbasis",),
    "census": ("consistency_census", "estimate_ri", "random_reciprocal"),
    "serve": ("serve",),
}

SEED_ENV_VAR = "PRIORANK_SEED"


class UsageError(Exception):
    """Flag combinations the parser cannot catch; exits with code 2."""


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV_VAR, "0"))


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def _load_json(text: str, what: str) -> dict | list:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid {what} JSON: {exc}") from exc


def _parse_square(text: str) -> np.ndarray:
    """General square matrix (any sign), JSON or CSV."""
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        obj = _load_json(text, "matrix")
        rows = obj["entries"] if isinstance(obj, dict) else obj
    else:
        rows = []
        for i, line in enumerate(filter(str.strip, text.strip().splitlines())):
            try:
                rows.append([float(c) for c in line.split(",")])
            except ValueError as exc:
                raise ValidationError(f"row {i} has a non-numeric value: {exc}") from exc
    a = np.asarray(rows, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {a.shape}")
    return a


def _parse_prices(text: str) -> np.ndarray:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        obj = _load_json(text, "price vector")
        values = obj["prices"] if "prices" in obj else obj.get("weights")
        if values is None:
            raise ValidationError('price JSON needs a "prices" array')
    elif stripped.startswith("["):
        values = _load_json(text, "price vector")
    else:
        try:
            values = [float(c) for c in text.strip().replace("\n", ",").split(",") if c.strip()]
        except ValueError as exc:
            raise ValidationError(f"non-numeric price: {exc}") from exc
    return np.asarray(values, dtype=float)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(obj) -> None:
    _emit(json.dumps(obj))


def _matrix_payload(m: ComparisonMatrix) -> dict:
    return {"n": m.n, "entries": [[float(v) for v in row] for row in m.entries]}


def _csv_line(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def _pretty_matrix(entries: np.ndarray) -> str:
    # 1-based row/column labels for human eyes
    n = entries.shape[0]
    header = "      " + " ".join(f"{j + 1:>10d}" for j in range(n))
    lines = [header]
    for i, row in enumerate(entries):
        lines.append(f"{i + 1:>5d} " + " ".join(f"{v:>10.5g}" for v in row))
    return "\n".join(lines)


# --- verb handlers ----------------------------------------------------------


def _cmd_weights(args) -> int:
    m = core.parse_matrix(_read_input(args.input))
    if args.method == "eigen":
        result = priority.eigen_weights(m)
        weights = result.weights
        payload = {
            "method": "eigen",
            "weights": [float(w) for w in weights.weights],
            "normalization": weights.normalization.value,
            "lambda_max": result.lambda_max,
            "iterations": result.iterations,
            "residual": result.residual,
        }
    else:
        weights = priority.llsm_weights(m)
        payload = {
            "method": "llsm",
            "weights": [float(w) for w in weights.weights],
            "normalization": weights.normalization.value,
        }
    if args.pretty:
        lines = [f"{args.method} weights ({weights.normalization.value}):"]
        lines += [f"  item {i + 1}: {w:.6f}" for i, w in enumerate(weights.weights)]
        _emit("\n".join(lines))
    elif args.format == "csv":
        _emit(_csv_line(weights.weights))
    else:
        _emit_json(payload)
    return 0


def _ri_source_from_args(args):
    if args.ri_table == "saaty":
        return montecarlo.SAATY_RI
    return montecarlo.MonteCarloRI(samples=args.ri_samples, seed=args.seed if args.seed is not None else _default_seed())


def _cmd_consistency(args) -> int:
    m = core.parse_matrix(_read_input(args.input))
    seed = args.seed if args.seed is not None else _default_seed()
    report = priority.consistency_report(m, ri_source=_ri_source_from_args(args), delta=args.delta)
    payload = report.to_dict()
    payload["seed"] = seed
    if args.pretty:
        verdict = "acceptable" if report.acceptable else "needs revision"
        lines = [
            f"n:                     {report.n}",
            f"lambda_max:            {report.lambda_max:.9f}",
            f"consistency index:     {report.ci:.9f}",
            f"random index:          {'n/a' if report.ri is None else f'{report.ri:.6f}'}",
            f"consistency ratio:     {'n/a (non-reciprocal)' if report.cr is None else f'{report.cr:.6f}'}",
            f"intransitivity:        {report.intransitivity:.9f}",
            f"per-pair:              {report.per_pair_intransitivity:.9f}",
            f"delta (configurable):  {report.delta}",
            f"verdict:               {verdict}",
        ]
        _emit("\n".join(lines))
    elif args.format == "csv":
        header = "lambda_max,ci,ri,cr,intransitivity,per_pair_intransitivity,delta,acceptable"
        row = ",".join(
            "" if v is None else (repr(float(v)) if not isinstance(v, bool) else str(v).lower())
            for v in (
                report.lambda_max, report.ci, report.ri, report.cr,
                report.intransitivity, report.per_pair_intransitivity,
                report.delta, report.acceptable,
            )
        )
        _emit(header + "\n" + row)
    else:
        _emit_json(payload)
    return 0


def _cmd_nearest(args) -> int:
    m = core.parse_matrix(_read_input(args.input))
    fitted = priority.nearest_transitive(m)
    if args.pretty:
        _emit(_pretty_matrix(fitted.entries))
    elif args.format == "csv":
        _emit(core.to_csv(fitted))
    else:
        _emit_json(_matrix_payload(fitted))
    return 0


def _cmd_deviation(args) -> int:
    m = core.parse_matrix(_read_input(args.input))
    dev = priority.deviation_matrix(m)
    hint = elicitation.revision_hint(m)
    if args.pretty:
        text = _pretty_matrix(dev.residuals)
        if hint is None:
            text += "\nnothing to revise: matrix is transitive"
        else:
            text += (
                f"\nlargest residual at ({hint.row + 1}, {hint.col + 1}): "
                f"{hint.current_value:.6g} -> suggest {hint.suggested_value:.6g}"
            )
        _emit(text)
    elif args.format == "csv":
        _emit("\n".join(_csv_line(row) for row in dev.residuals))
    else:
        _emit_json(
            {
                "residuals": [[float(v) for v in row] for row in dev.residuals],
                "frobenius_norm": dev.frobenius_norm(),
                "hint": None
                if hint is None
                else {
                    "row": hint.row,
                    "col": hint.col,
                    "current_value": hint.current_value,
                    "suggested_value": hint.suggested_value,
                },
            }
        )
    return 0


def _cmd_coin(args) -> int:
    prices = elicitation.CoinVector(_parse_prices(_read_input(args.input)))
    m = elicitation.coin_to_matrix(prices)
    seed = args.seed if args.seed is not None else _default_seed()
    report = priority.consistency_report(m, ri_source=_ri_source_from_args(args), delta=args.delta)
    if args.pretty:
        _emit(
            _pretty_matrix(m.entries)
            + f"\n{prices.n} prices replace {prices.n * (prices.n - 1) // 2} pairwise judgments"
            + f"\nintransitivity: {report.intransitivity:.3g} (coherent by construction)"
        )
    elif args.format == "csv":
        _emit(core.to_csv(m))
    else:
        payload = {"matrix": _matrix_payload(m), "report": report.to_dict(), "seed": seed}
        payload["pairwise_judgments_replaced"] = prices.n * (prices.n - 1) // 2
        _emit_json(payload)
    return 0


def _cmd_aggregate(args) -> int:
    obj = _load_json(_read_input(args.input), "panel")
    if not isinstance(obj, dict) or "importance" not in obj or "vectors" not in obj:
        raise ValidationError('panel JSON needs "importance" and "vectors"')
    panel = elicitation.PanelWeights(np.asarray(obj["importance"], dtype=float))
    vectors = [elicitation.CoinVector(np.asarray(v, dtype=float)) for v in obj["vectors"]]
    merged = elicitation.aggregate_panel(vectors, panel)
    if args.pretty:
        _emit("aggregated prices: " + ", ".join(f"{v:.6g}" for v in merged.prices))
    elif args.format == "csv":
        _emit(_csv_line(merged.prices))
    else:
        _emit_json({"prices": [float(v) for v in merged.prices]})
    return 0


def _cmd_synthesize(args) -> int:
    obj = _load_json(_read_input(args.input), "hierarchy")
    if not isinstance(obj, dict) or "criteria" not in obj or "alternatives" not in obj:
        raise ValidationError('hierarchy JSON needs "criteria" and "alternatives"')
    criteria = PriorityVector(np.asarray(obj["criteria"], dtype=float), Normalization.SUM_ONE)
    alternatives = [
        PriorityVector(np.asarray(v, dtype=float), Normalization.SUM_ONE)
        for v in obj["alternatives"]
    ]
    result = elicitation.synthesize_hierarchy(criteria, alternatives)
    if args.pretty:
        lines = ["global weights:"]
        lines += [f"  alternative {i + 1}: {w:.6f}" for i, w in enumerate(result.weights)]
        _emit("\n".join(lines))
    elif args.format == "csv":
        _emit(_csv_line(result.weights))
    else:
        _emit_json({"weights": [float(v) for v in result.weights]})
    return 0


def _cmd_hilbert(args) -> int:
    obj = _load_json(_read_input(args.input), "portfolio pair")
    if not isinstance(obj, dict) or "x" not in obj or "y" not in obj:
        raise ValidationError('portfolio JSON needs "x" and "y"')
    x = metricspace.PortfolioPoint(np.asarray(obj["x"], dtype=float))
    y = metricspace.PortfolioPoint(np.asarray(obj["y"], dtype=float))
    d = metricspace.hilbert_distance(x, y)
    if args.pretty:
        _emit(f"projective distance: {d:.9f}")
    elif args.format == "csv":
        _emit(repr(d))
    else:
        _emit_json({"distance": d})
    return 0


def _cmd_induced(args) -> int:
    obj = _load_json(_read_input(args.input), "matrix pair")
    if not isinstance(obj, dict) or "a" not in obj or "b" not in obj:
        raise ValidationError('matrix-pair JSON needs "a" and "b"')
    a = np.asarray(obj["a"]["entries"] if isinstance(obj["a"], dict) else obj["a"], dtype=float)
    b = np.asarray(obj["b"]["entries"] if isinstance(obj["b"], dict) else obj["b"], dtype=float)
    seed = args.seed if args.seed is not None else _default_seed()
    plan = metricspace.SamplingPlan(samples=args.samples, seed=seed, refine=not args.no_refine)
    if args.mode == "max":
        est = metricspace.induced_max_distance(a, b, plan)
        payload = {
            "mode": "max",
            "value": est.value,
            "samples": est.samples,
            "refined": est.refined,
            "seed": seed,
        }
        csv_text = repr(est.value)
    else:
        est = metricspace.induced_integral_distance(a, b, plan)
        payload = {
            "mode": "integral",
            "value": est.value,
            "std_error": est.std_error,
            "samples": est.samples,
            "seed": seed,
        }
        csv_text = f"{est.value!r},{est.std_error!r}"
    if args.pretty:
        _emit(f"induced {args.mode} distance: {est.value:.9f} ({est.samples} samples, seed {seed})")
    elif args.format == "csv":
        _emit(csv_text)
    else:
        _emit_json(payload)
    return 0


def _cmd_decompose(args) -> int:
    a = _parse_square(_read_input(args.input))
    dec = marketrate.decompose_rate(a)
    if args.pretty:
        _emit("flows:\n" + _pretty_matrix(dec.flows) + "\ngrowths:\n" + _pretty_matrix(dec.growths))
    elif args.format == "csv":
        _emit(
            "\n".join(_csv_line(row) for row in dec.flows)
            + "\n"
            + "\n".join(_csv_line(row) for row in dec.growths)
        )
    else:
        _emit_json(dec.to_dict())
    return 0


def _cmd_eigenbasis(args) -> int:
    a = _parse_square(_read_input(args.input))
    dec = marketrate.complex_eigenbasis(a)
    if args.format == "csv" and not args.pretty:
        raise UsageError("eigenbasis output has no CSV form; use --format json")
    if args.pretty:
        lines = ["eigenvalues:"]
        lines += [f"  {z.real:+.6g} {z.imag:+.6g}i" for z in dec.eigenvalues]
        lines.append(f"reconstruction error: {dec.reconstruction_error:.3e}")
        _emit("\n".join(lines))
    else:
        _emit_json(dec.to_dict())
    return 0


def _parse_n_range(text: str) -> list[int]:
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            values = list(range(int(lo), int(hi) + 1))
        elif "," in text:
            values = [int(p) for p in text.split(",")]
        else:
            values = [int(text)]
    except ValueError as exc:
        raise ValidationError(f"bad dimension range {text!r}: {exc}") from exc
    if not values:
        raise ValidationError(f"empty dimension range {text!r}")
    return values


def _cmd_census(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    n_range = _parse_n_range(args.n)
    progress = (lambda msg: print(msg, file=sys.stderr)) if not args.quiet else None
    results = montecarlo.consistency_census(
        n_range, args.samples, threshold=args.threshold, seed=seed,
        workers=args.workers, progress=progress,
    )
    if args.pretty:
        lines = [f"{'n':>3} {'ri':>10} {'count':>8} {'fraction':>10}"]
        for r in results:
            lines.append(f"{r.n:>3} {r.ri_estimate:>10.4f} {r.cr_below_threshold:>8d} {r.fraction:>10.6f}")
        _emit("\n".join(lines))
    elif args.format == "csv":
        _emit(montecarlo.census_to_csv(results))
    else:
        _emit_json([r.to_dict() for r in results])
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="priorank",
        description="Derive priorities from pairwise comparisons and price the incoherence.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_common(p, matrix_input=True, seeded=False, report=False):
        if matrix_input:
            p.add_argument("input", nargs="?", default="-", help="input file or - for stdin")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--pretty", action="store_true", help="human-readable output")
        if seeded:
            p.add_argument("--seed", type=int, default=None,
                           help=f"random seed (default: ${SEED_ENV_VAR} or 0)")
        if report:
            p.add_argument("--delta", type=float, default=0.1,
                           help="intransitivity acceptance threshold (default 0.1)")
            p.add_argument("--ri-samples", type=int, default=10000)
            p.add_argument("--ri-table", choices=("saaty",), default=None,
                           help="use the published random-index table instead of Monte Carlo")

    p = sub.add_parser("weights", help="derive a priority vector")
    add_common(p)
    p.add_argument("--method", choices=("eigen", "llsm"), default="llsm")
    p.set_defaults(handler=_cmd_weights)

    p = sub.add_parser("consistency", help="coherence report for a matrix")
    add_common(p, seeded=True, report=True)
    p.set_defaults(handler=_cmd_consistency)

    p = sub.add_parser("nearest", help="nearest transitive matrix")
    add_common(p)
    p.set_defaults(handler=_cmd_nearest)

    p = sub.add_parser("deviation", help="log residual matrix and revision hint")
    add_common(p)
    p.set_defaults(handler=_cmd_deviation)

    p = sub.add_parser("coin", help="expand coin prices into a full matrix")
    add_common(p, seeded=True, report=True)
    p.set_defaults(handler=_cmd_coin)

    p = sub.add_parser("aggregate", help="merge a panel of coin vectors")
    add_common(p)
    p.set_defaults(handler=_cmd_aggregate)

    p = sub.add_parser("synthesize", help="two-level hierarchy synthesis")
    add_common(p)
    p.set_defaults(handler=_cmd_synthesize)

    p = sub.add_parser("hilbert", help="projective distance between two portfolios")
    add_common(p)
    p.set_defaults(handler=_cmd_hilbert)

    p = sub.add_parser("induced", help="induced distance between two rate matrices")
    add_common(p, seeded=True)
    p.add_argument("--mode", choices=("max", "integral"), default="max")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--no-refine", action="store_true", help="skip hill-climb refinement")
    p.set_defaults(handler=_cmd_induced)

    p = sub.add_parser("decompose", help="flows/growths split of a rate matrix")
    add_common(p)
    p.set_defaults(handler=_cmd_decompose)

    p = sub.add_parser("eigenbasis", help="complex eigenstructure of a rate matrix")
    add_common(p)
    p.set_defaults(handler=_cmd_eigenbasis)

    p = sub.add_parser("census", help="random-matrix consistency census")
    add_common(p, matrix_input=False, seeded=True)
    p.add_argument("--n", required=True, help="dimension or range, e.g. 4 or 3..10")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--quiet", action="store_true", help="suppress progress on stderr")
    p.set_defaults(handler=_cmd_census)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir", default="./priorank-sessions")
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, priority.ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
