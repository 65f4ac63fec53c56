"""Command-line entry point.

Exit codes: 0 success, 1 a bench or check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any

from ..gf2 import INFEASIBLE, BitVec
from ..heavy_hitters import HHParams
from ..parity import LabeledSample, empirical_error, recommended_sample_size, run_learn_parity
from ..partition import multiplicities, stable_partition
from ..rng import RandomnessHandle, default_seed
from ..span import (
    ConfigurationError,
    SpanParams,
    run_linear_span,
    threshold_failures,
    threshold_formulas,
    uncovered_fraction,
)
from ..wrapper import DataExhaustedError, ListSource, run_make_replicable
from .algorithms import NAMES, build_algorithm, learner_params, parity_base_learner, wrapper_params
from .benches import (
    NEIGHBORS,
    coverage_bench,
    exhaustive_sensitivity,
    hh_bench,
    random_replacements,
    sensitivity_oracle,
)
from .config import ExperimentConfig, load_config
from .datafile import DatasetFormatError, read_dataset
from .distributions import KINDS, DistributionSpec
from .estimators import estimate_replicability


class UsageError(Exception):
    pass


# --- output -----------------------------------------------------------------

def _text(obj: Any, indent: str = "") -> str:
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, dict) or (isinstance(v, list) and any(isinstance(x, dict) for x in v)):
                lines.append(f"{indent}{k}:")
                lines.append(_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {v}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                body = _text(item, indent + "  ").splitlines()
                body[0] = indent + "- " + body[0][len(indent) + 2 :]
                lines.extend(body)
            else:
                lines.append(f"{indent}- {item}")
    else:
        lines.append(f"{indent}{obj}")
    return "\n".join(lines)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def emit(result: dict, args, table: str | None = None) -> None:
    """Write ``result`` in the requested format.

    csv writes the list at ``table`` (a dotted path into ``result``), or the
    whole result as one row.
    """
    fmt = args.format
    if fmt == "json":
        text = json.dumps(result, sort_keys=True, indent=2) + "\n"
    elif fmt == "csv":
        rows: Any = result
        for key in table.split(".") if table else ():
            rows = rows.get(key) if isinstance(rows, dict) else None
        text = _csv(rows if isinstance(rows, list) else [result])
    else:
        text = _text(result) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# --- helpers ----------------------------------------------------------------

def _handle(args, cfg: ExperimentConfig | None = None) -> RandomnessHandle:
    if args.seed is not None:
        seed = args.seed
    elif cfg is not None:
        seed = cfg.seed
    else:
        seed = default_seed()
    try:
        return RandomnessHandle(seed)
    except ValueError as exc:
        raise UsageError(f"bad seed: {exc}") from None


def _thresholds(args) -> dict:
    out = {}
    if args.override:
        out["threshold_override"] = tuple(args.override)
    if args.scale:
        out["threshold_scale"] = tuple(args.scale)
    return out


def _read(path: str):
    try:
        return read_dataset(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except DatasetFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _config(args) -> ExperimentConfig:
    if getattr(args, "config", None):
        try:
            cfg = load_config(args.config)
        except FileNotFoundError:
            raise UsageError(f"no such config file: {args.config}") from None
        except (ValueError, TypeError) as exc:
            raise UsageError(f"{args.config}: {exc}") from None
    else:
        cfg = ExperimentConfig()
    if getattr(args, "out", None) is None and cfg.out:
        args.out = cfg.out
    return cfg


# --- subcommands ------------------------------------------------------------

def cmd_calc_params(args) -> int:
    t_min, t_max = threshold_formulas(args.d, args.m, args.rho)
    failures = threshold_failures(t_min, t_max, args.d, args.m)
    emit(
        {
            "d": args.d,
            "m": args.m,
            "rho": args.rho,
            "t_min": t_min,
            "t_max": t_max,
            "m_over_d2": args.m / args.d**2,
            "valid": not failures,
            "failures": failures,
            "recommended_sample_size": recommended_sample_size(args.d, args.rho, args.eps, args.delta),
        },
        args,
    )
    return 0


def cmd_partition(args) -> int:
    d, xs, _ = _read(args.input)
    part = stable_partition(xs, d)
    counts = multiplicities(part)
    emit(
        {
            "d": d,
            "sets": [
                {"indices": list(idx), "vectors": [str(xs[i]) for i in idx], "span": part.spans[j].to_strings()}
                for j, idx in enumerate(part.index_sets)
            ],
            "multiplicities": [{"span": V.to_strings(), "dim": V.dim, "count": n} for V, n in counts.items()],
        },
        args,
        table="multiplicities",
    )
    return 0


def cmd_span(args) -> int:
    d, xs, _ = _read(args.input)
    if not xs:
        raise UsageError("dataset is empty")
    m = len(xs)
    override = tuple(args.override) if args.override else None
    if args.scale:
        override = (args.scale[0] * m / d**2, args.scale[1] * m / d**2)
    sp = SpanParams(d, m, args.rho, args.eps, override)
    run = run_linear_span(xs, sp, _handle(args))
    bad = uncovered_fraction(xs, run.subspace)
    ok = bad * len(xs) <= d**2 * run.t_max
    emit(
        {
            "basis": run.subspace.to_strings(),
            "dim": run.subspace.dim,
            "t": run.heavy.chosen_t,
            "t_min": run.t_min,
            "t_max": run.t_max,
            "uncovered_fraction": bad,
            "coverage_bound": d**2 * run.t_max / len(xs),
        },
        args,
    )
    return 0 if ok else 1


def cmd_learn(args) -> int:
    d, xs, ys = _read(args.input)
    if ys is None:
        raise UsageError("learn needs labeled records")
    samples = [LabeledSample(x, y) for x, y in zip(xs, ys)]
    raw = {"rho": args.rho, "eps": args.eps, "delta": args.delta, **_thresholds(args)}
    lp = learner_params(d, raw)
    rnd = _handle(args)
    if args.wrap:
        wp = wrapper_params({**raw, "c_rounds": args.c_rounds, "c_batches": args.c_batches, "c_delta": args.c_delta})
        base = parity_base_learner(lp, args.batch_size or max(1, len(samples) // (wp.rounds * wp.batches)))
        try:
            run = run_make_replicable(base, wp, ListSource(samples), rnd)
        except DataExhaustedError as exc:
            raise UsageError(
                f"{exc}; the wrapper needs up to {wp.rounds * wp.batches * base.sample_size} samples"
            ) from None
        result = {
            "hypothesis": str(run.result),
            "wrapped": True,
            "rounds_run": run.rounds_run,
            "samples_used": run.samples_used,
            "batch_size": base.sample_size,
            "rounds": wp.rounds,
            "batches": wp.batches,
        }
    else:
        lrun = run_learn_parity(samples, lp, rnd)
        result = {
            "hypothesis": str(lrun.result),
            "wrapped": False,
            "subspace": lrun.subspace.to_strings(),
            "covered": lrun.covered,
            "t": lrun.t,
        }
        if lrun.result is not INFEASIBLE:
            result["training_error"] = empirical_error(lrun.result, samples)
    emit(result, args)
    return 0


def _bench_config(args) -> ExperimentConfig:
    cfg = _config(args)
    if args.config:
        return cfg
    if args.kind == "planted-subspace" and args.k is None:
        raise UsageError("--k is required for planted-subspace")
    spec = DistributionSpec(
        kind=args.kind,
        d=args.d,
        k=args.k,
        leak=args.leak,
        hidden_parity=args.hidden_parity,
        random_labels=args.random_labels,
        label_noise=args.label_noise,
    )
    params = {"rho": args.rho, "eps": args.eps, "delta": args.delta, **_thresholds(args)}
    if args.batch_size:
        params["batch_size"] = args.batch_size
    if args.c_batches is not None:
        params["c_batches"] = args.c_batches
    return ExperimentConfig(
        algorithm=args.algorithm,
        params=params,
        distribution=spec,
        m=args.m,
        trials=args.trials,
        distribution_per_trial=args.per_trial,
        target_rate=args.target_rate,
        sizes=args.sizes or [],
    )


def cmd_bench_replicability(args) -> int:
    cfg = _bench_config(args)
    alg = build_algorithm(cfg.algorithm, cfg.distribution.d, cfg.m, cfg.params)
    report = estimate_replicability(
        cfg.distribution, alg, cfg.trials, _handle(args, cfg), cfg.distribution_per_trial
    )
    passed = cfg.target_rate is None or report.wilson_interval[1] >= cfg.target_rate
    emit({"config": cfg.to_dict(), "report": report.to_dict(), "passed": passed}, args, table="report.transcripts")
    return 0 if passed else 1


def cmd_bench_coverage(args) -> int:
    cfg = _bench_config(args)
    sizes = cfg.sizes or [cfg.m]
    p = cfg.params
    rows = coverage_bench(
        cfg.distribution,
        sizes,
        _handle(args, cfg),
        rho=p.get("rho", 0.1),
        eps=p.get("eps", 0.1),
        threshold_scale=tuple(p["threshold_scale"]) if p.get("threshold_scale") else None,
        threshold_override=tuple(p["threshold_override"]) if p.get("threshold_override") else None,
    )
    passed = all(r.ok for r in rows)
    emit({"config": cfg.to_dict(), "rows": [asdict(r) for r in rows], "passed": passed}, args, table="rows")
    return 0 if passed else 1


def cmd_bench_sensitivity(args) -> int:
    rnd = _handle(args)
    if args.exhaustive:
        report = exhaustive_sensitivity(args.d, args.m, args.neighbor)
    elif args.cases:
        if args.neighbor != "replace":
            raise UsageError("--cases only samples replacements")
        report = random_replacements(args.d, args.m, args.cases, rnd)
    else:
        pool = [BitVec(args.d, v) for v in range(1, 1 << args.d)]
        report = sensitivity_oracle(args.d, args.m, pool, args.trials, rnd, args.neighbor)
    passed = report.max_deviation <= args.bound
    emit({"d": args.d, "m": args.m, "bound": args.bound, **report.to_dict(), "passed": passed}, args)
    return 0 if passed else 1


def cmd_bench_hh(args) -> int:
    params = HHParams(args.eps_hh, args.nu_hh, args.rho)
    report = hh_bench(args.freqs, params, args.trials, _handle(args), k=args.k)
    passed = report.soundness_violations == 0 and (
        args.target_rate is None or report.agreement.wilson_interval[1] >= args.target_rate
    )
    emit({"freqs": args.freqs, **report.to_dict(), "passed": passed}, args, table="agreement.transcripts")
    return 0 if passed else 1


# --- parser -----------------------------------------------------------------

def _unit(s: str) -> float:
    v = float(s)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"{s} is not in (0, 1)")
    return v


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{s} is not a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", help="master seed (int or 0x-hex); default $REPPARITY_SEED or 0")
    common.add_argument("--config", help="experiment config file (.json or .yaml)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")

    learning = argparse.ArgumentParser(add_help=False)
    learning.add_argument("--rho", type=_unit, default=0.1)
    learning.add_argument("--eps", type=_unit, default=0.1)
    learning.add_argument("--delta", type=_unit, default=0.05)
    group = learning.add_mutually_exclusive_group()
    group.add_argument("--override", nargs=2, type=float, metavar=("TMIN", "TMAX"))
    group.add_argument("--scale", nargs=2, type=float, metavar=("LO", "HI"),
                       help="thresholds at (LO*m/d^2, HI*m/d^2)")

    parser = argparse.ArgumentParser(prog="repparity", description="Replicable parity learning over GF(2).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calc-params", parents=[common], help="threshold formulas and sample-size advice")
    p.add_argument("-d", type=_positive, required=True)
    p.add_argument("-m", type=_positive, required=True)
    p.add_argument("--rho", type=_unit, default=0.1)
    p.add_argument("--eps", type=_unit, default=0.1)
    p.add_argument("--delta", type=_unit, default=0.05)
    p.set_defaults(func=cmd_calc_params)

    p = sub.add_parser("partition", parents=[common], help="stable partition of a vector file")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("span", parents=[common, learning], help="replicable span of a vector file")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_span)

    p = sub.add_parser("learn", parents=[common, learning], help="learn a parity from a labeled file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--wrap", action="store_true", help="run under the all-distribution wrapper")
    p.add_argument("--batch-size", type=_positive)
    p.add_argument("--c-rounds", type=float, default=4.0)
    p.add_argument("--c-batches", type=float, default=1.0)
    p.add_argument("--c-delta", type=float, default=1.0)
    p.set_defaults(func=cmd_learn)

    bench = argparse.ArgumentParser(add_help=False, parents=[common, learning])
    bench.add_argument("--algorithm", choices=NAMES, default="span")
    bench.add_argument("--kind", choices=KINDS, default="uniform-full")
    bench.add_argument("-d", type=_positive, default=4)
    bench.add_argument("--k", type=int)
    bench.add_argument("--leak", type=float, default=0.0)
    bench.add_argument("--hidden-parity")
    bench.add_argument("--random-labels", action="store_true")
    bench.add_argument("--label-noise", type=float, default=0.0)
    bench.add_argument("-m", type=_positive, default=100)
    bench.add_argument("--trials", type=_positive, default=100)
    bench.add_argument("--per-trial", action="store_true", help="fresh distribution per trial")
    bench.add_argument("--target-rate", type=float)
    bench.add_argument("--sizes", type=_positive, nargs="+")
    bench.add_argument("--batch-size", type=_positive)
    bench.add_argument("--c-batches", type=float)

    p = sub.add_parser("bench-replicability", parents=[bench], help="paired-run agreement rate")
    p.set_defaults(func=cmd_bench_replicability)
    p = sub.add_parser("bench-coverage", parents=[bench], help="uncovered fraction against its bound")
    p.set_defaults(func=cmd_bench_coverage)

    p = sub.add_parser("bench-sensitivity", parents=[common], help="multiplicity sensitivity oracle")
    p.add_argument("-d", type=_positive, default=2)
    p.add_argument("-m", type=_positive, default=4)
    p.add_argument("--trials", type=_positive, default=10)
    p.add_argument("--cases", type=_positive, help="random single-replacement cases instead")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--neighbor", choices=NEIGHBORS, default="replace",
                   help="replace one position, or delete one")
    p.add_argument("--bound", type=int, default=1, help="claimed maximum deviation")
    p.set_defaults(func=cmd_bench_sensitivity)

    p = sub.add_parser("bench-hh", parents=[common], help="heavy-hitter agreement and soundness")
    p.add_argument("--freqs", type=float, nargs="+", default=[0.9])
    p.add_argument("--eps-hh", type=float, default=1 / 12)
    p.add_argument("--nu-hh", type=float, default=2 / 3)
    p.add_argument("--rho", type=_unit, default=0.1)
    p.add_argument("--k", type=_positive)
    p.add_argument("--trials", type=_positive, default=100)
    p.add_argument("--target-rate", type=float)
    p.set_defaults(func=cmd_bench_hh)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ConfigurationError, ValueError) as exc:
        print(f"repparity {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
