"""Command-line entry point: ``qstat <command> ...``.

Exit status: 0 success, 1 analysis/data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from enum import Enum
from typing import Any, Sequence

import numpy as np

from . import __version__, dist, sim
from .descr import summary_table
from .errors import QstatError
from .io import load_csv, write_csv
from .resample import DEFAULT_BINS, StatisticKind, permutation_null, permutation_p_value
from .rng import RngSeed
from .stattests import Tail, anova_oneway, t_test_pooled, t_test_welch
from .workflow import SCHEMA_VERSION, WorkflowConfig, recommend, variance_homogeneity_check

DEFAULT_ITERS = 100_000


class UsageError(Exception):
    pass


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def dumps(payload: dict) -> str:
    return json.dumps(_jsonable(payload), indent=2, allow_nan=False) + "\n"


def _emit(payload: dict, out: str | None) -> None:
    text = dumps(payload)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _envelope(command: str, seed: RngSeed | None = None, **body) -> dict:
    payload = {"schema_version": SCHEMA_VERSION, "command": command}
    payload["seed"] = seed.to_dict() if seed is not None else None
    payload.update(body)
    return payload


def _seed(args) -> RngSeed:
    return RngSeed(args.seed, args.stream)


# commands -------------------------------------------------------------------


def cmd_describe(args) -> dict:
    groups = load_csv(args.csv).groups(args.conditions)
    return _envelope(
        "describe",
        pdu_threshold=args.pdu_threshold,
        conditions=summary_table(groups, args.pdu_threshold),
    )


def cmd_ttest(args) -> dict:
    if not args.conditions or len(args.conditions) != 2:
        raise UsageError("ttest needs exactly two --conditions")
    g1, g2 = load_csv(args.csv).groups(args.conditions)
    fn = t_test_pooled if args.method == "pooled" else t_test_welch
    return _envelope("ttest", conditions=args.conditions, result=fn(g1, g2, args.tail).to_dict())


def cmd_anova(args) -> dict:
    groups = load_csv(args.csv).groups(args.conditions)
    res = anova_oneway(groups)
    return _envelope("anova", conditions=[g.id for g in groups], result=res.to_dict())


def cmd_check_variance(args) -> dict:
    groups = load_csv(args.csv).groups(args.conditions)
    check = variance_homogeneity_check(groups, args.threshold)
    return _envelope(
        "check-variance",
        conditions=[g.id for g in groups],
        threshold=args.threshold,
        **check.to_dict(),
    )


def cmd_workflow(args) -> dict:
    groups = load_csv(args.csv).groups(args.conditions)
    cfg = WorkflowConfig(
        alpha=args.alpha,
        variance_ratio_threshold=args.threshold,
        mean_adequate=not args.mean_not_adequate,
        permutation_iters=args.iters,
        seed=_seed(args),
    )
    report = recommend(groups, cfg).to_dict()
    return {"schema_version": report.pop("schema_version"), "command": "workflow", **report}


def cmd_permute(args) -> dict:
    groups = load_csv(args.csv).groups(args.conditions)
    statistic = args.statistic or ("t" if len(groups) == 2 else "f")
    if statistic == "t" and len(groups) != 2:
        raise UsageError("--statistic t needs exactly two conditions")
    seed = _seed(args)
    if statistic == "t":
        kind, tail = StatisticKind.T_POOLED, Tail(args.tail or "two_sided")
        parametric = t_test_pooled(groups[0], groups[1], tail)
    else:
        if args.tail not in (None, "right"):
            raise UsageError("F permutation test is right-tailed only")
        kind, tail = StatisticKind.F_ANOVA, Tail.RIGHT
        parametric = anova_oneway(groups)
    null = permutation_null(groups, kind, args.iters, seed, args.bins)
    if args.hist and null.histogram is not None:
        null.histogram.write_csv(args.hist)
    return _envelope(
        "permute",
        seed,
        conditions=[g.id for g in groups],
        observed=parametric.statistic,
        tail=tail,
        p_value=permutation_p_value(parametric.statistic, null, tail) if null.values.size else math.nan,
        parametric_p_value=parametric.p_value,
        distribution=null.summary(),
        bins=args.bins,
    )


def cmd_sim_clt(args) -> dict:
    seed = _seed(args)
    cfg = sim.CltExperimentConfig(dist.REFERENCE_DISTS[args.dist], args.k, args.n, args.iters, seed)
    res = sim.clt_experiment(cfg, args.bins)
    if args.hist and res.histogram is not None:
        res.histogram.write_csv(args.hist)
    return _envelope(
        "sim clt",
        seed,
        config={"dist_name": args.dist, **cfg.to_dict(), "bins": args.bins},
        ks_distance=res.ks_distance,
        mean=res.mean,
        reference_mean=sim.f_mean(*res.reference.params.values()),
        distribution=res.summary(),
    )


def cmd_sim_two_step(args) -> dict:
    seed = _seed(args)
    spec = dist.REFERENCE_DISTS[args.dist]
    res = sim.two_step_experiment(args.n, spec, args.alpha, args.iters, seed, args.perm_iters)
    return _envelope(
        "sim two-step",
        seed,
        config={
            "dist_name": args.dist,
            "dist": spec.to_dict(),
            "n": args.n,
            "alpha": args.alpha,
            "n_iter": args.iters,
            "perm_iters": args.perm_iters,
        },
        **res.to_dict(),
    )


def cmd_sim_treatment(args) -> None:
    cfg = sim.TreatmentConfig(
        mu_org=args.mu,
        effects=tuple(args.effects),
        noise_sigma=args.noise_sigma,
        mode=args.mode,
        hetero_sigma=args.hetero_sigma,
        n_subjects=args.subjects,
        seed=_seed(args),
    )
    rows = sim.treatment_records(cfg)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    return None


# parser ---------------------------------------------------------------------


def _probability(text: str) -> float:
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 1)")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text} must be >= 1")
    return v


def _add_seed(p, required: bool) -> None:
    p.add_argument("--seed", type=int, required=required, default=None if required else 0, help="master seed")
    p.add_argument("--stream", type=int, default=0, help="stream index (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qstat", description="Statistical tests for subjective quality scores.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def data_command(name, help_, func):
        p = sub.add_parser(name, help=help_)
        p.add_argument("csv", help="long-format CSV with header subject,condition,score")
        p.add_argument("--conditions", nargs="+", metavar="ID", help="conditions to analyse (default: all)")
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.set_defaults(func=func)
        return p

    p = data_command("describe", "per-condition MOS, variance, SOS, kurtosis, PDU", cmd_describe)
    p.add_argument("--pdu-threshold", type=float, default=None, help="scores strictly below count as dissatisfied")

    p = data_command("ttest", "two-sample t test", cmd_ttest)
    p.add_argument("--method", choices=("pooled", "welch"), default="pooled")
    p.add_argument("--tail", choices=[t.value for t in Tail], default="two_sided")

    data_command("anova", "one-way ANOVA", cmd_anova)

    p = data_command("check-variance", "max/min group variance rule", cmd_check_variance)
    p.add_argument("--threshold", type=_probability, default=0.25)

    p = data_command("workflow", "recommended decision flow", cmd_workflow)
    p.add_argument("--alpha", type=_probability, default=0.05)
    p.add_argument("--threshold", type=_probability, default=0.25)
    p.add_argument("--mean-not-adequate", action="store_true", help="mean is not a suitable summary")
    p.add_argument("--iters", type=_positive_int, default=DEFAULT_ITERS)
    _add_seed(p, required=False)

    p = data_command("permute", "permutation test", cmd_permute)
    p.add_argument("--statistic", choices=("t", "f"), default=None)
    p.add_argument("--tail", choices=[t.value for t in Tail], default=None)
    p.add_argument("--iters", type=_positive_int, default=DEFAULT_ITERS)
    p.add_argument("--bins", type=_positive_int, default=DEFAULT_BINS)
    p.add_argument("--hist", help="write histogram CSV here")
    _add_seed(p, required=True)

    p_sim = sub.add_parser("sim", help="Monte Carlo experiments")
    sim_sub = p_sim.add_subparsers(dest="experiment", metavar="EXPERIMENT")
    sim_sub.required = True

    p = sim_sub.add_parser("clt", help="sampling distribution of ANOVA F")
    p.add_argument("--dist", choices=sorted(dist.REFERENCE_DISTS), required=True)
    p.add_argument("--k", type=_positive_int, default=5)
    p.add_argument("--n", type=_positive_int, default=25)
    p.add_argument("--iters", type=_positive_int, default=DEFAULT_ITERS)
    p.add_argument("--bins", type=_positive_int, default=DEFAULT_BINS)
    p.add_argument("--hist", help="write histogram CSV here")
    p.add_argument("--out", help="write JSON here instead of stdout")
    _add_seed(p, required=True)
    p.set_defaults(func=cmd_sim_clt)

    p = sim_sub.add_parser("two-step", help="Type-I rate of normality-gated testing")
    p.add_argument("--dist", choices=sorted(dist.REFERENCE_DISTS), required=True)
    p.add_argument("--n", type=_positive_int, default=25)
    p.add_argument("--alpha", type=_probability, default=0.05)
    p.add_argument("--iters", type=_positive_int, default=10_000)
    p.add_argument("--perm-iters", type=_positive_int, default=999)
    p.add_argument("--out", help="write JSON here instead of stdout")
    _add_seed(p, required=True)
    p.set_defaults(func=cmd_sim_two_step)

    p = sim_sub.add_parser("treatment", help="generate synthetic scores to CSV")
    p.add_argument("--mu", type=float, default=4.0, help="baseline MOS")
    p.add_argument("--effects", type=float, nargs="+", default=[0.0, -1.2, -3.1])
    p.add_argument("--noise-sigma", type=float, default=0.5)
    p.add_argument("--mode", choices=("systematic", "heterogeneous"), default="systematic")
    p.add_argument("--hetero-sigma", type=float, default=0.0)
    p.add_argument("--subjects", type=_positive_int, default=24)
    p.add_argument("--out", help="write CSV here instead of stdout")
    _add_seed(p, required=True)
    p.set_defaults(func=cmd_sim_treatment)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "mode", None) == "systematic" and getattr(args, "hetero_sigma", 0.0):
        print("qstat: error: --hetero-sigma only applies to --mode heterogeneous", file=sys.stderr)
        return 2
    try:
        payload = args.func(args)
        if payload is not None:
            _emit(payload, args.out)
    except UsageError as exc:
        print(f"qstat: error: {exc}", file=sys.stderr)
        return 2
    except (QstatError, OSError) as exc:
        print(f"qstat: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
