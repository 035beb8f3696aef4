"""
Date: 2024-05-27 15:30:44
LastEditTime: 2024-06-28 11:06:19
Description: command-line front end; every subcommand prints values or writes a CSV
FilePath: /grouptest/grouptest/cli.py
"""

import argparse
import logging
import math
import os
import sys

import numpy as np
import pandas as pd
import yaml

from grouptest import SETTING, GroupTestingError, InvalidParameterError, __version__, default_seed
from grouptest.designs import BERNOULLI, BLOCK, DESIGN_KINDS
from grouptest.models.decoders import COMP, DD
from grouptest.designs.design_io import write_design
from grouptest.theory.bounds import (
    comp_corollary_params,
    corollary1_params,
    fnr_max,
    fpr_max,
    individual_testing_rate,
    linear_rate,
    normalized_fpr,
    rate,
)
from grouptest.theory.thresholds import RegimeParams, threshold_report
from grouptest.trainers.optimize import R_MAX, optimize_linear, sweep_constrained, sweep_linear
from grouptest.trainers.oracle import ENUMERATION_LIMIT, ORACLE_TOL, compare_with_formulas
from grouptest.trainers.simulate import (
    ExperimentConfig,
    compare_designs,
    run_experiment,
    trial_design,
)

logger = logging.getLogger(__name__)

SWEEP_LINEAR_COLUMNS = ["p", "alpha", "decoder", "r", "s", "T_over_n", "rate", "bound"]
SWEEP_CONSTRAINED_COLUMNS = ["theta", "beta", "r_dd", "r_comp", "r_converse"]
SIMULATE_COLUMNS = [
    "design",
    "decoder",
    "n",
    "k",
    "s",
    "r",
    "T",
    "trials",
    "seed",
    "fnr_hat",
    "se_fnr",
    "fpr_hat",
    "se_fpr",
    "exact_rate",
    "mean_g",
    "se_g",
    "mean_m",
]
COMPARE_COLUMNS = [
    "p",
    "alpha",
    "design",
    "T",
    "rate",
    "normalized_fpr_hat",
    "se_normalized_fpr",
]

COMMON_DEFAULTS = {
    "log_level": "WARNING",
    "progress": False,
    "workers": int(SETTING.get("workers", 1)),
}
# default p grid of sweep-linear: P_NUM log-spaced points in [P_MIN, P_MAX]
P_MIN, P_MAX, P_NUM = 1e-3, 0.5, 100
DEFAULT_THETA_GRID = [i / 100 for i in range(96)]
DEFAULT_EXPERIMENT = {"design": BLOCK, "decoder": DD, "trials": 1000}

# seed is filled in lazily from GT_SEED / the setting file
DEFAULTS = {
    "theory fnr": {},
    "theory fpr": {},
    "theory nfpr": {},
    "theory rate": {},
    "theory corollary1": {"criterion": DD},
    "theory thresholds": {"beta": 0.0, "epsilon": 0.0},
    "sweep-linear": {
        "alpha": 0.1,
        "decoder": DD,
        "r_max": R_MAX,
        "p_min": P_MIN,
        "p_max": P_MAX,
        "p_num": P_NUM,
        "output": "sweep_linear.csv",
    },
    "sweep-constrained": {"beta": 0.5, "output": "sweep_constrained.csv"},
    "simulate": {**DEFAULT_EXPERIMENT, "output": "simulate.csv"},
    "optimize": {"alpha": 0.1, "criterion": DD, "r_max": R_MAX},
    "oracle": {"limit": ENUMERATION_LIMIT},
    "compare-designs": {
        "p_grid": "0.005,0.01,0.02,0.05",
        "alpha": 0.1,
        "n": 1000,
        "trials": 200,
        "r_max": R_MAX,
        "output": "compare_designs.csv",
    },
}

REQUIRED = {
    "theory fnr": ("p", "s", "r"),
    "theory fpr": ("p", "s", "r"),
    "theory nfpr": ("p", "s", "r"),
    "theory corollary1": ("p",),
    "theory thresholds": ("theta",),
    "simulate": ("n",),
    "optimize": ("p",),
    "oracle": ("n", "k", "s", "r"),
}

SEEDED = ("simulate", "compare-designs")


def fmt(value):
    """Shortest round-trip text of a number; '' for a missing value"""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def parse_grid(text):
    """Comma-separated numbers, or a YAML list; the empty string is the empty grid"""
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    try:
        return [float(x) for x in str(text).split(",") if x.strip() != ""]
    except ValueError as e:
        raise InvalidParameterError(f"Cannot read the grid {text!r}: {e}") from e


def read_config(path):
    """Flat YAML mapping whose keys mirror the long flag names"""
    with open(path, "r") as file:
        data = yaml.safe_load(file)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise InvalidParameterError(f"Config file {path} must hold a flat mapping of flags")
    return {str(key).replace("-", "_"): value for key, value in data.items()}


def write_csv(records, columns, path):
    """One row per record; absent values become empty cells"""
    # object columns are written with str(), the shortest repr for floats
    frame = pd.DataFrame(
        [[_native(record.get(col)) for col in columns] for record in records],
        columns=columns,
        dtype=object,
    )
    target = sys.stdout if path == "-" else path
    try:
        frame.to_csv(target, index=False, lineterminator="\n")
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e
    if path != "-":
        logger.info("Wrote %d rows to %s", len(frame), path)


def _native(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def cmd_theory(args):
    leaf = args.leaf
    if leaf == "theory fnr":
        bound = fnr_max(args.p, args.s, args.r)
        print(f"{fmt(bound.value)} (capped)" if bound.capped else fmt(bound.value))
    elif leaf == "theory fpr":
        print(fmt(fpr_max(args.p, args.s, args.r)))
    elif leaf == "theory nfpr":
        print(fmt(normalized_fpr(args.p, args.s, args.r)))
    elif leaf == "theory rate":
        if None not in (args.n, args.k, args.T):
            print(fmt(rate(args.n, args.k, args.T)))
        elif None not in (args.p, args.s, args.r):
            print(fmt(linear_rate(args.p, args.s, args.r)))
        else:
            raise UsageError("theory rate needs either --n --k --T or --p --s --r")
    elif leaf == "theory corollary1":
        params_fn = comp_corollary_params if args.criterion == COMP else corollary1_params
        s, r = params_fn(args.p)
        print(f"s={fmt(s)}, r={fmt(r)}")
    elif leaf == "theory thresholds":
        regime = RegimeParams(theta=args.theta, beta=args.beta, epsilon=args.epsilon)
        for key, value in threshold_report(regime).items():
            print(f"{key}={fmt(value)}")
    return 0


def linear_p_grid(args):
    if args.p_grid is not None:
        return parse_grid(args.p_grid)
    if not 0 < args.p_min <= args.p_max < 1 or args.p_num < 1:
        raise InvalidParameterError(
            f"Need 0 < p_min <= p_max < 1 and p_num >= 1, got "
            f"{args.p_min}, {args.p_max}, {args.p_num}"
        )
    return [float(p) for p in np.geomspace(args.p_min, args.p_max, args.p_num)]


def cmd_sweep_linear(args):
    rows = sweep_linear(
        linear_p_grid(args),
        args.alpha,
        args.decoder,
        r_max=args.r_max,
        s_max=args.s_max,
        progress=args.progress,
    )
    write_csv([vars(row) for row in rows], SWEEP_LINEAR_COLUMNS, args.output)
    return 0


def cmd_sweep_constrained(args):
    grid = DEFAULT_THETA_GRID if args.theta_grid is None else parse_grid(args.theta_grid)
    rows = sweep_constrained(grid, args.beta)
    write_csv([vars(row) for row in rows], SWEEP_CONSTRAINED_COLUMNS, args.output)
    return 0


def experiment_from_args(args):
    if args.k is None:
        if not 0.0 < args.p < 1.0:
            raise InvalidParameterError(f"Prevalence p must be in (0, 1), got {args.p}")
        k = int(round(args.p * args.n))
    else:
        k = args.k
    if args.design == BLOCK:
        names = ("s", "r")
    elif args.design in DESIGN_KINDS:
        names = ("T", "q") if args.design == BERNOULLI else ("T", "L")
    else:
        raise InvalidParameterError(
            f"Unknown design {args.design!r}, please choose one of {list(DESIGN_KINDS)}"
        )
    params = {name: getattr(args, name) for name in names if getattr(args, name) is not None}
    if args.param_file is not None and not os.path.isfile(args.param_file):
        raise InvalidParameterError(f"Design parameter file {args.param_file} does not exist")
    return ExperimentConfig(
        n=args.n,
        k=k,
        design=args.design,
        params=params,
        decoder=args.decoder,
        trials=args.trials,
        seed=args.seed,
        workers=args.workers,
        param_file=args.param_file,
    ).validate()


def cmd_simulate(args):
    config = experiment_from_args(args)
    if args.dump_design is not None:
        write_design(trial_design(config), args.dump_design)
        logger.info("Wrote the design of trial 0 to %s", args.dump_design)
    stats = run_experiment(config, progress=args.progress)
    params = config.design_params()
    if config.design == BLOCK:
        s, r = params["s"], params["r"]
        T = r * math.ceil(config.n / s)
    else:
        s = r = None
        T = params["T"]
    record = {
        "design": config.design,
        "decoder": config.decoder,
        "n": config.n,
        "k": config.k,
        "s": s,
        "r": r,
        "T": T,
        "trials": stats.trials,
        "seed": config.seed,
        "fnr_hat": stats.fnr_hat,
        "se_fnr": stats.se_fnr,
        "fpr_hat": stats.fpr_hat,
        "se_fpr": stats.se_fpr,
        "exact_rate": stats.exact_rate,
        "mean_g": stats.mean_g,
        "se_g": stats.se_g,
        "mean_m": stats.mean_m,
    }
    write_csv([record], SIMULATE_COLUMNS, args.output)
    return 0


def cmd_optimize(args):
    result = optimize_linear(
        args.p, args.alpha, args.criterion, r_max=args.r_max, s_max=args.s_max
    )
    for key, value in vars(result).items():
        print(f"{key}={value if isinstance(value, str) else fmt(value)}")
    print(f"individual_testing_rate={fmt(individual_testing_rate(args.p))}")
    return 0


def cmd_oracle(args):
    stats, comparisons = compare_with_formulas(
        args.n, args.k, args.s, args.r, limit=args.limit, progress=args.progress
    )
    print(f"configurations={stats.configurations}")
    worst = 0.0
    for item in comparisons:
        print(
            f"{item.quantity} formula={fmt(item.formula)} "
            f"oracle={fmt(item.oracle)} diff={fmt(item.diff)}"
        )
        worst = max(worst, item.diff)
    print(f"dd_fnr oracle={fmt(stats.dd_fnr_exact)}")
    if worst > ORACLE_TOL:
        logger.error("Oracle and formulas differ by %s", worst)
        return 1
    return 0


def cmd_compare_designs(args):
    rows = compare_designs(
        parse_grid(args.p_grid),
        args.alpha,
        args.n,
        args.trials,
        args.seed,
        r_max=args.r_max,
        s_max=args.s_max,
        workers=args.workers,
        progress=args.progress,
    )
    write_csv([vars(row) for row in rows], COMPARE_COLUMNS, args.output)
    return 0


class UsageError(Exception):
    """Bad or missing flags once the config file has been merged in"""


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        dest="config",
        help="flat YAML file whose keys mirror the long flags; explicit flags win",
    )
    common.add_argument(
        "--log-level",
        dest="log_level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging level (default: WARNING)",
    )
    common.add_argument(
        "--progress",
        dest="progress",
        action="store_true",
        default=None,
        help="show progress bars",
    )
    common.add_argument(
        "--workers",
        dest="workers",
        type=int,
        help="worker processes for Monte Carlo trials (default: 1)",
    )
    return common


def _psr(parser):
    parser.add_argument("--p", dest="p", type=float, help="prevalence k/n in (0, 1)")
    parser.add_argument("--s", dest="s", type=int, help="items per test")
    parser.add_argument("--r", dest="r", type=int, help="tests per item (blocks)")


def _grid_limits(parser):
    parser.add_argument(
        "--r-max", dest="r_max", type=int, help=f"largest r searched (default: {R_MAX})"
    )
    parser.add_argument(
        "--s-max", dest="s_max", type=int, help="largest s searched (default: ceil(10 / p))"
    )


def _output(parser, default):
    parser.add_argument(
        "--output", dest="output", help=f"CSV file, '-' for stdout (default: {default})"
    )


def _seed(parser):
    parser.add_argument(
        "--seed",
        dest="seed",
        type=int,
        help="master seed (default: GT_SEED, then ~/grouptest_setting.yml, then 20220101)",
    )


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="grouptest",
        description="Non-adaptive group testing with block doubly-regular designs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    theory = commands.add_parser("theory", help="evaluate bounds, rates and thresholds")
    quantities = theory.add_subparsers(dest="quantity", metavar="quantity")
    quantities.required = True
    for name, help_text in (
        ("fnr", "DD false-negative bound, capped at 1"),
        ("fpr", "COMP false-positive bound"),
        ("nfpr", "COMP false-positive bound times (1 - p) / p"),
    ):
        sub = quantities.add_parser(name, parents=[common], help=help_text)
        _psr(sub)
        sub.set_defaults(leaf=f"theory {name}", handler=cmd_theory)
    sub = quantities.add_parser(
        "rate", parents=[common], help="log2 C(n, k) / T, or n H2(p) / T with T = r n / s"
    )
    sub.add_argument("--n", dest="n", type=int, help="number of items")
    sub.add_argument("--k", dest="k", type=int, help="number of defectives")
    sub.add_argument("--T", dest="T", type=int, help="number of tests")
    _psr(sub)
    sub.set_defaults(leaf="theory rate", handler=cmd_theory)
    sub = quantities.add_parser(
        "corollary1", parents=[common], help="(s, r) = (ln2 / p, log2(1 / p))"
    )
    sub.add_argument("--p", dest="p", type=float, help="prevalence k/n in (0, 1)")
    sub.add_argument(
        "--criterion",
        dest="criterion",
        choices=[DD, COMP],
        help="decoder whose small-p parameters are printed (default: dd)",
    )
    sub.set_defaults(leaf="theory corollary1", handler=cmd_theory)
    sub = quantities.add_parser(
        "thresholds", parents=[common], help="sub-linear and size-constrained constants"
    )
    sub.add_argument("--theta", dest="theta", type=float, help="k = Theta(n^theta)")
    sub.add_argument(
        "--beta", dest="beta", type=float, help="test sizes (n/k)^beta (default: 0)"
    )
    sub.add_argument(
        "--epsilon", dest="epsilon", type=float, help="COMP slack (default: 0)"
    )
    sub.set_defaults(leaf="theory thresholds", handler=cmd_theory)

    sub = commands.add_parser(
        "sweep-linear", parents=[common], help="optimal (r, s) and rate over a p grid"
    )
    sub.add_argument(
        "--p-grid",
        dest="p_grid",
        help="comma-separated p values (default: log-spaced, see --p-min/--p-max/--p-num)",
    )
    sub.add_argument("--p-min", dest="p_min", type=float, help=f"default: {P_MIN}")
    sub.add_argument("--p-max", dest="p_max", type=float, help=f"default: {P_MAX}")
    sub.add_argument("--p-num", dest="p_num", type=int, help=f"default: {P_NUM}")
    sub.add_argument("--alpha", dest="alpha", type=float, help="bound target (default: 0.1)")
    sub.add_argument(
        "--decoder", dest="decoder", choices=[DD, COMP], help="criterion (default: dd)"
    )
    _grid_limits(sub)
    _output(sub, DEFAULTS["sweep-linear"]["output"])
    sub.set_defaults(leaf="sweep-linear", handler=cmd_sweep_linear)

    sub = commands.add_parser(
        "sweep-constrained", parents=[common], help="r constants over a theta grid"
    )
    sub.add_argument(
        "--theta-grid",
        dest="theta_grid",
        help="comma-separated theta values (default: 0, 0.01, ..., 0.95)",
    )
    sub.add_argument("--beta", dest="beta", type=float, help="default: 0.5")
    _output(sub, DEFAULTS["sweep-constrained"]["output"])
    sub.set_defaults(leaf="sweep-constrained", handler=cmd_sweep_constrained)

    sub = commands.add_parser("simulate", parents=[common], help="Monte Carlo error rates")
    sub.add_argument(
        "--design", dest="design", choices=list(DESIGN_KINDS), help="default: block"
    )
    sub.add_argument("--n", dest="n", type=int, help="number of items")
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--k", dest="k", type=int, help="number of defectives")
    group.add_argument("--p", dest="p", type=float, help="prevalence; k = round(p n)")
    sub.add_argument("--s", dest="s", type=int, help="block: items per test (default: 13)")
    sub.add_argument("--r", dest="r", type=int, help="block: tests per item (default: 3)")
    sub.add_argument("--T", dest="T", type=int, help="other designs: tests (default: 300)")
    sub.add_argument("--q", dest="q", type=float, help="bernoulli: inclusion probability")
    sub.add_argument("--L", dest="L", type=int, help="column designs: tests per item")
    sub.add_argument("--decoder", dest="decoder", choices=[DD, COMP], help="default: dd")
    sub.add_argument("--trials", dest="trials", type=int, help="default: 1000")
    sub.add_argument(
        "--param-file",
        dest="param_file",
        help="YAML of design defaults (default: the packaged param.yaml)",
    )
    sub.add_argument(
        "--dump-design",
        dest="dump_design",
        help="also write the design of trial 0 to this file",
    )
    _seed(sub)
    _output(sub, DEFAULTS["simulate"]["output"])
    sub.set_defaults(leaf="simulate", handler=cmd_simulate)

    sub = commands.add_parser("optimize", parents=[common], help="optimal (r, s) at one p")
    sub.add_argument("--p", dest="p", type=float, help="prevalence k/n in (0, 1)")
    sub.add_argument("--alpha", dest="alpha", type=float, help="bound target (default: 0.1)")
    sub.add_argument(
        "--criterion", dest="criterion", choices=[DD, COMP], help="default: dd"
    )
    _grid_limits(sub)
    sub.set_defaults(leaf="optimize", handler=cmd_optimize)

    sub = commands.add_parser(
        "oracle", parents=[common], help="exhaustive check of the exact formulas"
    )
    sub.add_argument("--n", dest="n", type=int, help="number of items")
    sub.add_argument("--k", dest="k", type=int, help="number of defectives")
    sub.add_argument("--s", dest="s", type=int, help="items per test")
    sub.add_argument("--r", dest="r", type=int, help="number of blocks")
    sub.add_argument(
        "--limit",
        dest="limit",
        type=int,
        help=f"largest enumeration accepted (default: {ENUMERATION_LIMIT})",
    )
    sub.set_defaults(leaf="oracle", handler=cmd_oracle)

    sub = commands.add_parser(
        "compare-designs",
        parents=[common],
        help="COMP on block, Bernoulli and near-constant designs at equal T",
    )
    sub.add_argument(
        "--p-grid", dest="p_grid", help="comma-separated p values (default: 0.005,0.01,0.02,0.05)"
    )
    sub.add_argument("--alpha", dest="alpha", type=float, help="default: 0.1")
    sub.add_argument("--n", dest="n", type=int, help="number of items (default: 1000)")
    sub.add_argument("--trials", dest="trials", type=int, help="default: 200")
    _grid_limits(sub)
    _seed(sub)
    _output(sub, DEFAULTS["compare-designs"]["output"])
    sub.set_defaults(leaf="compare-designs", handler=cmd_compare_designs)
    return parser


def _leaf_actions(parser, leaf):
    """dest -> action of the leaf subparser"""
    current = parser
    for word in leaf.split(" "):
        subparsers = next(
            a for a in current._actions if isinstance(a, argparse._SubParsersAction)
        )
        current = subparsers.choices[word]
    return {action.dest: action for action in current._actions if action.dest != "help"}


def resolve_args(parser, args):
    """Merge config file values and defaults under the explicit flags"""
    values = vars(args)
    actions = _leaf_actions(parser, args.leaf)
    explicit = {key for key, value in values.items() if value is not None}
    file_values = read_config(args.config) if args.config else {}
    unknown = set(file_values) - set(actions) - {"config"}
    if unknown:
        raise InvalidParameterError(
            f"Unknown keys in config file {args.config}: {sorted(unknown)}"
        )
    if {"k", "p"} & explicit and args.leaf == "simulate":
        # an explicit --k or --p replaces either one from the file
        file_values.pop("k", None)
        file_values.pop("p", None)
    for key, value in file_values.items():
        if key in explicit:
            continue
        action = actions[key]
        if isinstance(value, str) and action.type is not None:
            try:
                value = action.type(value)
            except ValueError as e:
                raise InvalidParameterError(
                    f"Config value {key}={value!r} is not a valid {action.type.__name__}"
                ) from e
        if action.choices is not None and value not in action.choices:
            raise InvalidParameterError(
                f"Config value {key}={value!r} must be one of {list(action.choices)}"
            )
        values[key] = value
    for key, value in {**COMMON_DEFAULTS, **DEFAULTS.get(args.leaf, {})}.items():
        if values.get(key) is None:
            values[key] = value
    for key in actions:
        values.setdefault(key, None)
    if args.leaf in SEEDED and values.get("seed") is None:
        values["seed"] = default_seed()
    missing = [key for key in REQUIRED.get(args.leaf, ()) if values.get(key) is None]
    if args.leaf == "simulate":
        if values.get("k") is not None and values.get("p") is not None:
            raise UsageError("argument --p: not allowed with argument --k")
        if values.get("k") is None and values.get("p") is None:
            missing.append("k")
    if missing:
        raise UsageError(
            "the following arguments are required: "
            + ", ".join("--" + key.replace("_", "-") for key in missing)
        )
    return args


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = resolve_args(parser, args)
    except UsageError as e:
        parser.error(str(e))
    except (GroupTestingError, OSError, yaml.YAMLError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if not args.progress and logging.getLogger().getEffectiveLevel() <= logging.INFO:
        args.progress = True
    try:
        return args.handler(args)
    except UsageError as e:
        parser.error(str(e))
    except (GroupTestingError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
