"""
Date: 2024-06-02 10:21:16
LastEditTime: 2024-06-28 11:40:52
Description: regenerate every CSV behind the rate, threshold and design-comparison curves
FilePath: /grouptest/scripts/make_figure_data.py
"""

import argparse
import os
import sys
from pathlib import Path

repo_path = os.path.dirname(Path(os.path.abspath(__file__)).parent)
sys.path.append(repo_path)
from grouptest.cli import main as grouptest_main


def make_figure_data(args):
    result_dir = Path(args.result_dir)
    result_dir.mkdir(parents=True, exist_ok=True)
    common = ["--log-level", args.log_level] + (["--progress"] if args.progress else [])
    jobs = []
    # DD rate curves at several alpha, and the COMP curve
    for alpha in args.alphas:
        jobs.append(
            [
                "sweep-linear",
                "--decoder",
                "dd",
                "--alpha",
                str(alpha),
                "--output",
                str(result_dir / f"sweep_linear_dd_alpha{alpha}.csv"),
            ]
        )
    jobs.append(
        [
            "sweep-linear",
            "--decoder",
            "comp",
            "--alpha",
            str(args.alphas[0]),
            "--output",
            str(result_dir / f"sweep_linear_comp_alpha{args.alphas[0]}.csv"),
        ]
    )
    for beta in args.betas:
        jobs.append(
            [
                "sweep-constrained",
                "--beta",
                str(beta),
                "--output",
                str(result_dir / f"sweep_constrained_beta{beta}.csv"),
            ]
        )
    if not args.skip_simulation:
        jobs.append(
            [
                "compare-designs",
                "--n",
                str(args.n),
                "--trials",
                str(args.trials),
                "--seed",
                str(args.seed),
                "--workers",
                str(args.workers),
                "--output",
                str(result_dir / "compare_designs.csv"),
            ]
        )
    for job in jobs:
        status = grouptest_main(job + common)
        if status:
            sys.exit(status)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(
        description="Write the CSV data of all rate, threshold and comparison curves"
    )
    parser.add_argument(
        "--result_dir",
        dest="result_dir",
        help="The directory the CSV files go to",
        default=os.path.join(repo_path, "results"),
        type=str,
    )
    parser.add_argument(
        "--alphas",
        dest="alphas",
        help="FNR targets of the DD rate curves; the first one is also used for COMP",
        nargs="+",
        default=[0.1, 0.3],
        type=float,
    )
    parser.add_argument(
        "--betas",
        dest="betas",
        help="test-size exponents of the size-constrained curves",
        nargs="+",
        default=[0.1, 0.5, 0.9],
        type=float,
    )
    parser.add_argument(
        "--n",
        dest="n",
        help="items in the design comparison",
        default=1000,
        type=int,
    )
    parser.add_argument(
        "--trials",
        dest="trials",
        help="Monte Carlo trials per design in the comparison",
        default=200,
        type=int,
    )
    parser.add_argument(
        "--seed",
        dest="seed",
        help="master seed of the comparison",
        default=20220101,
        type=int,
    )
    parser.add_argument(
        "--workers",
        dest="workers",
        help="worker processes for the comparison",
        default=1,
        type=int,
    )
    parser.add_argument(
        "--skip_simulation",
        dest="skip_simulation",
        help="only write the analytic curves",
        action="store_true",
    )
    parser.add_argument(
        "--log_level",
        dest="log_level",
        help="logging level passed to grouptest",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    )
    parser.add_argument(
        "--progress",
        dest="progress",
        help="show progress bars",
        action="store_true",
    )
    the_args = parser.parse_args()
    print("All processes are started at", the_args)
    make_figure_data(the_args)
