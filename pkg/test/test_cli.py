"""
Date: 2024-06-01 09:40:17
LastEditTime: 2024-06-28 11:20:36
Description: Test the command-line front end
FilePath: /grouptest/test/test_cli.py
"""

import pytest

from grouptest import cli
from grouptest.cli import (
    COMPARE_COLUMNS,
    SIMULATE_COLUMNS,
    SWEEP_CONSTRAINED_COLUMNS,
    SWEEP_LINEAR_COLUMNS,
    fmt,
    main,
    parse_grid,
)
from grouptest.designs.design_io import read_design
from grouptest.theory.bounds import comp_corollary_params, individual_testing_rate
from grouptest.trainers.simulate import ExperimentConfig, trial_design

SIMULATE_FLAGS = [
    "simulate",
    "--design",
    "block",
    "--n",
    "120",
    "--k",
    "6",
    "--s",
    "6",
    "--r",
    "3",
    "--decoder",
    "dd",
    "--trials",
    "50",
    "--seed",
    "7",
]


def read_lines(path):
    with open(path, "r") as file:
        return file.read().splitlines()


def test_fmt():
    assert fmt(None) == ""
    assert fmt(True) == "true"
    assert fmt(3) == "3"
    assert fmt(1.0) == "1.0"
    assert fmt(0.1) == "0.1"


def test_parse_grid():
    assert parse_grid("0.5, 0.1") == [0.5, 0.1]
    assert parse_grid("") == []
    assert parse_grid([0.2, 1]) == [0.2, 1.0]


def test_theory_values(capsys):
    assert main(["theory", "fnr", "--p", "0.5", "--s", "2", "--r", "1"]) == 0
    assert capsys.readouterr().out.strip() == "1.0 (capped)"
    assert main(["theory", "fpr", "--p", "0.4", "--s", "1", "--r", "3"]) == 0
    assert capsys.readouterr().out.strip() == "0.0"
    assert main(["theory", "nfpr", "--p", "0.5", "--s", "2", "--r", "3"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(0.125, rel=1e-14)
    assert main(["theory", "rate", "--p", "0.5", "--s", "1", "--r", "1"]) == 0
    assert capsys.readouterr().out.strip() == "1.0"
    assert main(["theory", "corollary1", "--p", "0.5"]) == 0
    out = capsys.readouterr().out.strip()
    assert out.startswith("s=1.386")
    assert out.endswith(", r=1.0")


def test_corollary1_for_comp(capsys):
    assert main(["theory", "corollary1", "--p", "0.25", "--criterion", "comp"]) == 0
    s, r = comp_corollary_params(0.25)
    assert capsys.readouterr().out.strip() == f"s={fmt(s)}, r={fmt(r)}"


def test_theory_rate_needs_a_parameter_set(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["theory", "rate", "--n", "100"])
    assert excinfo.value.code == 2


def test_theory_thresholds(capsys):
    assert main(["theory", "thresholds", "--theta", "0.5", "--beta", "0.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "r_dd=3" in lines
    assert "r_comp=4" in lines
    assert "r_converse=2" in lines
    assert main(["theory", "thresholds", "--theta", "0"]) == 0
    assert not any(
        line.startswith("r_converse=") for line in capsys.readouterr().out.splitlines()
    )


def test_missing_required_flag(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["theory", "fnr", "--p", "0.1", "--s", "3"])
    assert excinfo.value.code == 2
    assert "--r" in capsys.readouterr().err


def test_invalid_parameter_exits_one(capsys):
    assert main(["theory", "fnr", "--p", "1.5", "--s", "3", "--r", "2"]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_sweep_linear_single_point(tmp_path):
    output = tmp_path / "sweep.csv"
    assert main(["sweep-linear", "--p-grid", "0.5", "--output", str(output)]) == 0
    assert read_lines(output) == [
        ",".join(SWEEP_LINEAR_COLUMNS),
        "0.5,0.1,dd,1,1,1.0,1.0,0.0",
    ]


def test_sweep_linear_empty_grid(tmp_path):
    output = tmp_path / "sweep.csv"
    assert main(["sweep-linear", "--p-grid", "", "--output", str(output)]) == 0
    assert read_lines(output) == [",".join(SWEEP_LINEAR_COLUMNS)]


def test_sweep_linear_default_grid(tmp_path):
    output = tmp_path / "sweep.csv"
    args = ["sweep-linear", "--p-min", "0.1", "--p-max", "0.5", "--p-num", "4"]
    assert main(args + ["--decoder", "comp", "--output", str(output)]) == 0
    lines = read_lines(output)
    assert len(lines) == 5
    assert lines[1].startswith("0.1,0.1,comp,")
    assert lines[-1].startswith("0.5,0.1,comp,")


def test_sweep_constrained(tmp_path):
    output = tmp_path / "constrained.csv"
    args = ["sweep-constrained", "--theta-grid", "0,0.5", "--beta", "0.5"]
    assert main(args + ["--output", str(output)]) == 0
    lines = read_lines(output)
    assert lines[0] == ",".join(SWEEP_CONSTRAINED_COLUMNS)
    assert lines[1].endswith(",")
    assert lines[2] == "0.5,0.5,3,4,2"


def test_simulate_is_byte_identical(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(SIMULATE_FLAGS + ["--output", str(first)]) == 0
    assert main(SIMULATE_FLAGS + ["--output", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    lines = read_lines(first)
    assert lines[0] == ",".join(SIMULATE_COLUMNS)
    assert lines[1].startswith("block,dd,120,6,6,3,60,50,7,")


def test_simulate_config_file(tmp_path, sim_config_file):
    from_flags, from_file = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(SIMULATE_FLAGS + ["--output", str(from_flags)]) == 0
    assert main(["simulate", "--config", sim_config_file, "--output", str(from_file)]) == 0
    assert from_flags.read_bytes() == from_file.read_bytes()


def test_simulate_flag_overrides_config(tmp_path, sim_config_file):
    output = tmp_path / "a.csv"
    args = ["simulate", "--config", sim_config_file, "--p", "0.1", "--output", str(output)]
    assert main(args) == 0
    assert read_lines(output)[1].startswith("block,dd,120,12,")


def test_simulate_param_file(tmp_path):
    param_file = tmp_path / "param.yaml"
    param_file.write_text("block:\n  s: 6\n  r: 3\n")
    # the same run with s and r left to the parameter file
    flags = SIMULATE_FLAGS[:7] + SIMULATE_FLAGS[11:]
    from_flags, from_file = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(SIMULATE_FLAGS + ["--output", str(from_flags)]) == 0
    args = flags + ["--param-file", str(param_file), "--output", str(from_file)]
    assert main(args) == 0
    assert from_flags.read_bytes() == from_file.read_bytes()


def test_simulate_missing_param_file(tmp_path, capsys):
    args = SIMULATE_FLAGS + ["--param-file", str(tmp_path / "missing.yaml")]
    assert main(args + ["--output", str(tmp_path / "a.csv")]) == 1
    assert "missing.yaml" in capsys.readouterr().err


def test_simulate_dump_design(tmp_path):
    dump = tmp_path / "design.txt"
    args = SIMULATE_FLAGS + ["--dump-design", str(dump), "--output", str(tmp_path / "a.csv")]
    assert main(args) == 0
    design = read_design(dump)
    config = ExperimentConfig(n=120, k=6, params={"s": 6, "r": 3}, trials=50, seed=7)
    assert design == trial_design(config)
    assert (design.n, design.num_tests) == (120, 60)


def test_simulate_k_and_p_exclusive(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["simulate", "--n", "100", "--k", "5", "--p", "0.05"])
    assert excinfo.value.code == 2


def test_simulate_non_block_leaves_block_columns_empty(tmp_path):
    output = tmp_path / "a.csv"
    args = ["simulate", "--design", "bernoulli", "--n", "50", "--k", "2", "--T", "20"]
    assert main(args + ["--q", "0.2", "--trials", "5", "--seed", "1", "--output", str(output)]) == 0
    row = read_lines(output)[1].split(",")
    assert row[:7] == ["bernoulli", "dd", "50", "2", "", "", "20"]
    assert row[-1] == ""


def test_simulate_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("GT_SEED", "11")
    output = tmp_path / "a.csv"
    args = ["simulate", "--n", "40", "--k", "2", "--s", "4", "--r", "2", "--trials", "3"]
    assert main(args + ["--output", str(output)]) == 0
    assert read_lines(output)[1].split(",")[8] == "11"


def test_unknown_config_key(tmp_path, capsys):
    config = tmp_path / "bad.yaml"
    config.write_text("n: 10\nbogus: 1\n")
    assert main(["simulate", "--config", str(config)]) == 1
    assert "bogus" in capsys.readouterr().err


def test_optimize(capsys):
    assert main(["optimize", "--p", "0.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "criterion=dd" in lines
    assert "r=1" in lines
    assert "s=1" in lines
    assert "feasible=true" in lines
    assert f"individual_testing_rate={fmt(individual_testing_rate(0.5))}" in lines


def test_oracle(capsys):
    assert main(["oracle", "--n", "4", "--k", "2", "--s", "2", "--r", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "configurations=9"
    assert lines[1].startswith("pd_prob formula=")
    assert lines[-1].startswith("dd_fnr oracle=")


def test_oracle_too_large(capsys):
    assert main(["oracle", "--n", "30", "--k", "5", "--s", "5", "--r", "3"]) == 1
    assert "exceeds the limit" in capsys.readouterr().err


def test_compare_designs_defaults(tmp_path, mocker, monkeypatch):
    monkeypatch.setenv("GT_SEED", "5")
    compare = mocker.patch.object(cli, "compare_designs", return_value=[])
    output = tmp_path / "compare.csv"
    assert main(["compare-designs", "--output", str(output)]) == 0
    args, _ = compare.call_args
    assert args == ([0.005, 0.01, 0.02, 0.05], 0.1, 1000, 200, 5)
    assert read_lines(output) == [",".join(COMPARE_COLUMNS)]


def test_unwritable_output(tmp_path, capsys):
    output = tmp_path / "missing" / "sweep.csv"
    assert main(["sweep-linear", "--p-grid", "0.5", "--output", str(output)]) == 1
    assert "cannot write" in capsys.readouterr().err
