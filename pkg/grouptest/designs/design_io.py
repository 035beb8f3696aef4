"""
Date: 2024-05-08 15:37:09
LastEditTime: 2024-06-12 11:20:44
Description: plain-text dump of a test design
FilePath: /grouptest/grouptest/designs/design_io.py
"""

import math

import numpy as np

from grouptest import InvalidParameterError
from grouptest.designs import BLOCK, KIND_PARAMS
from grouptest.designs.test_design import TestDesign

NO_SEED = "-"


def _format_params(kind, params):
    return ",".join(f"{key}={params[key]!r}" for key in KIND_PARAMS[kind])


def _parse_params(kind, text):
    params = {}
    for pair in text.split(","):
        key, _, value = pair.partition("=")
        if key not in KIND_PARAMS[kind]:
            raise InvalidParameterError(f"Unexpected parameter {key!r} for a {kind} design")
        params[key] = float(value) if key == "q" else int(value)
    if set(params) != set(KIND_PARAMS[kind]):
        raise InvalidParameterError(
            f"A {kind} design needs parameters {KIND_PARAMS[kind]}, got {sorted(params)}"
        )
    return params


def write_design(design, path, seed=None):
    """Write ``design`` to ``path``

    The first line is ``n T kind params seed``; then one line per test lists
    its 0-based item indices separated by spaces (an empty test gives an
    empty line).
    """
    if seed is None:
        seed = design.seed
    header = " ".join(
        [
            str(design.n),
            str(design.num_tests),
            design.kind,
            _format_params(design.kind, design.params),
            NO_SEED if seed is None else str(seed),
        ]
    )
    with open(path, "w", newline="\n") as f:
        f.write(header + "\n")
        for t in range(design.num_tests):
            f.write(" ".join(str(i) for i in design.items_of_test(t)) + "\n")


def read_design(path):
    """Read a design written by write_design"""
    with open(path, "r") as f:
        lines = f.read().split("\n")
    fields = lines[0].split()
    if len(fields) != 5:
        raise InvalidParameterError(
            f"Header of {path} must read 'n T kind params seed', got {lines[0]!r}"
        )
    n, num_tests, kind = int(fields[0]), int(fields[1]), fields[2]
    if kind not in KIND_PARAMS:
        raise InvalidParameterError(f"Unknown design kind {kind!r} in {path}")
    params = _parse_params(kind, fields[3])
    seed = None if fields[4] == NO_SEED else int(fields[4])
    body = lines[1 : 1 + num_tests]
    if len(body) != num_tests:
        raise InvalidParameterError(
            f"{path} announces {num_tests} tests but holds {len(body)}"
        )
    tests, items = [], []
    for t, line in enumerate(body):
        row = [int(i) for i in line.split()]
        if any(i < 0 or i >= n for i in row):
            raise InvalidParameterError(f"Test {t} in {path} names an item outside [0, {n})")
        tests.extend([t] * len(row))
        items.extend(row)
    boundaries = None
    if kind == BLOCK:
        per_block = math.ceil(n / params["s"])
        boundaries = tuple(
            (j * per_block, (j + 1) * per_block) for j in range(params["r"])
        )
    return TestDesign.from_edges(
        n,
        num_tests,
        np.array(tests, dtype=np.int64),
        np.array(items, dtype=np.int64),
        kind,
        params,
        block_boundaries=boundaries,
        seed=seed,
    )
