"""
Date: 2024-05-10 10:03:27
LastEditTime: 2024-06-27 17:44:10
Description: Some common fixtures for testing
FilePath: /grouptest/test/conftest.py
"""

import os

import pytest

from grouptest.designs.test_design import TestDesign, gen_block_doubly_regular


@pytest.fixture()
def seed():
    return 20220101


@pytest.fixture()
def block_design(seed):
    return gen_block_doubly_regular(n=60, s=6, r=3, seed=seed)


@pytest.fixture()
def hand_design():
    """n=4 with tests {0,1}, {1,2}, {2,3}"""
    return TestDesign.from_edges(
        n=4,
        num_tests=3,
        tests=[0, 0, 1, 1, 2, 2],
        items=[0, 1, 1, 2, 2, 3],
        kind="bernoulli",
        params={"q": 0.5},
    )


@pytest.fixture()
def pair_design():
    """n=4 with tests {0,1}, {2,3}"""
    return TestDesign.from_edges(
        n=4,
        num_tests=2,
        tests=[0, 0, 1, 1],
        items=[0, 1, 2, 3],
        kind="block",
        params={"s": 2, "r": 1},
        block_boundaries=((0, 2),),
    )


@pytest.fixture()
def sim_config_file():
    return os.path.join(os.path.dirname(__file__), "runsim.yaml")
