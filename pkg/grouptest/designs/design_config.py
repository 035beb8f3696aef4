"""
Date: 2024-05-07 09:15:22
LastEditTime: 2024-06-18 17:29:40
Description: default parameters of each design kind
FilePath: /grouptest/grouptest/designs/design_config.py
"""

import logging
import os

import yaml

from grouptest.designs import BERNOULLI, BLOCK, CONSTANT, DESIGN_KINDS, NEAR_CONSTANT

logger = logging.getLogger(__name__)

PARAM_FILE = os.path.join(os.path.dirname(__file__), "param.yaml")


def read_design_param_dict(file_path=PARAM_FILE):
    """Design defaults from a YAML file, falling back to DESIGN_PARAM_DICT

    The file maps a design kind to its parameters, e.g.::

        block:
          s: 13
          r: 3

    Kinds missing from the file keep their built-in defaults.
    """
    try:
        with open(file_path, "r") as file:
            data = yaml.safe_load(file)
        if not isinstance(data, dict):
            raise ValueError(f"{file_path} does not hold a mapping of design kinds")
        unknown = set(data) - set(DESIGN_KINDS)
        if unknown:
            raise ValueError(f"unknown design kinds {sorted(unknown)}")
        merged = {kind: dict(params) for kind, params in DESIGN_PARAM_DICT.items()}
        for kind, params in data.items():
            merged[kind].update(params or {})
        return merged
    except Exception as e:
        logger.error("Error: %s, we directly use the default DESIGN_PARAM_DICT.", e)
        return DESIGN_PARAM_DICT


DESIGN_PARAM_DICT = {
    BLOCK: {
        "s": 13,  # items per test
        "r": 3,  # blocks, i.e. tests per item
    },
    BERNOULLI: {
        "T": 300,  # number of tests
        "q": 0.05,  # inclusion probability of each cell
    },
    NEAR_CONSTANT: {
        "T": 300,
        "L": 3,  # draws with replacement per item
    },
    CONSTANT: {
        "T": 300,
        "L": 3,  # distinct tests per item
    },
}
