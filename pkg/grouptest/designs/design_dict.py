"""
Date: 2024-05-07 10:01:47
LastEditTime: 2024-06-03 16:41:55
Description: DESIGN_DICT
FilePath: /grouptest/grouptest/designs/design_dict.py
"""

from grouptest import InvalidParameterError
from grouptest.designs import BERNOULLI, BLOCK, CONSTANT, NEAR_CONSTANT
from grouptest.designs.test_design import (
    gen_bernoulli,
    gen_block_doubly_regular,
    gen_constant_column,
    gen_near_constant_column,
)

DESIGN_DICT = {
    BLOCK: gen_block_doubly_regular,
    BERNOULLI: gen_bernoulli,
    NEAR_CONSTANT: gen_near_constant_column,
    CONSTANT: gen_constant_column,
}


def make_design(kind, n, seed, **params):
    """Generate a design of the given kind

    Parameters
    ----------
    kind
        a key of DESIGN_DICT
    n
        number of items
    seed
        64-bit seed
    params
        s and r for "block"; T and q for "bernoulli"; T and L for the column designs
    """
    if kind not in DESIGN_DICT:
        raise InvalidParameterError(
            f"Unknown design kind {kind!r}, please choose one of {sorted(DESIGN_DICT)}"
        )
    try:
        return DESIGN_DICT[kind](n=n, seed=seed, **params)
    except TypeError as e:
        raise InvalidParameterError(f"Bad parameters for a {kind} design: {e}") from e
