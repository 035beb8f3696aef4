"""
Date: 2024-05-09 16:27:38
LastEditTime: 2024-06-14 10:15:52
Description: COMP and DD decoding
FilePath: /grouptest/grouptest/models/decoders.py
"""

from dataclasses import dataclass, field

import numpy as np
from numba import jit

from grouptest import DimensionMismatchError

COMP = "comp"
DD = "dd"


@dataclass(frozen=True, eq=False)
class DecodeResult:
    """Output of a decoder

    Attributes
    ----------
    estimate
        sorted indices declared defective
    pd_set
        sorted indices of the possibly-defective items (never in a negative test)
    algorithm
        "comp" or "dd"
    """

    estimate: np.ndarray = field(repr=False)
    pd_set: np.ndarray = field(repr=False)
    algorithm: str


@jit(nopython=True)
def possibly_defective(test_ptr, test_items, bits, n):
    """Mask of items that appear in no negative test; untested items stay in"""
    in_pd = np.ones(n, dtype=np.bool_)
    for t in range(len(bits)):
        if not bits[t]:
            for e in range(test_ptr[t], test_ptr[t + 1]):
                in_pd[test_items[e]] = False
    return in_pd


@jit(nopython=True)
def definite_defectives(test_ptr, test_items, bits, in_pd):
    """Mask of items that are the only PD member of some positive test"""
    in_dd = np.zeros(len(in_pd), dtype=np.bool_)
    for t in range(len(bits)):
        if bits[t]:
            count = 0
            last = -1
            for e in range(test_ptr[t], test_ptr[t + 1]):
                item = test_items[e]
                if in_pd[item]:
                    count += 1
                    last = item
                    if count > 1:
                        break
            if count == 1:
                in_dd[last] = True
    return in_dd


def _check_outcomes(design, outcomes):
    if len(outcomes) != design.num_tests:
        raise DimensionMismatchError(
            f"Got {len(outcomes)} outcomes for a design with {design.num_tests} tests"
        )


def decode_comp(design, outcomes):
    """COMP: every item outside all negative tests is declared defective"""
    _check_outcomes(design, outcomes)
    in_pd = possibly_defective(design.test_ptr, design.test_items, outcomes.bits, design.n)
    pd_set = np.flatnonzero(in_pd)
    return DecodeResult(estimate=pd_set, pd_set=pd_set, algorithm=COMP)


def decode_dd(design, outcomes):
    """DD: declare the items that are the unique PD member of a positive test"""
    _check_outcomes(design, outcomes)
    in_pd = possibly_defective(design.test_ptr, design.test_items, outcomes.bits, design.n)
    in_dd = definite_defectives(design.test_ptr, design.test_items, outcomes.bits, in_pd)
    return DecodeResult(
        estimate=np.flatnonzero(in_dd), pd_set=np.flatnonzero(in_pd), algorithm=DD
    )
