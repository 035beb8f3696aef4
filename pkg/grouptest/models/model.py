"""
Date: 2024-05-08 19:44:05
LastEditTime: 2024-06-14 10:02:31
Description: combinatorial prior and noiseless OR test outcomes
FilePath: /grouptest/grouptest/models/model.py
"""

from dataclasses import dataclass, field

import numpy as np
from numba import jit

from grouptest import DimensionMismatchError, InvalidParameterError
from grouptest.random_streams import check_seed, substream


@dataclass(frozen=True, eq=False)
class DefectiveSet:
    """Sorted indices of the defective items among n"""

    indices: np.ndarray = field(repr=False)
    n: int

    @property
    def k(self):
        return len(self.indices)

    def mask(self):
        is_defective = np.zeros(self.n, dtype=np.bool_)
        is_defective[self.indices] = True
        return is_defective

    def __eq__(self, other):
        if not isinstance(other, DefectiveSet):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.indices, other.indices)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class OutcomeVector:
    """Per-test results; True means positive"""

    bits: np.ndarray

    def __len__(self):
        return len(self.bits)

    @property
    def num_positive(self):
        return int(np.count_nonzero(self.bits))

    def __eq__(self, other):
        if not isinstance(other, OutcomeVector):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    __hash__ = None


def make_defective_set(indices, n):
    indices = np.unique(np.asarray(indices, dtype=np.int64))
    if len(indices) and (indices[0] < 0 or indices[-1] >= n):
        raise InvalidParameterError(f"Defective indices must lie in [0, {n})")
    indices.setflags(write=False)
    return DefectiveSet(indices=indices, n=int(n))


@jit(nopython=True)
def partial_shuffle(n, targets):
    """First k entries of a Fisher-Yates shuffle of 0..n-1

    targets[i] is the uniform draw from [i, n) for position i.
    """
    pool = np.arange(n)
    k = len(targets)
    for i in range(k):
        j = targets[i]
        tmp = pool[i]
        pool[i] = pool[j]
        pool[j] = tmp
    return pool[:k].copy()


def sample_defective_set(n, k, seed):
    """Draw K uniformly from the k-subsets of n items

    Parameters
    ----------
    n
        number of items
    k
        number of defectives, 0 <= k <= n
    seed
        64-bit seed

    Returns
    -------
    DefectiveSet
    """
    seed = check_seed(seed)
    n, k = int(n), int(k)
    if n < 1:
        raise InvalidParameterError(f"n must be at least 1, got {n}")
    if not 0 <= k <= n:
        raise InvalidParameterError(f"k must be in [0, n={n}], got {k}")
    targets = substream(seed, 0).integers(
        np.arange(k, dtype=np.int64), n, dtype=np.int64
    )
    chosen = np.sort(partial_shuffle(n, targets))
    chosen.setflags(write=False)
    return DefectiveSet(indices=chosen, n=n)


@jit(nopython=True)
def or_outcomes(test_ptr, test_items, is_defective):
    num_tests = len(test_ptr) - 1
    bits = np.zeros(num_tests, dtype=np.bool_)
    for t in range(num_tests):
        for e in range(test_ptr[t], test_ptr[t + 1]):
            if is_defective[test_items[e]]:
                bits[t] = True
                break
    return bits


def run_tests(design, defectives):
    """Outcome of every test: positive iff it holds at least one defective

    An empty test is negative.
    """
    if defectives.n != design.n:
        raise DimensionMismatchError(
            f"Defective set is over {defectives.n} items but the design has {design.n}"
        )
    bits = or_outcomes(design.test_ptr, design.test_items, defectives.mask())
    bits.setflags(write=False)
    return OutcomeVector(bits=bits)


def run_tests_dense(matrix, defectives):
    """Per-cell evaluation on a T x n 0/1 matrix; reference for run_tests"""
    matrix = np.asarray(matrix)
    if matrix.shape[1] != defectives.n:
        raise DimensionMismatchError(
            f"Matrix has {matrix.shape[1]} columns but the defective set is over "
            f"{defectives.n} items"
        )
    is_defective = defectives.mask()
    bits = np.array(
        [
            any(bool(matrix[t, i]) and bool(is_defective[i]) for i in range(matrix.shape[1]))
            for t in range(matrix.shape[0])
        ],
        dtype=np.bool_,
    )
    return OutcomeVector(bits=bits)
