"""
Date: 2024-05-24 09:12:30
LastEditTime: 2024-06-26 21:40:05
Description: exhaustive enumeration of small block designs, checked against the exact formulas
FilePath: /grouptest/grouptest/trainers/oracle.py
"""

import itertools
import logging
import math
from typing import NamedTuple

from tqdm import tqdm

from grouptest import EnumerationTooLargeError, InvalidParameterError
from grouptest.theory.exact import exact_expected_g, exact_expected_m, exact_pd_prob

logger = logging.getLogger(__name__)

ENUMERATION_LIMIT = 10**6
ORACLE_TOL = 1e-12


class OracleStats(NamedTuple):
    e_g: float
    e_m: float
    pd_prob: float
    dd_fnr_exact: float
    configurations: int


class OracleComparison(NamedTuple):
    quantity: str
    formula: float
    oracle: float

    @property
    def diff(self):
        return abs(self.formula - self.oracle)


def num_partitions(n, s):
    """Partitions of n items into floor(n/s) tests of size s plus one of n mod s"""
    full, rem = divmod(n, s)
    return math.factorial(n) // (
        math.factorial(s) ** full * math.factorial(full) * math.factorial(rem)
    )


def enumeration_size(n, s, r):
    return num_partitions(n, s) ** r


def canonical_partitions(n, s):
    """Every partition the block generator can produce, each exactly once

    A partition is a tuple of tests; every test is sorted and tests are
    ordered by their first item.
    """
    full, rem = divmod(n, s)

    def extend(unused, full_left, rem_left):
        if not unused:
            yield ()
            return
        first, rest = unused[0], unused[1:]
        sizes = ([s] if full_left else []) + ([rem] if rem_left else [])
        for size in sizes:
            for others in itertools.combinations(rest, size - 1):
                remaining = tuple(i for i in rest if i not in others)
                if size == s:
                    tails = extend(remaining, full_left - 1, rem_left)
                else:
                    tails = extend(remaining, full_left, False)
                for tail in tails:
                    yield ((first,) + others,) + tail

    yield from extend(tuple(range(n)), full, rem > 0)


def _masked(partition, k):
    masked = 0
    for test in partition:
        hits = sum(1 for item in test if item < k)
        if hits >= 2:
            masked += hits
    return masked


def brute_force_block_stats(n, k, s, r, limit=ENUMERATION_LIMIT, progress=False):
    """Exact E[G], E[M^j], P[PD] and DD FNR by enumerating every r-tuple of partitions

    The defective set is fixed to {0, ..., k-1}; the design distribution is
    invariant under relabelling items, so this loses nothing. P[PD] is taken
    for item k, the first non-defective.

    Raises
    ------
    EnumerationTooLargeError
        when the number of r-tuples exceeds ``limit``
    """
    if not (n >= 2 and 1 <= s <= n and r >= 1):
        raise InvalidParameterError(
            f"Need n >= 2, 1 <= s <= n and r >= 1, got n={n}, s={s}, r={r}"
        )
    if not 1 <= k <= n - 1:
        raise InvalidParameterError(f"Need 1 <= k <= n - 1, got k={k}, n={n}")
    size = enumeration_size(n, s, r)
    if size > limit:
        raise EnumerationTooLargeError(size, limit)
    partitions = list(canonical_partitions(n, s))
    masked = [_masked(partition, k) for partition in partitions]
    logger.info("Enumerating %d partitions to the power %d", len(partitions), r)

    total_g = total_m = total_pd = total_fn = 0
    for choice in tqdm(
        itertools.product(range(len(partitions)), repeat=r),
        total=size,
        desc="enumerating",
        disable=not progress,
    ):
        tests = [test for j in choice for test in partitions[j]]
        in_pd = [True] * n
        for test in tests:
            # tests are sorted, so a test holds a defective iff its first item does
            if test[0] >= k:
                for item in test:
                    in_pd[item] = False
        found = set()
        for test in tests:
            if test[0] < k:
                members = [item for item in test if in_pd[item]]
                if len(members) == 1:
                    found.add(members[0])
        total_g += sum(in_pd[k:])
        total_pd += in_pd[k]
        total_fn += k - len(found)
        total_m += sum(masked[j] for j in choice)

    return OracleStats(
        e_g=total_g / size,
        e_m=total_m / (size * r),
        pd_prob=total_pd / size,
        dd_fnr_exact=total_fn / (size * k),
        configurations=size,
    )


def compare_with_formulas(n, k, s, r, limit=ENUMERATION_LIMIT, progress=False):
    """Oracle values next to exact_pd_prob, exact_expected_g and exact_expected_m"""
    stats = brute_force_block_stats(n, k, s, r, limit=limit, progress=progress)
    return stats, [
        OracleComparison("pd_prob", exact_pd_prob(n, k, s, r), stats.pd_prob),
        OracleComparison("e_g", exact_expected_g(n, k, s, r), stats.e_g),
        OracleComparison("e_m", exact_expected_m(n, k, s), stats.e_m),
    ]
