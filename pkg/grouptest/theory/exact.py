"""
Date: 2024-05-14 20:18:44
LastEditTime: 2024-06-05 13:27:09
Description: exact finite-n expectations for the block doubly-regular design
FilePath: /grouptest/grouptest/theory/exact.py
"""

import math

import numpy as np

from grouptest import InvalidParameterError


def _check_design(n, k, s, r=1):
    if not (n >= 1 and 1 <= s <= n and r >= 1):
        raise InvalidParameterError(
            f"Need n >= 1, 1 <= s <= n and r >= 1, got n={n}, s={s}, r={r}"
        )
    if not 0 <= k <= n - 1:
        raise InvalidParameterError(f"Need 0 <= k <= n - 1, got k={k}, n={n}")


def _clear_product(n, m, s):
    """prod_{i=1}^{s-1} (1 - m / (n - i))

    The probability that the s - 1 other members of a fixed item's test avoid
    a given set of m items.
    """
    if m > 0 and s - 1 >= n - m:
        # the factor (n - i - m) / (n - i) is zero at i = n - m
        return 0.0
    if m == 0 or s == 1:
        return 1.0
    i = np.arange(1, s, dtype=np.float64)
    return math.exp(float(np.sum(np.log1p(-m / (n - i)))))


def _block_clear(n, m, s):
    """P[the test of a fixed item in one block avoids m given other items]

    When s does not divide n the item sits in the remainder test of
    n mod s items with probability (n mod s) / n.
    """
    full, rem = divmod(n, s)
    clear = _clear_product(n, m, s)
    if rem == 0:
        return clear
    return (full * s * clear + rem * _clear_product(n, m, rem)) / n


def exact_pd_prob(n, k, s, r):
    """P[a fixed non-defective item stays possibly defective]

    In each block the item escapes PD iff its test holds no defective; blocks
    are independent, so the per-block probability is raised to the power r.
    """
    _check_design(n, k, s, r)
    return (1.0 - _block_clear(n, k, s)) ** r


def exact_expected_g(n, k, s, r):
    """E[G]: mean number of non-defectives left in PD"""
    return (n - k) * exact_pd_prob(n, k, s, r)


def exact_masked_prob(n, k, s):
    """P[a fixed defective shares its test of one block with another defective]"""
    _check_design(n, k, s)
    if k < 1:
        raise InvalidParameterError(f"Masking needs at least one defective, got k={k}")
    return 1.0 - _block_clear(n, k - 1, s)


def exact_expected_m(n, k, s):
    """E[M^j]: mean number of masked defectives in one block"""
    return k * exact_masked_prob(n, k, s)
