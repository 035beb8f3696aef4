"""
Date: 2024-05-13 09:31:57
LastEditTime: 2024-06-21 15:48:03
Description: linear-regime bounds (DD FNR, COMP FPR), rates and the small-p parameter choice
FilePath: /grouptest/grouptest/theory/bounds.py
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from grouptest import InvalidParameterError

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class BoundValue:
    """A bound after the min{1, .} cap; ``capped`` means the cap was active"""

    value: float
    capped: bool


def _check_prevalence(p):
    p = float(p)
    if not 0.0 < p < 1.0:
        raise InvalidParameterError(f"Prevalence p must be in (0, 1), got {p}")
    return p


def _check_sr(s, r):
    s_arr, r_arr = np.asarray(s), np.asarray(r)
    if np.any(s_arr < 1) or np.any(r_arr < 1):
        raise InvalidParameterError(f"s and r must be at least 1, got s={s}, r={r}")
    return s_arr.astype(np.float64), r_arr.astype(np.float64)


def one_minus_power(p, m):
    """1 - (1 - p)^m, accurate for tiny p and huge m

    When 1 - p is exact in floating point the power is taken directly, so
    dyadic p such as 0.5 give exact results; otherwise it goes through
    log1p/expm1.
    """
    q = 1.0 - p
    m = np.asarray(m, dtype=np.float64)
    if 1.0 - q == p:
        return 1.0 - np.power(q, m)
    return -np.expm1(m * math.log1p(-p))


def log_fnr_max(p, s, r):
    """Natural log of the uncapped DD false-negative bound

    The bound is ((1-(1-p)^(s-1)) + (1-p)(1-(1-p)^(s-1))^r / p)^r. Accepts
    arrays for s and r. Returns -inf where the bound is 0 (s = 1).
    """
    p = _check_prevalence(p)
    s, r = _check_sr(s, r)
    a = one_minus_power(p, s - 1.0)
    with np.errstate(divide="ignore", under="ignore"):
        base = a + (1.0 - p) * np.power(a, r) / p
        out = r * np.log(base)
    return out if out.ndim else float(out)


def fnr_max(p, s, r):
    """DD false-negative bound with the min{1, .} cap

    Examples
    --------
    >>> fnr_max(0.5, 2, 1)
    BoundValue(value=1.0, capped=True)
    """
    log_value = log_fnr_max(p, s, r)
    if log_value >= 0.0:
        return BoundValue(value=1.0, capped=True)
    return BoundValue(value=math.exp(log_value), capped=False)


def log_fpr_max(p, s, r):
    p = _check_prevalence(p)
    s, r = _check_sr(s, r)
    with np.errstate(divide="ignore"):
        out = r * np.log(one_minus_power(p, s - 1.0))
    return out if out.ndim else float(out)


def fpr_max(p, s, r):
    """COMP false-positive bound (1 - (1-p)^(s-1))^r; never above 1"""
    return math.exp(log_fpr_max(p, s, r))


def log_normalized_fpr(p, s, r):
    return log_fpr_max(p, s, r) + math.log1p(-p) - math.log(p)


def normalized_fpr(p, s, r):
    """fpr_max scaled by (n - k) / k = (1 - p) / p: mean false positives per defective"""
    return math.exp(log_normalized_fpr(p, s, r))


def binary_entropy(p):
    """H2(p) in bits, with H2(0) = H2(1) = 0"""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must be in [0, 1], got {p}")
    if p in (0.0, 1.0):
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def individual_testing_rate(p):
    """Rate of testing every item alone, n H2(p) / n"""
    return binary_entropy(_check_prevalence(p))


def rate(n, k, T):
    """log2 C(n, k) / T bits per test"""
    if not 1 <= k <= n or T < 1:
        raise InvalidParameterError(
            f"rate needs 1 <= k <= n and T >= 1, got n={n}, k={k}, T={T}"
        )
    log_binom = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
    return float(log_binom / LOG2 / T)


def linear_rate(p, s, r):
    """n H2(p) / T with T = r n / s"""
    p = _check_prevalence(p)
    s, r = _check_sr(s, r)
    out = s * binary_entropy(p) / r
    return out if out.ndim else float(out)


def corollary1_params(p):
    """Un-rounded (s, r) = (ln2 / p, ln(1/p) / ln2) for the small-p limit"""
    p = _check_prevalence(p)
    return LOG2 / p, -math.log(p) / LOG2


# the COMP small-p statement uses the same parameter choice
comp_corollary_params = corollary1_params
