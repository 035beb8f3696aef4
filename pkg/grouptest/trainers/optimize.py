"""
Date: 2024-05-20 14:05:33
LastEditTime: 2024-06-25 10:37:48
Description: choose integer (r, s) minimizing T/n = r/s under a bound constraint, and sweep it
FilePath: /grouptest/grouptest/trainers/optimize.py
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from tqdm import tqdm

from grouptest import InvalidParameterError
from grouptest.models.decoders import COMP, DD
from grouptest.theory.bounds import linear_rate, log_fnr_max, log_normalized_fpr
from grouptest.theory.thresholds import (
    as_exact,
    comp_constrained_r,
    converse_r,
    dd_constrained_r,
)

logger = logging.getLogger(__name__)

R_MAX = 20
# s_max defaults to ceil(S_MAX_FACTOR / p); the optimal s grows like 1/p
S_MAX_FACTOR = 10
# s values evaluated at once for a single r
S_CHUNK = 2**16


def _dd_bound(p, s, r):
    log_value = log_fnr_max(p, s, r)
    with np.errstate(under="ignore"):
        return np.where(log_value >= 0.0, 1.0, np.exp(np.minimum(log_value, 0.0)))


def _comp_bound(p, s, r):
    with np.errstate(under="ignore", over="ignore"):
        return np.exp(log_normalized_fpr(p, s, r))


# criterion name -> bound on the (r, s) grid; DD uses the capped FNR bound,
# COMP the normalized FPR bound
CRITERIA = {
    DD: _dd_bound,
    COMP: _comp_bound,
}


@dataclass(frozen=True)
class OptimizeResult:
    p: float
    alpha: float
    criterion: str
    r: int
    s: int
    aspect_ratio: float
    rate: float
    bound: float
    feasible: bool


@dataclass(frozen=True)
class SweepRow:
    p: float
    alpha: float
    decoder: str
    r: int
    s: int
    T_over_n: float
    rate: float
    bound: float

    @classmethod
    def from_result(cls, result):
        return cls(
            p=result.p,
            alpha=result.alpha,
            decoder=result.criterion,
            r=result.r,
            s=result.s,
            T_over_n=result.aspect_ratio,
            rate=result.rate,
            bound=result.bound,
        )


@dataclass(frozen=True)
class ConstrainedRow:
    theta: float
    beta: float
    r_dd: int
    r_comp: int
    # None at theta = 0, where the converse is not stated
    r_converse: Optional[float]


def default_s_max(p):
    return math.ceil(S_MAX_FACTOR / p)


def optimize_linear(p, alpha, criterion=DD, r_max=R_MAX, s_max=None):
    """Exhaustive search for the feasible (r, s) with the smallest r/s

    Parameters
    ----------
    p
        prevalence k/n in (0, 1)
    alpha
        largest permitted bound, in [0, 1)
    criterion
        "dd" bounds the DD false-negative rate, "comp" the COMP normalized
        false-positive rate
    r_max, s_max
        grid limits; s_max defaults to ceil(10 / p)

    Returns
    -------
    OptimizeResult
        ties in r/s go to the smallest r, then the smallest s
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise InvalidParameterError(f"Prevalence p must be in (0, 1), got {p}")
    alpha = float(alpha)
    if not 0.0 <= alpha < 1.0:
        raise InvalidParameterError(
            f"alpha must be in [0, 1), got {alpha}; alpha >= 1 makes the constraint vacuous"
        )
    if criterion not in CRITERIA:
        raise InvalidParameterError(
            f"Unknown criterion {criterion!r}, please choose one of {sorted(CRITERIA)}"
        )
    if s_max is None:
        s_max = default_s_max(p)
    r_max, s_max = int(r_max), int(s_max)
    if r_max < 1 or s_max < 1:
        raise InvalidParameterError(f"r_max and s_max must be >= 1, got {r_max}, {s_max}")
    best = None
    for r in range(1, r_max + 1):
        found = _largest_feasible_s(CRITERIA[criterion], p, r, s_max, alpha)
        if found is None:
            continue
        s, value = found
        # r/s < best_r/best_s in integers; ties keep the smaller r found first
        if best is None or r * best[1] < best[0] * s:
            best = (r, s, value)
    if best is None:
        logger.warning("No (r, s) pair meets alpha=%s at p=%s", alpha, p)
        return OptimizeResult(p, alpha, criterion, 0, 0, math.inf, 0.0, math.inf, False)
    r, s, value = best
    return OptimizeResult(
        p=p,
        alpha=alpha,
        criterion=criterion,
        r=r,
        s=s,
        aspect_ratio=r / s,
        rate=linear_rate(p, s, r),
        bound=value,
        feasible=True,
    )


def _largest_feasible_s(bound_fn, p, r, s_max, alpha):
    """(s, bound) for the largest s <= s_max with bound(p, s, r) <= alpha, or None

    s is scanned from the top in chunks of S_CHUNK, so memory stays bounded
    whatever s_max is.
    """
    for stop in range(s_max, 0, -S_CHUNK):
        s_chunk = np.arange(max(1, stop - S_CHUNK + 1), stop + 1, dtype=np.int64)
        bound = np.asarray(bound_fn(p, s_chunk, r))
        feasible = np.flatnonzero(bound <= alpha)
        if len(feasible):
            i = feasible[-1]
            return int(s_chunk[i]), float(bound[i])
    return None


def sweep_linear(p_grid, alpha, criterion=DD, r_max=R_MAX, s_max=None, progress=False):
    """optimize_linear at every p of the grid, in increasing p"""
    rows = []
    for p in tqdm(sorted(float(p) for p in p_grid), desc="sweeping p", disable=not progress):
        result = optimize_linear(p, alpha, criterion, r_max=r_max, s_max=s_max)
        logger.debug("p=%s: r=%s s=%s rate=%s", p, result.r, result.s, result.rate)
        rows.append(SweepRow.from_result(result))
    return rows


def sweep_constrained(theta_grid, beta):
    """r constants of DD, COMP and the converse at each theta

    beta = 0 gives the beta -> 0 limit.
    """
    beta_exact = as_exact(beta)
    if not 0 <= beta_exact < 1:
        raise InvalidParameterError(f"beta must be in [0, 1), got {beta}")
    rows = []
    for theta in theta_grid:
        rows.append(
            ConstrainedRow(
                theta=float(theta),
                beta=float(beta),
                r_dd=dd_constrained_r(theta, beta),
                r_comp=comp_constrained_r(theta, beta, 0),
                r_converse=converse_r(theta, beta) if as_exact(theta) > 0 else None,
            )
        )
    return rows
