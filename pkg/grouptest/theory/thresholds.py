"""
Date: 2024-05-15 10:46:21
LastEditTime: 2024-06-24 18:12:36
Description: sub-linear and size-constrained thresholds on the number of tests
FilePath: /grouptest/grouptest/theory/thresholds.py
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from grouptest import InvalidParameterError

LOG2 = math.log(2.0)
# decimals with a denominator above this are compared with BOUNDARY_TOL instead
MAX_EXACT_DENOMINATOR = 10**9
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class RegimeParams:
    """k = Theta(n^theta), test sizes rho = Theta((n/k)^beta), slack epsilon

    beta = 0 stands for the beta -> 0 limit of the size-constrained formulas.
    """

    theta: float
    beta: float = 0.0
    epsilon: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta < 1.0:
            raise InvalidParameterError(f"theta must be in [0, 1), got {self.theta}")
        if not 0.0 <= self.beta < 1.0:
            raise InvalidParameterError(f"beta must be in [0, 1), got {self.beta}")
        if self.epsilon < 0.0:
            raise InvalidParameterError(f"epsilon must be >= 0, got {self.epsilon}")


def as_exact(x):
    """x as a Fraction when it is a short decimal or ratio, else as a float

    Floats go through their shortest repr, so 0.9 becomes 9/10 rather than
    the binary value closest to it.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    frac = Fraction(str(x)) if isinstance(x, str) else Fraction(repr(float(x)))
    if frac.denominator <= MAX_EXACT_DENOMINATOR:
        return frac
    return float(frac)


def ceil_exact(x):
    if isinstance(x, Fraction):
        return math.ceil(x)
    return math.ceil(x - BOUNDARY_TOL)


def smallest_int_above(x):
    """Smallest integer strictly greater than x"""
    if isinstance(x, Fraction):
        return math.floor(x) + 1
    return math.floor(x + BOUNDARY_TOL) + 1


def _regime(theta, beta, theta_open=False):
    theta, beta = as_exact(theta), as_exact(beta)
    if not 0 <= theta < 1 or (theta_open and theta == 0):
        raise InvalidParameterError(
            f"theta must be in {'(0, 1)' if theta_open else '[0, 1)'}, got {float(theta)}"
        )
    if not 0 <= beta < 1:
        raise InvalidParameterError(f"beta must be in [0, 1), got {float(beta)}")
    return theta, beta


def dd_sublinear_coeff(theta):
    """max{theta, 1 - theta} / ln^2 2: DD tests needed per k ln n"""
    theta = float(theta)
    if not 0.0 < theta < 1.0:
        raise InvalidParameterError(f"theta must be in (0, 1), got {theta}")
    return max(theta, 1.0 - theta) / LOG2**2


def dd_sublinear_tests(theta, k, n, epsilon=0.0):
    """(1 + epsilon) max{theta, 1 - theta} / ln^2 2 * k ln n"""
    if epsilon < 0:
        raise InvalidParameterError(f"epsilon must be >= 0, got {epsilon}")
    if k < 1 or n < 2:
        raise InvalidParameterError(f"Need k >= 1 and n >= 2, got k={k}, n={n}")
    return (1.0 + epsilon) * dd_sublinear_coeff(theta) * k * math.log(n)


def dd_constrained_r(theta, beta):
    """Smallest r meeting the DD achievability conditions with s = rho

    For theta >= 1/2: r > theta / ((1-theta)(1-beta)) and r >= (2-beta)/(1-beta);
    for theta < 1/2: r >= (1 - theta beta) / ((1-theta)(1-beta)).
    """
    theta, beta = _regime(theta, beta)
    scale = (1 - theta) * (1 - beta)
    if theta >= Fraction(1, 2):
        return max(
            smallest_int_above(theta / scale),
            ceil_exact((2 - beta) / (1 - beta)),
        )
    return max(1, ceil_exact((1 - theta * beta) / scale))


def converse_r(theta, beta):
    """max{2, 1/(1-beta), ceil((1 - (1-theta)(2 beta + 1)) / ((1-theta)(1-beta)))}

    An int when the maximum is an integer, otherwise a float (the 1/(1-beta)
    term need not be integral).
    """
    theta, beta = _regime(theta, beta, theta_open=True)
    scale = (1 - theta) * (1 - beta)
    ceiling_term = ceil_exact((1 - (1 - theta) * (2 * beta + 1)) / scale)
    value = max(2, 1 / (1 - beta), ceiling_term)
    if value == int(value):
        return int(value)
    return float(value)


def comp_constrained_r(theta, beta, epsilon=0):
    """ceil((1 + epsilon) / ((1-theta)(1-beta))): COMP with a doubly-regular design"""
    theta, beta = _regime(theta, beta)
    epsilon = as_exact(epsilon)
    if epsilon < 0:
        raise InvalidParameterError(f"epsilon must be >= 0, got {float(epsilon)}")
    return ceil_exact((1 + epsilon) / ((1 - theta) * (1 - beta)))


def constrained_reference_r(theta, beta):
    """Earlier size-constrained constants

    ``previous_converse`` is 1/(1-beta); ``beta0_limit`` is the matching
    constant max(2, 1 + floor(theta/(1-theta))) known for constant
    test sizes.
    """
    theta, beta = _regime(theta, beta)
    return {
        "previous_converse": float(1 / (1 - beta)),
        "beta0_limit": max(2, 1 + math.floor(theta / (1 - theta))),
    }


def sublinear_reference_constants(theta):
    """Earlier unconstrained sub-linear constants, in units of k ln n"""
    theta = float(theta)
    if not 0.0 < theta < 1.0:
        raise InvalidParameterError(f"theta must be in (0, 1), got {theta}")
    worst = max(theta, 1.0 - theta)
    return {
        "bernoulli_comp": math.e,
        "bernoulli_dd": math.e * worst,
        "near_constant_comp": 1.0 / LOG2**2,
        "near_constant_dd": worst / LOG2**2,
        "near_constant_converse": max(theta / LOG2**2, (1.0 - theta) / LOG2),
    }


def threshold_report(regime):
    """All size-constrained and sub-linear constants of a RegimeParams

    Keys without meaning at theta = 0 (the converse and the sub-linear
    constants) are left out there.
    """
    theta, beta = regime.theta, regime.beta
    report = {
        "theta": float(theta),
        "beta": float(beta),
        "r_dd": dd_constrained_r(theta, beta),
        "r_comp": comp_constrained_r(theta, beta, regime.epsilon),
    }
    if as_exact(theta) > 0:
        report["r_converse"] = converse_r(theta, beta)
        report["dd_sublinear_coeff"] = dd_sublinear_coeff(theta)
        report.update(sublinear_reference_constants(theta))
    report.update(constrained_reference_r(theta, beta))
    return report
