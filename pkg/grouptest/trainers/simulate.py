"""
Date: 2024-05-22 16:40:12
LastEditTime: 2024-06-26 22:03:51
Description: Monte Carlo trials of design -> outcomes -> decoding, and their aggregate error statistics
FilePath: /grouptest/grouptest/trainers/simulate.py
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np
from numba import jit
from tqdm import tqdm

from grouptest import InvalidParameterError, default_seed
from grouptest.designs import BERNOULLI, BLOCK, DESIGN_KINDS, NEAR_CONSTANT
from grouptest.designs.design_config import PARAM_FILE, read_design_param_dict
from grouptest.designs.design_dict import make_design
from grouptest.models.decoders import COMP, DD
from grouptest.models.model import run_tests, sample_defective_set
from grouptest.models.model_dict import DECODER_DICT
from grouptest.random_streams import derive_seed
from grouptest.theory.bounds import LOG2, rate
from grouptest.trainers.optimize import default_s_max, optimize_linear

logger = logging.getLogger(__name__)

DESIGN_STREAM = 0
DEFECTIVE_STREAM = 1


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a simulation run

    ``params`` holds the design parameters: s and r for "block", T and q for
    "bernoulli", T and L for "near_constant" and "constant". Missing ones are
    taken from ``param_file``, the packaged param.yaml by default.
    """

    n: int
    k: int
    design: str = BLOCK
    params: dict = field(default_factory=dict)
    decoder: str = DD
    trials: int = 1000
    seed: int = field(default_factory=default_seed)
    workers: int = 1
    param_file: Optional[str] = None

    def design_params(self):
        merged = dict(read_design_param_dict(self.param_file or PARAM_FILE)[self.design])
        merged.update(self.params)
        return merged

    def validate(self):
        if self.design not in DESIGN_KINDS:
            raise InvalidParameterError(
                f"Unknown design {self.design!r}, please choose one of {list(DESIGN_KINDS)}"
            )
        if self.decoder not in DECODER_DICT:
            raise InvalidParameterError(
                f"Unknown decoder {self.decoder!r}, please choose one of {sorted(DECODER_DICT)}"
            )
        if self.n < 1 or not 0 <= self.k <= self.n:
            raise InvalidParameterError(f"Need n >= 1 and 0 <= k <= n, got n={self.n}, k={self.k}")
        if self.trials < 1:
            raise InvalidParameterError(f"trials must be at least 1, got {self.trials}")
        if self.workers < 1:
            raise InvalidParameterError(f"workers must be at least 1, got {self.workers}")
        return self

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class TrialMetrics:
    false_negatives: int
    false_positives: int
    # non-defectives left in PD
    pd_nondef_count: int
    exact: bool
    # block designs only: masked defectives in each block
    masked_per_block: Optional[tuple] = None


@dataclass(frozen=True)
class AggregateStats:
    trials: int
    n: int
    k: int
    fnr_hat: float
    fpr_hat: float
    exact_rate: float
    mean_g: float
    mean_m: Optional[float]
    se_fnr: float
    se_fpr: float
    se_g: float
    se_m: Optional[float]


@jit(nopython=True)
def defectives_per_test(test_ptr, test_items, is_defective):
    counts = np.zeros(len(test_ptr) - 1, dtype=np.int64)
    for t in range(len(test_ptr) - 1):
        for e in range(test_ptr[t], test_ptr[t + 1]):
            if is_defective[test_items[e]]:
                counts[t] += 1
    return counts


def masked_per_block(design, defectives):
    """Defectives whose test in block j holds another defective, for each block j"""
    counts = defectives_per_test(design.test_ptr, design.test_items, defectives.mask())
    masked = np.where(counts >= 2, counts, 0)
    return tuple(int(masked[start:stop].sum()) for start, stop in design.block_boundaries)


def draw_design(kind, params, n, seed):
    return make_design(kind, n, derive_seed(seed, DESIGN_STREAM), **params)


def trial_design(config, trial=0):
    """The design used by trial ``trial`` of run_experiment(config)"""
    config.validate()
    if not 0 <= trial < config.trials:
        raise InvalidParameterError(f"trial must be in [0, {config.trials}), got {trial}")
    return draw_design(
        config.design, config.design_params(), config.n, derive_seed(config.seed, trial)
    )


def run_trial(kind, params, n, k, decoder, seed):
    """One draw of design and defective set, decoded and scored

    Parameters
    ----------
    kind, params
        design kind and its parameters, see make_design
    n, k
        items and defectives
    decoder
        "comp" or "dd"
    seed
        trial seed; the design and the defective set use its substreams 0 and 1

    Returns
    -------
    TrialMetrics
    """
    if decoder not in DECODER_DICT:
        raise InvalidParameterError(
            f"Unknown decoder {decoder!r}, please choose one of {sorted(DECODER_DICT)}"
        )
    design = draw_design(kind, params, n, seed)
    defectives = sample_defective_set(n, k, derive_seed(seed, DEFECTIVE_STREAM))
    outcomes = run_tests(design, defectives)
    result = DECODER_DICT[decoder](design, outcomes)
    is_defective = defectives.mask()
    hits = int(np.count_nonzero(is_defective[result.estimate]))
    false_negatives = k - hits
    false_positives = len(result.estimate) - hits
    pd_nondef = len(result.pd_set) - int(np.count_nonzero(is_defective[result.pd_set]))
    return TrialMetrics(
        false_negatives=false_negatives,
        false_positives=false_positives,
        pd_nondef_count=pd_nondef,
        exact=false_negatives == 0 and false_positives == 0,
        masked_per_block=masked_per_block(design, defectives) if kind == BLOCK else None,
    )


@dataclass
class _Totals:
    """Integer sums over trials; adding chunks in any order gives the same totals"""

    trials: int = 0
    fn: int = 0
    fn2: int = 0
    fp: int = 0
    fp2: int = 0
    g: int = 0
    g2: int = 0
    exact: int = 0
    m: int = 0
    m2: int = 0
    blocks: int = 0

    def add(self, metrics):
        self.trials += 1
        self.fn += metrics.false_negatives
        self.fn2 += metrics.false_negatives**2
        self.fp += metrics.false_positives
        self.fp2 += metrics.false_positives**2
        self.g += metrics.pd_nondef_count
        self.g2 += metrics.pd_nondef_count**2
        self.exact += int(metrics.exact)
        if metrics.masked_per_block is not None:
            masked = sum(metrics.masked_per_block)
            self.m += masked
            self.m2 += masked**2
            self.blocks = len(metrics.masked_per_block)

    def merge(self, other):
        for name in ("trials", "fn", "fn2", "fp", "fp2", "g", "g2", "exact", "m", "m2"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.blocks = max(self.blocks, other.blocks)
        return self


def _mean_and_se(total, total_sq, trials, scale):
    """Mean and standard error of x / scale from integer sums of x and x^2"""
    if scale == 0:
        return 0.0, 0.0
    mean = total / (trials * scale)
    if trials < 2:
        return mean, 0.0
    # exact integer numerator keeps the variance independent of summation order
    var = (trials * total_sq - total**2) / (trials * (trials - 1) * scale**2)
    return mean, math.sqrt(max(var, 0.0) / trials)


def _run_chunk(config, start, stop, progress=False):
    totals = _Totals()
    params = config.design_params()
    for trial in tqdm(range(start, stop), desc="trials", disable=not progress):
        totals.add(
            run_trial(
                config.design,
                params,
                config.n,
                config.k,
                config.decoder,
                derive_seed(config.seed, trial),
            )
        )
    return totals


def _chunks(trials, workers):
    size = math.ceil(trials / workers)
    return [(start, min(trials, start + size)) for start in range(0, trials, size)]


def summarize(totals, n, k):
    fnr_hat, se_fnr = _mean_and_se(totals.fn, totals.fn2, totals.trials, k)
    fpr_hat, se_fpr = _mean_and_se(totals.fp, totals.fp2, totals.trials, n - k)
    mean_g, se_g = _mean_and_se(totals.g, totals.g2, totals.trials, 1)
    mean_m = se_m = None
    if totals.blocks:
        mean_m, se_m = _mean_and_se(totals.m, totals.m2, totals.trials, totals.blocks)
    return AggregateStats(
        trials=totals.trials,
        n=n,
        k=k,
        fnr_hat=fnr_hat,
        fpr_hat=fpr_hat,
        exact_rate=totals.exact / totals.trials,
        mean_g=mean_g,
        mean_m=mean_m,
        se_fnr=se_fnr,
        se_fpr=se_fpr,
        se_g=se_g,
        se_m=se_m,
    )


def run_experiment(config, progress=False):
    """Aggregate ``config.trials`` independent trials

    Trial t uses the seed derived from (config.seed, t), so the result does
    not depend on ``config.workers``. FNR and FPR are ratios of sums: total
    false negatives over trials * k and total false positives over
    trials * (n - k).

    Returns
    -------
    AggregateStats
    """
    config.validate()
    if config.workers == 1:
        totals = _run_chunk(config, 0, config.trials, progress)
    else:
        chunks = _chunks(config.trials, config.workers)
        logger.info("Running %d trials in %d chunks", config.trials, len(chunks))
        totals = _Totals()
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_run_chunk, config, a, b) for a, b in chunks]
            for future in futures:
                totals.merge(future.result())
    return summarize(totals, config.n, config.k)


@dataclass(frozen=True)
class ComparisonRow:
    p: float
    alpha: float
    design: str
    T: int
    rate: float
    normalized_fpr_hat: float
    se_normalized_fpr: float


def comparison_designs(n, k, s, r):
    """Designs compared at the test budget of the block design with (s, r)

    The Bernoulli design includes each cell with probability ln2 / k and the
    near-constant design draws round(T ln2 / k) tests per item.
    """
    T = r * math.ceil(n / s)
    return T, [
        (BLOCK, {"s": s, "r": r}),
        (BERNOULLI, {"T": T, "q": min(1.0, LOG2 / k)}),
        (NEAR_CONSTANT, {"T": T, "L": max(1, round(T * LOG2 / k))}),
    ]


def compare_designs(
    p_grid, alpha, n, trials, seed, r_max=20, s_max=None, workers=1, progress=False
):
    """COMP normalized FPR of three designs at the COMP-optimal block budget

    For each p the block doubly-regular (r, s) minimizing r/s subject to a
    normalized FPR bound of alpha is chosen; all designs then get the same T.
    """
    rows = []
    for i, p in enumerate(tqdm(sorted(float(p) for p in p_grid), disable=not progress)):
        k = max(1, round(p * n))
        best = optimize_linear(
            p, alpha, COMP, r_max=r_max, s_max=min(n, s_max or default_s_max(p))
        )
        T, designs = comparison_designs(n, k, best.s, best.r)
        for j, (kind, params) in enumerate(designs):
            config = ExperimentConfig(
                n=n,
                k=k,
                design=kind,
                params=params,
                decoder=COMP,
                trials=trials,
                seed=derive_seed(seed, i, j),
                workers=workers,
            )
            stats = run_experiment(config)
            scale = (n - k) / k
            rows.append(
                ComparisonRow(
                    p=p,
                    alpha=float(alpha),
                    design=kind,
                    T=T,
                    rate=rate(n, k, T),
                    normalized_fpr_hat=stats.fpr_hat * scale,
                    se_normalized_fpr=stats.se_fpr * scale,
                )
            )
    return rows


def with_k_from_p(config, p):
    """Copy of ``config`` with k = round(p n)"""
    if not 0.0 < p < 1.0:
        raise InvalidParameterError(f"Prevalence p must be in (0, 1), got {p}")
    return replace(config, k=int(round(p * config.n)))
