"""Sampling-redundancy bound of sparse recovery and its Monte-Carlo check.

The bound relates the sparsity of a signal (fraction of nonzero transform
coefficients) to the measurement redundancy (measurements per nonzero
coefficient) required for reliable recovery:

    redundancy > -2 * log(redundancy * sparsity)

The logarithm base is a parameter (natural by default). ``min_redundancy``
solves for the break-even redundancy at a given sparsity; the Monte-Carlo
experiment measures how often the largest spectral magnitudes of a
randomly subsampled sparse signal point at the wrong components.
"""

import math

import numpy as np

from .seeds import substream
from .transforms import dct1, idct1

__all__ = [
    "LOG_BASES",
    "RELATIVE_FREQUENCIES",
    "bound_satisfied",
    "min_redundancy",
    "freq_error_probability",
]

LOG_BASES = {"natural": math.e, "base10": 10.0, "base2": 2.0}

# relative positions (fractions of the spectral baseband) from which the
# Monte-Carlo component frequencies are drawn
RELATIVE_FREQUENCIES = (0.1, 0.3, 0.5, 0.7, 0.9)


def _margin(sparsity: float, redundancy: float, base: float) -> float:
    return redundancy + 2.0 * math.log(redundancy * sparsity) / math.log(base)


def _check_base(log_base: str) -> float:
    if log_base not in LOG_BASES:
        raise ValueError(f"unknown log base {log_base!r}; expected one of {tuple(LOG_BASES)}")
    return LOG_BASES[log_base]


def bound_satisfied(sparsity: float, redundancy: float,
                    log_base: str = "natural") -> tuple[bool, float]:
    """Whether (sparsity, redundancy) satisfies the recovery bound.

    Returns (satisfied, margin); the margin is redundancy + 2*log(R*Ss),
    positive when the bound holds.
    """
    base = _check_base(log_base)
    if not 0.0 < sparsity < 1.0:
        raise ValueError("sparsity must lie in (0, 1)")
    if redundancy <= 0.0:
        raise ValueError("redundancy must be positive")
    margin = _margin(sparsity, redundancy, base)
    return margin > 0.0, margin


def min_redundancy(sparsity: float, log_base: str = "natural") -> tuple[float, bool]:
    """Break-even redundancy R* solving R = -2*log(R*Ss), by bisection.

    Returns (R*, vacuous). The bound is flagged vacuous when R* <= 1:
    for sparsities at or above base**(-1/2) even redundancy 1 satisfies it.
    """
    base = _check_base(log_base)
    if not 0.0 < sparsity < 1.0:
        raise ValueError("sparsity must lie in (0, 1)")
    lo = 1e-12
    hi = 1.0
    while _margin(sparsity, hi, base) <= 0.0:
        hi *= 2.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if _margin(sparsity, mid, base) > 0.0:
            hi = mid
        else:
            lo = mid
    root = 0.5 * (lo + hi)
    return root, root <= 1.0 + 1e-9


def freq_error_probability(n: int, k: int, rate: float, trials: int, seed: int) -> float:
    """Fraction of random-subsampling trials that misidentify components.

    Each trial builds a signal of k unit spectral components at distinct
    indices drawn from RELATIVE_FREQUENCIES, subsamples it at
    floor(rate * n) random positions, and checks whether the k largest
    DCT magnitudes of the zero-filled subsampled signal sit exactly at
    the true component indices. Trials are seeded independently from
    (seed, trial), so results do not depend on execution order.
    """
    if n < 16:
        raise ValueError("signal length must be at least 16")
    if not 1 <= k <= len(RELATIVE_FREQUENCIES):
        raise ValueError(f"k must lie in [1, {len(RELATIVE_FREQUENCIES)}]")
    if not 0.0 < rate <= 1.0:
        raise ValueError("rate must lie in (0, 1]")
    if trials < 1:
        raise ValueError("at least one trial is required")
    m = int(rate * n)
    if m < k:
        raise ValueError(f"floor(rate*n) = {m} samples cannot identify {k} components")

    candidate_indices = np.array([round(f * (n - 1)) for f in RELATIVE_FREQUENCIES])
    errors = 0
    for trial in range(trials):
        rng = substream(seed, "mc-trial", trial)
        chosen = rng.choice(len(candidate_indices), size=k, replace=False)
        indices = candidate_indices[chosen]
        coeffs = np.zeros(n)
        coeffs[indices] = 1.0
        signal = idct1(coeffs)
        positions = rng.choice(n, size=m, replace=False)
        subsampled = np.zeros(n)
        subsampled[positions] = signal[positions]
        magnitudes = np.abs(dct1(subsampled))
        detected = np.argpartition(-magnitudes, k - 1)[:k]
        if set(detected.tolist()) != set(indices.tolist()):
            errors += 1
    return errors / trials
