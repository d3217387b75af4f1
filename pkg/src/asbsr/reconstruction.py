"""Iterative bounded-spectrum reconstruction from arbitrary samples.

The 2D engine alternates two projections, Gerchberg-Papoulis style:

1. spectral bounding — transform, zero every DCT coefficient outside the
   chosen zone mask, transform back;
2. sample restoration — overwrite the measured positions with their
   measured values.

Every step is linear in the sample values, so the whole map obeys the
superposition principle. The returned image is the iterate right after
the bounding step, making its spectrum zero outside the mask by
construction.

The 1D variant replaces the fixed zone with the k largest-magnitude
coefficients, re-detected at every iteration.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .sampling import SampleSet
from .spectrum import error_metrics
from .transforms import dct1, dct2, idct1, idct2

__all__ = [
    "ReconOptions",
    "ReconReport",
    "init_interpolate",
    "reconstruct_bs",
    "reconstruct_klargest_1d",
]


@dataclass
class ReconOptions:
    """Iteration budget and stopping rules.

    ``stop_rmse`` needs a reference image; the plateau rule watches the
    reference RMSE when available, else the blind sample-mismatch residual
    of the bounded iterate.
    """

    max_iterations: int = 500
    stop_rmse: float | None = None
    plateau_window: int = 50
    plateau_epsilon: float = 1e-4

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.plateau_window < 1:
            raise ValueError("plateau_window must be at least 1")


@dataclass
class ReconReport:
    iterations_run: int
    rmse_all_trace: list[float] = field(default_factory=list)
    rmse_90_trace: list[float] = field(default_factory=list)
    converged: bool = False
    stop_reason: str = "max_iter"  # max_iter | target_rmse | plateau

    def trace_rows(self):
        """(iteration, rmse_all, rmse_90) rows for CSV export."""
        for i, (r_all, r90) in enumerate(zip(self.rmse_all_trace, self.rmse_90_trace), start=1):
            yield i, r_all, r90


def init_interpolate(samples: SampleSet) -> np.ndarray:
    """Zero-order estimate: each missing pixel is the inverse-distance
    weighted mean of its 3 nearest samples (all of them when fewer than 3
    exist); sampled pixels carry their measured values exactly."""
    height, width = samples.height, samples.width
    k = min(3, samples.m)
    tree = cKDTree(samples.positions.astype(float))
    grid = np.stack(np.meshgrid(np.arange(height), np.arange(width), indexing="ij"),
                    axis=-1).reshape(-1, 2).astype(float)
    dist, idx = tree.query(grid, k=k)
    if k == 1:
        dist = dist[:, None]
        idx = idx[:, None]
    weights = 1.0 / np.maximum(dist, 1e-300)
    out = (weights * samples.values[idx]).sum(axis=1) / weights.sum(axis=1)
    at_sample = dist[:, 0] == 0.0
    out[at_sample] = samples.values[idx[at_sample, 0]]
    return out.reshape(height, width)


class _StopWatcher:
    """Applies the stopping rules to a progress series."""

    def __init__(self, opts: ReconOptions, has_reference: bool):
        self.opts = opts
        self.has_reference = has_reference
        self.progress: list[float] = []

    def update(self, progress_value: float, rmse_all: float | None) -> str | None:
        opts = self.opts
        if self.has_reference and opts.stop_rmse is not None and rmse_all is not None:
            if rmse_all <= opts.stop_rmse:
                return "target_rmse"
        self.progress.append(progress_value)
        w = opts.plateau_window
        if len(self.progress) > w:
            old = self.progress[-w - 1]
            new = self.progress[-1]
            if old <= 0.0 or (old - new) / old < opts.plateau_epsilon:
                return "plateau"
        return None


def reconstruct_bs(
    samples: SampleSet,
    mask: np.ndarray,
    reference: np.ndarray | None = None,
    opts: ReconOptions | None = None,
) -> tuple[np.ndarray, ReconReport]:
    """Bounded-spectrum reconstruction of a full image from its samples.

    Returns the final bounded iterate and a report whose RMSE traces are
    filled only when a reference image is supplied.
    """
    opts = opts or ReconOptions()
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (samples.height, samples.width):
        raise ValueError(
            f"mask {mask.shape} does not match sample grid "
            f"{(samples.height, samples.width)}"
        )
    if reference is not None:
        reference = np.asarray(reference, dtype=float)
        if reference.shape != mask.shape:
            raise ValueError("reference dimensions must match the sample grid")

    rows, cols = samples.positions.T
    values = samples.values
    outside = ~mask

    report = ReconReport(iterations_run=0)
    watcher = _StopWatcher(opts, reference is not None)
    x = init_interpolate(samples)
    bounded = x
    for _ in range(opts.max_iterations):
        coeffs = dct2(x)
        coeffs[outside] = 0.0
        bounded = idct2(coeffs)
        report.iterations_run += 1

        residual = float(np.sqrt(np.mean((bounded[rows, cols] - values) ** 2)))
        rmse_all = None
        if reference is not None:
            metrics = error_metrics(reference, bounded)
            report.rmse_all_trace.append(metrics.rmse_all)
            report.rmse_90_trace.append(metrics.rmse_90)
            rmse_all = metrics.rmse_all
        progress = rmse_all if reference is not None else residual
        reason = watcher.update(progress, rmse_all)
        if reason is not None:
            report.stop_reason = reason
            report.converged = True
            break

        x = bounded.copy()
        x[rows, cols] = values
    return bounded, report


def reconstruct_klargest_1d(
    positions: np.ndarray,
    values: np.ndarray,
    k: int,
    n: int,
    opts: ReconOptions | None = None,
    reference: np.ndarray | None = None,
    relaxation: float | str = "adaptive",
) -> tuple[np.ndarray, ReconReport]:
    """Recover a k-sparse-spectrum signal from samples at known positions.

    Each iteration keeps only the k largest-magnitude DCT coefficients
    (ties broken by ascending index), inverts, and feeds the sample
    mismatch back in at the measured positions. ``relaxation`` sets the
    feedback gain: 1.0 is the plain replace-the-samples step, larger
    values over-relax it, and the default "adaptive" picks the normalized
    step (mismatch energy on the detected support over its energy at the
    sample positions), which converges far faster and recovers from early
    misdetections. Raises when k exceeds the sample count, which would
    make the component identification under-determined.
    """
    opts = opts or ReconOptions()
    positions = np.asarray(positions, dtype=np.intp)
    values = np.asarray(values, dtype=float)
    if positions.ndim != 1 or positions.size == 0:
        raise ValueError("positions must be a non-empty 1-D index array")
    if values.shape != positions.shape:
        raise ValueError("values must align with positions")
    if np.unique(positions).size != positions.size:
        raise ValueError("positions must be distinct")
    if positions.min() < 0 or positions.max() >= n:
        raise ValueError("positions out of range")
    m = positions.size
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m (= {m}), got k = {k}")
    if m > n:
        raise ValueError("more samples than signal points")
    if reference is not None:
        reference = np.asarray(reference, dtype=float)
        if reference.shape != (n,):
            raise ValueError("reference length must equal n")
    if relaxation != "adaptive" and not (isinstance(relaxation, (int, float)) and relaxation > 0):
        raise ValueError("relaxation must be 'adaptive' or a positive number")

    report = ReconReport(iterations_run=0)
    watcher = _StopWatcher(opts, reference is not None)
    x = np.zeros(n)
    x[positions] = values
    bounded = x
    order_tiebreak = np.arange(n)
    for _ in range(opts.max_iterations):
        coeffs = dct1(x)
        keep = np.lexsort((order_tiebreak, -np.abs(coeffs)))[:k]
        pruned = np.zeros(n)
        pruned[keep] = coeffs[keep]
        bounded = idct1(pruned)
        report.iterations_run += 1

        mismatch = values - bounded[positions]
        residual = float(np.sqrt(np.mean(mismatch * mismatch)))
        rmse_all = None
        if reference is not None:
            err = bounded - reference
            rmse_all = float(np.sqrt(np.mean(err * err)))
            count_90 = int(np.floor(0.9 * n))
            smallest = np.sort(np.abs(err))[:count_90]
            report.rmse_all_trace.append(rmse_all)
            report.rmse_90_trace.append(
                float(np.sqrt(np.mean(smallest * smallest))) if count_90 else 0.0
            )
        progress = rmse_all if reference is not None else residual
        reason = watcher.update(progress, rmse_all)
        if reason is not None:
            report.stop_reason = reason
            report.converged = True
            break

        if relaxation == "adaptive":
            zero_filled = np.zeros(n)
            zero_filled[positions] = mismatch
            gradient = dct1(zero_filled)
            on_support = np.zeros(n)
            on_support[keep] = gradient[keep]
            at_samples = idct1(on_support)[positions]
            denom = float(at_samples @ at_samples)
            num = float(gradient[keep] @ gradient[keep])
            gain = num / denom if denom > 0.0 else 1.0
        else:
            gain = float(relaxation)
        x = bounded.copy()
        x[positions] += gain * mismatch
    return bounded, report
