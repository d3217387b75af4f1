"""Spectrum sparsity analysis and reconstruction-error metrics.

Sparsity is measured in the orthonormal 2D DCT domain: the smallest set
of largest-magnitude coefficients whose complement carries at most the
energy budget implied by a target RMSE (Parseval makes the conversion
exact). The retained-index mask doubles as the measured energy-compaction
zone of the image.
"""

from dataclasses import dataclass

import numpy as np

from .transforms import dct2

__all__ = [
    "SparsityReport",
    "ErrorMetrics",
    "PSNR_CAP_DB",
    "PEAK_GRAY",
    "sparse_spectrum",
    "error_metrics",
]

# PSNR reported for a perfect (or numerically indistinguishable) match;
# keeps CSV output finite.
PSNR_CAP_DB = 999.0

PEAK_GRAY = 255.0

# Relative energy below which a residual is indistinguishable from float64
# transform round-off (coefficients of an exactly sparse image come back
# ~1e-16 of peak, i.e. ~1e-32 of total energy per coefficient).
_RESIDUAL_FLOOR = 1e-20


@dataclass
class SparsityReport:
    """Result of a smallest-K search at a target RMSE."""

    k: int
    n: int
    sparsity: float
    achieved_rmse: float
    target_rmse: float
    ec_mask: np.ndarray

    def csv_row(self) -> str:
        return f"{self.k},{self.n},{self.sparsity!r},{self.achieved_rmse!r}"


@dataclass
class ErrorMetrics:
    rmse_all: float
    rmse_90: float
    psnr_db: float


def sparse_spectrum(image: np.ndarray, target_rmse: float) -> SparsityReport:
    """Smallest set of DCT coefficients reconstructing ``image`` within ``target_rmse``.

    Coefficients are ranked by magnitude (ties broken by ascending
    row-major index) and retained until the energy of the discarded rest
    drops to ``n * target_rmse**2`` or below. Residuals under the float64
    noise floor of the transform are treated as zero, so exactly sparse
    images report their true support size at target 0.
    """
    if target_rmse < 0:
        raise ValueError("target_rmse must be non-negative")
    coeffs = dct2(image)
    n = coeffs.size
    energies = (coeffs * coeffs).ravel()
    # primary key: descending magnitude; secondary: ascending row-major index
    order = np.lexsort((np.arange(n), -energies))
    sorted_energy = energies[order]
    total = float(sorted_energy.sum())

    budget = n * float(target_rmse) ** 2 + total * _RESIDUAL_FLOOR
    residual_after = total - np.cumsum(sorted_energy)
    if total <= budget:
        k = 0
        residual = total
    else:
        k = int(np.searchsorted(-residual_after, -budget) + 1)
        residual = float(max(residual_after[k - 1], 0.0))

    mask = np.zeros(n, dtype=bool)
    mask[order[:k]] = True
    return SparsityReport(
        k=k,
        n=n,
        sparsity=k / n,
        achieved_rmse=float(np.sqrt(residual / n)),
        target_rmse=float(target_rmse),
        ec_mask=mask.reshape(coeffs.shape),
    )


def error_metrics(reference: np.ndarray, candidate: np.ndarray) -> ErrorMetrics:
    """RMSE over all pixels, RMSE over the smallest 90% of absolute errors,
    and PSNR against peak 255."""
    ref = np.asarray(reference, dtype=float)
    cand = np.asarray(candidate, dtype=float)
    if ref.shape != cand.shape:
        raise ValueError(f"dimension mismatch: {ref.shape} vs {cand.shape}")
    err = (cand - ref).ravel()
    rmse_all = float(np.sqrt(np.mean(err * err)))
    count_90 = int(np.floor(0.9 * err.size))
    if count_90 == 0:
        rmse_90 = 0.0
    else:
        smallest = np.sort(np.abs(err))[:count_90]
        rmse_90 = float(np.sqrt(np.mean(smallest * smallest)))
    if rmse_all == 0.0:
        psnr = PSNR_CAP_DB
    else:
        psnr = min(20.0 * np.log10(PEAK_GRAY / rmse_all), PSNR_CAP_DB)
    return ErrorMetrics(rmse_all=rmse_all, rmse_90=rmse_90, psnr_db=float(psnr))
