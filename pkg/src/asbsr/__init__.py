"""Arbitrary-position image sampling and bounded-spectrum reconstruction.

The package covers the full pipeline: orthonormal transforms, spectrum
sparsity analysis, parametric spectrum-zone masks, sampling grids, the
iterative alternating-projection reconstruction engine, the sparse-recovery
redundancy model, and the derived inverse-problem pipelines (demosaicing,
in-painting, projection recovery, sparse-Fourier recovery, phase
retrieval). See the README for the command-line interface.
"""

from .applications import (
    ARRANGEMENTS,
    MosaicImage,
    circular_mask,
    demosaic_bilinear,
    demosaic_bs,
    estimate_support,
    inpaint,
    mosaic,
    occlusion_from_black,
    phase_retrieve,
    reconstruct_from_sparse_spectrum,
    recover_projections,
    total_rmse,
)
from .csmodel import (
    LOG_BASES,
    RELATIVE_FREQUENCIES,
    bound_satisfied,
    freq_error_probability,
    min_redundancy,
)
from .errors import DegenerateMaskError, FeasibilityError, NumericalFailureError
from .masks import SHAPE_KINDS, ShapeSpec, make_shape_mask, mask_fraction, mask_union_fraction
from .reconstruction import (
    ReconOptions,
    ReconReport,
    init_interpolate,
    reconstruct_bs,
    reconstruct_klargest_1d,
)
from .sampling import GRID_KINDS, SampleSet, make_grid, prefilter, take_samples
from .seeds import substream
from .spectrum import (
    PEAK_GRAY,
    PSNR_CAP_DB,
    ErrorMetrics,
    SparsityReport,
    error_metrics,
    sparse_spectrum,
)
from .transforms import (
    Sinogram,
    apodization_window,
    apodize,
    dct1,
    dct2,
    dft2,
    idct1,
    idct2,
    idft2,
    radon_bin_count,
    radon_forward,
    radon_inverse,
)

__version__ = "0.1.0"

__all__ = [
    "ARRANGEMENTS",
    "DegenerateMaskError",
    "ErrorMetrics",
    "FeasibilityError",
    "GRID_KINDS",
    "LOG_BASES",
    "MosaicImage",
    "NumericalFailureError",
    "PEAK_GRAY",
    "PSNR_CAP_DB",
    "RELATIVE_FREQUENCIES",
    "ReconOptions",
    "ReconReport",
    "SHAPE_KINDS",
    "SampleSet",
    "ShapeSpec",
    "Sinogram",
    "SparsityReport",
    "apodization_window",
    "apodize",
    "bound_satisfied",
    "circular_mask",
    "dct1",
    "dct2",
    "demosaic_bilinear",
    "demosaic_bs",
    "dft2",
    "error_metrics",
    "estimate_support",
    "freq_error_probability",
    "idct1",
    "idct2",
    "idft2",
    "init_interpolate",
    "inpaint",
    "make_grid",
    "make_shape_mask",
    "mask_fraction",
    "mask_union_fraction",
    "min_redundancy",
    "mosaic",
    "occlusion_from_black",
    "phase_retrieve",
    "prefilter",
    "radon_bin_count",
    "radon_forward",
    "radon_inverse",
    "reconstruct_bs",
    "reconstruct_from_sparse_spectrum",
    "reconstruct_klargest_1d",
    "recover_projections",
    "sparse_spectrum",
    "substream",
    "take_samples",
    "total_rmse",
]
