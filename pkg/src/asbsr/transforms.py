"""Orthonormal discrete transforms and the discrete Radon pair.

Conventions used throughout the package:

* 2D/1D cosine transforms are the orthonormal type-II (forward) /
  type-III (inverse) pair, so coefficient energy equals pixel energy
  exactly (Parseval) and the DC coefficient sits at index (0, 0).
* The 2D Fourier transform is unitary (norm="ortho"), stored in natural
  index order; centering is a display concern, not a storage one.
* The Radon pair is a rotate-and-sum forward (bilinear rotation about the
  grid centre, plus an additive per-angle offset that makes every
  projection carry the total image mass exactly) and a ramp-filtered
  back-projection inverse with linear interpolation. The pair is
  deliberately not an exact inverse; the iterative recovery built on top
  restores measured samples each pass.
"""

from dataclasses import dataclass

import numpy as np
from scipy import fft as _fft
from scipy import ndimage as _ndimage

__all__ = [
    "dct2",
    "idct2",
    "dft2",
    "idft2",
    "dct1",
    "idct1",
    "apodization_window",
    "apodize",
    "Sinogram",
    "radon_bin_count",
    "radon_forward",
    "radon_inverse",
]


def _check_field(values: np.ndarray, ndim: int) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-D array, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty input")
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains non-finite values")
    return arr


def dct2(image: np.ndarray) -> np.ndarray:
    """Orthonormal 2D DCT-II. DC ends up at index (0, 0)."""
    return _fft.dctn(_check_field(image, 2), type=2, norm="ortho")


def idct2(coefficients: np.ndarray) -> np.ndarray:
    """Inverse of :func:`dct2` (orthonormal 2D DCT-III)."""
    return _fft.idctn(_check_field(coefficients, 2), type=2, norm="ortho")


def dft2(image: np.ndarray) -> np.ndarray:
    """Unitary 2D DFT in natural (unshifted) index order."""
    arr = np.asarray(image)
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains non-finite values")
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D array, got shape {arr.shape}")
    return np.fft.fft2(arr, norm="ortho")


def idft2(spectrum: np.ndarray) -> np.ndarray:
    """Inverse of :func:`dft2`. Returns a complex array; take ``.real``
    only when the spectrum is known to be conjugate-symmetric."""
    arr = np.asarray(spectrum)
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains non-finite values")
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D array, got shape {arr.shape}")
    return np.fft.ifft2(arr, norm="ortho")


def dct1(signal: np.ndarray) -> np.ndarray:
    """Orthonormal 1D DCT-II."""
    return _fft.dct(_check_field(signal, 1), type=2, norm="ortho")


def idct1(coefficients: np.ndarray) -> np.ndarray:
    """Inverse of :func:`dct1` (orthonormal 1D DCT-III)."""
    return _fft.idct(_check_field(coefficients, 1), type=2, norm="ortho")


def apodization_window(height: int, width: int, flat_fraction: float = 0.7) -> np.ndarray:
    """Circular raised-cosine window for boundary-effect suppression.

    The window is 1 inside ``flat_fraction`` of the inscribed-circle
    radius, falls as a half-cosine to 0 at the inscribed circle, and is 0
    beyond it. Distances are measured from the grid centre in pixels.
    """
    if height < 1 or width < 1:
        raise ValueError("window dimensions must be positive")
    if not 0.0 <= flat_fraction < 1.0:
        raise ValueError("flat_fraction must lie in [0, 1)")
    rows = np.arange(height, dtype=float) - (height - 1) / 2.0
    cols = np.arange(width, dtype=float) - (width - 1) / 2.0
    radius = np.hypot(rows[:, None], cols[None, :])
    outer = min(height, width) / 2.0
    inner = flat_fraction * outer
    window = np.zeros((height, width))
    window[radius <= inner] = 1.0
    taper = (radius > inner) & (radius < outer)
    window[taper] = 0.5 * (1.0 + np.cos(np.pi * (radius[taper] - inner) / (outer - inner)))
    return window


def apodize(image: np.ndarray, flat_fraction: float = 0.7) -> np.ndarray:
    """Multiply an image by :func:`apodization_window` of matching size."""
    arr = _check_field(image, 2)
    return arr * apodization_window(arr.shape[0], arr.shape[1], flat_fraction)


@dataclass
class Sinogram:
    """Projections of a square image: one row per angle, ``bins`` detector cells.

    Angles are in degrees, strictly increasing within [0, 180).
    """

    angles: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        self.angles = np.asarray(self.angles, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.angles.ndim != 1 or self.angles.size == 0:
            raise ValueError("angles must be a non-empty 1-D sequence")
        if np.any(np.diff(self.angles) <= 0):
            raise ValueError("angles must be strictly increasing")
        if np.any(self.angles < 0) or np.any(self.angles >= 180):
            raise ValueError("angles must lie in [0, 180) degrees")
        if self.values.shape[0] != self.angles.size or self.values.ndim != 2:
            raise ValueError("values must be an (angles x bins) matrix")

    @property
    def bins(self) -> int:
        return self.values.shape[1]


def radon_bin_count(size: int) -> int:
    """Detector cells used for projections of a ``size`` x ``size`` image.

    The count covers the image diagonal with margin and matches the image
    parity, so the detector centre coincides with the pixel-grid centre.
    """
    half_diagonal = (size - 1) / 2.0 * np.sqrt(2.0)
    nbins = 2 * int(np.ceil(half_diagonal)) + 3
    if (nbins - size) % 2:
        nbins += 1
    return nbins


def radon_forward(image: np.ndarray, angles_deg: np.ndarray) -> Sinogram:
    """Line-integral projections of a square image at the given angles.

    Rotate-and-sum discretization: the image is placed on a detector-sized
    canvas, rotated about its centre with bilinear interpolation, and
    summed along columns. Each projection is then shifted by a constant so
    its sum equals the total image mass exactly; the correction is additive,
    which keeps the operator linear.
    """
    arr = _check_field(image, 2)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError("radon_forward requires a square image")
    angles = np.asarray(angles_deg, dtype=float)
    if angles.ndim != 1 or angles.size == 0:
        raise ValueError("at least one projection angle is required")

    n = arr.shape[0]
    nbins = radon_bin_count(n)
    pad = np.zeros((nbins, nbins))
    origin = (nbins - n) // 2
    pad[origin:origin + n, origin:origin + n] = arr
    center = (nbins - 1) / 2.0
    cols, rows = np.meshgrid(np.arange(nbins) - center, np.arange(nbins) - center)
    mass = arr.sum()

    sino = np.empty((angles.size, nbins))
    for i, angle in enumerate(angles):
        theta = np.deg2rad(angle)
        xs = np.cos(theta) * cols - np.sin(theta) * rows + center
        ys = np.sin(theta) * cols + np.cos(theta) * rows + center
        rotated = _ndimage.map_coordinates(
            pad, [ys.ravel(), xs.ravel()], order=1, cval=0.0
        ).reshape(nbins, nbins)
        proj = rotated.sum(axis=0)
        proj += (mass - proj.sum()) / nbins
        sino[i] = proj
    return Sinogram(angles, sino)


def _ramp_kernel(nbins: int) -> np.ndarray:
    """Frequency response of the band-limited ramp filter.

    Built from the exact spatial-domain kernel (1/4 at lag 0,
    -1/(pi*k)^2 at odd lags, 0 at even lags) so the DC response is
    correct, then transformed on a padded grid.
    """
    length = _fft.next_fast_len(max(64, 2 * nbins))
    kernel = np.zeros(length)
    kernel[0] = 0.25
    odd = np.arange(1, length // 2 + 1, 2)
    kernel[odd] = -1.0 / (np.pi * odd) ** 2
    kernel[-odd] = -1.0 / (np.pi * odd) ** 2
    return np.real(np.fft.fft(kernel))


def radon_inverse(sinogram: Sinogram, size: int | None = None) -> np.ndarray:
    """Filtered back-projection estimate of the image behind a sinogram.

    ``size`` selects the output grid; by default the largest square whose
    projections fit the sinogram's bin count is used. The result is an
    approximation, not an exact inverse of :func:`radon_forward`.
    """
    if sinogram.angles.size < 2:
        raise ValueError("filtered back-projection requires at least 2 angles")
    nbins = sinogram.bins
    if size is None:
        size = 1
        while radon_bin_count(size + 1) <= nbins:
            size += 1
    elif radon_bin_count(size) > nbins:
        raise ValueError(f"sinogram has too few bins for a {size}x{size} image")

    filt = _ramp_kernel(nbins)
    padded = np.fft.fft(sinogram.values, n=filt.size, axis=1)
    filtered = np.real(np.fft.ifft(padded * filt[None, :], axis=1))[:, :nbins]

    center = (size - 1) / 2.0
    offset = (nbins - 1) / 2.0
    cols, rows = np.meshgrid(np.arange(size) - center, np.arange(size) - center)
    image = np.zeros((size, size))
    bin_axis = np.arange(nbins, dtype=float)
    for i, angle in enumerate(sinogram.angles):
        theta = np.deg2rad(angle)
        s = cols * np.cos(theta) + rows * np.sin(theta) + offset
        image += np.interp(s, bin_axis, filtered[i], left=0.0, right=0.0)
    return image * (np.pi / sinogram.angles.size)
