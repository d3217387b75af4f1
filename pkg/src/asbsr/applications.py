"""Under-determined inverse-problem pipelines built on the reconstruction engine.

Five pipelines share the same alternating-projection skeleton with
different measurement domains:

* demosaicing — per-channel recovery of a color-filter-array image;
* in-painting — recovery from the unoccluded pixels;
* projection recovery — missing sinogram samples or whole projections,
  with a known empty region around the imaged slice;
* sparse-Fourier-spectrum recovery — missing DFT samples of a
  support-limited image;
* phase retrieval — recovery from the Fourier modulus of an image seen
  through a known random binary occlusion mask, followed by in-painting.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage as _ndimage

from .errors import FeasibilityError
from .masks import ShapeSpec, make_shape_mask
from .reconstruction import ReconOptions, ReconReport, _StopWatcher, reconstruct_bs
from .sampling import SampleSet, take_samples
from .seeds import substream
from .spectrum import error_metrics
from .transforms import Sinogram, dct2, dft2, idct2, idft2, radon_forward, radon_inverse

__all__ = [
    "ARRANGEMENTS",
    "MosaicImage",
    "mosaic",
    "demosaic_bilinear",
    "demosaic_bs",
    "total_rmse",
    "occlusion_from_black",
    "inpaint",
    "estimate_support",
    "recover_projections",
    "circular_mask",
    "reconstruct_from_sparse_spectrum",
    "phase_retrieve",
]

ARRANGEMENTS = ("regular_bayer", "semi_random")

# channel codes in the mosaic map
RED, GREEN, BLUE = 0, 1, 2
_CHANNEL_DENSITY = {RED: 0.25, GREEN: 0.5, BLUE: 0.25}


@dataclass
class MosaicImage:
    """Single-value-per-pixel color-filter-array image.

    ``channel_of_pixel`` holds the codes RED/GREEN/BLUE; ``values`` the
    known channel value at each pixel.
    """

    channel_of_pixel: np.ndarray
    values: np.ndarray
    arrangement: str
    seed: int | None = None

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def mosaic(red: np.ndarray, green: np.ndarray, blue: np.ndarray,
           arrangement: str, seed: int | None = None) -> MosaicImage:
    """Sample an RGB image through a color filter array.

    Green occupies the 2x2 cell diagonal in both arrangements. Red and
    blue sit at the fixed off-diagonal spots for ``regular_bayer``, and
    are swapped per cell by a seeded coin flip for ``semi_random``.
    Channel densities are exactly 1/2, 1/4, 1/4 either way.
    """
    if arrangement not in ARRANGEMENTS:
        raise ValueError(f"unknown arrangement {arrangement!r}; expected one of {ARRANGEMENTS}")
    channels = [np.asarray(c, dtype=float) for c in (red, green, blue)]
    shape = channels[0].shape
    if any(c.shape != shape for c in channels):
        raise ValueError("color channels must share dimensions")
    height, width = shape
    if height % 2 or width % 2:
        raise ValueError("mosaic requires even image dimensions")

    cmap = np.empty((height, width), dtype=np.uint8)
    cmap[0::2, 0::2] = GREEN
    cmap[1::2, 1::2] = GREEN
    if arrangement == "regular_bayer":
        cmap[0::2, 1::2] = RED
        cmap[1::2, 0::2] = BLUE
    else:
        if seed is None:
            raise ValueError("semi_random arrangement requires a seed")
        rng = substream(seed, "mosaic-red-blue")
        swap = rng.integers(0, 2, size=(height // 2, width // 2)).astype(bool)
        top = np.where(swap, BLUE, RED).astype(np.uint8)
        cmap[0::2, 1::2] = top
        cmap[1::2, 0::2] = np.where(swap, RED, BLUE).astype(np.uint8)

    values = np.choose(cmap, channels)
    return MosaicImage(cmap, values, arrangement, seed)


# tent kernel: every pixel has each channel within Chebyshev radius 1 in
# both arrangements, so the normalizer never vanishes
_BILINEAR_KERNEL = np.array([[1.0, 2.0, 1.0], [2.0, 4.0, 2.0], [1.0, 2.0, 1.0]])


def demosaic_bilinear(m: MosaicImage) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fill each channel's missing pixels by neighbor averaging.

    Implemented as a normalized tent-kernel convolution with edge
    replication; on the regular Bayer pattern this reduces to the classic
    2- and 4-neighbor averages. Known pixels are kept exactly.
    """
    out = []
    for code in (RED, GREEN, BLUE):
        have = m.channel_of_pixel == code
        known = np.where(have, m.values, 0.0)
        num = _ndimage.convolve(known, _BILINEAR_KERNEL, mode="nearest")
        den = _ndimage.convolve(have.astype(float), _BILINEAR_KERNEL, mode="nearest")
        out.append(np.where(have, m.values, num / den))
    return tuple(out)


def demosaic_bs(m: MosaicImage, shape: ShapeSpec | None = None,
                opts: ReconOptions | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bounded-spectrum demosaicing.

    Each channel is reconstructed independently with the shape calibrated
    to that channel's pixel density (red 1/4, green 1/2, blue 1/4); the
    ``area_fraction`` of a supplied shape is overridden accordingly. The
    default shape is the all-purpose pie sector.
    """
    shape = shape or ShapeSpec("pie_sector", 0.25)
    opts = opts or ReconOptions()
    out = []
    for code in (RED, GREEN, BLUE):
        have = m.channel_of_pixel == code
        positions = np.argwhere(have)
        samples = SampleSet(m.height, m.width, positions, m.values[have])
        mask = make_shape_mask(shape.with_area(_CHANNEL_DENSITY[code]), m.height, m.width)
        rec, _ = reconstruct_bs(samples, mask, opts=opts)
        out.append(rec)
    return tuple(out)


def total_rmse(reference: tuple[np.ndarray, ...], candidate: tuple[np.ndarray, ...]) -> float:
    """RMSE over all pixels of all channels (the multi-channel total)."""
    mse = [np.mean((np.asarray(c, dtype=float) - np.asarray(r, dtype=float)) ** 2)
           for r, c in zip(reference, candidate)]
    return float(np.sqrt(np.mean(mse)))


def occlusion_from_black(image: np.ndarray, threshold: float = 0.0) -> np.ndarray:
    """Observation mask for occlusions rendered in black: a pixel counts
    as observed when its gray level exceeds the threshold."""
    return np.asarray(image, dtype=float) > threshold


def inpaint(image: np.ndarray, occlusion: np.ndarray, shape: ShapeSpec,
            opts: ReconOptions | None = None) -> np.ndarray:
    """Recover occluded pixels by bounded-spectrum reconstruction from the
    observed ones. ``occlusion`` is true where the pixel is observed."""
    image = np.asarray(image, dtype=float)
    occlusion = np.asarray(occlusion, dtype=bool)
    if image.shape != occlusion.shape:
        raise ValueError("occlusion mask must match the image dimensions")
    observed_fraction = float(occlusion.mean())
    if observed_fraction < shape.area_fraction:
        raise FeasibilityError(
            f"observed fraction {observed_fraction:.4f} is below the spectrum "
            f"zone fraction {shape.area_fraction:.4f}"
        )
    samples = take_samples(image, np.argwhere(occlusion))
    mask = make_shape_mask(shape, image.shape[0], image.shape[1])
    reconstructed, _ = reconstruct_bs(samples, mask, opts=opts)
    return reconstructed


def estimate_support(image: np.ndarray, threshold: float) -> np.ndarray:
    """Convenience thresholder: true where |pixel| exceeds the threshold."""
    return np.abs(np.asarray(image, dtype=float)) > threshold


def recover_projections(
    sino: Sinogram,
    known: np.ndarray,
    support: np.ndarray,
    opts: ReconOptions | None = None,
    reference: Sinogram | None = None,
) -> tuple[Sinogram, np.ndarray, ReconReport]:
    """Fill in missing sinogram samples of an object with known empty surround.

    Alternates {back-project, zero outside the support, re-project,
    restore known cells}. ``known`` flags the measured sinogram cells
    (whole missing projections are simply all-false rows). The returned
    sinogram keeps the measured cells bit-identical.

    The loop is stable only when the angle set oversamples the
    back-projection (roughly pi/2 times the support diameter in pixels);
    with too few angles the round trip amplifies streak artifacts instead
    of contracting them. The plateau rule halts such runs early.
    """
    opts = opts or ReconOptions()
    known = np.asarray(known, dtype=bool)
    support = np.asarray(support, dtype=bool)
    if known.shape != sino.values.shape:
        raise ValueError("known-cell mask must match the sinogram dimensions")
    if support.ndim != 2 or support.shape[0] != support.shape[1]:
        raise ValueError("support mask must be square")
    if not support.any():
        raise ValueError("support mask must contain at least one true cell")
    size = support.shape[0]
    if reference is not None and reference.values.shape != sino.values.shape:
        raise ValueError("reference sinogram dimensions must match")

    report = ReconReport(iterations_run=0)
    watcher = _StopWatcher(opts, reference is not None)
    current = sino.values.copy()
    image = np.zeros((size, size))
    for _ in range(opts.max_iterations):
        image = radon_inverse(Sinogram(sino.angles, current), size=size)
        image[~support] = 0.0
        reprojected = radon_forward(image, sino.angles).values
        reprojected[known] = sino.values[known]
        report.iterations_run += 1

        step = float(np.sqrt(np.mean((reprojected - current) ** 2)))
        rmse_all = None
        if reference is not None:
            metrics = error_metrics(reference.values, reprojected)
            report.rmse_all_trace.append(metrics.rmse_all)
            report.rmse_90_trace.append(metrics.rmse_90)
            rmse_all = metrics.rmse_all
        current = reprojected
        progress = rmse_all if reference is not None else step
        reason = watcher.update(progress, rmse_all)
        if reason is not None:
            report.stop_reason = reason
            report.converged = True
            break
    return Sinogram(sino.angles, current), image, report


def circular_mask(height: int, width: int, radius_fraction: float,
                  centered: bool = True) -> np.ndarray:
    """Disc mask of radius ``radius_fraction * min(height, width)``.

    ``centered=True`` centres the disc on the pixel grid (image-domain
    support masks); ``centered=False`` centres it on frequency (0, 0) in
    natural DFT order (spectral masks), wrapping around the edges.
    """
    radius = radius_fraction * min(height, width)
    if centered:
        rows = np.arange(height) - (height - 1) / 2.0
        cols = np.arange(width) - (width - 1) / 2.0
    else:
        rows = np.minimum(np.arange(height), height - np.arange(height)).astype(float)
        cols = np.minimum(np.arange(width), width - np.arange(width)).astype(float)
    return np.hypot(rows[:, None], cols[None, :]) <= radius


def reconstruct_from_sparse_spectrum(
    known_values: np.ndarray,
    known: np.ndarray,
    support: np.ndarray,
    spectral_mask: np.ndarray,
    opts: ReconOptions | None = None,
    reference: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, ReconReport]:
    """Recover a support-limited image from a subset of its DFT samples.

    Iterates {inverse DFT, apply the image support, DFT, restore the known
    spectrum samples, apply the spectral mask}, starting from the sparsely
    sampled, spectrally bounded input. Returns the image, the final
    restored spectrum (known cells bit-identical to the input), and the
    iteration report.
    """
    opts = opts or ReconOptions()
    known_values = np.asarray(known_values, dtype=complex)
    known = np.asarray(known, dtype=bool)
    support = np.asarray(support, dtype=bool)
    spectral_mask = np.asarray(spectral_mask, dtype=bool)
    if not (known_values.shape == known.shape == support.shape == spectral_mask.shape):
        raise ValueError("spectrum, masks and support must share dimensions")
    if np.any(known & ~spectral_mask):
        raise ValueError("known spectrum samples must lie inside the spectral mask")
    if reference is not None:
        reference = np.asarray(reference, dtype=float)
        if reference.shape != support.shape:
            raise ValueError("reference dimensions must match")

    report = ReconReport(iterations_run=0)
    watcher = _StopWatcher(opts, reference is not None)
    spectrum = np.where(known, known_values, 0.0 + 0.0j)
    image = np.zeros(support.shape)
    for _ in range(opts.max_iterations):
        image = idft2(spectrum).real
        image[~support] = 0.0
        updated = dft2(image)
        updated[known] = known_values[known]
        updated[~spectral_mask] = 0.0
        report.iterations_run += 1

        step = float(np.sqrt(np.mean(np.abs(updated - spectrum) ** 2)))
        rmse_all = None
        if reference is not None:
            metrics = error_metrics(reference, image)
            report.rmse_all_trace.append(metrics.rmse_all)
            report.rmse_90_trace.append(metrics.rmse_90)
            rmse_all = metrics.rmse_all
        spectrum = updated
        progress = rmse_all if reference is not None else step
        reason = watcher.update(progress, rmse_all)
        if reason is not None:
            report.stop_reason = reason
            report.converged = True
            break
    image = idft2(spectrum).real
    image[~support] = 0.0
    return image, spectrum, report


def phase_retrieve(
    modulus: np.ndarray,
    occlusion: np.ndarray,
    shape: ShapeSpec,
    opts: ReconOptions | None = None,
    stage1_iterations: int | None = None,
    initial_phase: np.ndarray | None = None,
    clip_negative: bool = True,
    reference: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, ReconReport]:
    """Recover an image from the Fourier modulus of its occluded copy.

    Stage 1 runs Gerchberg-type modulus iterations on a full-object
    estimate: combine the measured modulus with the current phase of the
    modelled occluded image, invert, update the object at the transparent
    pixels, and re-impose the object priors (spectrum bounded by
    ``shape``, non-negativity). Folding the spectrum zone into the loop is
    what makes the problem determined: the modulus alone pins only half
    the image's degrees of freedom, which 20% known occlusion zeros do
    not cover. The occluded-image estimate with the best
    modulus-consistency residual is returned, so a true-phase start is an
    exact fixed point of the visible output. Stage 2 in-paints the
    occlusions by bounded-spectrum reconstruction. The default starting
    phase is that of the occlusion mask's spectrum.

    Returns (occluded-image estimate, in-painted image, stage-2 report).
    """
    modulus = np.asarray(modulus, dtype=float)
    occlusion = np.asarray(occlusion, dtype=bool)
    if modulus.shape != occlusion.shape:
        raise ValueError("modulus and occlusion mask must share dimensions")
    if np.any(modulus < 0):
        raise ValueError("modulus must be non-negative")
    transparent = float(occlusion.mean())
    if transparent < shape.area_fraction:
        raise FeasibilityError(
            f"transparent fraction {transparent:.4f} is below the spectrum "
            f"zone fraction {shape.area_fraction:.4f}"
        )
    opts = opts or ReconOptions()
    budget = stage1_iterations if stage1_iterations is not None else opts.max_iterations
    zone = make_shape_mask(shape, modulus.shape[0], modulus.shape[1])

    if initial_phase is None:
        phase = np.angle(dft2(occlusion.astype(float)))
    else:
        phase = np.asarray(initial_phase, dtype=float)
        if phase.shape != modulus.shape:
            raise ValueError("initial_phase dimensions must match the modulus")

    obj = idft2(modulus * np.exp(1j * phase)).real
    best_occluded = np.where(occlusion, obj, 0.0)
    best_residual = np.inf
    for _ in range(budget):
        occluded = np.where(occlusion, obj, 0.0)
        estimate = dft2(occluded)
        residual = float(np.sqrt(np.mean((np.abs(estimate) - modulus) ** 2)))
        if residual < best_residual:
            best_residual = residual
            best_occluded = occluded
        corrected = idft2(modulus * np.exp(1j * np.angle(estimate))).real
        obj = np.where(occlusion, corrected, obj)
        coeffs = dct2(obj)
        coeffs[~zone] = 0.0
        obj = idct2(coeffs)
        if clip_negative:
            np.clip(obj, 0.0, None, out=obj)

    samples = take_samples(best_occluded, np.argwhere(occlusion))
    final, report = reconstruct_bs(samples, zone, reference=reference, opts=opts)
    return best_occluded, final, report
