"""Command-line interface.

One subcommand per pipeline; all outputs are written atomically and a
single machine-parseable ``key=value`` summary line goes to stdout.
Commands that draw random numbers require an explicit ``--seed``.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 infeasible
parameters, 5 numerical failure.
"""

import argparse
import sys

import numpy as np

from . import fileio
from .applications import (
    ARRANGEMENTS,
    demosaic_bilinear,
    demosaic_bs,
    inpaint,
    mosaic,
    occlusion_from_black,
    phase_retrieve,
    reconstruct_from_sparse_spectrum,
    recover_projections,
    total_rmse,
)
from .csmodel import LOG_BASES, freq_error_probability, min_redundancy
from .errors import DegenerateMaskError, FeasibilityError, NumericalFailureError
from .masks import SHAPE_KINDS, ShapeSpec, make_shape_mask
from .reconstruction import ReconOptions, reconstruct_bs
from .sampling import GRID_KINDS, make_grid, prefilter, take_samples
from .spectrum import error_metrics, sparse_spectrum
from .transforms import dft2

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INFEASIBLE = 4
EXIT_NUMERICAL = 5


class _IoFailure(Exception):
    """File missing, unreadable, or malformed."""


def _summary(pairs) -> None:
    print(" ".join(f"{key}={value}" for key, value in pairs))


def _fmt(value: float) -> str:
    return repr(float(value))


def _load(loader, path, *args):
    try:
        return loader(path, *args)
    except OSError as exc:
        raise _IoFailure(f"{path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise _IoFailure(str(exc)) from exc


def _shape_from_args(args) -> ShapeSpec:
    return ShapeSpec(
        kind=args.shape,
        area_fraction=args.fraction,
        aspect_ratio=args.aspect,
        orientation_deg=args.orientation,
        superellipse_exponent=args.exponent,
        sector_extent_deg=args.sector_extent,
    )


def _add_shape_args(parser, with_fraction=True) -> None:
    parser.add_argument("--shape", choices=SHAPE_KINDS, default="pie_sector",
                        help="spectrum zone shape (default pie_sector)")
    if with_fraction:
        parser.add_argument("--fraction", type=float, required=True,
                            help="zone area fraction of the baseband")
    parser.add_argument("--aspect", type=float, default=1.0)
    parser.add_argument("--orientation", type=float, default=0.0)
    parser.add_argument("--exponent", type=float, default=3.0,
                        help="superellipse exponent")
    parser.add_argument("--sector-extent", type=float, default=90.0,
                        help="pie sector angular extent in degrees")


def _add_recon_args(parser) -> None:
    parser.add_argument("--iters", type=int, default=500, help="iteration budget")
    parser.add_argument("--stop-rmse", type=float, default=None,
                        help="stop once the reference RMSE falls below this")
    parser.add_argument("--plateau-window", type=int, default=50)
    parser.add_argument("--plateau-epsilon", type=float, default=1e-4)


def _recon_opts(args) -> ReconOptions:
    return ReconOptions(
        max_iterations=args.iters,
        stop_rmse=args.stop_rmse,
        plateau_window=args.plateau_window,
        plateau_epsilon=args.plateau_epsilon,
    )


def _check_finite(name: str, array: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(array)):
        raise NumericalFailureError(f"{name} contains non-finite values")
    return array


# ---------------------------------------------------------------- commands


def _cmd_analyze(args) -> None:
    image = _load(fileio.read_image, args.infile)
    report = sparse_spectrum(image, args.target_rmse)
    fileio.write_table_csv(args.out, ["k", "n", "sparsity", "achieved_rmse"],
                           [(report.k, report.n, report.sparsity, report.achieved_rmse)])
    if args.mask_out:
        fileio.write_pbm(args.mask_out, report.ec_mask)
    _summary([("k", report.k), ("n", report.n),
              ("sparsity", _fmt(report.sparsity)),
              ("achieved_rmse", _fmt(report.achieved_rmse))])


def _cmd_mask(args) -> None:
    spec = _shape_from_args(args)
    mask = make_shape_mask(spec, args.height, args.width)
    fileio.write_pbm(args.out, mask)
    if args.indices_out:
        fileio.write_mask_indices_csv(args.indices_out, mask)
    if args.shape_out:
        fileio.atomic_write_bytes(args.shape_out, spec.to_text().encode("utf-8"))
    _summary([("kind", spec.kind), ("cells", int(mask.sum())),
              ("fraction", _fmt(mask.mean()))])


def _cmd_sample(args) -> None:
    image = _load(fileio.read_image, args.infile)
    if args.prefilter_mask:
        mask = _load(fileio.read_pbm, args.prefilter_mask)
        image = prefilter(image, mask)
    height, width = image.shape
    if (args.m is None) == (args.rate is None):
        raise ValueError("exactly one of --m and --rate is required")
    m = args.m if args.m is not None else int(round(args.rate * height * width))
    positions = make_grid(args.grid, height, width, m, args.seed)
    samples = take_samples(image, positions)
    fileio.write_samples_csv(args.out, samples)
    if args.positions_out:
        fileio.write_positions_csv(args.positions_out, positions)
    _summary([("m", samples.m), ("rate", _fmt(samples.rate)),
              ("height", height), ("width", width)])


def _cmd_reconstruct(args) -> None:
    mask = _load(fileio.read_pbm, args.mask)
    samples = _load(fileio.read_samples_csv, args.infile, mask.shape[0], mask.shape[1])
    reference = _load(fileio.read_image, args.ref) if args.ref else None
    image, report = reconstruct_bs(samples, mask, reference=reference, opts=_recon_opts(args))
    _check_finite("reconstruction", image)
    fileio.write_pgm(args.out, image)
    if args.float_out:
        fileio.write_float_sidecar(args.float_out, image)
    if args.trace:
        fileio.write_trace_csv(args.trace, report)
    pairs = [("iterations", report.iterations_run), ("stop_reason", report.stop_reason)]
    if reference is not None:
        pairs.append(("final_rmse", _fmt(report.rmse_all_trace[-1])))
    _summary(pairs)


def _cmd_demosaic(args) -> None:
    rgb = _load(fileio.read_ppm, args.infile)
    if args.arrangement == "semi_random" and args.seed is None:
        raise ValueError("--seed is required for the semi_random arrangement")
    mosaicked = mosaic(*rgb, args.arrangement, seed=args.seed)
    if args.method == "bilinear":
        channels = demosaic_bilinear(mosaicked)
    else:
        shape = _shape_from_args(args)
        channels = demosaic_bs(mosaicked, shape, _recon_opts(args))
    for name, channel in zip("rgb", channels):
        _check_finite(f"channel {name}", channel)
    fileio.write_ppm(args.out, *channels)
    pairs = [("method", args.method), ("arrangement", args.arrangement)]
    if args.ref:
        ref = _load(fileio.read_ppm, args.ref)
        pairs.append(("rmse_total", _fmt(total_rmse(ref, channels))))
    _summary(pairs)


def _cmd_inpaint(args) -> None:
    image = _load(fileio.read_image, args.infile)
    if args.occlusion:
        observed = _load(fileio.read_pbm, args.occlusion)
    else:
        observed = occlusion_from_black(image, args.black_threshold)
    shape = _shape_from_args(args)
    result = inpaint(image, observed, shape, _recon_opts(args))
    _check_finite("inpainted image", result)
    fileio.write_pgm(args.out, result)
    if args.float_out:
        fileio.write_float_sidecar(args.float_out, result)
    pairs = [("observed_fraction", _fmt(observed.mean()))]
    if args.ref:
        ref = _load(fileio.read_image, args.ref)
        pairs.append(("rmse", _fmt(error_metrics(ref, result).rmse_all)))
    _summary(pairs)


def _cmd_radon_recover(args) -> None:
    sino = _load(fileio.read_sinogram_csv, args.sino)
    known = _load(fileio.read_pbm, args.known)
    support = _load(fileio.read_pbm, args.support)
    reference = _load(fileio.read_sinogram_csv, args.ref_sino) if args.ref_sino else None
    recovered, image, report = recover_projections(
        sino, known, support, _recon_opts(args), reference=reference)
    _check_finite("recovered sinogram", recovered.values)
    fileio.write_sinogram_csv(args.out_sino, recovered)
    fileio.write_pgm(args.out_image, image)
    if args.trace:
        fileio.write_trace_csv(args.trace, report)
    pairs = [("iterations", report.iterations_run)]
    if reference is not None:
        pairs.append(("final_rmse", _fmt(report.rmse_all_trace[-1])))
    _summary(pairs)


def _cmd_fourier_recover(args) -> None:
    support = _load(fileio.read_pbm, args.support)
    spectral_mask = _load(fileio.read_pbm, args.spectral_mask)
    values, known = _load(fileio.read_spectrum_csv, args.spectrum,
                          support.shape[0], support.shape[1])
    reference = _load(fileio.read_image, args.ref) if args.ref else None
    image, _, report = reconstruct_from_sparse_spectrum(
        values, known, support, spectral_mask, _recon_opts(args), reference=reference)
    _check_finite("reconstruction", image)
    fileio.write_pgm(args.out, image)
    if args.float_out:
        fileio.write_float_sidecar(args.float_out, image)
    if args.trace:
        fileio.write_trace_csv(args.trace, report)
    pairs = [("iterations", report.iterations_run)]
    if reference is not None:
        pairs.append(("final_rmse", _fmt(report.rmse_all_trace[-1])))
    _summary(pairs)


def _cmd_phase_retrieve(args) -> None:
    try:
        modulus = np.load(args.modulus, allow_pickle=False)
    except OSError as exc:
        raise _IoFailure(f"{args.modulus}: {exc}") from exc
    except ValueError as exc:
        raise _IoFailure(f"{args.modulus}: {exc}") from exc
    occlusion = _load(fileio.read_pbm, args.occlusion)
    shape = _shape_from_args(args)
    reference = _load(fileio.read_image, args.ref) if args.ref else None
    occluded, final, report = phase_retrieve(
        modulus, occlusion, shape, _recon_opts(args),
        stage1_iterations=args.stage1_iters, reference=reference)
    _check_finite("reconstruction", final)
    fileio.write_pgm(args.out, final)
    fileio.write_pgm(args.out_occluded, occluded)
    residual = float(np.sqrt(np.mean((np.abs(dft2(occluded)) - modulus) ** 2)))
    pairs = [("stage1_residual", _fmt(residual))]
    if reference is not None:
        pairs.append(("rmse", _fmt(report.rmse_all_trace[-1])))
    _summary(pairs)


def _cmd_cs_curve(args) -> None:
    if args.sparsity_min <= 0 or args.sparsity_max >= 1 or args.sparsity_min > args.sparsity_max:
        raise ValueError("need 0 < sparsity-min <= sparsity-max < 1")
    grid = np.geomspace(args.sparsity_min, args.sparsity_max, args.steps)
    rows = []
    for sparsity in grid:
        redundancy, vacuous = min_redundancy(float(sparsity), args.base)
        rows.append((float(sparsity), float(redundancy), int(vacuous)))
    fileio.write_table_csv(args.out, ["sparsity", "min_redundancy", "vacuous"], rows)
    _summary([("steps", args.steps), ("base", args.base),
              ("first_redundancy", _fmt(rows[0][1])), ("last_redundancy", _fmt(rows[-1][1]))])


def _cmd_cs_mc(args) -> None:
    lengths = [int(v) for v in args.n.split(",")]
    rates = [float(v) for v in args.rates.split(",")]
    rows = []
    for n in lengths:
        for rate in rates:
            p = freq_error_probability(n, args.k, rate, args.trials, args.seed)
            rows.append((n, args.k, rate, p))
    fileio.write_table_csv(args.out, ["n", "k", "rate", "probability"], rows)
    _summary([("rows", len(rows)), ("trials", args.trials)])


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asbsr",
        description="Arbitrary-position sampling and bounded-spectrum image reconstruction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="measure spectrum sparsity at a target RMSE")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--target-rmse", type=float, required=True)
    p.add_argument("--out", required=True, help="output CSV")
    p.add_argument("--mask-out", help="write the retained-coefficient mask as PBM")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("mask", help="generate a calibrated spectrum-zone mask")
    _add_shape_args(p)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--out", required=True, help="output PBM")
    p.add_argument("--indices-out", help="also write true-cell indices as CSV")
    p.add_argument("--shape-out", help="also write the shape parameters as key=value text")
    p.set_defaults(func=_cmd_mask)

    p = sub.add_parser("sample", help="generate a grid and take image samples")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--grid", choices=GRID_KINDS, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--rate", type=float)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--prefilter-mask", help="bound the image spectrum before sampling (PBM)")
    p.add_argument("--out", required=True, help="samples CSV")
    p.add_argument("--positions-out", help="also write bare positions CSV")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("reconstruct", help="bounded-spectrum reconstruction from samples")
    p.add_argument("--in", dest="infile", required=True, help="samples CSV")
    p.add_argument("--mask", required=True, help="spectrum zone PBM (fixes grid dimensions)")
    p.add_argument("--ref", help="reference image for RMSE traces")
    _add_recon_args(p)
    p.add_argument("--out", required=True, help="output PGM")
    p.add_argument("--float-out", help="lossless float64 sidecar (.npy)")
    p.add_argument("--trace", help="per-iteration RMSE CSV")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("demosaic", help="mosaic an RGB image and demosaic it back")
    p.add_argument("--in", dest="infile", required=True, help="input PPM")
    p.add_argument("--arrangement", choices=ARRANGEMENTS, required=True)
    p.add_argument("--method", choices=("bs", "bilinear"), required=True)
    p.add_argument("--seed", type=int, help="required for semi_random")
    _add_shape_args(p, with_fraction=False)
    _add_recon_args(p)
    p.add_argument("--ref", help="reference PPM for total RMSE")
    p.add_argument("--out", required=True, help="output PPM")
    p.set_defaults(func=_cmd_demosaic, fraction=0.25)

    p = sub.add_parser("inpaint", help="recover occluded pixels")
    p.add_argument("--in", dest="infile", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--occlusion", help="PBM, 1 bits mark observed pixels")
    group.add_argument("--black-threshold", type=float, default=0.0,
                       help="pixels at or below this gray level count as occluded")
    _add_shape_args(p)
    _add_recon_args(p)
    p.add_argument("--ref")
    p.add_argument("--out", required=True)
    p.add_argument("--float-out")
    p.set_defaults(func=_cmd_inpaint)

    p = sub.add_parser("radon-recover", help="recover missing sinogram samples")
    p.add_argument("--sino", required=True, help="sinogram CSV")
    p.add_argument("--known", required=True, help="PBM flagging measured sinogram cells")
    p.add_argument("--support", required=True, help="image support PBM")
    _add_recon_args(p)
    p.add_argument("--ref-sino", help="reference sinogram CSV for RMSE traces")
    p.add_argument("--out-sino", required=True)
    p.add_argument("--out-image", required=True)
    p.add_argument("--trace")
    p.set_defaults(func=_cmd_radon_recover)

    p = sub.add_parser("fourier-recover", help="reconstruct from sparse DFT samples")
    p.add_argument("--spectrum", required=True, help="known samples CSV (row,col,real,imag)")
    p.add_argument("--support", required=True, help="image support PBM")
    p.add_argument("--spectral-mask", required=True, help="spectrum bounding PBM")
    _add_recon_args(p)
    p.add_argument("--ref")
    p.add_argument("--out", required=True)
    p.add_argument("--float-out")
    p.add_argument("--trace")
    p.set_defaults(func=_cmd_fourier_recover)

    p = sub.add_parser("phase-retrieve", help="reconstruct from the Fourier modulus")
    p.add_argument("--modulus", required=True, help="modulus matrix (.npy)")
    p.add_argument("--occlusion", required=True, help="PBM, 1 bits mark transparent pixels")
    _add_shape_args(p)
    _add_recon_args(p)
    p.add_argument("--stage1-iters", type=int, default=None)
    p.add_argument("--ref")
    p.add_argument("--out", required=True)
    p.add_argument("--out-occluded", required=True)
    p.set_defaults(func=_cmd_phase_retrieve)

    p = sub.add_parser("cs-curve", help="minimum-redundancy curve vs sparsity")
    p.add_argument("--base", choices=tuple(LOG_BASES), default="natural")
    p.add_argument("--sparsity-min", type=float, required=True)
    p.add_argument("--sparsity-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_cs_curve)

    p = sub.add_parser("cs-mc", help="Monte-Carlo frequency-identification error rates")
    p.add_argument("--n", required=True, help="comma-separated signal lengths")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--rates", required=True, help="comma-separated sampling rates")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_cs_mc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        args.func(args)
    except _IoFailure as exc:
        print(f"asbsr: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericalFailureError, FloatingPointError) as exc:
        print(f"asbsr: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (FeasibilityError, DegenerateMaskError, ValueError) as exc:
        print(f"asbsr: infeasible parameters: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"asbsr: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
