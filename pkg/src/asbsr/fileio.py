"""File formats: PGM/PPM/PBM images, PNG input, and the CSV tables.

All writers are atomic (temp file in the target directory, then rename)
and deterministic: identical data produces identical bytes. Floats in CSV
cells use ``repr``, which round-trips float64 exactly.
"""

import csv
import io
import os
import tempfile

import numpy as np

from .transforms import Sinogram

__all__ = [
    "atomic_write_bytes",
    "read_pgm",
    "write_pgm",
    "read_ppm",
    "write_ppm",
    "read_pbm",
    "write_pbm",
    "read_image",
    "write_float_sidecar",
    "read_samples_csv",
    "write_samples_csv",
    "write_positions_csv",
    "read_positions_csv",
    "write_trace_csv",
    "read_sinogram_csv",
    "write_sinogram_csv",
    "read_spectrum_csv",
    "write_spectrum_csv",
    "write_mask_indices_csv",
    "write_table_csv",
]


def atomic_write_bytes(path: str, payload: bytes) -> None:
    """Write ``payload`` to ``path`` via a temp file + rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_write_text(path: str, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def _read_pnm_tokens(data: bytes, count: int, offset: int) -> tuple[list[int], int]:
    """Read ``count`` whitespace/comment-separated integers from a PNM header."""
    tokens: list[int] = []
    i = offset
    while len(tokens) < count:
        if i >= len(data):
            raise ValueError("truncated PNM header")
        c = data[i:i + 1]
        if c == b"#":
            while i < len(data) and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j:j + 1].isspace() and data[j:j + 1] != b"#":
                j += 1
            tokens.append(int(data[i:j]))
            i = j
    return tokens, i


def _read_pnm(path: str, magic: bytes, channels: int) -> np.ndarray:
    with open(path, "rb") as handle:
        data = handle.read()
    if not data.startswith(magic):
        raise ValueError(f"{path}: expected {magic.decode()} file")
    (width, height, maxval), i = _read_pnm_tokens(data, 3, 2)
    if maxval <= 0 or maxval > 255:
        raise ValueError(f"{path}: only 8-bit images are supported (maxval {maxval})")
    i += 1  # single whitespace byte before the raster
    raster = np.frombuffer(data, dtype=np.uint8, count=height * width * channels, offset=i)
    shape = (height, width) if channels == 1 else (height, width, channels)
    return raster.reshape(shape).astype(float)


def read_pgm(path: str) -> np.ndarray:
    """8-bit binary PGM (P5) to a float matrix."""
    return _read_pnm(path, b"P5", 1)


def _quantize(image: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(np.asarray(image, dtype=float)), 0, 255).astype(np.uint8)


def write_pgm(path: str, image: np.ndarray) -> None:
    """Float matrix to 8-bit binary PGM; values are rounded and clipped."""
    data = _quantize(image)
    if data.ndim != 2:
        raise ValueError("PGM output requires a 2-D image")
    header = f"P5\n{data.shape[1]} {data.shape[0]}\n255\n".encode("ascii")
    atomic_write_bytes(path, header + data.tobytes())


def read_ppm(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """8-bit binary PPM (P6) to three float channel matrices (R, G, B)."""
    raster = _read_pnm(path, b"P6", 3)
    return raster[:, :, 0], raster[:, :, 1], raster[:, :, 2]


def write_ppm(path: str, red: np.ndarray, green: np.ndarray, blue: np.ndarray) -> None:
    channels = [_quantize(c) for c in (red, green, blue)]
    if any(c.ndim != 2 or c.shape != channels[0].shape for c in channels):
        raise ValueError("PPM output requires three equal 2-D channels")
    data = np.stack(channels, axis=-1)
    header = f"P6\n{data.shape[1]} {data.shape[0]}\n255\n".encode("ascii")
    atomic_write_bytes(path, header + data.tobytes())


def read_pbm(path: str) -> np.ndarray:
    """Binary PBM (P4) to a boolean matrix; 1 bits map to true."""
    with open(path, "rb") as handle:
        data = handle.read()
    if not data.startswith(b"P4"):
        raise ValueError(f"{path}: expected P4 file")
    (width, height), i = _read_pnm_tokens(data, 2, 2)
    i += 1
    row_bytes = (width + 7) // 8
    raster = np.frombuffer(data, dtype=np.uint8, count=height * row_bytes, offset=i)
    bits = np.unpackbits(raster.reshape(height, row_bytes), axis=1)[:, :width]
    return bits.astype(bool)


def write_pbm(path: str, mask: np.ndarray) -> None:
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2:
        raise ValueError("PBM output requires a 2-D mask")
    height, width = mask.shape
    packed = np.packbits(mask.astype(np.uint8), axis=1)
    header = f"P4\n{width} {height}\n".encode("ascii")
    atomic_write_bytes(path, header + packed.tobytes())


def read_image(path: str) -> np.ndarray:
    """Grayscale image from PGM or 8-bit PNG, as a float matrix."""
    lower = path.lower()
    if lower.endswith(".pgm"):
        return read_pgm(path)
    if lower.endswith(".png"):
        from PIL import Image

        with Image.open(path) as img:
            return np.asarray(img.convert("L"), dtype=float)
    raise ValueError(f"{path}: unsupported image format (expected .pgm or .png)")


def write_float_sidecar(path: str, array: np.ndarray) -> None:
    """Lossless float64 copy of an output (numpy .npy format)."""
    buffer = io.BytesIO()
    np.save(buffer, np.asarray(array, dtype=float))
    atomic_write_bytes(path, buffer.getvalue())


def _write_csv(path: str, header: list[str], rows) -> None:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    _atomic_write_text(path, out.getvalue())


def _read_csv(path: str, expected_header: list[str]) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != expected_header:
            raise ValueError(f"{path}: expected header {expected_header}, got {header}")
        return [row for row in reader if row]


def write_samples_csv(path: str, samples) -> None:
    rows = ((int(r), int(c), repr(float(v)))
            for (r, c), v in zip(samples.positions, samples.values))
    _write_csv(path, ["row", "col", "value"], rows)


def read_samples_csv(path: str, height: int, width: int):
    from .sampling import SampleSet

    rows = _read_csv(path, ["row", "col", "value"])
    positions = np.array([[int(r[0]), int(r[1])] for r in rows], dtype=np.intp)
    values = np.array([float(r[2]) for r in rows])
    return SampleSet(height, width, positions.reshape(-1, 2), values)


def write_positions_csv(path: str, positions: np.ndarray) -> None:
    _write_csv(path, ["row", "col"], ((int(r), int(c)) for r, c in positions))


def read_positions_csv(path: str) -> np.ndarray:
    rows = _read_csv(path, ["row", "col"])
    return np.array([[int(r[0]), int(r[1])] for r in rows], dtype=np.intp).reshape(-1, 2)


def write_trace_csv(path: str, report) -> None:
    rows = ((i, repr(a), repr(b)) for i, a, b in report.trace_rows())
    _write_csv(path, ["iteration", "rmse_all", "rmse_90"], rows)


def write_sinogram_csv(path: str, sino: Sinogram) -> None:
    rows = ((repr(float(angle)), b, repr(float(sino.values[i, b])))
            for i, angle in enumerate(sino.angles) for b in range(sino.bins))
    _write_csv(path, ["angle", "bin", "value"], rows)


def read_sinogram_csv(path: str) -> Sinogram:
    rows = _read_csv(path, ["angle", "bin", "value"])
    angles = sorted({float(r[0]) for r in rows})
    bins = max(int(r[1]) for r in rows) + 1
    index = {a: i for i, a in enumerate(angles)}
    values = np.zeros((len(angles), bins))
    seen = np.zeros_like(values, dtype=bool)
    for r in rows:
        i, b = index[float(r[0])], int(r[1])
        values[i, b] = float(r[2])
        seen[i, b] = True
    if not seen.all():
        raise ValueError(f"{path}: incomplete sinogram (missing angle/bin cells)")
    return Sinogram(np.array(angles), values)


def write_spectrum_csv(path: str, values: np.ndarray, known: np.ndarray) -> None:
    """Known complex spectrum samples as (row, col, real, imag) rows."""
    rows = ((int(r), int(c), repr(float(values[r, c].real)), repr(float(values[r, c].imag)))
            for r, c in np.argwhere(known))
    _write_csv(path, ["row", "col", "real", "imag"], rows)


def read_spectrum_csv(path: str, height: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    rows = _read_csv(path, ["row", "col", "real", "imag"])
    values = np.zeros((height, width), dtype=complex)
    known = np.zeros((height, width), dtype=bool)
    for r in rows:
        i, j = int(r[0]), int(r[1])
        values[i, j] = complex(float(r[2]), float(r[3]))
        known[i, j] = True
    return values, known


def write_mask_indices_csv(path: str, mask: np.ndarray) -> None:
    _write_csv(path, ["row", "col"], ((int(r), int(c)) for r, c in np.argwhere(mask)))


def write_table_csv(path: str, header: list[str], rows) -> None:
    """Generic numeric table; floats formatted with repr."""
    formatted = ((repr(v) if isinstance(v, float) else v for v in row) for row in rows)
    _write_csv(path, header, formatted)
