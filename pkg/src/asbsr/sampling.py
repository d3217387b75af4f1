"""Sample-position grids, spectrum pre-filtering, and sample extraction.

Three grid families are provided:

* ``quasi_uniform`` — targets on a near-square lattice, rounded to the
  nearest dense-grid node, collisions pushed to the nearest free node;
* ``jittered`` — one sample per cell of a tiling of the grid into m
  near-equal cells, uniformly random inside each cell;
* ``pseudorandom`` — m distinct nodes drawn uniformly without replacement.

All of them return exactly m distinct in-bounds (row, col) nodes and are
bit-reproducible for a fixed seed.
"""

from dataclasses import dataclass

import numpy as np

from .seeds import substream
from .transforms import dct2, idct2

__all__ = ["GRID_KINDS", "SampleSet", "make_grid", "prefilter", "take_samples"]

GRID_KINDS = ("quasi_uniform", "jittered", "pseudorandom")


@dataclass
class SampleSet:
    """Measured pixels: distinct in-bounds positions with their values."""

    height: int
    width: int
    positions: np.ndarray  # (m, 2) integer (row, col)
    values: np.ndarray  # (m,) float

    def __post_init__(self) -> None:
        self.positions = np.asarray(self.positions, dtype=np.intp)
        self.values = np.asarray(self.values, dtype=float)
        if self.positions.ndim != 2 or self.positions.shape[1] != 2:
            raise ValueError("positions must be an (m, 2) array of (row, col)")
        m = self.positions.shape[0]
        if m < 1:
            raise ValueError("a sample set needs at least one sample")
        if self.values.shape != (m,):
            raise ValueError("values must align one-to-one with positions")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("sample values must be finite")
        rows, cols = self.positions.T
        if rows.min() < 0 or cols.min() < 0 or rows.max() >= self.height or cols.max() >= self.width:
            raise ValueError("sample positions out of bounds")
        flat = rows * self.width + cols
        if np.unique(flat).size != m:
            raise ValueError("sample positions must be distinct")

    @property
    def m(self) -> int:
        return self.positions.shape[0]

    @property
    def rate(self) -> float:
        return self.m / (self.height * self.width)


def _nearest_free(taken: np.ndarray, row: int, col: int) -> tuple[int, int]:
    """Nearest unoccupied node, searched over growing Chebyshev rings.

    Within a ring, candidates are ranked by (squared Euclidean distance,
    row, col), which makes collision resolution deterministic.
    """
    height, width = taken.shape
    if not taken[row, col]:
        return row, col
    for radius in range(1, max(height, width)):
        best = None
        r_lo, r_hi = max(row - radius, 0), min(row + radius, height - 1)
        c_lo, c_hi = max(col - radius, 0), min(col + radius, width - 1)
        candidates = []
        for r in (row - radius, row + radius):
            if 0 <= r < height:
                candidates.extend((r, c) for c in range(c_lo, c_hi + 1))
        for c in (col - radius, col + radius):
            if 0 <= c < width:
                candidates.extend((r, c) for r in range(max(r_lo, row - radius + 1),
                                                        min(r_hi, row + radius - 1) + 1))
        for r, c in candidates:
            if not taken[r, c]:
                key = ((r - row) ** 2 + (c - col) ** 2, r, c)
                if best is None or key < best[0]:
                    best = (key, r, c)
        if best is not None:
            return best[1], best[2]
    raise RuntimeError("no free node found")  # unreachable while m <= height*width


def _tiling(height: int, width: int, m: int) -> tuple[int, int]:
    """Tiling of the grid into at least m cells with near-square cells."""
    rows = max(1, int(np.ceil(np.sqrt(m * height / width))))
    cols = int(np.ceil(m / rows))
    while rows * cols < m:  # guard against rounding corner cases
        cols += 1
    return rows, cols


def _keep_cells(n_cells: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Indices of the m cells kept after a seeded shuffle drops the surplus."""
    if n_cells == m:
        return np.arange(m)
    keep = rng.permutation(n_cells)[: m]
    keep.sort()
    return keep


def make_grid(kind: str, height: int, width: int, m: int, seed: int) -> np.ndarray:
    """Exactly m distinct in-bounds (row, col) positions of the given kind."""
    if kind not in GRID_KINDS:
        raise ValueError(f"unknown grid kind {kind!r}; expected one of {GRID_KINDS}")
    n = height * width
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, {n}], got {m}")
    if m == n:
        rows, cols = np.divmod(np.arange(n, dtype=np.intp), width)
        return np.column_stack([rows, cols])

    if kind == "pseudorandom":
        rng = substream(seed, "grid-pseudorandom")
        flat = rng.choice(n, size=m, replace=False)
        flat.sort()
        rows, cols = np.divmod(flat.astype(np.intp), width)
        return np.column_stack([rows, cols])

    tile_rows, tile_cols = _tiling(height, width, m)
    rng = substream(seed, f"grid-{kind.replace('_', '-')}")
    keep = _keep_cells(tile_rows * tile_cols, m, rng)
    taken = np.zeros((height, width), dtype=bool)
    out = np.empty((m, 2), dtype=np.intp)
    for i, cell in enumerate(keep):
        ti, tj = divmod(int(cell), tile_cols)
        r_lo, r_hi = ti * height / tile_rows, (ti + 1) * height / tile_rows
        c_lo, c_hi = tj * width / tile_cols, (tj + 1) * width / tile_cols
        if kind == "jittered":
            r = int(rng.uniform(r_lo, r_hi))
            c = int(rng.uniform(c_lo, c_hi))
        else:  # quasi_uniform: round the cell-centre target to the nearest node
            r = int(round((r_lo + r_hi) / 2.0 - 0.5))
            c = int(round((c_lo + c_hi) / 2.0 - 0.5))
        r = min(max(r, 0), height - 1)
        c = min(max(c, 0), width - 1)
        r, c = _nearest_free(taken, r, c)
        taken[r, c] = True
        out[i] = (r, c)
    return out


def prefilter(image: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Zero the image's DCT coefficients outside ``mask`` (idempotent)."""
    image = np.asarray(image, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if image.shape != mask.shape:
        raise ValueError(f"dimension mismatch: image {image.shape} vs mask {mask.shape}")
    coeffs = dct2(image)
    coeffs[~mask] = 0.0
    return idct2(coeffs)


def take_samples(image: np.ndarray, positions: np.ndarray) -> SampleSet:
    """Read the image at ``positions`` without modifying it."""
    image = np.asarray(image, dtype=float)
    if image.ndim != 2:
        raise ValueError("image must be 2-D")
    positions = np.asarray(positions, dtype=np.intp).reshape(-1, 2)
    if positions.size:
        rows, cols = positions.T
        if (rows.min() < 0 or cols.min() < 0
                or rows.max() >= image.shape[0] or cols.max() >= image.shape[1]):
            raise ValueError("sample positions out of bounds")
        values = image[rows, cols]
    else:
        values = np.empty(0)
    return SampleSet(image.shape[0], image.shape[1], positions, values)
