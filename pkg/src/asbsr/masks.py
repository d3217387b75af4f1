"""Parametric energy-compaction-zone masks in DCT index space.

Masks are boolean matrices over the coefficient grid with DC at index
(0, 0). A shape is defined by the scale at which each cell would enter it
(its critical scale); calibrating to a requested area fraction means
taking the cells with the smallest critical scales, ties broken by
row-major index. That construction realizes the requested cell count
exactly (so masks of growing fraction are nested) and is the limit of a
binary search on the shape's linear scale with boundary ties trimmed.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateMaskError

__all__ = ["SHAPE_KINDS", "ShapeSpec", "make_shape_mask", "mask_fraction", "mask_union_fraction"]

SHAPE_KINDS = ("rectangle", "triangle", "pie_sector", "ellipse", "superellipse")


@dataclass(frozen=True)
class ShapeSpec:
    """Parametric description of a standard spectrum-bounding shape.

    aspect_ratio scales the row-axis (vertical frequency) extent relative
    to the column-axis extent. orientation_deg rotates ellipse-family
    shapes, and sets the start angle of the pie sector's angular window;
    rectangle and triangle keep their legs on the index axes.
    superellipse_exponent and sector_extent_deg apply only to their kinds.
    """

    kind: str
    area_fraction: float
    aspect_ratio: float = 1.0
    orientation_deg: float = 0.0
    superellipse_exponent: float = 3.0
    sector_extent_deg: float = 90.0

    def __post_init__(self) -> None:
        if self.kind not in SHAPE_KINDS:
            raise ValueError(f"unknown shape kind {self.kind!r}; expected one of {SHAPE_KINDS}")
        if not 0.0 < self.area_fraction <= 1.0:
            raise ValueError("area_fraction must lie in (0, 1]")
        if self.aspect_ratio <= 0.0:
            raise ValueError("aspect_ratio must be positive")
        if self.superellipse_exponent <= 0.0:
            raise ValueError("superellipse_exponent must be positive")
        if not 0.0 < self.sector_extent_deg <= 90.0:
            raise ValueError("sector_extent_deg must lie in (0, 90]")

    def with_area(self, area_fraction: float) -> "ShapeSpec":
        return replace(self, area_fraction=area_fraction)

    def to_text(self) -> str:
        lines = [
            f"kind={self.kind}",
            f"area_fraction={self.area_fraction!r}",
            f"aspect_ratio={self.aspect_ratio!r}",
            f"orientation_deg={self.orientation_deg!r}",
            f"superellipse_exponent={self.superellipse_exponent!r}",
            f"sector_extent_deg={self.sector_extent_deg!r}",
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ShapeSpec":
        fields: dict[str, str] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"malformed shape line: {line!r}")
            key, value = line.split("=", 1)
            fields[key.strip()] = value.strip()
        try:
            return cls(
                kind=fields["kind"],
                area_fraction=float(fields["area_fraction"]),
                aspect_ratio=float(fields.get("aspect_ratio", "1.0")),
                orientation_deg=float(fields.get("orientation_deg", "0.0")),
                superellipse_exponent=float(fields.get("superellipse_exponent", "3.0")),
                sector_extent_deg=float(fields.get("sector_extent_deg", "90.0")),
            )
        except KeyError as exc:
            raise ValueError(f"missing shape field {exc.args[0]!r}") from exc


def _critical_scale(spec: ShapeSpec, height: int, width: int) -> np.ndarray:
    """Scale at which each coefficient cell enters the shape.

    The shape at scale s spans s cells along the column axis and
    s * aspect_ratio cells along the row axis.
    """
    rows = np.arange(height, dtype=float)[:, None]
    cols = np.arange(width, dtype=float)[None, :]
    ar = spec.aspect_ratio

    if spec.kind == "rectangle":
        scale = np.maximum(rows / ar, np.broadcast_to(cols, (height, width)))
    elif spec.kind == "triangle":
        scale = rows / ar + cols
    elif spec.kind in ("ellipse", "superellipse"):
        p = 2.0 if spec.kind == "ellipse" else spec.superellipse_exponent
        theta = np.deg2rad(spec.orientation_deg)
        u = rows * np.cos(theta) - cols * np.sin(theta)
        v = rows * np.sin(theta) + cols * np.cos(theta)
        scale = ((np.abs(u) / ar) ** p + np.abs(v) ** p) ** (1.0 / p)
    else:  # pie_sector
        radius = np.hypot(rows, cols)
        angle = np.degrees(np.arctan2(rows, np.broadcast_to(cols, (height, width))))
        start = spec.orientation_deg
        stop = min(start + spec.sector_extent_deg, 90.0)
        scale = np.where((angle >= start) & (angle <= stop), radius, np.inf)
    scale = np.asarray(scale, dtype=float)
    scale[0, 0] = 0.0  # DC always belongs to the zone
    return scale


def make_shape_mask(spec: ShapeSpec, height: int, width: int) -> np.ndarray:
    """Boolean mask of the shape calibrated to ``spec.area_fraction``.

    The realized fraction is round(fraction * H * W) / (H * W), i.e.
    within half a cell of the request. Raises DegenerateMaskError when the
    calibrated mask would hold only the DC cell.
    """
    if height < 2 or width < 2:
        raise ValueError("mask dimensions must be at least 2x2")
    n = height * width
    target = int(round(spec.area_fraction * n))
    if target < 2:
        raise DegenerateMaskError(
            f"area_fraction {spec.area_fraction} yields {target} cell(s) on "
            f"{height}x{width}; the mask would be DC only"
        )
    scale = _critical_scale(spec, height, width).ravel()
    reachable = np.isfinite(scale).sum()
    if target > reachable:
        raise ValueError(
            f"area_fraction {spec.area_fraction} exceeds the {reachable / n:.4f} "
            "of the baseband reachable with this shape's angular window"
        )
    order = np.lexsort((np.arange(n), scale))
    mask = np.zeros(n, dtype=bool)
    mask[order[:target]] = True
    return mask.reshape(height, width)


def mask_fraction(mask: np.ndarray) -> float:
    """True-cell fraction of a boolean mask."""
    mask = np.asarray(mask)
    return float(mask.sum() / mask.size)


def mask_union_fraction(mask: np.ndarray, reference: np.ndarray) -> tuple[float, float]:
    """Coverage diagnostics of ``mask`` against a reference cell set.

    Returns (inside_fraction, outside_fraction): the fraction of reference
    cells covered by the mask, and the fraction of mask cells that fall
    outside the reference.
    """
    mask = np.asarray(mask, dtype=bool)
    reference = np.asarray(reference, dtype=bool)
    if mask.shape != reference.shape:
        raise ValueError(f"dimension mismatch: {mask.shape} vs {reference.shape}")
    mask_count = mask.sum()
    ref_count = reference.sum()
    if mask_count == 0 or ref_count == 0:
        raise ValueError("masks must contain at least one true cell")
    inside = float((mask & reference).sum() / ref_count)
    outside = float((mask & ~reference).sum() / mask_count)
    return inside, outside
