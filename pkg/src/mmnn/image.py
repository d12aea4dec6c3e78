"""Images, masks, annotated points, and circular-neighborhood feature extraction.

Images hold per-pixel per-channel reals in [0, 1]; color images use HSV channel
order (hue treated as a plain linear value).  Features for a pixel are the
channel values gathered over a circular neighborhood, border pixels clamped to
the nearest edge, optionally sorted ascending within each channel block.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from PIL import Image as PILImage

from .errors import OutOfBoundsError, ParseError

PROTOTYPE = "prototype"
COUNTER_PROTOTYPE = "counter"
_ROLES = (PROTOTYPE, COUNTER_PROTOTYPE)


class Image:
    """Immutable (height, width, channels) float64 array with samples in [0, 1]."""

    def __init__(self, data):
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3 or arr.shape[2] not in (1, 3):
            raise ValueError(f"image data must be (h, w) or (h, w, 1|3), got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("image contains NaN or infinity")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("image samples must lie in [0, 1]")
        arr = arr.copy()
        arr.setflags(write=False)
        self.data = arr

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    def contains(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height


class BinaryMask:
    """Immutable boolean (height, width) array; True marks object pixels."""

    def __init__(self, bits):
        arr = np.asarray(bits)
        if arr.ndim != 2:
            raise ValueError(f"mask must be 2-D, got shape {arr.shape}")
        arr = arr.astype(bool)
        arr.setflags(write=False)
        self.bits = arr

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    def complement(self) -> "BinaryMask":
        return BinaryMask(~self.bits)

    def __eq__(self, other):
        return isinstance(other, BinaryMask) and np.array_equal(self.bits, other.bits)


@dataclass(frozen=True)
class AnnotatedPoint:
    """A pixel tagged as prototype or counter-prototype for a named class."""

    x: int
    y: int
    role: str = PROTOTYPE
    class_label: str = "object"

    def __post_init__(self):
        if self.role not in _ROLES:
            raise ValueError(f"role must be one of {_ROLES}, got {self.role!r}")


@dataclass(frozen=True)
class FeatureConfig:
    """Neighborhood feature settings: radius, per-channel sorting, clamped borders."""

    radius: int = 0
    sort_within_channel: bool = True
    border: str = "clamp"

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be >= 0")
        if self.border != "clamp":
            raise ValueError("only clamp-to-edge borders are supported")

    def feature_length(self, channels: int) -> int:
        return len(circular_offsets(self.radius)) * channels


def circular_offsets(r: int) -> list:
    """Integer lattice offsets with dx^2 + dy^2 <= r^2, row-major (dy outer)."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    r2 = r * r
    return [(dx, dy)
            for dy in range(-r, r + 1)
            for dx in range(-r, r + 1)
            if dx * dx + dy * dy <= r2]


def extract_features(img: Image, x: int, y: int, cfg: FeatureConfig) -> np.ndarray:
    """Feature vector for one pixel: per-channel neighborhood gather, clamped at edges."""
    if not img.contains(x, y):
        raise OutOfBoundsError(f"pixel ({x}, {y}) outside {img.width}x{img.height} image")
    offs = circular_offsets(cfg.radius)
    h, w = img.height, img.width
    blocks = []
    for c in range(img.channels):
        vals = np.array([img.data[min(max(y + dy, 0), h - 1),
                                  min(max(x + dx, 0), w - 1), c]
                         for dx, dy in offs])
        if cfg.sort_within_channel:
            vals = np.sort(vals)
        blocks.append(vals)
    return np.concatenate(blocks)


def extract_features_grid(img: Image, cfg: FeatureConfig) -> np.ndarray:
    """Feature vectors for every pixel, shape (h*w, len) in row-major pixel order.

    Same values as :func:`extract_features` per pixel; vectorized for scans.
    """
    offs = circular_offsets(cfg.radius)
    h, w, c = img.height, img.width, img.channels
    gathered = np.empty((h, w, len(offs), c), dtype=np.float64)
    ys = np.arange(h)
    xs = np.arange(w)
    for k, (dx, dy) in enumerate(offs):
        yy = np.clip(ys + dy, 0, h - 1)
        xx = np.clip(xs + dx, 0, w - 1)
        gathered[:, :, k, :] = img.data[yy][:, xx, :]
    if cfg.sort_within_channel:
        gathered = np.sort(gathered, axis=2)
    # channel blocks first, offsets within each block
    return gathered.transpose(0, 1, 3, 2).reshape(h * w, c * len(offs))


def subsample(img, factor: int):
    """Nearest-neighbor decimation: keep pixels whose coordinates divide ``factor``."""
    if factor < 1:
        raise ValueError("subsample factor must be >= 1")
    if isinstance(img, Image):
        return Image(img.data[::factor, ::factor, :])
    if isinstance(img, BinaryMask):
        return BinaryMask(img.bits[::factor, ::factor])
    raise TypeError(f"cannot subsample {type(img).__name__}")


def subsample_point(p: AnnotatedPoint, factor: int) -> AnnotatedPoint:
    """Map an annotated point onto the subsampled grid (coordinates floor-divided)."""
    return AnnotatedPoint(p.x // factor, p.y // factor, p.role, p.class_label)


# ---------------------------------------------------------------------------
# File IO: PNG / PGM / PPM reads via Pillow; deterministic PGM / PNG writers.
# ---------------------------------------------------------------------------

def load_image(path, mode: str = "auto") -> Image:
    """Load PNG or PGM/PPM as a [0, 1] image.

    ``mode``: ``"gray"`` forces single channel, ``"hsv"`` forces 3-channel HSV,
    ``"auto"`` keeps single-band sources gray and converts color sources to HSV.
    """
    with PILImage.open(path) as pil:
        bands = len(pil.getbands())
        if mode == "auto":
            mode = "gray" if bands == 1 else "hsv"
        if mode == "gray":
            arr = np.asarray(pil.convert("L"), dtype=np.float64) / 255.0
            return Image(arr)
        if mode == "hsv":
            rgb = np.asarray(pil.convert("RGB"), dtype=np.float64) / 255.0
            from skimage.color import rgb2hsv

            return Image(np.clip(rgb2hsv(rgb), 0.0, 1.0))
    raise ValueError(f"unknown image mode {mode!r}")


def load_mask(path) -> BinaryMask:
    """Load a mask image; sample values >= 128 become object pixels."""
    with PILImage.open(path) as pil:
        arr = np.asarray(pil.convert("L"))
    return BinaryMask(arr >= 128)


def save_mask_pgm(mask: BinaryMask, path) -> None:
    """Binary P5 PGM with object = 255, background = 0."""
    data = np.where(mask.bits, 255, 0).astype(np.uint8)
    _write_pgm(data, path)


def save_gray_pgm(values: np.ndarray, path) -> None:
    """8-bit preview of a [0, 1] scalar field (clipped)."""
    arr = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    _write_pgm(np.round(arr * 255.0).astype(np.uint8), path)


def _write_pgm(data: np.ndarray, path) -> None:
    h, w = data.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(data.tobytes())


def save_mask_png(mask: BinaryMask, path) -> None:
    with open(path, "wb") as f:
        f.write(mask_png_bytes(mask))


def mask_png_bytes(mask: BinaryMask) -> bytes:
    """Deterministic PNG encoding of a mask (object = 255)."""
    import io

    data = np.where(mask.bits, 255, 0).astype(np.uint8)
    buf = io.BytesIO()
    PILImage.fromarray(data, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def save_raw_f32(values: np.ndarray, path) -> None:
    """Flat little-endian float32 sidecar, row-major."""
    np.asarray(values, dtype="<f4").tofile(path)


def load_raw_f32(path, height: int, width: int) -> np.ndarray:
    return np.fromfile(path, dtype="<f4").reshape(height, width).astype(np.float64)


def read_points_csv(path) -> list:
    """Read annotated points from CSV rows ``x,y,role,class`` (header optional)."""
    points = []
    try:
        with open(path, newline="") as f:
            for row in csv.reader(f):
                if not row or row[0].strip().lower() in ("", "x"):
                    continue
                if len(row) < 3:
                    raise ParseError(f"points row needs at least x,y,role: {row}")
                label = row[3].strip() if len(row) > 3 else "object"
                points.append(AnnotatedPoint(int(row[0]), int(row[1]),
                                             row[2].strip(), label))
    except (ValueError, OSError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"cannot parse points file {path}: {exc}") from exc
    return points


def write_points_csv(points, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["x", "y", "role", "class"])
        for p in points:
            writer.writerow([p.x, p.y, p.role, p.class_label])
