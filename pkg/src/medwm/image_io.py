"""Grayscale image files, bit-depth conversion, resizing and padding.

Two formats are supported, chosen by magic bytes on read: binary PGM (P5,
maxval 255) and 8-bit grayscale PNG. Colour, alpha and 16-bit inputs are
rejected rather than converted.
"""

import enum
import io
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import (
    ImageFormatError,
    ImageNotFoundError,
    InvalidInputError,
    PayloadLengthError,
    UnsupportedImageError,
)
from .kernels import as_matrix

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
PGM_MAGIC = b"P5"


class ImageFormat(enum.Enum):
    PGM_P5 = "pgm"
    PNG_GRAY8 = "png"

    @classmethod
    def for_path(cls, path):
        """Guess the output format from a file extension (PGM unless ``.png``)."""
        return cls.PNG_GRAY8 if Path(path).suffix.lower() == ".png" else cls.PGM_P5


@dataclass(frozen=True)
class ImageFile:
    path: Path
    format: ImageFormat
    width: int
    height: int


@dataclass(frozen=True)
class PadRecord:
    """Rows/columns appended by :func:`pad_to_even`."""

    rows_added: int = 0
    cols_added: int = 0

    @property
    def empty(self):
        return not (self.rows_added or self.cols_added)


def _read_bytes(path):
    path = Path(path)
    try:
        return path.read_bytes()
    except FileNotFoundError:
        raise ImageNotFoundError(f"no such image file: {path}") from None
    except IsADirectoryError:
        raise ImageNotFoundError(f"not a file: {path}") from None


def _sniff(data, path):
    if data.startswith(PNG_MAGIC):
        return ImageFormat.PNG_GRAY8
    if data.startswith(PGM_MAGIC):
        return ImageFormat.PGM_P5
    raise ImageFormatError(f"{path}: not a binary PGM (P5) or PNG file", offset=0)


def _pgm_header(data, path):
    """Parse a P5 header; returns (width, height, maxval, payload_offset)."""
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data) and (data[pos : pos + 1].isspace() or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                while pos < len(data) and data[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < len(data) and data[pos : pos + 1].isdigit():
            pos += 1
        if pos == start:
            if pos >= len(data):
                raise ImageFormatError(f"{path}: PGM header ends early", offset=pos)
            raise ImageFormatError(
                f"{path}: expected a decimal number in PGM header, found {data[pos:pos + 1]!r}",
                offset=pos,
            )
        fields.append((int(data[start:pos]), start))
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise ImageFormatError(f"{path}: PGM header must end with one whitespace byte", offset=pos)
    (width, wpos), (height, hpos), (maxval, mpos) = fields
    if width < 1:
        raise ImageFormatError(f"{path}: PGM width must be positive", offset=wpos)
    if height < 1:
        raise ImageFormatError(f"{path}: PGM height must be positive", offset=hpos)
    if maxval != 255:
        raise UnsupportedImageError(
            f"{path}: only 8-bit PGM (maxval 255) is supported, got maxval {maxval}",
            offset=mpos,
        )
    return width, height, maxval, pos + 1


def _load_pgm(data, path):
    width, height, _, offset = _pgm_header(data, path)
    expected = width * height
    actual = len(data) - offset
    if actual != expected:
        raise PayloadLengthError(expected, actual, offset=offset)
    pixels = np.frombuffer(data, dtype=np.uint8, count=expected, offset=offset)
    return pixels.reshape(height, width).astype(np.float64)


def _load_png(data, path):
    try:
        with Image.open(io.BytesIO(data)) as im:
            mode = im.mode
            if mode != "L":
                what = "bit depth" if mode in ("1", "I", "I;16", "I;16B", "I;16L", "F") else "color type"
                raise UnsupportedImageError(
                    f"{path}: only 8-bit grayscale PNG is supported, got mode {mode} ({what})"
                )
            arr = np.asarray(im, dtype=np.uint8)
    except UnsupportedImageError:
        raise
    except (OSError, ValueError, SyntaxError) as exc:
        raise ImageFormatError(f"{path}: unreadable PNG: {exc}") from None
    return arr.astype(np.float64)


def probe(path):
    """Read just enough of ``path`` to describe it."""
    data = _read_bytes(path)
    fmt = _sniff(data, path)
    if fmt is ImageFormat.PGM_P5:
        width, height, _, _ = _pgm_header(data, path)
    else:
        try:
            with Image.open(io.BytesIO(data)) as im:
                width, height = im.size
        except (OSError, ValueError) as exc:
            raise ImageFormatError(f"{path}: unreadable PNG: {exc}") from None
    return ImageFile(path=Path(path), format=fmt, width=width, height=height)


def load_gray(path):
    """Load an 8-bit grayscale image as a float64 matrix with values in [0, 255]."""
    data = _read_bytes(path)
    fmt = _sniff(data, path)
    if fmt is ImageFormat.PGM_P5:
        return _load_pgm(data, path)
    return _load_png(data, path)


def to_uint8(m):
    """Clamp to [0, 255] and round half away from zero."""
    m = as_matrix(m)
    return np.floor(np.clip(m, 0.0, 255.0) + 0.5).astype(np.uint8)


def encode(m, fmt):
    """Return the file bytes for ``m`` in format ``fmt``."""
    pixels = to_uint8(m)
    if fmt is ImageFormat.PGM_P5:
        h, w = pixels.shape
        return b"P5\n%d %d\n255\n" % (w, h) + pixels.tobytes()
    buf = io.BytesIO()
    Image.fromarray(pixels).save(buf, format="PNG", optimize=False)
    return buf.getvalue()


def save_gray(m, path, fmt=None):
    """Write ``m`` as an 8-bit image; the file is replaced atomically.

    ``fmt`` defaults to PNG for a ``.png`` suffix and PGM otherwise.
    """
    path = Path(path)
    fmt = ImageFormat.for_path(path) if fmt is None else ImageFormat(fmt)
    payload = encode(m, fmt)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def resize_bilinear(m, new_rows, new_cols):
    """Bilinear resize with half-pixel-centred sampling and edge clamping."""
    m = as_matrix(m)
    if int(new_rows) != new_rows or int(new_cols) != new_cols or new_rows < 1 or new_cols < 1:
        raise InvalidInputError(f"target size must be positive integers, got {new_rows}x{new_cols}")
    new_rows, new_cols = int(new_rows), int(new_cols)
    h, w = m.shape
    if (h, w) == (new_rows, new_cols):
        return m.copy()

    def axis(n_in, n_out):
        src = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        src = np.clip(src, 0.0, n_in - 1)
        i0 = np.minimum(np.floor(src).astype(np.intp), n_in - 1)
        i1 = np.minimum(i0 + 1, n_in - 1)
        return i0, i1, src - i0

    r0, r1, fr = axis(h, new_rows)
    c0, c1, fc = axis(w, new_cols)
    fc = fc[None, :]
    top = m[r0][:, c0] + fc * (m[r0][:, c1] - m[r0][:, c0])
    bottom = m[r1][:, c0] + fc * (m[r1][:, c1] - m[r1][:, c0])
    out = top + fr[:, None] * (bottom - top)
    # Keep rounding from stepping outside the input range.
    return np.clip(out, m.min(), m.max())


def pad_to_even(m):
    """Replicate the last row and/or column so both dimensions are even."""
    m = as_matrix(m)
    rows_added = m.shape[0] % 2
    cols_added = m.shape[1] % 2
    if rows_added or cols_added:
        m = np.pad(m, ((0, rows_added), (0, cols_added)), mode="edge")
    else:
        m = m.copy()
    return m, PadRecord(rows_added=rows_added, cols_added=cols_added)


def crop_padding(m, record):
    """Undo :func:`pad_to_even`."""
    h, w = m.shape
    return m[: h - record.rows_added, : w - record.cols_added]
