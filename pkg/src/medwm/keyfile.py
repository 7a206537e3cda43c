"""Binary key file holding a :class:`~medwm.schemes.WatermarkKey`.

Layout (little-endian)::

    b"WMK1"                          magic
    u8   version (= 1)
    u8   scheme (0 = dwt-svd, 1 = dwt-dct-svd)
    u32  host_rows, host_cols, wm_rows, wm_cols
    f64  u_w      wm_rows * wm_rows, row-major
    f64  v_w      wm_cols * wm_cols, row-major
    f64  s_host   min(wm_rows, wm_cols)
"""

import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .errors import InvalidInputError, KeyFormatError
from .schemes import SchemeId, WatermarkKey

MAGIC = b"WMK1"
VERSION = 1
_HEADER = struct.Struct("<4sBB4I")


def expected_length(wm_rows, wm_cols):
    return _HEADER.size + 8 * (wm_rows * wm_rows + wm_cols * wm_cols + min(wm_rows, wm_cols))


def dumps(key):
    header = _HEADER.pack(
        MAGIC, VERSION, key.scheme.value, key.host_rows, key.host_cols, key.wm_rows, key.wm_cols
    )
    body = b"".join(
        np.ascontiguousarray(a, dtype="<f8").tobytes() for a in (key.u_w, key.v_w, key.s_host)
    )
    return header + body


def read_header(data):
    """Decode and check the fixed-size header; returns a dict of its fields."""
    if len(data) < _HEADER.size:
        raise KeyFormatError(
            f"key length mismatch: {len(data)} bytes is shorter than the {_HEADER.size}-byte header"
        )
    magic, version, scheme, hr, hc, wr, wc = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise KeyFormatError(f"bad key magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise KeyFormatError(f"unsupported key version {version}")
    try:
        scheme = SchemeId(scheme)
    except ValueError:
        raise KeyFormatError(f"unknown scheme byte {scheme}") from None
    return {"scheme": scheme, "host_rows": hr, "host_cols": hc, "wm_rows": wr, "wm_cols": wc}


def loads(data):
    fields = read_header(data)
    wr, wc = fields["wm_rows"], fields["wm_cols"]
    want = expected_length(wr, wc)
    if len(data) != want:
        raise KeyFormatError(f"key length mismatch: expected {want} bytes, got {len(data)}")
    flat = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).astype(np.float64)
    k = min(wr, wc)
    u_w = flat[: wr * wr].reshape(wr, wr)
    v_w = flat[wr * wr : wr * wr + wc * wc].reshape(wc, wc)
    s_host = flat[wr * wr + wc * wc : wr * wr + wc * wc + k]
    try:
        return WatermarkKey(u_w=u_w, v_w=v_w, s_host=s_host, **fields)
    except InvalidInputError as exc:
        raise KeyFormatError(f"inconsistent key: {exc}") from None


def save_key(key, path):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(dumps(key))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_key(path):
    return loads(Path(path).read_bytes())
