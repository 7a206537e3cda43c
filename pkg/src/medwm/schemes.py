"""Singular-value replacement watermarking in the HH subband.

Two schemes share one pipeline. ``DWT_SVD`` works on the HH band directly;
``DWT_DCT_SVD`` first takes the full-frame orthonormal DCT of HH. In both,
the singular values of that matrix are replaced outright by the watermark's
singular values, keeping the host's singular vectors.

Extraction is semi-blind: it needs the :class:`WatermarkKey` (the watermark's
singular vectors and the host's original singular values), not the host.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, WrongKeyError
from .kernels import (
    SvdFactors,
    as_matrix,
    dct2_forward,
    dct2_inverse,
    dwt2_forward,
    dwt2_inverse,
    svd_decompose,
    svd_reconstruct,
)


class SchemeId(enum.Enum):
    DWT_SVD = 0
    DWT_DCT_SVD = 1

    @property
    def label(self):
        return self.name.lower().replace("_", "-")

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        key = str(text).strip().upper().replace("-", "_")
        try:
            return cls[key]
        except KeyError:
            valid = ", ".join(s.label for s in cls)
            raise InvalidInputError(f"unknown scheme {text!r}; expected one of {valid}") from None


@dataclass(frozen=True, eq=False)
class WatermarkKey:
    """Side information the decoder needs."""

    scheme: SchemeId
    u_w: np.ndarray
    v_w: np.ndarray
    s_host: np.ndarray
    wm_rows: int
    wm_cols: int
    host_rows: int
    host_cols: int

    def __post_init__(self):
        if not isinstance(self.scheme, SchemeId):
            raise InvalidInputError(f"scheme must be a SchemeId, got {self.scheme!r}")
        wr, wc = self.wm_rows, self.wm_cols
        if self.host_rows != 2 * wr or self.host_cols != 2 * wc:
            raise InvalidInputError(
                f"watermark {wr}x{wc} does not match HH band of host "
                f"{self.host_rows}x{self.host_cols}"
            )
        if np.shape(self.u_w) != (wr, wr) or np.shape(self.v_w) != (wc, wc):
            raise InvalidInputError("u_w/v_w shapes do not match watermark dimensions")
        if np.shape(self.s_host) != (min(wr, wc),):
            raise InvalidInputError("s_host length must equal min(wm_rows, wm_cols)")

    def __eq__(self, other):
        if not isinstance(other, WatermarkKey):
            return NotImplemented
        return (
            self.scheme is other.scheme
            and (self.wm_rows, self.wm_cols, self.host_rows, self.host_cols)
            == (other.wm_rows, other.wm_cols, other.host_rows, other.host_cols)
            and np.array_equal(self.u_w, other.u_w)
            and np.array_equal(self.v_w, other.v_w)
            and np.array_equal(self.s_host, other.s_host)
        )


@dataclass(frozen=True)
class EmbedResult:
    watermarked: np.ndarray
    key: WatermarkKey


def _to_domain(scheme, hh):
    return dct2_forward(hh) if scheme is SchemeId.DWT_DCT_SVD else hh


def _from_domain(scheme, b):
    return dct2_inverse(b) if scheme is SchemeId.DWT_DCT_SVD else b


def _check_pair(host, watermark):
    host = as_matrix(host, "host")
    watermark = as_matrix(watermark, "watermark")
    hr, hc = host.shape
    if hr % 2 or hc % 2:
        raise InvalidInputError(f"host dimensions must be even, got {host.shape}")
    if watermark.shape != (hr // 2, hc // 2):
        raise InvalidInputError(
            f"watermark must be {hr // 2}x{hc // 2} to match the HH band, "
            f"got {watermark.shape[0]}x{watermark.shape[1]}"
        )
    return host, watermark


def embed(host, watermark, scheme):
    """Embed ``watermark`` into ``host`` with the given scheme.

    The watermark must already be exactly half the host size in each axis.
    """
    scheme = SchemeId.parse(scheme)
    host, watermark = _check_pair(host, watermark)
    wm = svd_decompose(watermark)
    bands = dwt2_forward(host)
    target = svd_decompose(_to_domain(scheme, bands.hh))
    marked = svd_reconstruct(SvdFactors(u=target.u, s=wm.s, v=target.v))
    watermarked = dwt2_inverse(bands.replace(hh=_from_domain(scheme, marked)))
    key = WatermarkKey(
        scheme=scheme,
        u_w=wm.u,
        v_w=wm.v,
        s_host=target.s,
        wm_rows=watermark.shape[0],
        wm_cols=watermark.shape[1],
        host_rows=host.shape[0],
        host_cols=host.shape[1],
    )
    return EmbedResult(watermarked=watermarked, key=key)


def extract(watermarked, key, scheme=None):
    """Recover ``(watermark_estimate, host_estimate)`` from a watermarked image.

    The host estimate puts the key's original singular values back under the
    received image's own singular vectors, so it is exact only when the image
    was not modified after embedding.
    """
    if scheme is not None and key.scheme is not SchemeId.parse(scheme):
        raise WrongKeyError(
            f"key was made for {key.scheme.label}, not {SchemeId.parse(scheme).label}"
        )
    watermarked = as_matrix(watermarked, "watermarked image")
    if watermarked.shape != (key.host_rows, key.host_cols):
        raise InvalidInputError(
            f"image is {watermarked.shape[0]}x{watermarked.shape[1]}, "
            f"key expects {key.host_rows}x{key.host_cols}"
        )
    bands = dwt2_forward(watermarked)
    received = svd_decompose(_to_domain(key.scheme, bands.hh))
    wm_est = svd_reconstruct(SvdFactors(u=key.u_w, s=received.s, v=key.v_w))
    restored = svd_reconstruct(SvdFactors(u=received.u, s=key.s_host, v=received.v))
    host_est = dwt2_inverse(bands.replace(hh=_from_domain(key.scheme, restored)))
    return wm_est, host_est


def embed_dwt_svd(host, watermark):
    return embed(host, watermark, SchemeId.DWT_SVD)


def extract_dwt_svd(watermarked, key):
    return extract(watermarked, key, SchemeId.DWT_SVD)


def embed_dwt_dct_svd(host, watermark):
    return embed(host, watermark, SchemeId.DWT_DCT_SVD)


def extract_dwt_dct_svd(watermarked, key):
    return extract(watermarked, key, SchemeId.DWT_DCT_SVD)
