"""Image quality and watermark similarity metrics."""

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .attacks import AttackSpec
from .errors import InvalidInputError, UndefinedCorrelationError
from .kernels import as_matrix
from .schemes import SchemeId

CSV_HEADER = ("image_id", "scheme", "attack", "param", "seed", "psnr_db", "nc", "mse")


def _pair(a, b):
    a = as_matrix(a, "first image")
    b = as_matrix(b, "second image")
    if a.shape != b.shape:
        raise InvalidInputError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def mse(a, b):
    """Mean squared error over all pixels."""
    a, b = _pair(a, b)
    d = a - b
    return float(np.mean(d * d))


def psnr(a, b, peak=255.0):
    """Peak signal-to-noise ratio in dB, ``10 log10(peak**2 / mse)``.

    Returns ``math.inf`` for identical inputs.
    """
    if not peak > 0:
        raise InvalidInputError(f"peak must be positive, got {peak}")
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(peak * peak / err)


def normalized_correlation(w, w_est):
    """Cosine similarity of two images taken as flat vectors, in [-1, 1]."""
    w, w_est = _pair(w, w_est)
    # Rescale first so squaring tiny or huge entries cannot under/overflow.
    w = w / max(np.abs(w).max(), np.finfo(float).tiny)
    w_est = w_est / max(np.abs(w_est).max(), np.finfo(float).tiny)
    nw = np.linalg.norm(w)
    ne = np.linalg.norm(w_est)
    if nw == 0 or ne == 0:
        raise UndefinedCorrelationError("normalized correlation of an all-zero image")
    nc = float(np.vdot(w / nw, w_est / ne))
    return min(1.0, max(-1.0, nc))


def format_number(x):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.6f}"


@dataclass(frozen=True)
class EvalReport:
    """One row of an evaluation table."""

    image_id: str
    scheme: SchemeId
    psnr_db: float
    nc: float
    mse: float
    attack: Optional[AttackSpec] = None
    seed: int = 0

    def __post_init__(self):
        if self.mse < 0:
            raise InvalidInputError("mse must be non-negative")
        if not -1.0 <= self.nc <= 1.0:
            raise InvalidInputError(f"nc out of range: {self.nc}")

    def sort_key(self):
        attack = "" if self.attack is None else self.attack.kind.value
        param = "" if self.attack is None else self.attack.describe()
        return (self.image_id, self.scheme.label, attack, param)

    def csv_row(self):
        return (
            self.image_id,
            self.scheme.label,
            "" if self.attack is None else self.attack.kind.value,
            "" if self.attack is None else self.attack.describe(),
            str(self.seed),
            format_number(self.psnr_db),
            format_number(self.nc),
            format_number(self.mse),
        )


def reports_to_csv(reports):
    """Serialize reports to CSV text in sorted (image, scheme, attack) order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in sorted(reports, key=EvalReport.sort_key):
        writer.writerow(r.csv_row())
    return buf.getvalue()
