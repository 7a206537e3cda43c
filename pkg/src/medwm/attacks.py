"""Robustness attacks: median filter, additive noise, rotation, shear, crop.

Every attack keeps the canvas size. Geometric attacks fill uncovered pixels
with 0 so the decoder can run on the attacked image without registration.
"""

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import InvalidInputError
from .kernels import as_matrix


class AttackKind(enum.Enum):
    MEDIAN = "median"
    NOISE = "noise"
    ROTATION = "rotation"
    SHEAR = "shear"
    CROP = "crop"


class NoiseModel(enum.Enum):
    GAUSSIAN = "gaussian"
    SALT_PEPPER = "salt_pepper"


class CropAnchor(enum.Enum):
    CENTER = "center"
    CORNER = "corner"


# Benchmark grid center point, on the 0..255 pixel scale.
DEFAULT_PARAMS = {
    AttackKind.MEDIAN: {"window": 3},
    AttackKind.NOISE: {"model": NoiseModel.GAUSSIAN, "sigma": 5.0, "density": 0.01},
    AttackKind.ROTATION: {"angle_deg": 2.0},
    AttackKind.SHEAR: {"factor": 0.05},
    AttackKind.CROP: {"fraction": 0.25, "anchor": CropAnchor.CENTER},
}


def _enum_value(cls, value, what):
    if isinstance(value, cls):
        return value
    try:
        return cls(str(value).strip().lower().replace("-", "_"))
    except ValueError:
        valid = ", ".join(m.value for m in cls)
        raise InvalidInputError(f"unknown {what} {value!r}; expected one of {valid}") from None


@dataclass(frozen=True)
class AttackSpec:
    """An attack kind plus its parameters; missing parameters take the defaults."""

    kind: AttackKind
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        kind = _enum_value(AttackKind, self.kind, "attack")
        object.__setattr__(self, "kind", kind)
        allowed = DEFAULT_PARAMS[kind]
        unknown = set(self.params) - set(allowed)
        if unknown:
            raise InvalidInputError(
                f"unknown parameter(s) {sorted(unknown)} for {kind.value}; "
                f"expected {sorted(allowed)}"
            )
        merged = dict(allowed)
        merged.update(self.params)
        object.__setattr__(self, "params", _validate(kind, merged))
        if int(self.seed) != self.seed or self.seed < 0:
            raise InvalidInputError(f"seed must be a non-negative integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))

    def describe(self):
        """Compact ``name=value`` form of the parameters that matter."""
        return ";".join(f"{k}={_fmt(v)}" for k, v in self.relevant_params().items())

    def relevant_params(self):
        p = self.params
        if self.kind is AttackKind.NOISE:
            if p["model"] is NoiseModel.GAUSSIAN:
                return {"model": p["model"], "sigma": p["sigma"]}
            return {"model": p["model"], "density": p["density"]}
        return dict(p)

    @property
    def stochastic(self):
        return self.kind is AttackKind.NOISE


def _fmt(v):
    if isinstance(v, enum.Enum):
        return v.value
    if isinstance(v, float):
        return f"{v:g}"
    return str(v)


def _validate(kind, p):
    try:
        if kind is AttackKind.MEDIAN:
            w = p["window"]
            if int(w) != w or w < 3 or w % 2 == 0:
                raise InvalidInputError(f"median window must be an odd integer >= 3, got {w!r}")
            p["window"] = int(w)
        elif kind is AttackKind.NOISE:
            p["model"] = _enum_value(NoiseModel, p["model"], "noise model")
            p["sigma"] = float(p["sigma"])
            p["density"] = float(p["density"])
            if not p["sigma"] >= 0:
                raise InvalidInputError(f"noise sigma must be >= 0, got {p['sigma']}")
            if not 0.0 <= p["density"] <= 1.0:
                raise InvalidInputError(f"noise density must be in [0, 1], got {p['density']}")
        elif kind is AttackKind.ROTATION:
            p["angle_deg"] = float(p["angle_deg"])
            if not np.isfinite(p["angle_deg"]):
                raise InvalidInputError("rotation angle must be finite")
        elif kind is AttackKind.SHEAR:
            p["factor"] = float(p["factor"])
            if not np.isfinite(p["factor"]):
                raise InvalidInputError("shear factor must be finite")
        elif kind is AttackKind.CROP:
            p["fraction"] = float(p["fraction"])
            p["anchor"] = _enum_value(CropAnchor, p["anchor"], "crop anchor")
            if not 0.0 < p["fraction"] < 1.0:
                raise InvalidInputError(f"crop fraction must be in (0, 1), got {p['fraction']}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInputError):
            raise
        raise InvalidInputError(f"bad {kind.value} parameter: {exc}") from None
    return p


def bilinear_sample(image, rows, cols, fill=0.0):
    """Sample ``image`` at fractional coordinates; outside points get ``fill``."""
    h, w = image.shape
    inside = (rows >= 0) & (rows <= h - 1) & (cols >= 0) & (cols <= w - 1)
    r = np.clip(rows, 0, h - 1)
    c = np.clip(cols, 0, w - 1)
    r0 = np.minimum(np.floor(r).astype(np.intp), h - 1)
    c0 = np.minimum(np.floor(c).astype(np.intp), w - 1)
    r1 = np.minimum(r0 + 1, h - 1)
    c1 = np.minimum(c0 + 1, w - 1)
    fr = r - r0
    fc = c - c0
    top = image[r0, c0] + fc * (image[r0, c1] - image[r0, c0])
    bottom = image[r1, c0] + fc * (image[r1, c1] - image[r1, c0])
    out = top + fr * (bottom - top)
    return np.where(inside, out, fill)


def _warp(image, inverse):
    """Inverse-map every output pixel through ``inverse(dy, dx)`` about the center."""
    h, w = image.shape
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    sy, sx = inverse(yy - cy, xx - cx)
    return bilinear_sample(image, sy + cy, sx + cx)


def _rotate(image, angle_deg):
    if angle_deg == 0:
        return image.copy()
    t = np.deg2rad(angle_deg)
    cos, sin = np.cos(t), np.sin(t)
    # Positive angles turn clockwise on screen (rows grow downward); inverse mapping.
    return _warp(image, lambda dy, dx: (cos * dy - sin * dx, sin * dy + cos * dx))


def _shear(image, factor):
    if factor == 0:
        return image.copy()
    # Horizontal shear: x' = x + factor * y.
    return _warp(image, lambda dy, dx: (dy, dx - factor * dy))


def _crop(image, fraction, anchor):
    h, w = image.shape
    side = np.sqrt(fraction)
    ch, cw = int(round(h * side)), int(round(w * side))
    out = image.copy()
    if anchor is CropAnchor.CENTER:
        r0, c0 = (h - ch) // 2, (w - cw) // 2
    else:
        r0, c0 = 0, 0
    out[r0 : r0 + ch, c0 : c0 + cw] = 0.0
    return out


def _noise(image, p, seed):
    rng = np.random.default_rng(seed)
    if p["model"] is NoiseModel.GAUSSIAN:
        if p["sigma"] == 0:
            return image.copy()
        return image + rng.normal(0.0, p["sigma"], size=image.shape)
    out = image.copy()
    count = int(round(p["density"] * image.size))
    if count == 0:
        return out
    idx = rng.choice(image.size, size=count, replace=False)
    values = np.where(rng.random(count) < 0.5, 0.0, 255.0)
    out.reshape(-1)[idx] = values
    return out


def apply_attack(image, spec):
    """Return an attacked copy of ``image``; the input is not modified."""
    image = as_matrix(image, "image")
    if not isinstance(spec, AttackSpec):
        raise InvalidInputError(f"expected an AttackSpec, got {type(spec).__name__}")
    p = spec.params
    if spec.kind is AttackKind.MEDIAN:
        return ndimage.median_filter(image, size=p["window"], mode="nearest")
    if spec.kind is AttackKind.NOISE:
        return _noise(image, p, spec.seed)
    if spec.kind is AttackKind.ROTATION:
        return _rotate(image, p["angle_deg"])
    if spec.kind is AttackKind.SHEAR:
        return _shear(image, p["factor"])
    return _crop(image, p["fraction"], p["anchor"])


def default_grid(seed=0):
    """One attack of each kind at its default strength."""
    return [AttackSpec(kind, seed=seed) for kind in AttackKind]
