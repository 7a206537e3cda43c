"""Deterministic 512x512 8-bit test corpus and watermarks.

Standard images come from scikit-image's bundled data. Synthetic images
model medical scans: piecewise-smooth anatomy plus acquisition noise.
"""

import numpy as np
from skimage import color, data, transform

SIZE = 512
STANDARD = (
    "brick",
    "cell",
    "chelsea",
    "clock",
    "coins",
    "immunohistochemistry",
    "page",
    "retina",
    "rocket",
)


def _gray8(img):
    img = np.asarray(img)
    if img.ndim == 3:
        if img.shape[2] == 4:
            img = color.rgba2rgb(img)
        img = color.rgb2gray(img) * 255.0
    elif img.dtype == bool or img.max() <= 1.0:
        img = img.astype(float) * 255.0
    return img.astype(float)


def _fit(img, size):
    out = transform.resize(img, (size, size), preserve_range=True, anti_aliasing=True)
    return np.clip(np.round(out), 0, 255)


def _phantom(seed):
    rng = np.random.default_rng(seed)
    img = _fit(_gray8(data.shepp_logan_phantom()), SIZE) * 0.8 + 20.0
    return np.clip(np.round(img + rng.normal(0.0, 2.0, img.shape)), 0, 255)


def _soft_tissue(seed):
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[-1:1:SIZE * 1j, -1:1:SIZE * 1j]
    body = np.exp(-((xx / 0.8) ** 2 + (yy / 0.65) ** 2) ** 2)
    img = 30.0 + 140.0 * body
    for _ in range(12):
        cy, cx = rng.uniform(-0.5, 0.5, 2)
        r = rng.uniform(0.04, 0.15)
        img += rng.uniform(-40, 60) * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * r * r))
    img += rng.normal(0.0, 1.5, img.shape)
    return np.clip(np.round(img), 0, 255)


def _radiograph(seed):
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:SIZE, 0:SIZE] / SIZE
    img = 60.0 + 120.0 * np.sin(np.pi * xx) ** 2 * (0.6 + 0.4 * yy)
    for k in range(5):
        img += 35.0 * np.exp(-((xx - 0.15 - 0.17 * k) ** 2) / 0.0015)
    img += rng.normal(0.0, 1.0, img.shape)
    return np.clip(np.round(img), 0, 255)


def corpus():
    """``[(image_id, 512x512 float matrix of integers in [0, 255])]`` sorted by id."""
    images = [(name, _fit(_gray8(getattr(data, name)()), SIZE)) for name in STANDARD]
    images.append(("synthetic_phantom", _phantom(11)))
    images.append(("synthetic_soft_tissue", _soft_tissue(12)))
    images.append(("synthetic_radiograph", _radiograph(13)))
    return sorted(images)


def logo_watermark():
    """scikit-image logo as an 8-bit grayscale image at its native 500x500."""
    return np.round(_gray8(data.logo()))


def natural_watermark(size=SIZE // 2):
    """Textured 8-bit watermark with distinct singular values."""
    return _fit(_gray8(data.camera()), size)
