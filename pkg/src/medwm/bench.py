"""Corpus benchmark: embed, attack, extract and score every image.

The configuration is a flat text file, one ``key = value`` directive per
line; ``#`` starts a comment. Relative paths resolve against the config
file's directory::

    corpus_dir = images
    watermark  = logo.png
    schemes    = dwt-svd, dwt-dct-svd
    attack     = median window=3
    attack     = noise model=gaussian sigma=5
    attack     = rotation angle_deg=2
    output_csv = results.csv
    seed       = 0
    image_dir  = out        # optional: write attacked images and extractions
    workers    = 4          # optional: images processed concurrently

With no ``attack`` lines the default grid (one attack of each kind at its
default strength) is used.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import image_io
from .attacks import AttackSpec, apply_attack, default_grid
from .errors import ImageFormatError, InvalidInputError, UndefinedCorrelationError
from .metrics import EvalReport, mse, normalized_correlation, psnr, reports_to_csv
from .schemes import SchemeId, embed, extract

log = logging.getLogger("medwm")

# Watermarks enter the schemes as intensities in [0, 1].
WATERMARK_SCALE = 1.0 / 255.0

# Mean-NC differences smaller than this are reported as ties.
TIE_TOLERANCE = 1e-9


@dataclass
class BenchConfig:
    corpus_dir: Path
    watermark_path: Path
    output_csv: Path
    schemes: List[SchemeId] = field(default_factory=lambda: list(SchemeId))
    attack_grid: List[AttackSpec] = field(default_factory=default_grid)
    seed: int = 0
    image_dir: Optional[Path] = None
    workers: int = 1


def parse_attack(text, seed=0):
    """Parse ``"<kind> name=value ..."`` into an :class:`AttackSpec`."""
    parts = text.split()
    if not parts:
        raise InvalidInputError("empty attack directive")
    params = {}
    for item in parts[1:]:
        name, sep, value = item.partition("=")
        if not sep:
            raise InvalidInputError(f"attack parameter {item!r} is not name=value")
        params[name] = value
    return AttackSpec(parts[0], _coerce(params), seed=seed)


def _coerce(params):
    out = {}
    for name, value in params.items():
        try:
            num = float(value)
        except ValueError:
            out[name] = value
            continue
        out[name] = int(num) if name == "window" and num.is_integer() else num
    return out


def parse_config(text, base_dir=Path(".")):
    base_dir = Path(base_dir)
    values = {}
    attacks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep or not key:
            raise InvalidInputError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        if key == "attack":
            attacks.append((lineno, value))
        elif key in values:
            raise InvalidInputError(f"config line {lineno}: duplicate directive {key!r}")
        else:
            values[key] = value
    known = {"corpus_dir", "watermark", "output_csv", "schemes", "seed", "image_dir", "workers"}
    unknown = set(values) - known
    if unknown:
        raise InvalidInputError(f"unknown config directive(s): {', '.join(sorted(unknown))}")
    for required in ("corpus_dir", "watermark", "output_csv"):
        if required not in values:
            raise InvalidInputError(f"config is missing {required!r}")
    try:
        seed = int(values.get("seed", 0))
        workers = int(values.get("workers", 1))
    except ValueError as exc:
        raise InvalidInputError(f"bad integer in config: {exc}") from None
    if seed < 0 or workers < 1:
        raise InvalidInputError("seed must be >= 0 and workers >= 1")
    schemes = [SchemeId.parse(s) for s in values.get("schemes", "dwt-svd, dwt-dct-svd").replace(",", " ").split()]
    if not schemes:
        raise InvalidInputError("config lists no schemes")
    grid = []
    for lineno, value in attacks:
        try:
            grid.append(parse_attack(value, seed=seed))
        except (InvalidInputError, ValueError) as exc:
            raise InvalidInputError(f"config line {lineno}: {exc}") from None
    return BenchConfig(
        corpus_dir=base_dir / values["corpus_dir"],
        watermark_path=base_dir / values["watermark"],
        output_csv=base_dir / values["output_csv"],
        schemes=schemes,
        attack_grid=grid or default_grid(seed),
        seed=seed,
        image_dir=base_dir / values["image_dir"] if "image_dir" in values else None,
        workers=workers,
    )


def load_config(path):
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)


def prepare_watermark(watermark, host_shape):
    """Resize an 8-bit watermark to the host's HH band and scale it to [0, 1]."""
    rows, cols = host_shape[0] // 2, host_shape[1] // 2
    if watermark.shape != (rows, cols):
        watermark = image_io.resize_bilinear(watermark, rows, cols)
    return watermark * WATERMARK_SCALE


def load_corpus(corpus_dir):
    """Load every readable image in ``corpus_dir`` (sorted by name), padded to even size."""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise InvalidInputError(f"corpus directory not found: {corpus_dir}")
    images = []
    for path in sorted(p for p in corpus_dir.iterdir() if p.is_file()):
        try:
            img = image_io.load_gray(path)
        except ImageFormatError as exc:
            log.warning("skipping %s: %s", path.name, exc)
            continue
        img, pad = image_io.pad_to_even(img)
        if not pad.empty:
            log.info("padded %s to %dx%d", path.name, *img.shape)
        images.append((path.stem, img))
    return images


def _nc(watermark, estimate, image_id):
    try:
        return normalized_correlation(watermark, estimate)
    except UndefinedCorrelationError:
        log.warning("%s: extracted watermark is all zero; nc recorded as 0", image_id)
        return 0.0


def evaluate_image(image_id, host, watermark8, schemes, grid, seed, image_dir=None):
    """All report rows for one host image; attacks use ``seed``."""
    wm = prepare_watermark(watermark8, host.shape)
    reports = []
    for scheme in schemes:
        result = embed(host, wm, scheme)
        cases = [(None, result.watermarked)]
        for spec in grid:
            spec = AttackSpec(spec.kind, dict(spec.params), seed=seed)
            cases.append((spec, apply_attack(result.watermarked, spec)))
        for spec, tested in cases:
            estimate, _ = extract(tested, result.key)
            reports.append(
                EvalReport(
                    image_id=image_id,
                    scheme=scheme,
                    attack=spec,
                    seed=seed,
                    psnr_db=psnr(host, tested),
                    nc=_nc(wm, estimate, image_id),
                    mse=mse(host, tested),
                )
            )
            if image_dir is not None:
                tag = "none" if spec is None else f"{spec.kind.value}-{spec.describe().replace(';', '_')}"
                stem = f"{image_id}__{scheme.label}__{tag}"
                image_io.save_gray(tested, Path(image_dir) / f"{stem}.png")
                image_io.save_gray(estimate / WATERMARK_SCALE, Path(image_dir) / f"{stem}__wm.png")
    return reports


def run_bench(config):
    """Run the benchmark; returns the report rows in CSV order."""
    watermark8 = image_io.load_gray(config.watermark_path)
    corpus = load_corpus(config.corpus_dir)
    if not corpus:
        raise InvalidInputError(f"no readable images in {config.corpus_dir}")
    if config.image_dir is not None:
        Path(config.image_dir).mkdir(parents=True, exist_ok=True)

    def work(item):
        index, (image_id, host) = item
        return evaluate_image(
            image_id,
            host,
            watermark8,
            config.schemes,
            config.attack_grid,
            config.seed + index,
            config.image_dir,
        )

    items = list(enumerate(corpus))
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            batches = list(pool.map(work, items))
    else:
        batches = [work(item) for item in items]
    reports = sorted((r for batch in batches for r in batch), key=EvalReport.sort_key)
    config.output_csv.parent.mkdir(parents=True, exist_ok=True)
    _write_text_atomic(config.output_csv, reports_to_csv(reports))
    return reports


def _write_text_atomic(path, text):
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_text(text)
    tmp.replace(path)


def summarize(reports):
    """Mean NC per (attack, scheme) and the sign of the DCT-minus-plain difference.

    Returns a list of dicts, one per attack label (``"none"`` first).
    """
    groups = {}
    for r in reports:
        label = "none" if r.attack is None else f"{r.attack.kind.value}:{r.attack.describe()}"
        groups.setdefault(label, {}).setdefault(r.scheme, []).append(r)
    rows = []
    for label in sorted(groups, key=lambda s: (s != "none", s)):
        by_scheme = groups[label]
        row = {"attack": label, "n_images": max(len(v) for v in by_scheme.values())}
        for scheme, rs in by_scheme.items():
            row[f"nc[{scheme.label}]"] = float(np.mean([r.nc for r in rs]))
            row[f"psnr[{scheme.label}]"] = float(np.mean([r.psnr_db for r in rs]))
        if SchemeId.DWT_SVD in by_scheme and SchemeId.DWT_DCT_SVD in by_scheme:
            diff = row["nc[dwt-dct-svd]"] - row["nc[dwt-svd]"]
            row["diff"] = diff
            row["sign"] = 0 if abs(diff) <= TIE_TOLERANCE else int(math.copysign(1, diff))
        rows.append(row)
    return rows


def format_summary(rows):
    lines = []
    for row in rows:
        parts = [f"attack={row['attack']}", f"images={row['n_images']}"]
        for key, value in row.items():
            if key.startswith(("nc[", "psnr[")):
                parts.append(f"{key}={value:.6f}")
        if "diff" in row:
            parts.append(f"diff={row['diff']:+.6f}")
            parts.append(f"sign={row['sign']:+d}" if row["sign"] else "sign=0")
        lines.append(" ".join(parts))
    return lines
