"""Command-line interface: ``medwm {embed,extract,attack,bench,key-info}``."""

import argparse
import logging
import sys

from . import bench, image_io, keyfile
from .attacks import DEFAULT_PARAMS, AttackKind, AttackSpec, apply_attack
from .errors import WatermarkError
from .metrics import format_number, normalized_correlation, psnr
from .schemes import SchemeId, embed, extract

log = logging.getLogger("medwm")

SCHEME_CHOICES = [s.label for s in SchemeId]
ATTACK_CHOICES = [k.value for k in AttackKind]

# CLI flag -> (attack kind, parameter name)
ATTACK_FLAGS = {
    "window": (AttackKind.MEDIAN, "window"),
    "model": (AttackKind.NOISE, "model"),
    "sigma": (AttackKind.NOISE, "sigma"),
    "density": (AttackKind.NOISE, "density"),
    "angle": (AttackKind.ROTATION, "angle_deg"),
    "factor": (AttackKind.SHEAR, "factor"),
    "fraction": (AttackKind.CROP, "fraction"),
    "anchor": (AttackKind.CROP, "anchor"),
}


def _load_host(path):
    host = image_io.load_gray(path)
    host, pad = image_io.pad_to_even(host)
    if not pad.empty:
        log.info(
            "host %s has odd dimensions; padded to %dx%d by edge replication "
            "(outputs keep the padded size)",
            path,
            *host.shape,
        )
    return host


def _load_watermark(path, shape):
    wm = image_io.load_gray(path)
    if wm.shape != shape:
        log.info(
            "resizing watermark %s from %dx%d to %dx%d to match the HH band",
            path,
            wm.shape[0],
            wm.shape[1],
            *shape,
        )
    return bench.prepare_watermark(wm, (2 * shape[0], 2 * shape[1]))


def cmd_embed(args):
    host = _load_host(args.host)
    wm = _load_watermark(args.watermark, (host.shape[0] // 2, host.shape[1] // 2))
    result = embed(host, wm, SchemeId.parse(args.scheme))
    image_io.save_gray(result.watermarked, args.out)
    keyfile.save_key(result.key, args.key)
    exported = image_io.to_uint8(result.watermarked).astype(float)
    print(f"psnr_db={format_number(psnr(host, result.watermarked))}")
    print(f"psnr_db_8bit={format_number(psnr(host, exported))}")
    return 0


def cmd_extract(args):
    key = keyfile.load_key(args.key)
    image = image_io.load_gray(args.image)
    if image.shape != (key.host_rows, key.host_cols):
        padded, pad = image_io.pad_to_even(image)
        if pad.empty or padded.shape != (key.host_rows, key.host_cols):
            raise WatermarkError(
                f"image is {image.shape[0]}x{image.shape[1]} but the key expects "
                f"{key.host_rows}x{key.host_cols}"
            )
        log.info("padded %s to %dx%d to match the key", args.image, *padded.shape)
        image = padded
    estimate, host_est = extract(image, key, args.scheme)
    image_io.save_gray(estimate / bench.WATERMARK_SCALE, args.out_watermark)
    if args.out_host:
        image_io.save_gray(host_est, args.out_host)
    if args.reference:
        ref = _load_watermark(args.reference, (key.wm_rows, key.wm_cols))
        print(f"nc={format_number(normalized_correlation(ref, estimate))}")
    return 0


def resolve_attack(args):
    kind = AttackKind(args.kind)
    params = {}
    for flag, (flag_kind, name) in ATTACK_FLAGS.items():
        value = getattr(args, flag)
        if value is None:
            continue
        if flag_kind is not kind:
            valid = ", ".join(f"--{f}" for f, (k, _) in ATTACK_FLAGS.items() if k is kind)
            raise WatermarkError(f"--{flag} does not apply to {kind.value}; valid options: {valid}")
        params[name] = value
    return AttackSpec(kind, params, seed=args.seed)


def cmd_attack(args):
    spec = resolve_attack(args)
    image = image_io.load_gray(args.image)
    image_io.save_gray(apply_attack(image, spec), args.out)
    print(f"attack kind={spec.kind.value} {spec.describe().replace(';', ' ')} seed={spec.seed}")
    return 0


def cmd_bench(args):
    config = bench.load_config(args.config)
    reports = bench.run_bench(config)
    log.info("wrote %d rows to %s", len(reports), config.output_csv)
    for line in bench.format_summary(bench.summarize(reports)):
        print(line)
    return 0


def cmd_key_info(args):
    with open(args.key, "rb") as fh:
        data = fh.read()
    fields = keyfile.read_header(data)
    print(f"magic={keyfile.MAGIC.decode()}")
    print(f"version={keyfile.VERSION}")
    print(f"scheme={fields['scheme'].label}")
    for name in ("host_rows", "host_cols", "wm_rows", "wm_cols"):
        print(f"{name}={fields[name]}")
    want = keyfile.expected_length(fields["wm_rows"], fields["wm_cols"])
    print(f"length={len(data)}")
    print(f"expected_length={want}")
    return 0 if len(data) == want else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="medwm", description="DWT-SVD / DWT-DCT-SVD image watermarking"
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for stochastic attacks (default 0)")
    parser.add_argument("--quiet", action="store_true", help="suppress notices on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a watermark into a host image")
    p.add_argument("host")
    p.add_argument("watermark")
    p.add_argument("--scheme", choices=SCHEME_CHOICES, default="dwt-dct-svd")
    p.add_argument("--out", required=True, help="watermarked image (.pgm or .png)")
    p.add_argument("--key", required=True, help="key file to write")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="extract a watermark and recover the host")
    p.add_argument("image")
    p.add_argument("--key", required=True)
    p.add_argument("--out-watermark", required=True)
    p.add_argument("--out-host")
    p.add_argument("--reference", help="original watermark; prints nc=<value>")
    p.add_argument("--scheme", choices=SCHEME_CHOICES, help="fail unless the key matches this scheme")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("attack", help="apply one attack to an image")
    p.add_argument("image")
    p.add_argument("--kind", required=True, choices=ATTACK_CHOICES)
    p.add_argument("--out", required=True)
    defaults = {k: DEFAULT_PARAMS[kind][name] for k, (kind, name) in ATTACK_FLAGS.items()}
    p.add_argument("--window", type=int, help=f"median window (default {defaults['window']})")
    p.add_argument("--model", choices=["gaussian", "salt_pepper"], help="noise model (default gaussian)")
    p.add_argument("--sigma", type=float, help=f"gaussian sigma (default {defaults['sigma']:g})")
    p.add_argument("--density", type=float, help=f"salt/pepper density (default {defaults['density']:g})")
    p.add_argument("--angle", type=float, help=f"rotation degrees (default {defaults['angle']:g})")
    p.add_argument("--factor", type=float, help=f"shear factor (default {defaults['factor']:g})")
    p.add_argument("--fraction", type=float, help=f"cropped area fraction (default {defaults['fraction']:g})")
    p.add_argument("--anchor", choices=["center", "corner"], help="crop anchor (default center)")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("bench", help="run a corpus benchmark from a config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("key-info", help="print key file header fields")
    p.add_argument("key")
    p.set_defaults(func=cmd_key_info)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("medwm: %(message)s"))
    log.handlers[:] = [handler]
    log.propagate = False
    log.setLevel(logging.WARNING if args.quiet else logging.INFO)
    if args.seed < 0:
        parser.error("--seed must be non-negative")
    try:
        return args.func(args)
    except (WatermarkError, OSError) as exc:
        print(f"medwm: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
