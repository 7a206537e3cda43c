import numpy as np
import pytest
from PIL import Image

from medwm.errors import (
    ImageFormatError,
    ImageNotFoundError,
    InvalidInputError,
    PayloadLengthError,
    UnsupportedImageError,
)
from medwm.image_io import (
    ImageFormat,
    PadRecord,
    crop_padding,
    encode,
    load_gray,
    pad_to_even,
    probe,
    resize_bilinear,
    save_gray,
    to_uint8,
)


class TestPgm:
    def test_tiny_file(self, tmp_path):
        path = tmp_path / "t.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 128, 255, 64]))
        np.testing.assert_array_equal(load_gray(path), [[0.0, 128.0], [255.0, 64.0]])

    def test_comments_and_whitespace(self, tmp_path):
        path = tmp_path / "c.pgm"
        path.write_bytes(b"P5 # made by hand\n3\t1\n# maxval next\n255 " + bytes([1, 2, 3]))
        np.testing.assert_array_equal(load_gray(path), [[1.0, 2.0, 3.0]])

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "short.pgm"
        path.write_bytes(b"P5\n4 4\n255\n" + bytes(10))
        with pytest.raises(PayloadLengthError) as exc:
            load_gray(path)
        assert exc.value.expected == 16 and exc.value.actual == 10
        assert "expected 16" in str(exc.value) and "got 10" in str(exc.value)
        assert exc.value.offset == 11

    def test_trailing_bytes(self, tmp_path):
        path = tmp_path / "long.pgm"
        path.write_bytes(b"P5\n1 1\n255\n" + bytes(2))
        with pytest.raises(PayloadLengthError):
            load_gray(path)

    def test_sixteen_bit_rejected(self, tmp_path):
        path = tmp_path / "deep.pgm"
        path.write_bytes(b"P5\n1 1\n65535\n" + bytes(2))
        with pytest.raises(UnsupportedImageError) as exc:
            load_gray(path)
        assert exc.value.offset == 7

    def test_bad_header_offset(self, tmp_path):
        path = tmp_path / "bad.pgm"
        path.write_bytes(b"P5\n2 x\n255\n")
        with pytest.raises(ImageFormatError) as exc:
            load_gray(path)
        assert exc.value.offset == 5

    def test_unknown_magic(self, tmp_path):
        path = tmp_path / "x.pgm"
        path.write_bytes(b"P2\n1 1\n255\n0")
        with pytest.raises(ImageFormatError):
            load_gray(path)

    def test_missing(self, tmp_path):
        with pytest.raises(ImageNotFoundError) as exc:
            load_gray(tmp_path / "nope.pgm")
        assert "nope.pgm" in str(exc.value)
        assert isinstance(exc.value, FileNotFoundError)

    def test_probe(self, tmp_path):
        path = tmp_path / "p.pgm"
        save_gray(np.zeros((3, 5)), path)
        info = probe(path)
        assert (info.format, info.width, info.height) == (ImageFormat.PGM_P5, 5, 3)

    def test_encoding_layout(self):
        assert encode(np.array([[1.0, 2.0]]), ImageFormat.PGM_P5) == b"P5\n2 1\n255\n\x01\x02"


class TestRoundTrip:
    @pytest.mark.parametrize("suffix", [".pgm", ".png"])
    def test_seeded_round_trips(self, tmp_path, suffix):
        rng = np.random.default_rng(99)
        for i in range(100):
            shape = tuple(rng.integers(1, 40, size=2))
            img = rng.integers(0, 256, size=shape).astype(float)
            path = tmp_path / f"r{i}{suffix}"
            save_gray(img, path)
            np.testing.assert_array_equal(load_gray(path), img)

    def test_pgm_bytes_idempotent(self, tmp_path):
        img = np.random.default_rng(5).uniform(-20, 280, (17, 9))
        a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
        save_gray(img, a)
        save_gray(load_gray(a), b)
        assert a.read_bytes() == b.read_bytes()

    def test_format_override(self, tmp_path):
        path = tmp_path / "img.bin"
        save_gray(np.zeros((2, 2)), path, fmt="png")
        assert probe(path).format is ImageFormat.PNG_GRAY8

    def test_no_temp_files_left(self, tmp_path):
        save_gray(np.zeros((2, 2)), tmp_path / "a.png")
        assert [p.name for p in tmp_path.iterdir()] == ["a.png"]


class TestPng:
    def test_color_rejected(self, tmp_path):
        path = tmp_path / "rgb.png"
        Image.new("RGB", (3, 3)).save(path)
        with pytest.raises(UnsupportedImageError, match="color type"):
            load_gray(path)

    def test_sixteen_bit_rejected(self, tmp_path):
        path = tmp_path / "deep.png"
        Image.new("I;16", (3, 3)).save(path)
        with pytest.raises(UnsupportedImageError, match="bit depth"):
            load_gray(path)

    def test_corrupt(self, tmp_path):
        path = tmp_path / "bad.png"
        path.write_bytes(b"\x89PNG\r\n\x1a\n" + b"garbage")
        with pytest.raises(ImageFormatError):
            load_gray(path)


class TestConversion:
    def test_clamp_and_round(self):
        out = to_uint8(np.array([[255.7, -3.2, 127.5, 127.49, 0.5]]))
        np.testing.assert_array_equal(out, [[255, 0, 128, 127, 1]])
        assert out.dtype == np.uint8

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidInputError):
            to_uint8(np.array([[np.nan]]))


class TestResize:
    def test_constant(self):
        out = resize_bilinear(np.full((13, 7), 7.0), 5, 11)
        np.testing.assert_array_equal(out, np.full((5, 11), 7.0))

    def test_identity(self):
        a = np.random.default_rng(0).uniform(size=(6, 4))
        np.testing.assert_array_equal(resize_bilinear(a, 6, 4), a)

    def test_ramp_halving(self):
        out = resize_bilinear(np.arange(16.0).reshape(4, 4), 2, 2)
        np.testing.assert_allclose(out, [[2.5, 4.5], [10.5, 12.5]], atol=1e-12)

    def test_within_bounds(self):
        a = np.random.default_rng(1).uniform(10, 200, size=(9, 14))
        out = resize_bilinear(a, 31, 5)
        assert out.min() >= a.min() and out.max() <= a.max()

    @pytest.mark.parametrize("size", [(0, 3), (2.5, 3), (-1, 1)])
    def test_bad_size(self, size):
        with pytest.raises(InvalidInputError):
            resize_bilinear(np.zeros((4, 4)), *size)


class TestPadding:
    @pytest.mark.parametrize(
        "shape,record",
        [((512, 512), PadRecord(0, 0)), ((511, 512), PadRecord(1, 0)), ((511, 511), PadRecord(1, 1))],
    )
    def test_pad_to_even(self, shape, record):
        a = np.random.default_rng(2).uniform(size=shape)
        padded, got = pad_to_even(a)
        assert got == record
        assert padded.shape == (512, 512)
        np.testing.assert_array_equal(crop_padding(padded, got), a)
        if record.rows_added:
            np.testing.assert_array_equal(padded[-1, : shape[1]], a[-1])
        if record.cols_added:
            np.testing.assert_array_equal(padded[: shape[0], -1], a[:, -1])

    def test_empty_record(self):
        assert PadRecord().empty and not PadRecord(1, 0).empty
