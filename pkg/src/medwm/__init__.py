"""Semi-blind DWT-SVD and DWT-DCT-SVD watermarking for grayscale images."""

from .attacks import AttackKind, AttackSpec, CropAnchor, NoiseModel, apply_attack
from .errors import (
    ConvergenceError,
    ImageFormatError,
    InvalidInputError,
    KeyFormatError,
    UndefinedCorrelationError,
    WatermarkError,
    WrongKeyError,
)
from .image_io import load_gray, pad_to_even, resize_bilinear, save_gray
from .kernels import (
    SubbandSet,
    SvdFactors,
    dct2_forward,
    dct2_inverse,
    dwt2_forward,
    dwt2_inverse,
    svd_decompose,
    svd_reconstruct,
)
from .metrics import EvalReport, mse, normalized_correlation, psnr
from .schemes import (
    EmbedResult,
    SchemeId,
    WatermarkKey,
    embed,
    embed_dwt_dct_svd,
    embed_dwt_svd,
    extract,
    extract_dwt_dct_svd,
    extract_dwt_svd,
)

__version__ = "0.1.0"
