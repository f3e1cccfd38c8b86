"""GIRRE: guided IR resolution enhancement.

Enhance a low-resolution IR image with a registered high-resolution RGB
guide: upscale, then transfer the guide's spatial detail through local
linear models fitted per window by ridge regression. Includes a benchmark
harness (PSNR/SSIM over manifest-described datasets) and a CLI.
"""

from .bench import (
    ExperimentResult,
    SceneResult,
    emit_report,
    run_experiment,
    sweep_radius,
)
from .dataset import DatasetManifest, SceneData, SceneEntry, ingest_dataset, load_manifest
from .guided import (
    DEFAULT_PARAMS,
    CoefficientField,
    FilterParams,
    ParamTable,
    average_coefficients,
    box_mean,
    compute_coefficients,
    girre_enhance,
    guided_transfer,
    lookup_params,
)
from .image import PlanarImage, clamp, load_image, save_image, to_gray
from .metrics import MetricReport, compare, psnr, ssim
from .resample import ScaleFactor, downscale, upscale_bicubic
from .synthetic import generate_dataset

__version__ = "0.1.0"

__all__ = [
    "PlanarImage",
    "load_image",
    "save_image",
    "to_gray",
    "clamp",
    "ScaleFactor",
    "upscale_bicubic",
    "downscale",
    "FilterParams",
    "CoefficientField",
    "ParamTable",
    "DEFAULT_PARAMS",
    "lookup_params",
    "box_mean",
    "compute_coefficients",
    "average_coefficients",
    "guided_transfer",
    "girre_enhance",
    "MetricReport",
    "psnr",
    "ssim",
    "compare",
    "DatasetManifest",
    "SceneEntry",
    "SceneData",
    "load_manifest",
    "ingest_dataset",
    "SceneResult",
    "ExperimentResult",
    "run_experiment",
    "sweep_radius",
    "emit_report",
    "generate_dataset",
    "__version__",
]
