"""DQC1 estimation of Jones and single-variable HOMFLY values of braid closures at roots of unity."""
from .braid import BraidError, BraidWord, as_braid, format_braid, parse_braid, read_braid_file, writhe
from .dqc1 import (
    KnotEstimate,
    PrecisionWarning,
    RngConfig,
    default_beta,
    estimate_homfly,
    estimate_jones,
    exact_homfly,
    exact_jones,
)
from .estimators import HomflyEstimator, JonesEstimator
from .jones_wenzl import YoungDiagram, homfly_value
from .oracle import kauffman_jones
from .path_model import jones_value

__version__ = "0.1.0"

__all__ = [
    "BraidError",
    "BraidWord",
    "HomflyEstimator",
    "JonesEstimator",
    "KnotEstimate",
    "PrecisionWarning",
    "RngConfig",
    "YoungDiagram",
    "as_braid",
    "default_beta",
    "estimate_homfly",
    "estimate_jones",
    "exact_homfly",
    "exact_jones",
    "format_braid",
    "homfly_value",
    "jones_value",
    "kauffman_jones",
    "parse_braid",
    "read_braid_file",
    "writhe",
]
