"""z-measures on partitions, their boundary limits and correlation functions."""

from .errors import CapabilityError, DomainError, NumericError, PoleError, ResourceError, ZMeasureError
from .exact import GaussianRational, parse_exact
from .omega import OmegaPoint
from .partitions import Partition
from .policy import DEFAULT_POLICY, NumericPolicy, SeriesResult
from .zmeasure import MixedParams, ZParams, measure

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "DEFAULT_POLICY",
    "DomainError",
    "GaussianRational",
    "MixedParams",
    "NumericError",
    "NumericPolicy",
    "OmegaPoint",
    "Partition",
    "PoleError",
    "ResourceError",
    "SeriesResult",
    "ZMeasureError",
    "ZParams",
    "measure",
    "parse_exact",
]
