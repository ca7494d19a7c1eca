"""
Core module initialization
Errors, logging and random-stream utilities
"""

from .errors import (
    ExAnteIMError,
    InvalidInputError,
    InstanceTooLargeError,
    DatasetParseError,
    IncompatibleSpecError,
)
from .log import setup_logging
from .rng import Stream, derive_seed, chunk_generator

__all__ = [
    # Errors
    "ExAnteIMError",
    "InvalidInputError",
    "InstanceTooLargeError",
    "DatasetParseError",
    "IncompatibleSpecError",

    # Logging
    "setup_logging",

    # Random streams
    "Stream",
    "derive_seed",
    "chunk_generator",
]
