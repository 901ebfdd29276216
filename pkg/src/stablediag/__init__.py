"""Goodness-of-fit diagnostics for non-causal AR models with stable noise."""

from .stable import (
    QuadratureError,
    StableParams,
    params_from_s1,
    params_to_s1,
    stable_logpdf,
    stable_pdf,
    stable_sample,
)

__version__ = "0.1.0"

__all__ = [
    "StableParams",
    "QuadratureError",
    "stable_pdf",
    "stable_logpdf",
    "stable_sample",
    "params_from_s1",
    "params_to_s1",
]
