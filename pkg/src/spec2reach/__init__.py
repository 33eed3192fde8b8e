"""Reduce no-overflow, termination, memory-cleanup and explicit-liveness
properties of C-subset programs to reachability of ``reach_error()``."""

from .pipeline import TransformResult, TransformTask, transform, transform_text
from .properties import PropertyKind

__all__ = ["PropertyKind", "TransformResult", "TransformTask", "transform", "transform_text"]
__version__ = "0.1.0"
