"""Combinatorial design search toolkit: verifiers, search strategies, and the
candidate-program evaluation pipeline."""

__version__ = "0.1.0"

from .catalog import (InstanceRecord, ProblemParams, ProblemType,
                      builtin_instances, register_builtin_types)
from .verify import VerifyResult, verify

__all__ = [
    "InstanceRecord", "ProblemParams", "ProblemType",
    "builtin_instances", "register_builtin_types",
    "VerifyResult", "verify",
]
