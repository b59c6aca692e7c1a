"""Identity verification: sampling harness and the registry."""

from .harness import (Env, Identity, Param, SampleRecord, VerificationReport, VerifyConfig, compare,
                      reports_to_json, sample_params, verify_all, verify_identity)
from .registry import MUTANTS, REGISTRY, get_identity, ids

__all__ = ["Env", "Identity", "Param", "SampleRecord", "VerificationReport", "VerifyConfig", "compare",
           "reports_to_json", "sample_params", "verify_all", "verify_identity", "MUTANTS", "REGISTRY",
           "get_identity", "ids"]
