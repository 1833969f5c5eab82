"""Structured pass/fail record shared by the kernel checks and the verify suites."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return _plain(v.tolist())
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


@dataclass
class VerificationReport:
    """One checked claim.

    ``passed`` is ``|computed - reference| <= tolerance`` for deterministic
    checks; Monte Carlo entries encode their statistical criterion the same
    way (e.g. number of failing seeds against an allowance).
    """

    claim_id: str
    method: str
    computed: Any
    reference: Any
    tolerance: float
    passed: bool
    diagnostics: dict = field(default_factory=dict)
    seed: int | None = None

    def to_dict(self) -> dict:
        return _plain({
            "claim_id": self.claim_id,
            "method": self.method,
            "computed": self.computed,
            "reference": self.reference,
            "tolerance": self.tolerance,
            "pass": bool(self.passed),
            "diagnostics": self.diagnostics,
            "seed": self.seed,
        })

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.claim_id}: computed={self.computed!r} reference={self.reference!r} tol={self.tolerance:g}"


def compare(claim_id: str, method: str, computed: float, reference: float, tolerance: float,
            seed: int | None = None, **diagnostics) -> VerificationReport:
    computed, reference = _plain(computed), _plain(reference)
    ok = bool(abs(computed - reference) <= tolerance)
    return VerificationReport(claim_id, method, computed, reference, tolerance, ok, diagnostics, seed)
