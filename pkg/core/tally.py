from collections import defaultdict
from typing import Any, Dict, Optional

import numpy as np

from .reports import ConeReport


class ViolationTally:
    """Accumulates vectorized checks ``lhs <= rhs`` with relative slack.

    The first failing sample (in check order) is kept as the witness.
    """

    def __init__(self, slack: float = 1e-9):
        self.slack = slack
        self.checked = 0
        self.counts: Dict[str, int] = defaultdict(int)
        self.margin = np.inf
        self.witness: Optional[Dict[str, Any]] = None

    def check(self, name: str, lhs, rhs, indices, context: Optional[Dict[str, np.ndarray]] = None):
        lhs = np.asarray(lhs, dtype=np.float64)
        rhs = np.broadcast_to(np.asarray(rhs, dtype=np.float64), lhs.shape)
        with np.errstate(invalid="ignore"):
            tol = self.slack * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
            gap = np.where(lhs == rhs, tol, rhs + tol - lhs)
        bad = ~(gap >= 0)

        self.checked += lhs.size
        self.counts[name] += int(bad.sum())
        if lhs.size:
            finite = gap[np.isfinite(gap)]
            if finite.size:
                self.margin = min(self.margin, float(finite.min()))
            if bad.any():
                self.margin = min(self.margin, float(np.nan_to_num(gap[bad], nan=-np.inf).min()))
        if bad.any() and self.witness is None:
            j = int(np.argmax(bad))
            self.witness = {"property": name, "sample": int(np.asarray(indices)[j]),
                            "lhs": float(lhs[j]), "rhs": float(rhs[j])}
            for key, values in (context or {}).items():
                self.witness[key] = np.asarray(values)[j].tolist()

    @property
    def violations(self) -> int:
        return sum(self.counts.values())

    def report(self, **details) -> ConeReport:
        return ConeReport(
            is_member=self.violations == 0,
            margin=float(self.margin) if self.checked else 0.0,
            witness=self.witness,
            checked=self.checked,
            details={"violations": dict(self.counts), **details},
        )
