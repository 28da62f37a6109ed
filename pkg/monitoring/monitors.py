import logging
import math
import statistics
import time
from collections import defaultdict, deque
from dataclasses import asdict, dataclass
from typing import Any, Dict, List

import numpy as np
import wandb
import weave

logger = logging.getLogger(__name__)


@dataclass
class Alert:
    """Alert structure"""
    level: str  # INFO, WARNING, ERROR
    message: str
    timestamp: float
    metric: str
    value: Any
    threshold: Any

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        for key in ("value", "threshold"):
            if isinstance(out[key], float) and not math.isfinite(out[key]):
                out[key] = None
        return out


def _wandb_active() -> bool:
    return wandb.run is not None


class FlowDashboard:
    """Rolling windows over sampled flow rows, with live threshold alerts.

    Rows are forwarded to wandb when a run is active.
    """

    def __init__(self, window_size: int = 100, prefix: str = "flow"):
        self.window_size = window_size
        self.prefix = prefix
        self.metrics = defaultdict(lambda: deque(maxlen=window_size))
        self.alerts: List[Alert] = []
        # lower is worse for min_eig, higher is worse for the residuals
        self.thresholds = {
            "min_eig": {"warning": 1e-3, "error": 1e-5, "direction": "below"},
            "res_inf": {"warning": 1e2, "error": 1e4, "direction": "above"},
        }

    def record(self, row: Dict[str, float]):
        for name, value in row.items():
            if value is None or (isinstance(value, float) and math.isnan(value)):
                continue
            self.metrics[name].append(float(value))
            self._check_thresholds(name, float(value))
        if _wandb_active():
            wandb.log({f"{self.prefix}/{k}": v for k, v in row.items() if v is not None})

    def _check_thresholds(self, name: str, value: float):
        if name not in self.thresholds:
            return
        limits = self.thresholds[name]
        worse = (lambda a, b: a < b) if limits["direction"] == "below" else (lambda a, b: a > b)
        for level in ("error", "warning"):
            if worse(value, limits[level]):
                self._create_alert(level.upper(), f"{name} crossed the {level} threshold", name, value, limits[level])
                return

    def _create_alert(self, level: str, message: str, metric: str, value: Any, threshold: Any):
        alert = Alert(level=level, message=message, timestamp=time.time(),
                      metric=metric, value=value, threshold=threshold)
        self.alerts.append(alert)
        logger.warning("%s: %s (%s=%s)", level, message, metric, value)
        if _wandb_active():
            wandb.log({f"alerts/{level.lower()}_count": 1, f"alerts/{metric}": value})

    def get_metric_stats(self, name: str) -> Dict[str, Any]:
        values = list(self.metrics.get(name, ()))
        if not values:
            return {"status": "no_data"}
        return {
            "count": len(values),
            "mean": statistics.mean(values),
            "min": min(values),
            "max": max(values),
            "latest": values[-1],
            "trend": self._calculate_trend(values),
        }

    def _calculate_trend(self, values: List[float]) -> str:
        if len(values) < 4:
            return "stable"
        half = len(values) // 2
        recent, older = statistics.mean(values[half:]), statistics.mean(values[:half])
        if recent < older * 0.95:
            return "decreasing"
        if recent > older * 1.05:
            return "increasing"
        return "stable"

    @weave.op()
    def get_dashboard_data(self) -> Dict[str, Any]:
        return {
            "metrics": {name: self.get_metric_stats(name) for name in self.metrics},
            "alerts": [alert.to_dict() for alert in self.alerts],
            "alert_counts": self._count_alerts_by_level(),
        }

    def _count_alerts_by_level(self) -> Dict[str, int]:
        counts = defaultdict(int)
        for alert in self.alerts:
            counts[alert.level] += 1
        return dict(counts)


# Invariant tolerances on finished runs
MAX_PRINCIPLE_TOL = 1e-8
ENERGY_TOL = 1e-6
CONVEXITY_TOL = 1e-6
PHASE_TOL = 1e-8
TRANSIENT_FRACTION = 0.2
MONOTONE_SLACK = 1e-9
RESIDUAL_FLOOR = 1e-12


def _uniform_prefix(t: np.ndarray) -> int:
    """Number of leading samples on the uniform time grid"""
    if len(t) < 3:
        return len(t)
    spacing = t[1] - t[0]
    uniform = np.isclose(np.diff(t), spacing, rtol=1e-9, atol=1e-12)
    bad = np.flatnonzero(~uniform)
    return len(t) if bad.size == 0 else int(bad[0]) + 1


@weave.op()
def check_invariants(record) -> List[Alert]:
    """Flow invariants evaluated on a finished run record"""
    alerts: List[Alert] = []
    now = time.time()
    t = record.column("t")
    if len(t) < 2:
        return alerts

    def alert(metric: str, message: str, value: float, threshold: float):
        alerts.append(Alert("ERROR", message, now, metric, float(value), float(threshold)))

    res = record.column("res_l2")
    tail = res[int(math.floor(TRANSIENT_FRACTION * len(res))):]
    rises = np.diff(tail) - MONOTONE_SLACK * tail[:-1] - RESIDUAL_FLOOR
    if rises.size and rises.max() > 0:
        alert("res_l2", "residual increased after the transient", rises.max(), 0.0)

    phidot = record.column("sup_abs_phidot")
    excess = phidot.max() - phidot[0]
    if excess > MAX_PRINCIPLE_TOL:
        alert("sup_abs_phidot", "maximum principle violated", excess, MAX_PRINCIPLE_TOL)

    energy_i = record.column("energy_I")
    if record.mass_matched and np.all(np.isfinite(energy_i)):
        drift = np.max(np.abs(energy_i - energy_i[0]))
        bound = ENERGY_TOL * max(1.0, abs(energy_i[0]))
        if drift > bound:
            alert("energy_I", "I is not conserved", drift, bound)

    uniform = _uniform_prefix(t)
    energy_j = record.column("energy_J")[:uniform]
    if energy_j.size >= 3:
        second = energy_j[2:] - 2.0 * energy_j[1:-1] + energy_j[:-2]
        if second.min() < -CONVEXITY_TOL:
            alert("energy_J", "J is not convex along the flow", second.min(), -CONVEXITY_TOL)

    theta_min, theta_max = record.column("theta_min"), record.column("theta_max")
    if np.all(np.isfinite(theta_min)):
        if theta_min.min() < theta_min[0] - PHASE_TOL:
            alert("theta_min", "phase dropped below its initial infimum", theta_min.min(), theta_min[0])
        if theta_max.max() > theta_max[0] + PHASE_TOL:
            alert("theta_max", "phase rose above its initial supremum", theta_max.max(), theta_max[0])

    for item in alerts:
        logger.warning("invariant: %s (%s=%.3e)", item.message, item.metric, item.value)
    return alerts
