import numpy as np

from core.errors import PhaseSingularity
from core.reports import ConeReport
from spectra import as_values
from .phase import DhymPhaseSpec, complex_slope, lagrangian_phase, truncated_phase

PHASE_GUARD = 1e-12
IM_GUARD = 1e-14
MEMBERSHIP_TOL = 1e-12


def _cot(phase):
    return np.cos(phase) / np.sin(phase)


def dhym_p(lam, ell: int = 1):
    """-cot of the truncated phase; the C-subsolution condition is P < -cot theta"""
    phase = truncated_phase(lam, ell)
    if np.any(phase <= PHASE_GUARD) or np.any(phase >= np.pi - PHASE_GUARD):
        raise PhaseSingularity(f"truncated phase leaves (0, pi): {np.min(phase):.6g}..{np.max(phase):.6g}")
    return -_cot(phase)


def dhym_q(lam, c0_value=0.0):
    """-cot theta(lam) + c0 / Im prod(lam_j + i)"""
    slope = complex_slope(lam)
    if np.any(np.abs(slope.im) < IM_GUARD):
        raise PhaseSingularity("Im prod(lambda + i) vanishes")
    return (-_cot(lagrangian_phase(lam)) + np.asarray(c0_value) / slope.im)[()]


def gamma_theta_margin(lam, spec: DhymPhaseSpec):
    """min(theta - theta~, Theta - theta(lam), theta~, theta(lam)), batched.

    For n = 1 the truncated-phase terms are absent.
    """
    lam = as_values(lam)
    total = lagrangian_phase(lam)
    margin = np.minimum(spec.Theta - total, total)
    if lam.shape[-1] > 1:
        truncated = truncated_phase(lam, 1)
        margin = np.minimum(margin, np.minimum(spec.theta - truncated, truncated))
    return margin


def gamma_theta_membership(lam, spec: DhymPhaseSpec, closed: bool = True) -> ConeReport:
    lam = as_values(lam)
    total = float(lagrangian_phase(lam))
    details = {"theta_lambda": total, "closed": closed}
    if lam.shape[-1] > 1:
        details["theta_tilde"] = float(truncated_phase(lam, 1))
    margin = float(gamma_theta_margin(lam, spec))
    is_member = margin >= -MEMBERSHIP_TOL if closed else margin > 0
    return ConeReport(is_member, margin, witness=None if is_member else lam, details=details)

