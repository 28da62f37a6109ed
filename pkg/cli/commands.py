"""
Command implementations. Each takes the parsed argparse namespace, prints
one JSON object and returns the exit code; exceptions are mapped to exit
codes by main.py.
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from core.errors import ConfigError, DegenerateSpectrum, DomainError, PhaseSingularity
from dhym import (
    DhymPhaseSpec,
    complex_slope,
    dhym_p,
    dhym_q,
    gamma_theta_membership,
    lagrangian_phase,
    truncated_phase,
)
from evaluation import run_suite
from flows import boundary_sweep, run
from gma import GmaCoefficients, c_subsolution_margin, gamma_bar_membership, gma_p, gma_q, tp_positive
from monitoring import FlowDashboard, check_invariants
from spectra import HermitianMatrix, as_values, relative_eigenvalues, symmetric_polynomials
from torus import intersection_numbers, write_snapshot
from .config import RunConfigFile, load_run_config, parse_matrix
from .output import EXIT_OK, EXIT_VIOLATION, STATUS_EXIT, alert_payload, emit, write_json

logger = logging.getLogger(__name__)


def _numbers(text: str, exact: bool = False) -> List[Any]:
    """Comma-separated reals; Fractions when exact"""
    try:
        items = [item.strip() for item in text.split(",") if item.strip()]
        return [Fraction(item) if exact else float(item) for item in items]
    except ValueError as exc:
        raise ConfigError(f"cannot parse {text!r} as a list of numbers") from exc


def _spectrum(args) -> np.ndarray:
    """Ascending eigenvalues from --lambda, or from --chi relative to --omega"""
    if args.lam is not None:
        values = _numbers(args.lam, getattr(args, "exact", False))
        if not values:
            raise ConfigError("--lambda is empty")
        return np.array(sorted(values), dtype=object if isinstance(values[0], Fraction) else np.float64)
    if args.chi is None:
        raise ConfigError("give either --lambda or --chi (with optional --omega)")
    chi = parse_matrix(args.chi)
    omega = parse_matrix(args.omega) if args.omega else HermitianMatrix.identity(chi.n)
    return as_values(relative_eigenvalues(chi, omega))


def _coefficients(args, n: int) -> GmaCoefficients:
    c = _numbers(args.c, getattr(args, "exact", False)) if args.c else []
    if n > 1 and not c:
        c = [0.0] * (n - 1)
    return GmaCoefficients(n, tuple(c), args.c0)


def _guarded(fn, *fn_args):
    """Operator value, or None where it is undefined"""
    try:
        return fn(*fn_args)
    except (DegenerateSpectrum, PhaseSingularity, DomainError) as exc:
        logger.info("%s undefined: %s", getattr(fn, "__name__", "operator"), exc)
        return None


def _gma_values(lam: np.ndarray, coeffs: GmaCoefficients) -> Dict[str, Any]:
    n = coeffs.n
    out: Dict[str, Any] = {}
    for ell in range(1, n):
        out[f"P{ell}"] = _guarded(gma_p, lam, coeffs, ell)
    if coeffs.c0 is not None:
        out["Q"] = _guarded(gma_q, lam, coeffs)
    out["c_subsolution_margin"] = _guarded(c_subsolution_margin, lam, coeffs)
    out["cone"] = gamma_bar_membership(lam, coeffs).to_dict()
    tp = {}
    for p in range(1, n + 1):
        if p == n and coeffs.c0 is None:
            continue
        tp[str(p)] = _guarded(tp_positive, lam, coeffs, p)
    out["tp_positive"] = tp
    return out


def _dhym_values(lam: np.ndarray, spec: Optional[DhymPhaseSpec], c0: Optional[float]) -> Dict[str, Any]:
    n = lam.shape[-1]
    slope = complex_slope(lam)
    out: Dict[str, Any] = {
        "theta": float(lagrangian_phase(lam)),
        "slope": [float(slope.re), float(slope.im)],
        "Q": _guarded(dhym_q, lam, 0.0 if c0 is None else c0),
    }
    for ell in range(1, n):
        out[f"theta_tilde{ell}"] = float(truncated_phase(lam, ell))
        out[f"P{ell}"] = _guarded(dhym_p, lam, ell)
    if spec is not None:
        out["cone"] = gamma_theta_membership(lam, spec).to_dict()
    return out


def _phase_spec(args) -> Optional[DhymPhaseSpec]:
    if args.theta is None:
        return None
    return DhymPhaseSpec(args.theta, args.Theta if args.Theta is not None else args.theta)


def cmd_op(args) -> int:
    """All operator values at one spectrum"""
    lam = _spectrum(args)
    n = lam.shape[-1]
    if args.sym and not (args.gma or args.dhym):
        emit({"S": symmetric_polynomials(lam)})
        return EXIT_OK

    sections = {}
    if args.gma or (not args.dhym and (args.c or args.c0 is not None)):
        sections["gma"] = _gma_values(lam, _coefficients(args, n))
    if args.dhym or not args.gma:
        sections["dhym"] = _dhym_values(lam.astype(np.float64), _phase_spec(args), args.c0)
    out: Dict[str, Any] = {"lambda": lam, "S": symmetric_polynomials(lam)}
    if len(sections) == 1:
        out.update(next(iter(sections.values())))
    else:
        out.update(sections)
    emit(out)
    return EXIT_OK


def cmd_cone(args) -> int:
    """Cone membership report; exit 1 when the point is outside"""
    lam = _spectrum(args)
    n = lam.shape[-1]
    if args.dhym:
        spec = _phase_spec(args)
        if spec is None:
            raise ConfigError("the dHYM cone needs --theta")
        report = gamma_theta_membership(lam.astype(np.float64), spec, closed=not args.open)
        payload = {"cone": "gamma_theta", **report.to_dict()}
    else:
        coeffs = _coefficients(args, n)
        report = gamma_bar_membership(lam, coeffs)
        payload = {"cone": "gamma_bar", **report.to_dict(),
                   "c_subsolution_margin": _guarded(c_subsolution_margin, lam, coeffs)}
    payload["lambda"] = lam
    emit(payload)
    return EXIT_OK if report.is_member else EXIT_VIOLATION


def cmd_intersect(args) -> int:
    """Intersection margins of constant classes; exit 1 when one is not strictly positive"""
    if args.config:
        config = load_run_config(args.config)
        if config.problem != "gMA":
            raise ConfigError("intersection numbers are defined for gMA problems")
        chi, omega = config.background, config.omega
        coeffs = GmaCoefficients(config.dimension, tuple(config.coefficients.c))
    else:
        if args.chi is None:
            raise ConfigError("give --config or --chi (with optional --omega)")
        chi = parse_matrix(args.chi)
        omega = parse_matrix(args.omega) if args.omega else HermitianMatrix.identity(chi.n)
        c = _numbers(args.c, args.exact) if args.c else [0.0] * (chi.n - 1)
        coeffs = GmaCoefficients(chi.n, tuple(c))
    report = intersection_numbers(chi, omega, coeffs, reduce_pencil=args.reduce_pencil)
    emit(report.to_dict())
    return EXIT_OK if report.positive else EXIT_VIOLATION


def _output_dir(config: RunConfigFile, args) -> Path:
    return Path(args.output_dir) if getattr(args, "output_dir", None) else Path(config.output.directory)


def cmd_flow(args) -> int:
    """One flow run: CSV time series, JSON summary with invariant alerts"""
    path = Path(args.config)
    config = load_run_config(path)
    flow_config = config.flow_config(path.parent)
    dashboard = FlowDashboard(prefix=config.output.prefix)
    record = run(flow_config, dashboard)
    alerts = alert_payload(check_invariants(record))

    directory = _output_dir(config, args)
    prefix = config.output.prefix
    files = {
        "csv": str(record.write_csv(directory / f"{prefix}.csv")),
        "summary": str(record.write_summary(directory / f"{prefix}.summary.json", alerts)),
    }
    if config.output.snapshot:
        files["snapshot"] = str(write_snapshot(directory / f"{prefix}.final.hfld", record.final))
    emit({**record.summary(alerts), "files": files})
    return STATUS_EXIT[record.status]


def cmd_sweep(args) -> int:
    """Boundary sweep; ScheduleError propagates to exit code 5 before any flow runs"""
    path = Path(args.config)
    config = load_run_config(path)
    base = config.flow_config(path.parent)
    schedule = config.sweep_schedule()
    report = boundary_sweep(base, schedule)

    directory = _output_dir(config, args)
    prefix = config.output.prefix
    csvs = [str(record.write_csv(directory / f"{prefix}-{item.index}.csv"))
            for item, record in zip(report.indices, report.records)]
    payload = {**report.to_dict(), "schedule": schedule.to_dict(), "seed": config.seed, "files": csvs}
    write_json(directory / f"{prefix}.sweep.json", payload)
    emit(payload)
    statuses = report.statuses
    if "diverged" in statuses:
        return STATUS_EXIT["diverged"]
    if "t_max" in statuses:
        return STATUS_EXIT["t_max"]
    return EXIT_OK


def cmd_props(args) -> int:
    """Seeded property suite; exit 1 with the first witness when anything is violated"""
    result = run_suite(args.suite, args.seed, args.samples)
    payload = result.to_dict()
    if not args.verbose:
        payload.pop("reports")
    if args.output:
        write_json(args.output, result.to_dict())
    emit(payload)
    return EXIT_OK if result.passed else EXIT_VIOLATION
