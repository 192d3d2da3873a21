"""SQL and QL reference curves, variational readout, and force sensitivity.

The SQL here is the added measurement noise with uncorrelated imprecision and
backaction, 1/sqrt(1 + rho^2) in dimensionless units; the QL is the deeper
bound from mechanical quadrature non-commutation, reached by measuring at the
correlation-optimal quadrature and power.  Limit curves exclude the thermal +
zero-point term unless the mode carries n_th > 0 or zero-point inclusion is
requested explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .core import Detection, MechanicalMode, chi_m_dimensionless, cot
from .errors import ParameterError
from .spectra import displacement_psd

P_CAP = 1e9


class OptimalPower(NamedTuple):
    """Optimal normalized power; saturated marks the p > P_CAP guard."""

    p: float
    saturated: bool


@dataclass(frozen=True)
class LimitCurve:
    """A reference curve over a rho grid with its generating context."""

    grid: np.ndarray
    values: np.ndarray
    kind: str  # "SQL" | "QL" | "variational-fixed-p" | "fixed-angle"
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class StitchedSpectrum:
    """Pointwise minimum over fixed-angle spectra with the chosen angles."""

    grid: np.ndarray
    chosen_phi: np.ndarray
    values: np.ndarray


def sql_psd(rho):
    """Dimensionless SQL added-noise PSD, |chi_m(rho)| = 1/sqrt(1 + rho^2).

    Multiply by S_sql(omega_m) = 2 x_zp^2 / gamma for absolute units.
    """
    return 1.0 / np.sqrt(1.0 + np.asarray(rho) ** 2)


def phi_opt(rho: float, p: float, det: Detection) -> float:
    """Correlation-optimal homodyne angle, cot(phi_opt) = eps p rho |chi_m|^2.

    Lies in (0, pi); greater than 90 degrees for rho < 0.
    """
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}")
    c = det.epsilon * p * rho * abs(chi_m_dimensionless(rho)) ** 2
    return math.atan2(1.0, c)


def psd_at_phi_opt(
    rho: float, p: float, det: Detection, mode: MechanicalMode
) -> float:
    """Displacement PSD at the optimal quadrature for fixed power.

    2 (n_th + 1/2) |chi_m|^2 + 1/(2 eps p)
      + (p/2) (1 + (1 - eps) rho^2) |chi_m|^4
    """
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}")
    eps = det.epsilon
    chim2 = abs(chi_m_dimensionless(rho)) ** 2
    return (
        2.0 * (mode.n_th + 0.5) * chim2
        + 1.0 / (2.0 * eps * p)
        + 0.5 * p * (1.0 + (1.0 - eps) * rho**2) * chim2**2
    )


def p_opt(rho: float, det: Detection) -> OptimalPower:
    """Power minimizing psd_at_phi_opt; capped at P_CAP with a flag."""
    eps = det.epsilon
    chim2 = abs(chi_m_dimensionless(rho)) ** 2
    p = 1.0 / (math.sqrt(eps * (1.0 + (1.0 - eps) * rho**2)) * chim2)
    if p > P_CAP:
        return OptimalPower(P_CAP, True)
    return OptimalPower(p, False)


def ql_added_noise(rho, det: Detection):
    """Probe-added noise at the QL: sqrt(1/eps + (1-eps)/eps rho^2) |chi_m|^2."""
    eps = det.epsilon
    rho = np.asarray(rho)
    chim2 = np.abs(chi_m_dimensionless(rho)) ** 2
    return np.sqrt(1.0 / eps + (1.0 - eps) / eps * rho**2) * chim2


def ql_psd(rho, det: Detection, mode: MechanicalMode):
    """QL total PSD: thermal + zero-point term plus the optimal added noise."""
    rho = np.asarray(rho)
    chim2 = np.abs(chi_m_dimensionless(rho)) ** 2
    return 2.0 * (mode.n_th + 0.5) * chim2 + ql_added_noise(rho, det)


def uncertainty_product(phi: float, p: float, det: Detection):
    """(S_II * S_FF, 1/4 + S_IF^2) for the probe uncertainty relation.

    lhs >= rhs always, with equality iff eps = 1; the product is power
    independent but computed through the power-carrying components.
    """
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}")
    c = cot(phi)
    s_ii = (1.0 + c * c) / (2.0 * det.epsilon * p)
    s_ff = 0.5 * p
    s_if = -0.5 * c
    return s_ii * s_ff, 0.25 + s_if**2


def sql_curve(grid, include_zpm: bool = False) -> LimitCurve:
    """SQL reference curve; include_zpm adds one zero-point unit |chi_m|^2."""
    grid = np.asarray(grid, dtype=float)
    values = sql_psd(grid)
    if include_zpm:
        values = values + np.abs(chi_m_dimensionless(grid)) ** 2
    return LimitCurve(grid, values, "SQL", {"include_zpm": include_zpm})


def ql_curve(grid, det: Detection, mode: MechanicalMode) -> LimitCurve:
    """QL reference curve (thermal + zero point per the mode's n_th)."""
    grid = np.asarray(grid, dtype=float)
    return LimitCurve(
        grid,
        ql_psd(grid, det, mode),
        "QL",
        {"epsilon": det.epsilon, "n_th": mode.n_th},
    )


def variational_spectrum(
    grid, p: float, det: Detection, mode: MechanicalMode
) -> LimitCurve:
    """Pointwise psd_at_phi_opt over the grid at fixed power."""
    grid = np.asarray(grid, dtype=float)
    values = np.array([psd_at_phi_opt(r, p, det, mode) for r in grid])
    return LimitCurve(
        grid,
        values,
        "variational-fixed-p",
        {"p": p, "epsilon": det.epsilon, "n_th": mode.n_th},
    )


def fixed_angle_spectrum(
    grid, p: float, phi: float, det: Detection, mode: MechanicalMode
) -> LimitCurve:
    """Fixed-quadrature displacement PSD totals over the grid."""
    grid = np.asarray(grid, dtype=float)
    values = np.array(
        [displacement_psd(r, p, phi, det, mode).total for r in grid]
    )
    return LimitCurve(
        grid,
        values,
        "fixed-angle",
        {"p": p, "phi": phi, "epsilon": det.epsilon, "n_th": mode.n_th},
    )


def stitch_quadratures(curves: Sequence[LimitCurve]) -> StitchedSpectrum:
    """Minimum envelope over fixed-angle spectra sharing grid and parameters.

    Ties are broken toward the candidate angle closest to 90 degrees, which
    keeps the on-resonance choice deterministic.
    """
    if len(curves) < 2:
        raise ParameterError("stitching needs at least two fixed-angle spectra")
    ref = curves[0]
    for c in curves[1:]:
        if c.grid.shape != ref.grid.shape or not np.array_equal(c.grid, ref.grid):
            raise ParameterError("stitched spectra must share an identical grid")
        for key in ("p", "epsilon", "n_th"):
            if c.params.get(key) != ref.params.get(key):
                raise ParameterError(
                    f"stitched spectra disagree on {key}: "
                    f"{c.params.get(key)} vs {ref.params.get(key)}"
                )
    # sort candidates by |phi - 90 deg| so np.argmin's first-wins tie break
    # lands on the angle nearest phase quadrature
    order = sorted(
        range(len(curves)),
        key=lambda i: abs(curves[i].params["phi"] - math.pi / 2.0),
    )
    stacked = np.vstack([curves[i].values for i in order])
    phis = np.array([curves[i].params["phi"] for i in order])
    pick = np.argmin(stacked, axis=0)
    return StitchedSpectrum(
        grid=ref.grid.copy(),
        chosen_phi=phis[pick],
        values=stacked[pick, np.arange(ref.grid.size)],
    )


def force_psd(
    rho: float, p: float, phi: float, det: Detection, mode: MechanicalMode
) -> float:
    """Dimensionless force PSD, |chi_m|^-2 times the displacement PSD.

    Absolute units: multiply by S_sql_f(omega_m) = p_zp^2 gamma / 2 with
    p_zp = hbar / (2 x_zp).
    """
    chim2 = abs(chi_m_dimensionless(rho)) ** 2
    return displacement_psd(rho, p, phi, det, mode).total / chim2


def force_sql(rho):
    """Force SQL relative to its on-resonance value: sqrt(1 + rho^2)."""
    return np.sqrt(1.0 + np.asarray(rho) ** 2)


def force_psd_opt(
    rho: float,
    det: Detection,
    mode: MechanicalMode,
    p: Optional[float] = None,
) -> float:
    """Force PSD at the optimal quadrature (and optimal power when p is None).

    At p_opt: 2 (n_th + 1/2) + sqrt(1/eps + (1-eps)/eps rho^2).
    """
    eps = det.epsilon
    chim2 = abs(chi_m_dimensionless(rho)) ** 2
    if p is None:
        return 2.0 * (mode.n_th + 0.5) + math.sqrt(
            1.0 / eps + (1.0 - eps) / eps * rho**2
        )
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}")
    return (
        2.0 * (mode.n_th + 0.5)
        + 1.0 / (2.0 * eps * p * chim2)
        + 0.5 * p * (1.0 + (1.0 - eps) * rho**2) * chim2
    )
