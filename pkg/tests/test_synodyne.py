"""Two-tone local-oscillator readout."""

import cmath
import math

import numpy as np
import pytest
from scipy.optimize import minimize

from conftest import GAMMA, KAPPA, OMEGA_M
from noisebudget import (
    Detection,
    DivergenceError,
    MechanicalMode,
    OpticalCavity,
    ParameterError,
    SynodyneLO,
    beta_opt,
    chi_m_dimensionless,
    displacement_psd,
    lo_coefficients,
    synodyne_psd,
    synodyne_ql,
    synodyne_variational,
)
from noisebudget.errors import BranchPoleError
from noisebudget.spectra import ExternalForce
from noisebudget.synodyne import (
    check_cavity_symmetry,
    lo_opt,
    rho_demodulated,
    synodyne_components,
    synodyne_force_response,
    synodyne_p_opt,
)


def test_lo_coefficients_values():
    # balanced tones at zero phase: pure amplitude readout
    a, p = lo_coefficients(SynodyneLO(1.0, 0.0))
    assert a == pytest.approx(1.0)
    assert p == pytest.approx(0.0, abs=1e-15)
    # balanced tones at 90 degrees: pure phase readout
    a, p = lo_coefficients(SynodyneLO(1.0, math.pi / 2.0))
    assert abs(a) == pytest.approx(0.0, abs=1e-15)
    assert abs(p) == pytest.approx(1.0)
    # slight imbalance at zero phase: large amplitude-to-phase weight ratio
    a, p = lo_coefficients(SynodyneLO(1.02, 0.0))
    assert abs(a) ** 2 / abs(p) ** 2 == pytest.approx(10201.0, rel=1e-9)


def test_lo_energy_identity():
    for beta in (0.3, 1.0, 1.02, 7.0):
        for phi in (0.0, 0.4, math.pi / 2.0, 2.5):
            a, p = lo_coefficients(SynodyneLO(beta, phi))
            assert abs(a) ** 2 + abs(p) ** 2 == pytest.approx(
                (1.0 + beta**2) / 2.0, rel=1e-12
            )


def test_lo_validation():
    with pytest.raises(ParameterError):
        SynodyneLO(0.0)
    with pytest.raises(ParameterError):
        SynodyneLO(-1.0)


def test_shot_and_correlation_factors_closed_form():
    for beta in (0.5, 1.02, 3.0):
        for phi in (0.2, 1.0, 2.0):
            a, p = lo_coefficients(SynodyneLO(beta, phi))
            denom = 1.0 + beta**2 - 2.0 * beta * math.cos(2.0 * phi)
            shot = (abs(a) ** 2 + abs(p) ** 2) / abs(p) ** 2
            assert shot == pytest.approx(2.0 * (1.0 + beta**2) / denom, rel=1e-9)
            corr = (a.conjugate() * p).imag / abs(p) ** 2
            assert corr == pytest.approx((beta**2 - 1.0) / denom, rel=1e-9)


def test_large_ratio_limits():
    # beta -> infinity: single-tone limit, shot factor -> 2 of the energy
    # split and unit correlation weight
    a, p = lo_coefficients(SynodyneLO(1e6, 0.3))
    assert (abs(a) ** 2 + abs(p) ** 2) / abs(p) ** 2 == pytest.approx(2.0, rel=1e-5)
    assert (a.conjugate() * p).imag / abs(p) ** 2 == pytest.approx(1.0, rel=1e-5)


def test_balanced_reduces_to_homodyne_without_correlation(exp_det, exp_mode):
    # beta = 1 with LO phase phi reproduces the homodyne budget at angle
    # phi with the cross-correlation switched off
    phi, p = math.pi / 4.0, 14.0
    lo = SynodyneLO(1.0, phi)
    for rho in np.linspace(-10.0, 10.0, 21):
        syn = synodyne_components(float(rho), p, lo, exp_det, exp_mode)
        hom = displacement_psd(float(rho), p, phi, exp_det, exp_mode)
        assert syn.total == pytest.approx(hom.total - hom.s_corr, rel=1e-12)
        assert syn.s_corr == pytest.approx(0.0, abs=1e-12)


def test_degenerate_lo_rejected(ideal_det, zero_mode):
    with pytest.raises(DivergenceError):
        synodyne_psd(0.0, 1.0, SynodyneLO(1.0, 0.0), ideal_det, zero_mode)
    with pytest.raises(DivergenceError):
        synodyne_psd(0.0, 0.0, SynodyneLO(1.02, 0.0), ideal_det, zero_mode)


def test_slight_imbalance_beats_sql_on_resonance(ideal_det, zero_mode):
    # figure anchor: p = 100, beta = 1.02, amplitude phase -> total near one
    # zero-point unit on resonance, far below the shot-noise-limited value
    total = synodyne_psd(0.0, 100.0, SynodyneLO(1.02, 0.0), ideal_det, zero_mode)
    assert total == pytest.approx(1.01, rel=1e-9)  # 1 + 51.01 + 50 - 101
    phase_only = displacement_psd(
        0.0, 100.0, math.pi / 2.0, ideal_det, zero_mode
    ).total
    assert total < 0.05 * phase_only


def test_beta_opt_branches(ideal_det):
    assert beta_opt(0.0, 100.0, ideal_det) == pytest.approx(101.0 / 99.0, abs=1e-12)
    assert beta_opt(0.0, 100.0, ideal_det, branch="amplitude") == pytest.approx(
        101.0 / 99.0, abs=1e-12
    )
    # weak drive: phase branch, ratio slightly above balanced
    weak = beta_opt(0.0, 0.01, ideal_det)
    assert weak == pytest.approx(1.01 / 0.99, rel=1e-12)
    with pytest.raises(BranchPoleError):
        beta_opt(0.0, 1.0, ideal_det)
    with pytest.raises(ParameterError):
        beta_opt(0.0, 100.0, ideal_det, branch="phase")
    with pytest.raises(ParameterError):
        beta_opt(0.0, 0.01, ideal_det, branch="amplitude")
    with pytest.raises(ParameterError):
        beta_opt(0.0, 100.0, ideal_det, branch="sideways")
    with pytest.raises(ParameterError):
        beta_opt(0.0, 0.0, ideal_det)


def test_beta_opt_matches_numerical_minimum(ideal_det, zero_mode):
    # phase branch: scan beta at the 90-degree LO phase
    rho, p = 0.0, 0.5
    want = beta_opt(rho, p, ideal_det)
    assert want == pytest.approx(3.0, rel=1e-12)
    betas = np.linspace(1.001, 10.0, 20001)
    vals = [
        synodyne_psd(rho, p, SynodyneLO(float(b), math.pi / 2.0), ideal_det, zero_mode)
        for b in betas
    ]
    assert betas[int(np.argmin(vals))] == pytest.approx(want, abs=2e-3)
    # amplitude branch: scan beta at the 0-degree LO phase
    rho, p = 0.0, 100.0
    want = beta_opt(rho, p, ideal_det)
    betas = np.linspace(1.001, 1.2, 40001)
    vals = [
        synodyne_psd(rho, p, SynodyneLO(float(b), 0.0), ideal_det, zero_mode)
        for b in betas
    ]
    assert betas[int(np.argmin(vals))] == pytest.approx(want, abs=2e-4)


def test_lo_opt_branch_angle(ideal_det):
    assert lo_opt(0.0, 100.0, ideal_det).phi == 0.0
    assert lo_opt(0.0, 0.5, ideal_det).phi == pytest.approx(math.pi / 2.0)


def test_synodyne_variational_is_local_optimum(ideal_det, zero_mode):
    rho, p = 0.0, 100.0
    best = synodyne_variational(rho, p, ideal_det, zero_mode)
    lo = lo_opt(rho, p, ideal_det)
    assert synodyne_psd(rho, p, lo, ideal_det, zero_mode) == pytest.approx(
        best, rel=1e-12
    )
    for db in (-1e-2, -1e-3, 1e-3, 1e-2):
        perturbed = SynodyneLO(lo.beta + db, lo.phi)
        assert synodyne_psd(rho, p, perturbed, ideal_det, zero_mode) > best


def test_synodyne_variational_matches_two_parameter_minimum(zero_mode):
    # lossy detector, on resonance: minimize over (beta, p) numerically and
    # compare with the closed-form optimal added noise sqrt((1-eps)/eps)
    det = Detection(0.35)

    def objective(theta):
        beta, log_p = theta
        if beta <= 0.0:
            return 1e9
        return synodyne_psd(
            0.0, math.exp(log_p), SynodyneLO(beta, math.pi / 2.0), det, zero_mode
        )

    res = minimize(
        objective, x0=[4.0, math.log(3.0)], method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 5000},
    )
    want = 1.0 + math.sqrt(0.65 / 0.35)  # zpm + added
    assert res.fun == pytest.approx(want, rel=1e-8)
    assert float(synodyne_ql(0.0, det, zero_mode)) == pytest.approx(want, rel=1e-12)


def test_synodyne_p_opt(ideal_det, zero_mode):
    # ideal detector on resonance: the optimum runs away (added noise -> 0)
    opt = synodyne_p_opt(0.0, ideal_det)
    assert opt.saturated
    off = synodyne_p_opt(2.0, ideal_det)
    assert not off.saturated
    assert off.p == pytest.approx((1.0 + 4.0) / 2.0 * 1.0, rel=1e-12)  # 1/(rho |chi|^2)
    # synodyne QL at the ideal detector: rho |chi|^2 added noise
    rho = np.array([0.5, 2.0, 8.0])
    np.testing.assert_allclose(
        synodyne_ql(rho, ideal_det, zero_mode),
        (1.0 + rho) * np.abs(chi_m_dimensionless(rho)) ** 2,
        rtol=1e-12,
    )


def test_rho_demodulated(exp_mode):
    assert float(rho_demodulated(GAMMA / 2.0, exp_mode)) == pytest.approx(1.0)
    assert float(rho_demodulated(0.0, exp_mode)) == 0.0


def test_check_cavity_symmetry(exp_mode):
    # a band of one mechanical linewidth is symmetric enough at the
    # experimental cavity
    check_cavity_symmetry(OpticalCavity(KAPPA), exp_mode, GAMMA)
    # a broadband cavity is symmetric over a much wider band
    check_cavity_symmetry(OpticalCavity(1e4 * OMEGA_M), exp_mode, 50.0 * GAMMA)
    # a wide band at the real cavity (resonance a fair fraction of kappa)
    # violates the symmetry assumption and is rejected
    with pytest.raises(ParameterError):
        check_cavity_symmetry(OpticalCavity(KAPPA), exp_mode, 50.0 * GAMMA)


def test_force_response_on_resonance_phase_sensitivity(exp_mode):
    lo = SynodyneLO(1.02, 0.0)
    grid = np.linspace(-20.0, 20.0, 401) * GAMMA / 2.0
    p_zp = 1e-28
    _, alpha_p = lo_coefficients(lo)
    phase0 = cmath.phase(alpha_p)
    i0 = int(np.argmin(np.abs(grid)))
    width = grid[1] - grid[0]
    amp2 = (1e-16 / (4.0 * p_zp)) ** 2
    aligned = synodyne_force_response(
        ExternalForce(1e-16, OMEGA_M, phase0), lo, exp_mode, grid, p_zp
    )
    # coherent constructive interference of the two lines: weight 2
    assert aligned[i0] == pytest.approx(2.0 * amp2 / width, rel=1e-9)
    assert np.count_nonzero(aligned) == 1
    # the orthogonal force phase is invisible (single-quadrature detection)
    quad = synodyne_force_response(
        ExternalForce(1e-16, OMEGA_M, phase0 + math.pi / 2.0),
        lo, exp_mode, grid, p_zp,
    )
    assert quad[i0] < 1e-20 * aligned[i0]
    # halfway between: weight 2 cos^2(pi/4) = 1
    mid = synodyne_force_response(
        ExternalForce(1e-16, OMEGA_M, phase0 + math.pi / 4.0),
        lo, exp_mode, grid, p_zp,
    )
    assert mid[i0] == pytest.approx(0.5 * aligned[i0], rel=1e-9)


def test_force_response_off_resonance_phase_independent(exp_mode):
    lo = SynodyneLO(1.02, 0.0)
    grid = np.linspace(-20.0, 20.0, 401) * GAMMA / 2.0
    p_zp = 1e-28
    omega_f = OMEGA_M + 5.0 * GAMMA
    a = synodyne_force_response(
        ExternalForce(1e-16, omega_f, 0.0), lo, exp_mode, grid, p_zp
    )
    b = synodyne_force_response(
        ExternalForce(1e-16, omega_f, 1.234), lo, exp_mode, grid, p_zp
    )
    np.testing.assert_allclose(a, b, rtol=1e-12)
    # two lines, mirrored about the demodulated origin
    assert np.count_nonzero(a) == 2
    i_plus = int(np.argmin(np.abs(grid - 5.0 * GAMMA)))
    i_minus = int(np.argmin(np.abs(grid + 5.0 * GAMMA)))
    assert a[i_plus] > 0.0 and a[i_minus] > 0.0
    with pytest.raises(ParameterError):
        synodyne_force_response(
            ExternalForce(1e-16, omega_f), lo, exp_mode, grid, 0.0
        )
