"""Independent oracles for the PSD engine tests.

Everything here is built from first principles with bare complex arithmetic
(cavity-filtered light PSD, its displacement conversion), deliberately not
reusing the package's spectral code paths.
"""

import numpy as np


def chi_c(omega, kappa, delta=0.0):
    return 1.0 / (kappa / 2.0 - 1j * (omega + delta))


def chi_m(omega, gamma, omega_m):
    return 1.0 / (gamma / 2.0 - 1j * (omega - omega_m))


def sql_photons_resonant(kappa, gamma, omega_m):
    """Photon number (times g^2) for on-resonance SQL detection: returns
    g^2 * a_sql^2, which is all the light PSD needs."""
    return gamma / (4.0 * kappa * abs(chi_c(omega_m, kappa)) ** 2)


def light_psd_full(omega, phi, eps, kappa, gamma, omega_m, n_th, g2a2):
    """Cavity-filtered light PSD: shot noise + transfer * <xx> + cross term."""
    cm = chi_c(-omega, kappa)
    cp = chi_c(omega, kappa)
    xm = chi_m(omega, gamma, omega_m)
    e2p = np.exp(-2j * phi)
    fxx = eps * kappa * g2a2 * (
        abs(cm) ** 2 + abs(cp) ** 2 - 2.0 * (cm * cp * e2p).real
    )
    s_mux = eps * kappa * g2a2 * (abs(cm) ** 2 - abs(cp) ** 2) * (1j * xm).imag
    s_mux -= 2.0 * eps * kappa * g2a2 * (cm * cp * e2p).imag * (1j * xm).real
    xx = gamma * (n_th + 0.5) * abs(xm) ** 2
    xx += g2a2 * abs(xm) ** 2 * (kappa / 2.0) * (abs(cm) ** 2 + abs(cp) ** 2)
    return 1.0 + fxx * xx + s_mux


def displacement_psd_full(rho, p, phi, eps, kappa, gamma, omega_m, n_th):
    """Dimensionless displacement PSD from the full light PSD.

    Converts the normalized power p to g^2 a^2 through the on-resonance SQL
    photon number, evaluates the light PSD, and divides by the
    light-to-displacement transfer 2 eps p sin^2(phi).
    """
    omega = omega_m + rho * gamma / 2.0
    g2a2 = p * sql_photons_resonant(kappa, gamma, omega_m)
    s_phi = light_psd_full(omega, phi, eps, kappa, gamma, omega_m, n_th, g2a2)
    return s_phi / (2.0 * eps * p * np.sin(phi) ** 2)
