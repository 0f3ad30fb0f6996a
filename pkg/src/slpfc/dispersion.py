"""Approximate dispersion relation via modified-wavenumber scans.

The semi-discrete interface operator is probed with single-mode data at
zero displacement. Nonlinear reconstructions cannot act on complex
exponentials (min/max/median are undefined), so the real operator is
applied to two phase-shifted positive channels, 1 + A cos(k j) and
1 + A sin(k j); the constant offset contributes an identical interface
value everywhere and cancels in the flux difference. The complex
combination of the two channels then yields the modified wavenumber

    k* = (I_j - I_{j-1}) / (i e^{i k j}),  averaged over j,

whose real part measures phase error and whose imaginary part measures
dissipation (Im k* <= 0 for a damping scheme).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PERIODIC
from .engine import as_scheme, blend_coeffs
from .pfc import EPS_DEFAULT
from .weighted import C_DEFAULT, P_DEFAULT

#: interface-value coefficients of the upwind seventh-order linear
#: reconstruction on cells j-3..j+3 (exact for cell averages of
#: polynomials up to degree 6).
SEVENTH_UPWIND = np.array([-3.0, 25.0, -101.0, 319.0, 214.0, -38.0, 4.0])
SEVENTH_UPWIND = SEVENTH_UPWIND / 420.0

N_CELLS_DEFAULT = 1024
SCAN_COUNT_DEFAULT = 401


@dataclass(frozen=True)
class DispersionPoint:
    """Modified wavenumber k* at true wavenumber k (grid units)."""

    k: float
    k_star_re: float
    k_star_im: float


def _commensurate_mode(k: float, n_cells: int) -> int:
    m = k * n_cells / (2.0 * np.pi)
    m_round = int(round(m))
    if m_round < 1 or abs(m - m_round) > 1.0e-9 * n_cells:
        raise ValueError(f"k={k} does not fit whole wavelengths on "
                         f"{n_cells} cells")
    return m_round


def modified_wavenumber(scheme, k: float, n_cells: int = N_CELLS_DEFAULT,
                        C: float = C_DEFAULT, p: float = P_DEFAULT,
                        eps: float = EPS_DEFAULT, phase: float = 0.0,
                        amplitude: float = 1.0) -> DispersionPoint:
    """Modified wavenumber of one scheme at one wavenumber.

    k must be in (0, pi] and commensurate with the grid (k*n/(2pi) an
    integer). The interface values come from the exact production
    coefficient path at xi = 0.
    """
    if not 0.0 < k <= np.pi + 1.0e-12:
        raise ValueError("k must lie in (0, pi]")
    if n_cells < 64:
        raise ValueError("n_cells must be >= 64")
    _commensurate_mode(k, n_cells)
    scheme = as_scheme(scheme)
    theta = k * np.arange(n_cells) + phase
    lines = np.stack([1.0 + amplitude * np.cos(theta),
                      1.0 + amplitude * np.sin(theta)])
    c1, c2 = blend_coeffs(lines, 0.0, scheme, PERIODIC, C, p, eps)
    # interface value of cell j at face j+1/2: F(1/2) = f + c1/2 + c2/6
    iface = lines + 0.5 * c1[:, 1:] + c2[:, 1:] / 6.0
    val = iface[0] + 1j * iface[1]
    diff = val - np.roll(val, 1)
    k_star = np.mean(diff / (1j * np.exp(1j * theta)))
    return DispersionPoint(float(k), float(k_star.real), float(k_star.imag))


def dispersion_scan(scheme, k_list, n_cells: int = N_CELLS_DEFAULT,
                    C: float = C_DEFAULT, p: float = P_DEFAULT,
                    eps: float = EPS_DEFAULT, amplitude: float = 1.0):
    """One DispersionPoint per wavenumber."""
    return [modified_wavenumber(scheme, k, n_cells, C, p, eps,
                                amplitude=amplitude) for k in k_list]


def default_k_list(n_cells: int = N_CELLS_DEFAULT,
                   count: int = SCAN_COUNT_DEFAULT):
    """Ascending commensurate wavenumbers covering (0, pi], last = pi."""
    half = n_cells // 2
    modes = sorted({int(round(half * i / count))
                    for i in range(1, count + 1)} - {0})
    return [2.0 * np.pi * m / n_cells for m in modes]


def seventh_order_reference(k: float) -> DispersionPoint:
    """Closed-form modified wavenumber of the linear 7th-order scheme."""
    if not 0.0 < k <= np.pi + 1.0e-12:
        raise ValueError("k must lie in (0, pi]")
    shifts = np.arange(-3, 4)
    sym = np.sum(SEVENTH_UPWIND * np.exp(1j * k * shifts))
    k_star = sym * (1.0 - np.exp(-1j * k)) / 1j
    return DispersionPoint(float(k), float(k_star.real), float(k_star.imag))
