"""Fifth-order weighted PFC reconstruction.

Three overlapping quadratic substencils are individually limited with the
PFC corrector, then blended by nonlinear weights. The weights combine the
displacement-dependent optimal weights (which make the unlimited blend
reproduce the single fifth-order quartic-reconstruction flux) with an
L2-increment smoothness measure that up-weights steep substencils just
enough to keep the scheme dissipative at every wavenumber.
"""
from __future__ import annotations

from .core import QuadraticRecon, QuarticRecon
from .pfc import (EPS_DEFAULT, EXTENDED, COMPACT, alpha_weights,
                  compact_bounds, corrected_coeffs, extended_bounds,
                  slope_range)

#: nonlinear weight parameters; values below C = 1/2 or powers p >= 1 make
#: the dissipation rate change sign somewhere on the wavenumber axis.
C_DEFAULT = 0.5
P_DEFAULT = 0.5


def substencil_optimal_coeffs(f_m2: float, f_m1: float, f_0: float,
                              f_p1: float, f_p2: float):
    """Unlimited (a1, a2) for the three 3-cell substencils.

    Each polynomial conserves the mean of the center cell j; substencil 0
    leans left, 1 is centered, 2 leans right.
    """
    a10 = 0.5 * (3.0 * f_0 - 4.0 * f_m1 + f_m2)
    a20 = 0.5 * (f_0 - 2.0 * f_m1 + f_m2)
    a11 = 0.5 * (f_p1 - f_m1)
    a21 = 0.5 * (f_p1 - 2.0 * f_0 + f_m1)
    a12 = 0.5 * (-f_p2 + 4.0 * f_p1 - 3.0 * f_0)
    a22 = 0.5 * (f_p2 - 2.0 * f_p1 + f_0)
    return ((a10, a20), (a11, a21), (a12, a22))


def correct_substencils(coeffs, stencil, bounds_mode: str = EXTENDED,
                        eps: float = EPS_DEFAULT):
    """Apply the PFC corrector to each substencil.

    The cell bounds are computed once and shared by all three substencils;
    the alpha split is recomputed per substencil from its own optimal
    s+/- pair.
    """
    f_m2, f_m1, f_0, f_p1, f_p2 = (float(v) for v in stencil)
    if bounds_mode == EXTENDED:
        bounds = extended_bounds(f_m2, f_m1, f_0, f_p1, f_p2)
    elif bounds_mode == COMPACT:
        bounds = compact_bounds(f_m1, f_0, f_p1)
    else:
        raise ValueError(f"unknown bounds_mode {bounds_mode!r}")
    slopes = slope_range(f_0, bounds)
    out = []
    for a1, a2 in coeffs:
        alphas = alpha_weights(a1 + a2, a1 - a2, slopes, eps)
        out.append(corrected_coeffs(a1, a2, alphas, slopes))
    return tuple(out)


def optimal_weights(xi: float, velocity_sign: int):
    """Displacement-dependent weights of the three substencils.

    The upwind substencil gains weight as |xi| grows; the sum is 1 for all
    |xi| <= 1. For negative velocities the roles of the outer substencils
    swap.
    """
    ax = abs(xi)
    if ax > 1.0:
        raise ValueError("optimal weights require |xi| <= 1")
    d_up = (2.0 + 3.0 * ax + ax * ax) / 20.0
    d_c = (6.0 + ax - ax * ax) / 10.0
    d_dn = (6.0 - 5.0 * ax + ax * ax) / 20.0
    if velocity_sign >= 0:
        return (d_up, d_c, d_dn)
    return (d_dn, d_c, d_up)


def quartic_fit(f_m2: float, f_m1: float, f_0: float, f_p1: float,
                f_p2: float) -> QuarticRecon:
    """Single quartic matching all five cell means."""
    a1 = (-5.0 * f_p2 + 34.0 * f_p1 - 34.0 * f_m1 + 5.0 * f_m2) / 48.0
    a2 = (-f_p2 + 12.0 * f_p1 - 22.0 * f_0 + 12.0 * f_m1 - f_m2) / 16.0
    a3 = (f_p2 - 2.0 * f_p1 + 2.0 * f_m1 - f_m2) / 12.0
    a4 = (f_p2 - 4.0 * f_p1 + 6.0 * f_0 - 4.0 * f_m1 + f_m2) / 24.0
    return QuarticRecon(f_0, a1, a2, a3, a4)


def l2_increments(sub, quartic: QuarticRecon):
    """Squared L2 distance of each reconstruction from the cell mean.

    Closed forms of integral((F(x) - f_mean)^2) over [-1/2, 1/2] for the
    quadratic substencils and the full quartic.
    """
    dl2_sub = tuple(a1 * a1 / 12.0 + a2 * a2 / 180.0 for a1, a2 in sub)
    b1, b2, b3, b4 = quartic.a1, quartic.a2, quartic.a3, quartic.a4
    dl2_full = (b1 * b1 / 12.0 + b2 * b2 / 180.0 + b3 * b3 / 448.0
                + b4 * b4 / 3600.0 + b1 * b3 / 40.0 + b2 * b4 / 420.0)
    return dl2_sub, dl2_full


def nonlinear_weights(d, dl2_sub, dl2_full: float, C: float = C_DEFAULT,
                      p: float = P_DEFAULT, eps: float = EPS_DEFAULT):
    """Blend weights from optimal weights and L2-increment ratios."""
    gammas = [dk * (C + ((dl2k + eps) / (dl2_full + eps)) ** p)
              for dk, dl2k in zip(d, dl2_sub)]
    total = sum(gammas)
    return tuple(g / total for g in gammas)


def reconstruct_wpfc(stencil, xi: float, velocity_sign: int,
                     bounds_mode: str = EXTENDED, C: float = C_DEFAULT,
                     p: float = P_DEFAULT, eps: float = EPS_DEFAULT):
    """Full WPFC pipeline: three corrected polynomials plus their weights.

    The blend sum(w_k * F_k) is itself a quadratic with the weight-averaged
    coefficients, so callers can pre-sum before integrating the flux.
    """
    f_0 = float(stencil[2])
    opt = substencil_optimal_coeffs(*(float(v) for v in stencil))
    corr = correct_substencils(opt, stencil, bounds_mode, eps)
    d = optimal_weights(xi, velocity_sign)
    dl2_sub, dl2_full = l2_increments(corr, quartic_fit(*(float(v)
                                                          for v in stencil)))
    w = nonlinear_weights(d, dl2_sub, dl2_full, C, p, eps)
    polys = tuple(QuadraticRecon(f_0, a1, a2) for a1, a2 in corr)
    return polys, w
