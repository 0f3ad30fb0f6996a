"""Third-order positive flux-conservative (PFC) reconstruction.

The reconstruction is the centered quadratic whose slope/curvature pair
(a1, a2) is corrected so the polynomial stays inside cell-wise bounds
[f_min, f_max] derived from the neighborhood, which enforces positivity
and suppresses oscillations while keeping the cell mean exact.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import QuadraticRecon, median3

#: regularization used in the alpha optimization; profiles are assumed
#: O(1)-normalized.
EPS_DEFAULT = 1.0e-7

#: interface extrapolation blend for the extended bounds, derived from a
#: quadratic polynomial.
R_EXTENDED = 2.0 / 3.0

EXTENDED = "extended"
COMPACT = "compact"


@dataclass(frozen=True)
class SlopeBounds:
    """Cell bounds and the admissible ranges for s+ = a1+a2, s- = a1-a2."""

    f_min: float
    f_max: float
    f_min_plus: float
    f_max_plus: float
    f_min_minus: float
    f_max_minus: float


@dataclass(frozen=True)
class AlphaPair:
    """Convex split of the slope budget between the s+ and s- constraints."""

    alpha_plus: float
    alpha_minus: float


def optimal_coeffs_centered(f_m1: float, f_0: float, f_p1: float):
    """Unlimited centered quadratic coefficients (third-order optimal)."""
    a1 = 0.5 * (f_p1 - f_m1)
    a2 = 0.5 * (f_p1 - 2.0 * f_0 + f_m1)
    return a1, a2


def _interface_minmax(fl: float, fr: float, est_l: float, est_r: float):
    # admissible interface range: at least the adjacent cell values, extended
    # by the two one-sided quadratic estimates when they agree
    hi = max(max(fl, fr), min(est_l, est_r))
    lo = min(min(fl, fr), max(est_l, est_r))
    return lo, hi


def extended_bounds(f_m2: float, f_m1: float, f_0: float, f_p1: float,
                    f_p2: float, r: float = R_EXTENDED):
    """Cell bounds from one-sided interface estimates on the 5-point stencil.

    Returns (f_min, f_max) with f_min floored at zero, which is what makes
    the corrected reconstruction positivity-preserving.
    """
    # estimates of f at the j-1/2 interface from the left and right
    lm = f_m1 + r * (f_m1 - f_m2) + (1.0 - r) * (f_0 - f_m1)
    rm = f_0 + r * (f_0 - f_p1) + (1.0 - r) * (f_m1 - f_0)
    lo_m, hi_m = _interface_minmax(f_m1, f_0, lm, rm)
    # estimates at the j+1/2 interface
    lp = f_0 + r * (f_0 - f_m1) + (1.0 - r) * (f_p1 - f_0)
    rp = f_p1 + r * (f_p1 - f_p2) + (1.0 - r) * (f_0 - f_p1)
    lo_p, hi_p = _interface_minmax(f_0, f_p1, lp, rp)
    return max(0.0, min(lo_m, lo_p)), max(hi_m, hi_p)


def compact_bounds(f_m1: float, f_0: float, f_p1: float):
    """Three-point bounds used when the stencil must stay compact."""
    ex_m = 2.0 * f_0 - f_m1
    ex_p = 2.0 * f_0 - f_p1
    f_max = max(max(f_m1, f_p1), min(ex_m, ex_p))
    f_min = max(0.0, min(min(f_m1, f_p1), max(ex_m, ex_p)))
    return f_min, f_max


def slope_range(f_0: float, bounds) -> SlopeBounds:
    """Admissible ranges for s+ and s- given the cell bounds.

    f_0 must lie inside [f_min, f_max]; violations beyond 1e-12 indicate a
    bounds bug upstream and are rejected, smaller ones are clamped.
    """
    f_min, f_max = bounds
    if f_0 < f_min - 1.0e-12 or f_0 > f_max + 1.0e-12:
        raise ValueError(f"f_0={f_0} outside bounds [{f_min}, {f_max}]")
    f_0 = min(max(f_0, f_min), f_max)
    f_min_plus = 3.0 * max(2.0 * (f_0 - f_max), f_min - f_0)
    f_max_plus = 3.0 * min(2.0 * (f_0 - f_min), f_max - f_0)
    return SlopeBounds(f_min, f_max, f_min_plus, f_max_plus,
                       -f_max_plus, -f_min_plus)


def alpha_weights(a1pa2: float, a1ma2: float, slopes: SlopeBounds,
                  eps: float = EPS_DEFAULT) -> AlphaPair:
    """Optimize the split of the slope budget between the two constraints.

    Each beta measures how close the uncorrected s+/- is to its admissible
    limit; the normalized pair biases the correction toward the side with
    headroom instead of clipping both symmetrically.
    """
    if a1pa2 > 0.0:
        bp = a1pa2 / (slopes.f_max_plus + eps)
    else:
        bp = a1pa2 / (slopes.f_min_plus - eps)
    if a1ma2 > 0.0:
        bm = a1ma2 / (slopes.f_max_minus + eps)
    else:
        bm = a1ma2 / (slopes.f_min_minus - eps)
    bp = min(bp + eps, 1.0)
    bm = min(bm + eps, 1.0)
    return AlphaPair(bp / (bp + bm), bm / (bp + bm))


def corrected_coeffs(a1_opt: float, a2_opt: float, alphas: AlphaPair,
                     slopes: SlopeBounds):
    """Median-correct (a1, a2) so the quadratic respects the cell bounds."""
    ap, am = alphas.alpha_plus, alphas.alpha_minus
    s_plus = median3(a1_opt + a2_opt, ap * slopes.f_min_plus,
                     ap * slopes.f_max_plus)
    s_minus = median3(a1_opt - a2_opt, am * slopes.f_min_minus,
                      am * slopes.f_max_minus)
    return 0.5 * (s_plus + s_minus), 0.5 * (s_plus - s_minus)


def reconstruct_pfc(stencil, bounds_mode: str = EXTENDED,
                    eps: float = EPS_DEFAULT) -> QuadraticRecon:
    """Full PFC pipeline on a 5-point stencil centered on the target cell."""
    f_m2, f_m1, f_0, f_p1, f_p2 = (float(v) for v in stencil)
    a1, a2 = optimal_coeffs_centered(f_m1, f_0, f_p1)
    if bounds_mode == EXTENDED:
        bounds = extended_bounds(f_m2, f_m1, f_0, f_p1, f_p2)
    elif bounds_mode == COMPACT:
        bounds = compact_bounds(f_m1, f_0, f_p1)
    else:
        raise ValueError(f"unknown bounds_mode {bounds_mode!r}")
    slopes = slope_range(f_0, bounds)
    alphas = alpha_weights(a1 + a2, a1 - a2, slopes, eps)
    a1c, a2c = corrected_coeffs(a1, a2, alphas, slopes)
    return QuadraticRecon(f_0, a1c, a2c)
