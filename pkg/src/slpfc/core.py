"""Shared numeric primitives and value types.

Cell-local coordinate convention: every reconstruction lives on x in
[-1/2, 1/2] with the cell center at 0. Cell averages are exact integrals
of the reconstruction over that interval.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PERIODIC = "periodic"
OPEN = "open"

#: stencil half-width; every scheme reads at most 2 neighbors each side,
#: and fluxes need one extra upstream cell, hence 3 ghost cells.
NGHOST = 3


@dataclass(frozen=True)
class UniformGrid1D:
    """Uniform 1D grid over [x_min, x_max] with n_cells cells."""

    n_cells: int
    x_min: float = 0.0
    x_max: float = 1.0
    boundary: str = PERIODIC

    def __post_init__(self):
        if self.n_cells < 5:
            raise ValueError("n_cells must be >= 5 (full five-point stencil)")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.boundary not in (PERIODIC, OPEN):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass
class CellAverages:
    """Cell-averaged profile values on a uniform grid."""

    values: np.ndarray
    grid: UniformGrid1D

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.grid.n_cells,):
            raise ValueError("values length must equal grid.n_cells")


@dataclass(frozen=True)
class Displacement:
    """Normalized travel distance xi = v*dt/dx and the velocity sign."""

    xi: float
    velocity_sign: int = 1

    def __post_init__(self):
        if self.velocity_sign not in (1, -1):
            raise ValueError("velocity_sign must be +1 or -1")


@dataclass(frozen=True)
class QuadraticRecon:
    """Quadratic reconstruction F(x) = f_mean - a2/12 + a1*x + a2*x^2."""

    f_mean: float
    a1: float
    a2: float


@dataclass(frozen=True)
class QuarticRecon:
    """Quartic reconstruction with mean-preserving offsets -a2/12 - a4/80."""

    f_mean: float
    a1: float
    a2: float
    a3: float
    a4: float


def median3(a: float, b: float, c: float) -> float:
    """Middle value of three."""
    return max(min(a, b), min(max(a, b), c))


def eval_quadratic(poly: QuadraticRecon, x):
    """Evaluate the quadratic reconstruction at local coordinate x."""
    return poly.f_mean - poly.a2 / 12.0 + x * (poly.a1 + poly.a2 * x)


def eval_quartic(poly: QuarticRecon, x):
    """Evaluate the quartic reconstruction at local coordinate x."""
    base = poly.f_mean - poly.a2 / 12.0 - poly.a4 / 80.0
    return base + x * (poly.a1 + x * (poly.a2 + x * (poly.a3 + x * poly.a4)))


def ghost_pad(lines: np.ndarray, boundary: str) -> np.ndarray:
    """Pad a (n_lines, n) batch with NGHOST ghost cells on each side.

    Periodic wraps; open copies the edge value outward (constant
    extrapolation, which preserves positivity and boundedness).
    """
    lines = np.atleast_2d(np.asarray(lines, dtype=np.float64))
    n = lines.shape[1]
    if n < 5:
        raise ValueError("need at least 5 cells")
    out = np.empty((lines.shape[0], n + 2 * NGHOST))
    out[:, NGHOST:NGHOST + n] = lines
    if boundary == PERIODIC:
        out[:, :NGHOST] = lines[:, n - NGHOST:]
        out[:, NGHOST + n:] = lines[:, :NGHOST]
    elif boundary == OPEN:
        out[:, :NGHOST] = lines[:, :1]
        out[:, NGHOST + n:] = lines[:, n - 1:]
    else:
        raise ValueError(f"unknown boundary {boundary!r}")
    return out


def split_displacement(xi: float) -> tuple[int, float]:
    """Split a displacement into integer cells plus a fractional remainder.

    The fraction keeps the sign of xi and satisfies |frac| < 1, so the
    reconstruction/flux path only ever sees |xi| <= 1.
    """
    k = math.trunc(xi)
    return int(k), xi - k
