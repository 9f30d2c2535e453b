"""Periodic grids, grid functions and L_p quasi-norms.

Functions live on a uniform grid over the torus [0, L)^d, d in {1, 2}.
The coordinates are x_k = k * L / N and all integrals are uniform
Riemann sums, so every norm here is the quasi-norm of the trigonometric
interpolant of the samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

INF = math.inf


def _is_integer(x: float, tol: float = 1e-12) -> bool:
    return abs(x - round(x)) <= tol


@dataclass(frozen=True)
class Exponent:
    """Integrability exponent p with 0 < p <= inf.

    p = inf is a distinguished state (sup-norm); arithmetic on derived
    quantities treats it explicitly rather than through float overflow.
    """

    p: float

    def __post_init__(self):
        if not (self.p > 0):
            raise ParameterError(f"exponent must be positive, got {self.p}")

    @classmethod
    def parse(cls, text) -> "Exponent":
        if isinstance(text, Exponent):
            return text
        if isinstance(text, str):
            if text.strip().lower() in ("inf", "infinity", "oo"):
                return cls(INF)
            return cls(float(text))
        return cls(float(text))

    @property
    def is_inf(self) -> bool:
        return self.p == INF

    @property
    def conjugate(self) -> float:
        """Dual exponent p' for 1 <= p <= inf."""
        if self.p < 1:
            raise ParameterError("conjugate exponent needs p >= 1")
        if self.p == 1:
            return INF
        if self.is_inf:
            return 1.0
        return self.p / (self.p - 1)

    @property
    def theta(self) -> float:
        """min(p, 2), taken to be 1 when p = inf."""
        return 1.0 if self.is_inf else min(self.p, 2.0)

    @property
    def tau(self) -> float:
        """max(p, 2)."""
        return INF if self.is_inf else max(self.p, 2.0)

    @property
    def q1(self) -> float:
        """p itself when finite, 1 when p = inf."""
        return 1.0 if self.is_inf else self.p

    @property
    def deficiency(self) -> float:
        """(1/p - 1)_+ ; zero for p >= 1."""
        if self.is_inf:
            return 0.0
        return max(1.0 / self.p - 1.0, 0.0)

    def label(self) -> str:
        return "inf" if self.is_inf else repr(self.p)


@dataclass(frozen=True)
class SmoothnessOrder:
    """Order alpha > 0 of a (fractional) difference or derivative."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0):
            raise ParameterError(f"order must be positive, got {self.alpha}")

    @property
    def is_integer(self) -> bool:
        return _is_integer(self.alpha)

    def admissible_for(self, p: Exponent) -> bool:
        """Whole orders always; fractional ones need alpha > (1/p - 1)_+.

        This is exactly the condition under which the binomial series of
        the difference is p-power summable.
        """
        return self.is_integer or self.alpha > p.deficiency


@dataclass(frozen=True)
class TorusGrid:
    """Uniform N^d grid on the torus of period L."""

    dimension: int
    points_per_axis: int
    period: float

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ParameterError("dimension must be 1 or 2")
        n = self.points_per_axis
        if n < 8 or (n & (n - 1)) != 0:
            raise ParameterError("points_per_axis must be a power of 2, >= 8")
        if not (self.period > 0):
            raise ParameterError("period must be positive")

    @property
    def spacing(self) -> float:
        return self.period / self.points_per_axis

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dimension

    @property
    def nyquist(self) -> float:
        """Largest resolved physical frequency magnitude, pi*N/L."""
        return math.pi * self.points_per_axis / self.period

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dimension

    def axis_coords(self) -> np.ndarray:
        return np.arange(self.points_per_axis) * self.spacing

    def coords(self) -> tuple:
        """Coordinate arrays broadcastable to the grid shape."""
        x = self.axis_coords()
        if self.dimension == 1:
            return (x,)
        return (x[:, None], x[None, :])

    def axis_frequencies(self) -> np.ndarray:
        """Physical frequencies 2*pi*xi/L in FFT order along one axis."""
        n = self.points_per_axis
        return 2.0 * math.pi * np.fft.fftfreq(n, d=1.0 / n) / self.period

    def frequencies(self) -> tuple:
        """Frequency arrays broadcastable to the grid shape, FFT order."""
        w = self.axis_frequencies()
        if self.dimension == 1:
            return (w,)
        return (w[:, None], w[None, :])


@dataclass
class GridFunction:
    """Complex samples on a TorusGrid plus optional metadata notes."""

    grid: TorusGrid
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.shape:
            raise ParameterError(
                f"values shape {vals.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ParameterError("grid function has non-finite samples")
        self.values = vals

    def copy_with(self, values, **notes) -> "GridFunction":
        meta = dict(self.metadata)
        meta.update(notes)
        return GridFunction(self.grid, values, meta)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        if other.grid != self.grid:
            raise ParameterError("grids differ")
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        if other.grid != self.grid:
            raise ParameterError("grids differ")
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, c) -> "GridFunction":
        if isinstance(c, GridFunction):
            if c.grid != self.grid:
                raise ParameterError("grids differ")
            return GridFunction(self.grid, self.values * c.values)
        return GridFunction(self.grid, self.values * c)

    __rmul__ = __mul__


def quasi_norm(f: GridFunction, p) -> float:
    """L_p quasi-norm of the samples, 0 < p <= inf.

    Finite p: (sum |f|^p * h^d)^(1/p) with h the grid spacing; p = inf is
    the max of |f|.  Summation relies on numpy's pairwise reduction over
    a fixed memory order, so results are bit-stable run to run.
    """
    p = Exponent.parse(p)
    absvals = np.abs(f.values)
    if p.is_inf:
        return float(absvals.max())
    s = float(np.sum(absvals ** p.p))
    return float((s * f.grid.cell_volume) ** (1.0 / p.p))


#: relative mass allowed outside the fundamental cell when periodizing
PERIODIZE_TOL = 1e-10


def periodize(entry, grid: TorusGrid, m_images: int | None = None) -> GridFunction:
    """Sample sum_m entry(x + m*L) on the grid.

    ``entry`` must expose ``evaluate(coords) -> values`` (coords a tuple of
    broadcastable coordinate arrays, centered convention: the fundamental
    cell is [-L/2, L/2)^d) and ``tail_bound(L) -> float`` giving a relative
    bound on the mass outside that cell.  Refuses when the bound exceeds
    PERIODIZE_TOL: the period is too small for this profile.
    """
    bound = float(entry.tail_bound(grid.period))
    if bound > PERIODIZE_TOL:
        raise ParameterError(
            f"period {grid.period} too small for '{getattr(entry, 'name', '?')}':"
            f" tail bound {bound:.3e} exceeds {PERIODIZE_TOL:.0e}"
        )
    if m_images is None:
        m_images = int(getattr(entry, "m_tail", 1))
    L = grid.period
    coords = grid.coords()
    total = np.zeros(grid.shape, dtype=complex)
    shifts = range(-m_images, m_images + 1)
    if grid.dimension == 1:
        (x,) = coords
        for m in shifts:
            # wrap so the profile sees arguments near its center
            total += np.asarray(entry.evaluate((x - L / 2 + m * L,)), dtype=complex)
    else:
        x1, x2 = coords
        for m1 in shifts:
            for m2 in shifts:
                total += np.asarray(
                    entry.evaluate((x1 - L / 2 + m1 * L, x2 - L / 2 + m2 * L)),
                    dtype=complex,
                )
    return GridFunction(grid, total, {"periodize_tail_bound": bound})
