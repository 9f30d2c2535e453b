"""Near-best bandlimited approximation, realizations and K-functionals.

The error of best approximation by functions of exponential type sigma
is bounded above by minimizing over a fixed candidate set: the hard and
smooth spectral cutoffs, a first-order Riesz mean, and the sampling
quasi-interpolants over a set of offsets.  For p = 2 the hard cutoff is
the exact minimizer (Parseval), so there the bound is the true error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .grid import Exponent, GridFunction, SmoothnessOrder, quasi_norm
from .moduli import direction_design
from .spectral import (
    SpectralFunction,
    bandlimit_project,
    directional_derivative,
    interp_V,
    interp_V_2d,
    inverse,
    riesz_project,
    sharp_project,
    transform,
)

#: offsets (as multiples of 1/sigma, within [-1, 1]) for the sampling operator
N_OFFSETS = 8


@dataclass
class NearBest:
    """Outcome of the candidate minimization."""

    sigma: float
    p_label: str
    error: float
    witness: GridFunction
    candidate: str
    all_errors: dict = field(default_factory=dict)


def _sampling_offsets(sigma: float) -> list:
    return [(-1.0 + (2.0 * k + 1.0) / N_OFFSETS) / sigma for k in range(N_OFFSETS)]


def near_best(f: GridFunction, sigma: float, p, r: int = 1) -> NearBest:
    """Upper bound for the type-sigma approximation error, with witness.

    Candidates enter in a fixed documented order (hard cutoff, smooth
    cutoff, Riesz mean, sampling operators, zero); ties keep the earliest,
    so for p = 2 the reported witness is the hard cutoff.
    """
    p = Exponent.parse(p)
    if not (0 < sigma <= f.grid.nyquist):
        raise ParameterError(
            f"sigma={sigma} outside (0, nyquist={f.grid.nyquist:.3f}]"
        )
    candidates: list[tuple[str, GridFunction]] = [
        ("sharp", inverse(sharp_project(f, sigma))),
        ("smooth", inverse(bandlimit_project(f, sigma))),
        ("riesz", inverse(riesz_project(f, sigma))),
    ]
    n_samples = f.grid.period * sigma
    if abs(n_samples - round(n_samples)) < 1e-9 and round(n_samples) >= 2:
        make = interp_V if f.grid.dimension == 1 else interp_V_2d
        for lam in _sampling_offsets(sigma):
            candidates.append((f"sampling[{lam:.4f}]", make(f, sigma, lam, r)))
    candidates.append(("zero", GridFunction(f.grid, np.zeros(f.grid.shape))))

    best_name, best_fn, best_err = None, None, math.inf
    errors = {}
    for name, g in candidates:
        err = quasi_norm(f - g, p)
        errors[name] = err
        if err < best_err:
            best_name, best_fn, best_err = name, g, err
    best_fn.metadata["band_radius"] = sigma
    return NearBest(sigma, p.label(), best_err, best_fn, best_name, errors)


@dataclass
class ApproximationCurve:
    """Near-best errors over dyadic bands 2^0 .. 2^K, plus sigma = 0.

    values are made nonincreasing by a running minimum (the raw sequence
    is retained); the zero-band error is the norm itself.
    """

    p_label: str
    sigmas: np.ndarray
    values: np.ndarray
    raw_values: np.ndarray
    witnesses: list
    metadata: dict = field(default_factory=dict)

    def value_at(self, sigma: float) -> float:
        """Step interpolation: the error at the largest band <= sigma.

        For bands between the dyadic points this is an upper bound of the
        true error, which is the safe direction when the curve feeds the
        right-hand side of an inverse estimate.
        """
        if sigma < 0:
            raise ParameterError("sigma must be nonnegative")
        idx = np.searchsorted(self.sigmas, sigma, side="right") - 1
        idx = max(idx, 0)
        return float(self.values[idx])

    def to_dict(self) -> dict:
        return {
            "p": self.p_label,
            "sigmas": [float(s) for s in self.sigmas],
            "values": [float(v) for v in self.values],
            "raw_values": [float(v) for v in self.raw_values],
            "metadata": self.metadata,
        }


def approx_curve(f: GridFunction, p, k_max: int = 6, r: int = 1) -> ApproximationCurve:
    p = Exponent.parse(p)
    sigmas = [0.0]
    raw = [quasi_norm(f, p)]
    witnesses = [None]
    for k in range(k_max + 1):
        sigma = float(2 ** k)
        if sigma > f.grid.nyquist:
            break
        nb = near_best(f, sigma, p, r=r)
        sigmas.append(sigma)
        raw.append(nb.error)
        witnesses.append(nb)
    raw_arr = np.asarray(raw)
    repaired = np.minimum.accumulate(raw_arr)
    return ApproximationCurve(
        p.label(), np.asarray(sigmas), repaired, raw_arr, witnesses
    )


def sup_directional(P: GridFunction, alpha, p) -> float:
    """max over the shared direction design of ||D_zeta^alpha P||_p."""
    order = alpha if isinstance(alpha, SmoothnessOrder) else SmoothnessOrder(alpha)
    p = Exponent.parse(p)
    return max(
        quasi_norm(directional_derivative(P, zeta, order), p)
        for zeta in direction_design(P.grid.dimension)
    )


def realization(f: GridFunction, delta: float, alpha, p):
    """Realization functional ||f - P||_p + delta^alpha sup ||D^alpha P||_p
    at the near-best P of band 1/delta.  Returns (value, witness)."""
    order = alpha if isinstance(alpha, SmoothnessOrder) else SmoothnessOrder(alpha)
    p = Exponent.parse(p)
    if not (delta > 0):
        raise ParameterError("delta must be positive")
    sigma = 1.0 / delta
    if sigma > f.grid.nyquist:
        raise ParameterError("delta below the grid resolution")
    nb = near_best(f, sigma, p)
    value = nb.error + delta ** order.alpha * sup_directional(nb.witness, order, p)
    return float(value), nb.witness


#: mollification scales (times delta) tried by the K-functional
K_SCALES = (0.25, 0.5, 1.0, 2.0)


def k_functional(f: GridFunction, delta: float, alpha, p) -> float:
    """Peetre K-functional inf_g ||f-g||_p + delta^alpha sup ||D^alpha g||_p.

    Defined for p >= 1 only (it collapses to zero for p < 1 and is
    refused there).  The infimum is taken over a fixed candidate set:
    smooth bandlimited projections and Gaussian mollifications of f at
    scales tied to delta, plus f itself and zero.
    """
    order = alpha if isinstance(alpha, SmoothnessOrder) else SmoothnessOrder(alpha)
    p = Exponent.parse(p)
    if not p.is_inf and p.p < 1:
        raise ParameterError("K-functional degenerates for p < 1; use realization")
    if not (delta > 0):
        raise ParameterError("delta must be positive")
    candidates = [f, GridFunction(f.grid, np.zeros(f.grid.shape))]
    for scale in K_SCALES:
        sigma = scale / delta
        if 0 < sigma <= f.grid.nyquist:
            candidates.append(inverse(bandlimit_project(f, sigma)))
    F = transform(f)
    mag2 = sum(np.broadcast_to(w, f.grid.shape) ** 2 for w in f.grid.frequencies())
    for scale in K_SCALES:
        t = scale * delta
        moll = SpectralFunction(f.grid, F.coefficients * np.exp(-0.5 * t * t * mag2))
        candidates.append(inverse(moll))
    best = math.inf
    for g in candidates:
        val = quasi_norm(f - g, p) + delta ** order.alpha * sup_directional(
            g, order, p
        )
        best = min(best, val)
    return float(best)
