"""Fractional differences and moduli of smoothness on periodic grids.

The fractional difference of order alpha > 0 with step h is

    D_h^a f(x) = sum_nu (-1)^nu binom(a, nu) f(x + (a - nu) h),

admissible in L_p exactly when a is a whole number or a > (1/p - 1)_+.
Two evaluation routes are provided: summing the (translated) series
itself, and the closed multiplier exp(i a th) (1 - exp(-i th))^a with
th = (h, w); they must agree and that agreement is tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AdmissibilityError, ParameterError
from .grid import Exponent, GridFunction, SmoothnessOrder, TorusGrid, quasi_norm
from .spectral import Direction, SpectralFunction, inverse, transform

#: number of step magnitudes sampled per direction when taking the sup
N_MAGNITUDES = 16
#: default truncation tolerance for series bookkeeping
SERIES_TOL = 1e-10


def frac_binomial(alpha: float, nu: int) -> float:
    """Generalized binomial coefficient alpha (alpha-1) ... (alpha-nu+1) / nu!."""
    if nu < 0:
        raise ParameterError("nu must be nonnegative")
    out = 1.0
    for k in range(1, nu + 1):
        out *= (alpha - k + 1) / k
    return out


def _binom_array(alpha: float, n_terms: int) -> np.ndarray:
    """binom(alpha, nu) for nu = 0 .. n_terms - 1 via the ratio recurrence."""
    if n_terms <= 0:
        return np.zeros(0)
    nu = np.arange(1, n_terms)
    factors = (alpha - nu + 1) / nu
    out = np.empty(n_terms)
    out[0] = 1.0
    if n_terms > 1:
        out[1:] = np.cumprod(factors)
    return out


def _abs_binom(alpha: float, nu: float) -> float:
    """|binom(alpha, nu)| for real nu > alpha + 1 through log-gamma."""
    # binom(a, n) = (-1)^n Gamma(n - a) / (Gamma(-a) Gamma(n + 1))
    return math.exp(math.lgamma(nu - alpha) - math.lgamma(nu + 1.0)) / abs(
        math.gamma(-alpha)
    )


def _tail_majorant(alpha: float, p_small: float, n: int) -> float:
    """Upper bound for sum_{nu > n} |binom(alpha, nu)|^p_small.

    Uses |binom(a, nu)| <= |binom(a, n)| ((n+1)/(nu+1))^(a+1) for nu >= n,
    valid once n > a + 1, and an integral comparison for the rest.
    """
    s = (alpha + 1.0) * p_small
    if s <= 1.0:
        return math.inf
    c = _abs_binom(alpha, n) ** p_small
    return c * (n + 1.0) / (s - 1.0)


def binom_power_constant(alpha, p, tol: float = 1e-12) -> float:
    """The norm constant (sum_nu |binom(alpha, nu)|^pt)^(1/pt), pt = min(p, 1).

    This bounds ||difference of order alpha|| / ||f|| in L_p: the triangle
    inequality (or its pt-power form for p < 1) over the series terms, each
    a translate of f.
    """
    order = alpha if isinstance(alpha, SmoothnessOrder) else SmoothnessOrder(alpha)
    p = Exponent.parse(p)
    if not order.admissible_for(p):
        raise AdmissibilityError(f"alpha={order.alpha} inadmissible for p={p.label()}")
    pt = min(p.q1, 1.0)
    a = order.alpha
    if order.is_integer:
        r = int(round(a))
        total = sum(abs(frac_binomial(a, nu)) ** pt for nu in range(r + 1))
        return float(total ** (1.0 / pt))
    n = 16 + int(math.ceil(a))
    while _tail_majorant(a, pt, n) >= tol and n < 2 ** 20:
        n *= 2
    # |binom(a, nu)| by the magnitude recurrence, summed in one shot; the
    # remainder is covered by the majorant, so the result is an upper bound
    nus = np.arange(n, dtype=float)
    mags = np.concatenate(([1.0], np.cumprod(np.abs((a - nus) / (nus + 1.0)))))
    total = float(np.sum(mags ** pt)) + _tail_majorant(a, pt, n)
    return float(total ** (1.0 / pt))


def series_truncation(alpha, p, tol: float = SERIES_TOL) -> int:
    """Smallest truncation length whose tail majorant drops below tol.

    The tail is measured in the min(p,1)-power sum, the quantity that
    controls the L_p error of truncating the difference series.  For a
    whole order the series terminates and the order itself is returned.
    The bound is the analytic majorant above, so the result can be huge
    for small alpha and tight tolerances; no summation of that length is
    ever attempted elsewhere (the evaluator sums the tail in closed form).
    """
    order = alpha if isinstance(alpha, SmoothnessOrder) else SmoothnessOrder(alpha)
    p = Exponent.parse(p)
    if not order.admissible_for(p):
        raise AdmissibilityError(
            f"alpha={order.alpha} inadmissible for p={p.label()}: "
            f"needs alpha > {p.deficiency}"
        )
    if not (tol > 0):
        raise ParameterError("tol must be positive")
    if order.is_integer:
        return int(round(order.alpha))
    p_small = min(p.q1, 1.0)
    lo = int(math.ceil(order.alpha)) + 2
    hi = lo
    while _tail_majorant(order.alpha, p_small, hi) >= tol:
        hi *= 2
        if hi > 10 ** 24:
            raise ParameterError("tolerance unreachable")
    while lo < hi:
        mid = (lo + hi) // 2
        if _tail_majorant(order.alpha, p_small, mid) < tol:
            hi = mid
        else:
            lo = mid + 1
    return lo


# ---------------------------------------------------------------------------
# difference symbols
# ---------------------------------------------------------------------------

_SERIES_PARTIAL = 4096
_SERIES_TAIL_TERMS = 12
_UNRESOLVED = 1e-6


def _series_symbol(alpha: float, theta: np.ndarray):
    """Difference symbol by summing the binomial series at w = exp(-i th).

    Returns (symbol, unresolved_mask).  The partial sum runs to a length
    adapted to min |1 - w|; the remainder is folded in exactly through
    repeated summation by parts, which maps the order-alpha tail onto
    order alpha+1, alpha+2, ... tails divided by powers of (1 - w).
    Points with 0 < |1 - w| below the resolution floor are reported as
    unresolved (value 0); th = 0 itself sums to (1-1)^alpha = 0 exactly.
    """
    theta = np.asarray(theta, dtype=float)
    w = np.exp(-1j * theta)
    u = 1.0 - w
    au = np.abs(u)
    symbol = np.zeros(theta.shape, dtype=complex)
    unresolved = np.zeros(theta.shape, dtype=bool)

    if abs(alpha - round(alpha)) <= 1e-12:
        m = int(round(alpha))
        coeffs = _binom_array(alpha, m + 1)
        wpow = np.ones_like(w)
        acc = np.zeros_like(w)
        for nu in range(m + 1):
            acc += ((-1) ** nu * coeffs[nu]) * wpow
            if nu < m:
                wpow = wpow * w
        return np.exp(1j * alpha * theta) * acc, unresolved

    zero = au == 0.0
    unresolved = (~zero) & (au < _UNRESOLVED)
    res = ~(zero | unresolved)
    if not np.any(res):
        return symbol, unresolved

    au_min = float(au[res].min())
    n_partial = int(min(max(_SERIES_PARTIAL, math.ceil(64.0 / au_min)), 2 ** 20))

    wr = w[res]
    coeffs = _binom_array(alpha, n_partial + 1)
    signs = np.where(np.arange(n_partial + 1) % 2 == 0, 1.0, -1.0)
    c = signs * coeffs
    acc = np.full(wr.shape, c[0], dtype=complex)
    wpow = np.ones_like(wr)
    chunk = 2048
    for start in range(1, n_partial + 1, chunk):
        stop = min(start + chunk, n_partial + 1)
        block = np.empty((stop - start,) + wr.shape, dtype=complex)
        block[0] = wpow * wr
        for i in range(1, stop - start):
            block[i] = block[i - 1] * wr
        wpow = block[-1]
        acc += np.tensordot(c[start:stop], block, axes=(0, 0))
    # wpow now holds w^n_partial; fold in the exact tail
    ur = u[res]
    tail = np.zeros_like(wr)
    wtop = wpow * wr  # w^(n_partial + 1)
    upow = ur.copy()
    for j in range(_SERIES_TAIL_TERMS):
        n = n_partial + 1 + j
        a = alpha + j
        cval = math.exp(math.lgamma(n - a) - math.lgamma(n + 1.0)) / math.gamma(-a)
        tail += cval * wtop / upow
        wtop = wtop * wr
        upow = upow * ur
    symbol[res] = np.exp(1j * alpha * theta[res]) * (acc + tail)
    return symbol, unresolved


def _spectral_symbol(alpha: float, theta: np.ndarray) -> np.ndarray:
    """Closed-form symbol exp(i a th) (1 - exp(-i th))^a, principal branch."""
    theta = np.asarray(theta, dtype=float)
    base = 1.0 - np.exp(-1j * theta)
    return np.exp(1j * alpha * theta) * np.power(base, alpha)


@dataclass(frozen=True)
class Step:
    """A difference step: unit direction times magnitude."""

    direction: Direction
    magnitude: float

    def __post_init__(self):
        if not (self.magnitude > 0):
            raise ParameterError("step magnitude must be positive")

    @property
    def vector(self) -> tuple:
        return tuple(self.magnitude * c for c in self.direction.vector)


def _step_phase(grid: TorusGrid, hvec) -> np.ndarray:
    ws = grid.frequencies()
    theta = sum(h * w for h, w in zip(hvec, ws))
    return np.broadcast_to(theta, grid.shape)


def frac_difference(
    f: GridFunction,
    step: Step,
    alpha,
    method: str = "spectral",
    p=None,
) -> GridFunction:
    """Fractional difference of order alpha with the given step.

    ``method`` selects the evaluation route: 'spectral' applies the closed
    multiplier, 'series' sums the translated binomial series (translations
    are exact spectral shifts).  When an integrability context p is given,
    the order is checked for admissibility first.
    """
    order = alpha if isinstance(alpha, SmoothnessOrder) else SmoothnessOrder(alpha)
    if p is not None:
        p = Exponent.parse(p)
        if not order.admissible_for(p):
            raise AdmissibilityError(
                f"alpha={order.alpha} inadmissible for p={p.label()}"
            )
    if step.direction.dimension != f.grid.dimension:
        raise ParameterError("step dimension does not match the grid")
    theta = _step_phase(f.grid, step.vector)
    F = transform(f)
    if method == "spectral":
        symbol = _spectral_symbol(order.alpha, theta)
        meta = {}
    elif method == "series":
        cmax = float(np.abs(F.coefficients).max())
        occupied = np.abs(F.coefficients) > 1e-300
        symbol = np.zeros(f.grid.shape, dtype=complex)
        sub, unresolved = _series_symbol(order.alpha, theta[occupied])
        symbol[occupied] = sub
        meta = {}
        if np.any(unresolved & (np.abs(F.coefficients[occupied]) > 1e-12 * cmax)):
            meta["series_unresolved_modes"] = int(np.sum(unresolved))
    else:
        raise ParameterError(f"unknown method '{method}'")
    out = inverse(SpectralFunction(f.grid, F.coefficients * symbol))
    out.metadata.update(f.metadata)
    out.metadata.update(meta)
    return out


# ---------------------------------------------------------------------------
# direction / magnitude design and the moduli
# ---------------------------------------------------------------------------


def direction_design(dimension: int) -> tuple:
    """Fixed direction set used for every sampled supremum.

    d = 1: both orientations.  d = 2: 16 equispaced angles (offset half a
    slot so none coincides with an axis) plus the 4 axis directions.
    """
    if dimension == 1:
        return (Direction((1.0,)), Direction((-1.0,)))
    if dimension == 2:
        dirs = []
        for k in range(16):
            ang = (k + 0.5) * 2.0 * math.pi / 16.0
            dirs.append(Direction.of(math.cos(ang), math.sin(ang)))
        dirs += [
            Direction((1.0, 0.0)),
            Direction((-1.0, 0.0)),
            Direction((0.0, 1.0)),
            Direction((0.0, -1.0)),
        ]
        return tuple(dirs)
    raise ParameterError("dimension must be 1 or 2")


def magnitude_design(delta: float, n: int = N_MAGNITUDES) -> np.ndarray:
    """Step magnitudes delta * (1 - j/n), j = 0 .. n-1 (largest first)."""
    if not (delta > 0):
        raise ParameterError("delta must be positive")
    return delta * (1.0 - np.arange(n) / n)


def modulus(
    f: GridFunction,
    delta: float,
    alpha,
    p,
    method: str = "spectral",
    directions=None,
) -> float:
    """Sampled modulus of smoothness: max over the shared step design of
    the L_p quasi-norm of the order-alpha difference."""
    order = alpha if isinstance(alpha, SmoothnessOrder) else SmoothnessOrder(alpha)
    p = Exponent.parse(p)
    if not order.admissible_for(p):
        raise AdmissibilityError(f"alpha={order.alpha} inadmissible for p={p.label()}")
    if directions is None:
        directions = direction_design(f.grid.dimension)
    best = 0.0
    for t in magnitude_design(delta):
        for zeta in directions:
            d = frac_difference(f, Step(zeta, float(t)), order, method=method)
            best = max(best, quasi_norm(d, p))
    return best


def default_deltas(grid: TorusGrid, n: int = 24, floor_cells: float = 4.0,
                   top: float = 1.0) -> np.ndarray:
    """Geometric delta grid from floor_cells * spacing up to ``top``."""
    lo = floor_cells * grid.spacing
    if lo >= top:
        raise ParameterError("grid too coarse for the requested delta range")
    return np.geomspace(lo, top, n)


@dataclass
class ModulusCurve:
    """Modulus values over a delta grid, with log-log interpolation."""

    alpha: float
    p_label: str
    deltas: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.deltas = np.asarray(self.deltas, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.deltas.shape != self.values.shape or self.deltas.ndim != 1:
            raise ParameterError("deltas and values must be matching 1-D arrays")
        if np.any(np.diff(self.deltas) <= 0):
            raise ParameterError("deltas must increase")

    def interp(self, t: float) -> float:
        """Log-log linear interpolation; power-law extension below the
        smallest delta (slope fitted on the lowest points), flat above."""
        d, v = self.deltas, np.maximum(self.values, 1e-300)
        if t <= 0:
            raise ParameterError("t must be positive")
        if t >= d[-1]:
            return float(v[-1])
        if t < d[0]:
            k = min(5, len(d))
            slope = np.polyfit(np.log(d[:k]), np.log(v[:k]), 1)[0]
            return float(v[0] * (t / d[0]) ** slope)
        return float(np.exp(np.interp(math.log(t), np.log(d), np.log(v))))

    def fitted_slope(self, lo: float | None = None, hi: float | None = None) -> float:
        mask = np.ones(len(self.deltas), dtype=bool)
        if lo is not None:
            mask &= self.deltas >= lo
        if hi is not None:
            mask &= self.deltas <= hi
        d = self.deltas[mask]
        v = np.maximum(self.values[mask], 1e-300)
        return float(np.polyfit(np.log(d), np.log(v), 1)[0])

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "p": self.p_label,
            "deltas": [float(x) for x in self.deltas],
            "values": [float(x) for x in self.values],
            "metadata": self.metadata,
        }


def modulus_curve(
    f: GridFunction, alpha, p, deltas=None, method: str = "spectral"
) -> ModulusCurve:
    order = alpha if isinstance(alpha, SmoothnessOrder) else SmoothnessOrder(alpha)
    p = Exponent.parse(p)
    if deltas is None:
        deltas = default_deltas(f.grid)
    deltas = np.asarray(deltas, dtype=float)
    vals = np.array([modulus(f, float(d), order, p, method=method) for d in deltas])
    # running max: the step design at delta_k then contains every step used
    # at smaller deltas, so monotonicity in delta is exact by construction
    vals = np.maximum.accumulate(vals)
    return ModulusCurve(
        order.alpha,
        p.label(),
        deltas,
        vals,
        {"method": method, "n_magnitudes": N_MAGNITUDES, "nested": True},
    )


def partial_modulus(f: GridFunction, axis: int, delta: float, r: int, p) -> float:
    """Whole-order modulus along a single coordinate axis."""
    if not (isinstance(r, int) and r >= 1):
        raise ParameterError("partial moduli take whole orders r >= 1")
    d = f.grid.dimension
    if not (0 <= axis < d):
        raise ParameterError("axis out of range")
    vec = [0.0] * d
    vec[axis] = 1.0
    dirs = (Direction(tuple(vec)), Direction(tuple(-c for c in vec)))
    return modulus(f, delta, SmoothnessOrder(float(r)), p, directions=dirs)


def mixed_modulus(f: GridFunction, orders, delta: float, p) -> float:
    """Mixed modulus: sup over the step design of the composed axis
    differences of whole orders (k_1, ..., k_d)."""
    d = f.grid.dimension
    orders = tuple(int(k) for k in orders)
    if len(orders) != d or any(k < 1 for k in orders):
        raise ParameterError("one whole order >= 1 per axis is required")
    p = Exponent.parse(p)
    ws = f.grid.frequencies()
    F = transform(f)
    best = 0.0
    for t in magnitude_design(delta):
        for zeta in direction_design(d):
            hvec = [float(t) * c for c in zeta.vector]
            sym = np.ones(f.grid.shape, dtype=complex)
            for j in range(d):
                theta = np.broadcast_to(hvec[j] * ws[j], f.grid.shape)
                sym = sym * _spectral_symbol(float(orders[j]), theta)
            g = inverse(SpectralFunction(f.grid, F.coefficients * sym))
            best = max(best, quasi_norm(g, p))
    return best


def averaged_modulus(
    f: GridFunction, delta: float, r, p, q, inner: bool = False
) -> float:
    """q-average over steps |h| <= delta instead of a supremum.

    Outer form: (delta^-d int_{|h|<=delta} ||D_h^r f||_p^q dh)^(1/q).
    Inner form (requires q <= p): the h-average is taken pointwise under
    the L_p norm.  Midpoint rule with 16 nodes per axis.
    """
    order = r if isinstance(r, SmoothnessOrder) else SmoothnessOrder(r)
    p = Exponent.parse(p)
    q = Exponent.parse(q)
    if q.is_inf:
        raise ParameterError("averaged modulus needs a finite averaging exponent")
    if inner and not q.q1 <= (math.inf if p.is_inf else p.p):
        raise ParameterError("inner form needs q <= p")
    if not order.admissible_for(p):
        raise AdmissibilityError(f"alpha={order.alpha} inadmissible for p={p.label()}")
    d = f.grid.dimension
    n = N_MAGNITUDES
    edges = np.linspace(-delta, delta, n + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    w_cell = (2.0 * delta / n) ** d
    if d == 1:
        nodes = [(h,) for h in mids]
    else:
        nodes = [
            (h1, h2)
            for h1 in mids
            for h2 in mids
            if math.hypot(h1, h2) <= delta
        ]
    acc = 0.0
    acc_grid = np.zeros(f.grid.shape)
    for hvec in nodes:
        if all(abs(h) < 1e-300 for h in hvec):
            continue
        theta = _step_phase(f.grid, hvec)
        F = transform(f)
        g = inverse(
            SpectralFunction(
                f.grid, F.coefficients * _spectral_symbol(order.alpha, theta)
            )
        )
        if inner:
            acc_grid = acc_grid + np.abs(g.values) ** q.q1 * w_cell
        else:
            acc += quasi_norm(g, p) ** q.q1 * w_cell
    scale = delta ** (-d)
    if inner:
        avg = GridFunction(f.grid, (scale * acc_grid) ** (1.0 / q.q1))
        return quasi_norm(avg, p)
    return float((scale * acc) ** (1.0 / q.q1))


def sobolev_seminorm(f: GridFunction, r: int, p) -> float:
    """Sum of L_p norms of all whole derivatives of total order r."""
    if not (isinstance(r, int) and r >= 1):
        raise ParameterError("whole order r >= 1 required")
    p = Exponent.parse(p)
    ws = f.grid.frequencies()
    F = transform(f)
    d = f.grid.dimension
    total = 0.0
    multis = [(r,)] if d == 1 else [(k, r - k) for k in range(r + 1)]
    for multi in multis:
        sym = np.ones(f.grid.shape, dtype=complex)
        for j, k in enumerate(multi):
            if k:
                sym = sym * np.broadcast_to((1j * ws[j]) ** k, f.grid.shape)
        g = inverse(SpectralFunction(f.grid, F.coefficients * sym))
        total += quasi_norm(g, p)
    return total
