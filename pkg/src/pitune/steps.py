"""Exact step response of the PI loop around a first-order-plus-dead-time plant.

Time is measured in dead times.  The plant obeys ``tp y' + y = v(t - 1)`` and
the controller output (scaled by the plant gain) is

    v(t) = h (b r - y) + hi * integral(r - y) + const,

with setpoint weight ``b``.  ``b = 0`` (proportional action on the
measurement only) is the structure behind the published tables; ``b = 1``
is the textbook PI law with a proportional kick at the setpoint step.

The setpoint steps from 1 to 0 at ``t = 0`` with the loop at rest, so
``y = v = 1`` on ``[-1, 0]``.  On unit interval ``n`` (``n - 1 <= t <= n``)
the response has the closed form

    y_n(s) = sum_i A[n, i] s^i + exp(-s/tp) * sum_j B[n, j] s^j,   0 <= s <= 1,

with ``n`` polynomial and ``n - 1`` exponential coefficients; ``y_1 = 1``.
Each segment follows from the previous one by integrating the controller law
and solving the first-order plant equation against a forcing of the same
polynomial-times-exponential shape.  The exponential part of the forcing
resonates with the plant mode, which is where the extra power of ``s`` comes
from.

For slow plants with large gains the two parts cancel to many digits.  The
recursion is therefore written over generic scalars so the coefficients can
be recomputed in extended precision, and evaluation then uses the power
series of each segment in local time, which the same interval-by-interval
recursion produces without cancellation.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple

import mpmath
import numpy as np

from .errors import InvalidParameterError, RangeError
from .model import Gains

HORIZON = 7
POINTS_PER_INTERVAL = 100
# switch to extended precision above this estimated absolute error
PRECISION_TOL = 1e-10
MP_DIGITS = 50


# -- polynomial helpers on coefficient lists (ascending powers) ------------

def _padd(a, b):
    n = max(len(a), len(b))
    zero = (a or b or [0.0])[0] * 0
    return [(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)]


def _pscale(a, c):
    return [c * x for x in a]


def _pder(a):
    return [i * a[i] for i in range(1, len(a))]


def _pint(a, zero):
    return [zero] + [a[i] / (i + 1) for i in range(len(a))]


def _peval(a, x):
    acc = x * 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _exp_antiderivative(q, tp):
    """``R`` with ``R' - R/tp = q``, so ``exp(-s/tp) R`` integrates ``exp(-s/tp) q``."""
    out = [c * 0 for c in q]
    term, scale = list(q), -tp
    while term:
        for i, c in enumerate(term):
            out[i] += scale * c
        term = _pder(term)
        scale *= tp
    return out


def _plant_particular(p, tp):
    """Polynomial ``Y`` with ``tp Y' + Y = p``: ``sum_k (-tp)^k p^(k)``."""
    out = [c * 0 for c in p]
    term, scale = list(p), tp * 0 + 1
    while term:
        for i, c in enumerate(term):
            out[i] += scale * c
        term = _pder(term)
        scale *= -tp
    return out


def _recursion(tp, h, hi, b, n_intervals, one, exp):
    """Segments ``y_1 .. y_{n+1}`` and controller outputs ``v_1 .. v_n``.

    ``one`` fixes the scalar type, ``exp`` its exponential.  Each entry is a
    pair ``(poly, exp_poly)``.
    """
    zero = one * 0
    tp, h, hi, b = one * tp, one * h, one * hi, one * b
    e1 = exp(-one / tp)
    ys = [([one], [])]
    vs = []
    integral = zero
    for _ in range(n_intervals):
        p, q = ys[-1]
        p_int = _pint(p, zero)
        r = _exp_antiderivative(q, tp)
        r0 = r[0] if r else zero
        # integral of y over [0, s] inside this segment: p_int(s) + e(s) r(s) - r0
        const = one + h * (one - b) - hi * (integral - r0)
        v_poly = _padd([const], _padd(_pscale(p, -h), _pscale(p_int, -hi)))
        v_exp = _padd(_pscale(q, -h), _pscale(r, -hi))
        vs.append((v_poly, v_exp))
        y_poly = _plant_particular(v_poly, tp)
        y_exp = _pscale(_pint(v_exp, zero), one / tp)
        y_exp[0] = _peval(p, one) + e1 * _peval(q, one) - y_poly[0]
        ys.append((y_poly, y_exp))
        integral = integral + _peval(p_int, one) + e1 * _peval(r, one) - r0
    return ys, vs


def _magnitude(pairs):
    return max(sum(abs(float(c)) for c in p) + sum(abs(float(c)) for c in q) for p, q in pairs)


def _taylor_order(tp, h, hi, n_intervals):
    """Number of Taylor terms so that ``r^K / K!`` is below 1e-22 for the
    fastest rate ``r`` present in the response."""
    r = 1.0 / tp + 1.0 + abs(h) / tp + abs(hi)
    k, term = 0, 1.0
    while term > 1e-22 or k < 20 + n_intervals:
        k += 1
        term *= r / k
    return k


def _taylor_recursion(tp, h, hi, b, n_intervals):
    """Power-series form of the same method of steps.

    Returns ``(Y, V, last)``: arrays of shape ``(n_intervals, K)`` with the
    Taylor coefficients of ``y_n`` and ``v_n`` in local time, and the
    coefficients of ``y_{n_intervals+1}``.
    """
    order = _taylor_order(tp, h, hi, n_intervals)
    k = np.arange(order)
    Y = np.zeros((n_intervals + 1, order))
    V = np.zeros((n_intervals, order))
    Y[0, 0] = 1.0
    integral = 0.0
    inv = 1.0 / ((k[:-1] + 1) * tp)
    for m in range(n_intervals):
        c = Y[m]
        v = -h * c
        v[1:] -= hi * c[:-1] / k[1:]
        v[0] += 1.0 + h * (1.0 - b) - hi * integral
        V[m] = v
        vl, il = v.tolist(), inv.tolist()
        d = [float(c.sum())]
        for j in range(order - 1):
            d.append((vl[j] - d[j]) * il[j])
        Y[m + 1] = d
        integral += float(np.sum(c / (k + 1)))
    return Y[:-1], V, Y[-1]


@dataclass(frozen=True)
class SegmentCoeffs:
    poly: Tuple[float, ...]
    exp_poly: Tuple[float, ...]

    def __call__(self, s, tp):
        s = np.asarray(s, dtype=float)
        out = np.polynomial.polynomial.polyval(s, self.poly)
        if self.exp_poly:
            out = out + np.exp(-s / tp) * np.polynomial.polynomial.polyval(s, self.exp_poly)
        return out

    def derivative(self, s, tp):
        s = np.asarray(s, dtype=float)
        dp = _pder(list(self.poly)) or [0.0]
        out = np.polynomial.polynomial.polyval(s, dp) + 0.0 * s
        if self.exp_poly:
            q = list(self.exp_poly)
            dq = _padd(_pder(q), _pscale(q, -1.0 / tp))
            out = out + np.exp(-s / tp) * np.polynomial.polynomial.polyval(s, dq)
        return out


class _TaylorSegment:
    """Segment evaluated from its power series in local time."""

    def __init__(self, coeffs):
        self.coeffs = coeffs

    def __call__(self, s, tp):
        return np.polynomial.polynomial.polyval(np.asarray(s, dtype=float), self.coeffs)

    def derivative(self, s, tp):
        return np.polynomial.polynomial.polyval(
            np.asarray(s, dtype=float), np.polynomial.polynomial.polyder(self.coeffs)
        )


def _seg(pair):
    return SegmentCoeffs(tuple(float(c) for c in pair[0]), tuple(float(c) for c in pair[1]))


@dataclass(frozen=True)
class PiecewiseSolution:
    """Segment-wise closed form over ``[0, n_intervals]``.

    ``segments[n-1]`` holds ``A[n, :]`` and ``B[n, :]`` of ``y_n``;
    ``v_segments[n-1]`` the controller output on the same interval;
    ``lookahead`` is ``y_{n_intervals+1}``.

    When the polynomial and exponential parts cancel too strongly for
    float64 (``well_conditioned`` false) the coefficients are recomputed in
    extended precision for inspection, and evaluation switches to the
    power-series form of each segment.
    """

    tp: float
    gains: Gains
    n_intervals: int
    setpoint_weight: float
    well_conditioned: bool
    _float_pairs: tuple = field(repr=False, compare=False)
    _taylor: Optional[tuple] = field(default=None, repr=False, compare=False)

    @cached_property
    def _pairs(self):
        if self.well_conditioned:
            return self._float_pairs
        with mpmath.workdps(MP_DIGITS):
            one = mpmath.mpf(1)
            return _recursion(one * self.tp, one * self.gains.h, one * self.gains.hi,
                              one * self.setpoint_weight, self.n_intervals, one, mpmath.exp)

    @property
    def segments(self) -> Tuple[SegmentCoeffs, ...]:
        return tuple(_seg(p) for p in self._pairs[0][:-1])

    @property
    def v_segments(self) -> Tuple[SegmentCoeffs, ...]:
        return tuple(_seg(p) for p in self._pairs[1])

    @property
    def lookahead(self) -> SegmentCoeffs:
        return _seg(self._pairs[0][-1])

    @cached_property
    def _evaluators(self):
        if self.well_conditioned:
            ys, vs = self._float_pairs
            y = [_seg(p) for p in ys]
            return y[:-1], y[1:], [_seg(p) for p in vs]
        Y, V, last = self._taylor
        y = [_TaylorSegment(c) for c in Y] + [_TaylorSegment(last)]
        return y[:-1], y[1:], [_TaylorSegment(c) for c in V]

    def _locate(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.n_intervals):
            raise RangeError(f"t must lie in [0, {self.n_intervals}]")
        n = np.minimum(np.floor(t).astype(int), self.n_intervals - 1)
        return t, n, t - n

    def _eval(self, which, t, deriv=False):
        t, n, s = self._locate(t)
        segs = self._evaluators[which]
        out = np.empty_like(t)
        for k in np.unique(n):
            mask = n == k
            seg = segs[k]
            out[mask] = seg.derivative(s[mask], self.tp) if deriv else seg(s[mask], self.tp)
        return out if out.ndim else float(out)

    def segment_value(self, n, s, derivative=False):
        """``y_n`` (1-based) or its derivative at local time ``s`` in ``[0, 1]``.

        Unlike ``segments[n-1](s, tp)`` this goes through the same
        evaluator as ``y``, so it stays accurate when the float64
        coefficients cancel.  ``n = n_intervals + 1`` is the lookahead.
        """
        if not 1 <= n <= self.n_intervals + 1:
            raise RangeError(f"segment index must lie in [1, {self.n_intervals + 1}]")
        y_segs, nxt, _ = self._evaluators
        seg = y_segs[n - 1] if n <= self.n_intervals else nxt[-1]
        return seg.derivative(s, self.tp) if derivative else seg(s, self.tp)

    def y(self, t):
        return self._eval(0, t)

    def dy(self, t):
        """Right derivative of ``y``."""
        return self._eval(0, t, deriv=True)

    def v(self, t):
        """Controller output ``v_n = y_{n+1} + tp y'_{n+1}``, one interval ahead."""
        return self._eval(1, t) + self.tp * self._eval(1, t, deriv=True)

    def v_direct(self, t):
        """Controller output from the integrated control law."""
        return self._eval(2, t)


@dataclass(frozen=True)
class SampledResponse:
    t_grid: np.ndarray
    y: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class PerformanceIndexes:
    po_y: float
    po_v: float
    ise: float


def solve_steps(tp: float, g: Gains, n_intervals: int = HORIZON, setpoint_weight: float = 0.0,
                precision: str = "auto") -> PiecewiseSolution:
    """Method-of-steps solution on ``[0, n_intervals]`` for gains ``g``.

    ``precision`` is ``"auto"``, ``"double"`` (always evaluate the closed
    form in float64) or ``"extended"`` (always use the cancellation-free
    path).
    """
    if tp == 0:
        raise InvalidParameterError("tp = 0 makes the plant model singular")
    if not tp > 0:
        raise InvalidParameterError("tp must be positive")
    if int(n_intervals) != n_intervals or n_intervals < 1:
        raise InvalidParameterError("n_intervals must be a positive integer")
    if precision not in ("auto", "double", "extended"):
        raise InvalidParameterError(f"unknown precision {precision!r}")
    n = int(n_intervals)
    pairs = _recursion(tp, g.h, g.hi, setpoint_weight, n, 1.0, math.exp)
    est = 8 * np.finfo(float).eps * _magnitude(pairs[0] + pairs[1])
    well = precision == "double" or (precision == "auto" and est <= PRECISION_TOL)
    taylor = None if well else _taylor_recursion(tp, g.h, g.hi, setpoint_weight, n)
    return PiecewiseSolution(tp, g, n, float(setpoint_weight), well, pairs, taylor)


def eval_y(sol: PiecewiseSolution, t):
    return sol.y(t)


def eval_v(sol: PiecewiseSolution, t):
    return sol.v(t)


_GRID_CACHE = {}


def _grid_powers(m, degree):
    key = (m, degree)
    if key not in _GRID_CACHE:
        s = np.arange(1, m + 1) / m
        _GRID_CACHE[key] = (s, np.vander(s, degree, increasing=True))
    return _GRID_CACHE[key]


def _stack(pairs, width):
    a = np.zeros((len(pairs), width))
    bq = np.zeros((len(pairs), width))
    for k, (p, q) in enumerate(pairs):
        a[k, : len(p)] = [float(c) for c in p]
        bq[k, : len(q)] = [float(c) for c in q]
    return a, bq


def sample(sol: PiecewiseSolution, points_per_interval: int = POINTS_PER_INTERVAL) -> SampledResponse:
    """``y`` and ``v`` on the uniform grid ``0, 1/m, ..., n_intervals``.

    Interior knots are taken from the segment that ends there.  ``v`` at a
    knot is the right limit.
    """
    m = points_per_interval
    n = sol.n_intervals
    t = np.arange(n * m + 1) / m
    if sol.well_conditioned:
        ys, vs = sol._float_pairs
        width = n + 1
        s, powers = _grid_powers(m, width)
        decay = np.exp(-s / sol.tp)[:, None]
        ay, by = _stack(ys[:-1], width)
        av, bv = _stack(vs, width)
        y = powers @ ay.T + decay * (powers @ by.T)
        v = powers @ av.T + decay * (powers @ bv.T)
        v0 = av[0, 0] + bv[0, 0]
    else:
        Y, V, _ = sol._taylor
        s, powers = _grid_powers(m, Y.shape[1])
        y = powers @ Y.T
        v = powers @ V.T
        v0 = V[0, 0]
    return SampledResponse(t, np.concatenate(([1.0], y.T.ravel())), np.concatenate(([v0], v.T.ravel())))


def indexes_from_samples(resp: SampledResponse) -> PerformanceIndexes:
    y, v = resp.y, resp.v
    dt = resp.t_grid[1] - resp.t_grid[0]
    # trapezoidal rule written as an endpoint-corrected rectangle sum
    ise = dt * (np.sum(y[1:] ** 2) + 0.5 * y[0] ** 2 - 0.5 * y[-1] ** 2)
    return PerformanceIndexes(
        po_y=max(0.0, -float(np.min(y))),
        po_v=max(0.0, -float(np.min(v))),
        ise=float(ise),
    )


def indexes(sol: PiecewiseSolution, points_per_interval: int = POINTS_PER_INTERVAL) -> PerformanceIndexes:
    """``PO_y``, ``PO_v`` and ISE on the sampling grid (701 points for 7 intervals).

    ``points_per_interval`` above 100 gives a finer grid than the published
    tables use.
    """
    if not sol._float_pairs[0]:
        raise RangeError("solution horizon has not been solved")
    return indexes_from_samples(sample(sol, points_per_interval))


def evaluate(tp, g: Gains, setpoint_weight=0.0, n_intervals=HORIZON, precision="auto") -> PerformanceIndexes:
    return indexes(solve_steps(tp, g, n_intervals, setpoint_weight, precision))
