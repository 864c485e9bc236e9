"""Setpoint step response of the PI loop without dead time.

Time is measured in plant time constants.  The loop obeys

    ti y'' + ti (1 + h) y' + h y = h,    y(0) = y'(0) = 0,

and ``v = y + y'`` is the controller output scaled by the plant gain.
Writing ``a = (1+h)/2`` and ``w2 = h/ti`` (the squared natural frequency),
the oscillation frequency is ``b = sqrt(w2 - a^2)`` when that is real.
The overdamped and critically damped cases use the hyperbolic and limiting
forms of the same expressions.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _roots
from .errors import InvalidParameterError, RegimeError, RootFindingError
from .model import NoDelayGains

PO_Y_TARGET = 0.0105
PO_V_LIMIT = 0.1

# |disc| below this is treated as the critically damped limit
_CRITICAL_TOL = 1e-12


class Regime(enum.Enum):
    UNDERDAMPED = "underdamped"
    CRITICAL = "critically-damped"
    OVERDAMPED = "overdamped"


@dataclass(frozen=True)
class DampedParams:
    a: float
    b: float
    regime: Regime
    # 4 h ti - ti^2 (1+h)^2; its sign decides the regime
    discriminant: float
    # real decay split sqrt(a^2 - w2) in the overdamped case, 0 otherwise
    beta: float = 0.0

    @property
    def w2(self) -> float:
        return self.a * self.a + self.b * self.b - self.beta * self.beta


@dataclass(frozen=True)
class NoDelayIndexes:
    po_y: float
    po_v: float
    ise: float
    regime: Regime


def damping_borderline(h):
    """Integral time ``ti`` on the critical-damping curve for gain ``h``."""
    return 4.0 * h / (1.0 + h) ** 2


def damped_params(g: NoDelayGains) -> DampedParams:
    if not g.h > -1:
        raise InvalidParameterError("loop is unstable for h <= -1")
    a = 0.5 * (1.0 + g.h)
    disc = 4.0 * g.h * g.ti - g.ti ** 2 * (1.0 + g.h) ** 2
    if abs(disc) <= _CRITICAL_TOL:
        return DampedParams(a, 0.0, Regime.CRITICAL, disc)
    if disc > 0:
        return DampedParams(a, 0.5 / g.ti * math.sqrt(disc), Regime.UNDERDAMPED, disc)
    return DampedParams(a, 0.0, Regime.OVERDAMPED, disc, beta=0.5 / g.ti * math.sqrt(-disc))


def _modes(p: DampedParams, t):
    """Return ``(C, S)`` with ``C = cos(bt)`` and ``S = sin(bt)/b`` (or analogues)."""
    t = np.asarray(t, dtype=float)
    if p.regime is Regime.UNDERDAMPED:
        return np.cos(p.b * t), np.sin(p.b * t) / p.b
    if p.regime is Regime.OVERDAMPED:
        return np.cosh(p.beta * t), np.sinh(p.beta * t) / p.beta
    return np.ones_like(t), t.copy()


def response(g: NoDelayGains, t):
    """``(y, dy/dt, v, dv/dt)`` at times ``t`` for any damping regime."""
    p = damped_params(g)
    c, s = _modes(p, t)
    decay = np.exp(-p.a * np.asarray(t, dtype=float))
    w2 = g.h / g.ti
    y = 1.0 - decay * (c + p.a * s)
    dy = decay * w2 * s
    v = 1.0 + decay * (-c + (w2 - p.a) * s)
    dv = decay * w2 * (c - (p.a - 1.0) * s)
    return y, dy, v, dv


def _require_underdamped(g):
    p = damped_params(g)
    if p.regime is not Regime.UNDERDAMPED:
        raise RegimeError(
            f"closed form covers the underdamped regime only, got {p.regime.value} "
            f"(h={g.h}, ti={g.ti})"
        )
    return p


def step_y(g: NoDelayGains, t):
    p = _require_underdamped(g)
    t = np.asarray(t, dtype=float)
    out = 1.0 + np.exp(-p.a * t) * (-np.cos(p.b * t) - p.a / p.b * np.sin(p.b * t))
    return out if out.ndim else float(out)


def step_dy(g: NoDelayGains, t):
    p = _require_underdamped(g)
    t = np.asarray(t, dtype=float)
    out = np.exp(-p.a * t) * (p.a ** 2 + p.b ** 2) / p.b * np.sin(p.b * t)
    return out if out.ndim else float(out)


def step_v(g: NoDelayGains, t):
    p = _require_underdamped(g)
    t = np.asarray(t, dtype=float)
    a, b = p.a, p.b
    out = 1.0 + np.exp(-a * t) * (-np.cos(b * t) + (-a + a * a + b * b) / b * np.sin(b * t))
    return out if out.ndim else float(out)


def step_dv(g: NoDelayGains, t):
    p = _require_underdamped(g)
    t = np.asarray(t, dtype=float)
    a, b = p.a, p.b
    out = np.exp(-a * t) * (a * a + b * b) * (np.cos(b * t) - (a - 1.0) / b * np.sin(b * t))
    return out if out.ndim else float(out)


def overshoot_y(g: NoDelayGains) -> float:
    """Fractional overshoot of ``y``; zero when the response is not oscillatory."""
    p = damped_params(g)
    if p.regime is not Regime.UNDERDAMPED:
        return 0.0
    return math.exp(-math.pi * p.a / p.b)


def v_peak_time(g: NoDelayGains):
    """First positive zero of ``dv/dt``, or ``None`` if ``v`` rises monotonically."""
    p = damped_params(g)
    a1 = p.a - 1.0
    if p.regime is Regime.UNDERDAMPED:
        # atan2 keeps the angle in (0, pi): the first positive root
        return math.atan2(p.b, a1) / p.b
    if a1 <= 0:
        return None
    if p.regime is Regime.CRITICAL:
        return 1.0 / a1
    if p.beta >= a1:
        return None
    return math.atanh(p.beta / a1) / p.beta


def overshoot_v(g: NoDelayGains) -> float:
    p = damped_params(g)
    tpk = v_peak_time(g)
    if tpk is None:
        return 0.0
    a1 = p.a - 1.0
    if p.regime is Regime.UNDERDAMPED:
        amp = math.sqrt(a1 * a1 + p.b * p.b)
    else:
        amp = math.sqrt(a1 * a1 - p.beta * p.beta)
    return math.exp(-p.a * tpk) * amp


def ise_closed_form(g: NoDelayGains) -> float:
    """Integral of ``(y - 1)^2`` over ``[0, inf)``.

    In terms of ``w2 = a^2 + b^2`` the expression is rational in the loop
    coefficients, so the same formula holds in every damping regime.
    """
    p = damped_params(g)
    if not p.a > 0:
        raise InvalidParameterError("ISE diverges for h <= -1")
    w2 = g.h / g.ti
    return 0.25 / p.a * (4.0 * p.a * p.a + w2) / w2


def nodelay_indexes(g: NoDelayGains) -> NoDelayIndexes:
    return NoDelayIndexes(overshoot_y(g), overshoot_v(g), ise_closed_form(g), damped_params(g).regime)


def ti_for_overshoot_y(h: float, po_y: float) -> float:
    """Integral time giving overshoot ``po_y`` at gain ``h``.

    From ``po_y = exp(-pi a / b)`` with ``a`` fixed by ``h``.
    """
    if not 0.0 < po_y < 1.0:
        raise InvalidParameterError("overshoot must lie in (0, 1)")
    a = 0.5 * (1.0 + h)
    b = math.pi * a / -math.log(po_y)
    return h / (a * a + b * b)


def nodelay_optimum(po_y=PO_Y_TARGET, po_v=PO_V_LIMIT, h_range=(1e-3, 50.0)) -> NoDelayGains:
    """Point where the overshoot curves ``PO_y = po_y`` and ``PO_v = po_v`` cross.

    Along ``PO_y = po_y`` the integral time is a closed-form function of
    ``h``, so the two-equation system reduces to one equation in ``h``.
    """

    def residual(h):
        return overshoot_v(NoDelayGains(h, ti_for_overshoot_y(h, po_y))) - po_v

    hs = np.geomspace(h_range[0], h_range[1], 400)
    prev_h, prev_r = hs[0], residual(hs[0])
    for h in hs[1:]:
        r = residual(h)
        if (r > 0) != (prev_r > 0):
            hb = _roots.bisect(residual, prev_h, h, xtol=1e-14, flo=prev_r, fhi=r)
            return NoDelayGains(hb, ti_for_overshoot_y(hb, po_y))
        prev_h, prev_r = h, r
    raise RootFindingError("overshoot curves do not intersect", (prev_h, h_range[1]))


def trace_ti(h, index, level, ti_lo=1e-6, ti_hi=None):
    """Integral time on the level curve ``index(h, ti) == level``.

    ``index`` is one of ``"po_y"``, ``"po_v"`` or ``"ise"``.  Returns ``None``
    when the level is not reached for this ``h``.
    """
    if index == "po_y":
        return ti_for_overshoot_y(h, level)
    fn = {"po_v": overshoot_v, "ise": ise_closed_form}[index]
    if index == "ise":
        # ISE is monotone in ti: 0.25/a at ti -> 0, growing without bound
        a = 0.5 * (1.0 + h)
        if level <= 0.25 / a:
            return None
        # closed-form inverse of the rational expression
        return h * (4.0 * a * level - 1.0) / (4.0 * a * a)
    ti_hi = damping_borderline(h) * 4.0 if ti_hi is None else ti_hi

    def f(ti):
        return fn(NoDelayGains(h, ti)) - level

    # PO_v falls as ti grows; bracket by geometric scan downward from ti_hi
    grid = np.geomspace(ti_hi, ti_lo, 200)
    f_prev = f(grid[0])
    for t0, t1 in zip(grid[:-1], grid[1:]):
        f1 = f(t1)
        if (f_prev > 0) != (f1 > 0):
            return _roots.bisect(f, t1, t0, xtol=1e-13, flo=f1, fhi=f_prev)
        f_prev = f1
    return None
