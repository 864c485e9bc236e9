"""Stability region and phase margin of the PI loop with dead time.

On the imaginary axis ``s = i z`` (``z`` in radians per dead time) the
characteristic equation ``s (1 + tp s) e^s + h s + hi = 0`` splits into

    h  + cos z - tp z sin z = 0
    hi - z sin z - tp z^2 cos z = 0

which traces the stability borderline in the ``(h, hi)`` plane.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import _roots
from .errors import InvalidParameterError, NumericalError, RangeError, RootFindingError
from .model import Gains

SCAN_STEP = 0.01
ROOT_TOL = 1e-12


@dataclass(frozen=True)
class PhaseMarginResult:
    z_b: float
    pm_deg: float

    @property
    def pm_rad(self) -> float:
        return math.radians(self.pm_deg)


@dataclass(frozen=True)
class StabilityBounds:
    tp: float
    h_max: float
    z_a: float

    def hi_interval(self, h) -> Tuple[float, float]:
        return hi_bounds(self.tp, h)


def ultimate_gain(tp: float) -> Tuple[float, float]:
    """Largest proportional gain ``h_u`` over the stable region, with ``z_a``.

    ``z_a`` is the first positive root of ``tan z = -tp/(1+tp) z``; it lies in
    ``(pi/2, pi]`` and is found on ``sin z + k z cos z``, which has no poles.
    """
    if tp < 0:
        raise InvalidParameterError("tp must be non-negative")
    k = tp / (1.0 + tp)

    def f(z):
        return math.sin(z) + k * z * math.cos(z)

    if f(math.pi) == 0.0 or k == 0.0:
        z_a = math.pi
    else:
        z_a = _roots.scan_roots(f, SCAN_STEP, math.pi, SCAN_STEP, 1, ROOT_TOL)[0]
    h_u = -math.cos(z_a) + tp * z_a * math.sin(z_a)
    return h_u, z_a


def stability_bounds(tp) -> StabilityBounds:
    h_u, z_a = ultimate_gain(tp)
    return StabilityBounds(tp, h_u, z_a)


def integral_borderline(tp, z):
    """``hi`` on the borderline at frequency ``z``: the zero of ``delta_r``."""
    return z * np.sin(z) + tp * z * z * np.cos(z)


def gain_borderline(tp, z):
    return -np.cos(z) + tp * z * np.sin(z)


def delta_r(tp, hi, z):
    return hi - integral_borderline(tp, z)


def _second_critical_point(tp):
    """Second positive zero of ``sin z + k z cos z``, inside ``(3 pi/2, 2 pi)``."""
    k = tp / (1.0 + tp)
    if k == 0.0:
        return 2.0 * math.pi

    def f(z):
        return math.sin(z) + k * z * math.cos(z)

    return _roots.bisect(f, 1.5 * math.pi, 2.0 * math.pi, xtol=ROOT_TOL)


def crossing_frequencies(tp, h):
    """First two positive roots ``z1 < z2`` of ``h + cos z - tp z sin z``.

    ``-cos z + tp z sin z`` climbs from -1 to ``h_u`` on ``(0, z_a)`` and then
    falls to its next minimum, so for ``-1 < h < h_u`` each root has its own
    bracket.  This stays reliable as the roots merge near ``h_u``, where a
    fixed-step scan would step over both of them.
    """
    h_u, z_a = ultimate_gain(tp)
    if not -1.0 < h < h_u:
        raise RootFindingError(f"h={h} has no borderline crossing pair", (-1.0, h_u))

    def f(z):
        return h + math.cos(z) - tp * z * math.sin(z)

    z_c = _second_critical_point(tp)
    z1 = _roots.bisect(f, 0.0, z_a, xtol=ROOT_TOL)
    z2 = _roots.bisect(f, z_a, z_c, xtol=ROOT_TOL)
    return [z1, z2]


def hi_bounds(tp: float, h: float) -> Tuple[float, float]:
    """Open interval of integral gains ``hi`` that stabilise the loop at ``h``.

    Solves ``delta_r(z1) < 0``, ``delta_r(z2) > 0`` and ``hi > 0``.  For
    ``h > 0`` the lower end is always zero.  The upper end reaches zero at
    the pure-proportional limit ``K_u K`` (below ``h_u``), so for
    ``K_u K <= h < h_u`` the set is empty and a ``NumericalError`` is raised.
    """
    h_u, _ = ultimate_gain(tp)
    if not 0.0 < h < h_u:
        raise RangeError(f"h={h} outside the stabilisable range (0, {h_u:.6g}) for tp={tp}")
    try:
        z1, z2 = crossing_frequencies(tp, h)
    except RootFindingError as exc:
        raise NumericalError(f"borderline crossing not found for tp={tp}, h={h}") from exc
    upper = float(integral_borderline(tp, z1))
    lower = max(0.0, float(integral_borderline(tp, z2)))
    if not upper > lower:
        raise NumericalError(
            f"no stabilising hi > 0 at tp={tp}, h={h}: the sign conditions give "
            f"({lower}, {upper})"
        )
    return lower, upper


def is_stable(tp, g: Gains) -> bool:
    try:
        lo, up = hi_bounds(tp, g.h)
    except RangeError:
        return False
    return lo < g.hi < up


def open_loop_response(tp: float, g: Gains, z: float) -> complex:
    """Open-loop frequency response at ``s = i z``."""
    if z == 0:
        raise InvalidParameterError("open loop has an integrator pole at z = 0")
    s = 1j * z
    return (g.hi + g.h * s) / (s * (1.0 + tp * s)) * cmath.exp(-s)


def open_loop_phase(tp, g: Gains, z):
    """Continuous (unwrapped) open-loop phase in radians."""
    return math.atan2(g.h * z, g.hi) - 0.5 * math.pi - math.atan(tp * z) - z


def crossover_frequency(tp, g: Gains) -> float:
    def f(z):
        return g.h ** 2 + (g.hi / z) ** 2 - 1.0 - (tp * z) ** 2

    if g.hi == 0 and g.h ** 2 <= 1.0:
        raise NumericalError("no gain crossover: loop gain below 1 at every frequency")
    hi_z = 1.0
    while f(hi_z) > 0:
        hi_z *= 2.0
        if hi_z > 1e12:
            raise NumericalError("gain crossover not bracketed")
    lo_z = hi_z / 2.0
    while f(lo_z) < 0:
        lo_z /= 2.0
        if lo_z < 1e-300:
            raise NumericalError("no gain crossover: loop gain below 1 at every frequency")
    return _roots.bisect(f, lo_z, hi_z, xtol=1e-15 * hi_z)


def phase_margin(tp: float, g: Gains) -> PhaseMarginResult:
    """Phase margin at the unique gain crossover.

    The magnitude condition ``h^2 + hi^2/z^2 = 1 + tp^2 z^2`` has a left side
    falling and a right side rising in ``z``, so bisection is safe.
    """
    z_b = crossover_frequency(tp, g)
    pm = math.pi + open_loop_phase(tp, g, z_b)
    return PhaseMarginResult(z_b, math.degrees(pm))


def tangent_relation_residual(tp, g: Gains, res: PhaseMarginResult) -> float:
    """Residual of ``tan(z_b + PM) = -(hi + z_b^2 h tp) / (z_b (h - hi tp))``.

    Compared as angles modulo pi so poles of the tangent do no harm.
    """
    z = res.z_b
    lhs = z + res.pm_rad
    num = -(g.hi + z * z * g.h * tp)
    den = z * (g.h - g.hi * tp)
    rhs = math.atan2(num, den)
    d = (lhs - rhs) % math.pi
    return min(d, math.pi - d)


def dominant_root(tp, g: Gains, maxiter=100):
    """Closed-loop root near the borderline crossing ``i z1``, by Newton.

    The root solves ``s (1 + tp s) e^s + h s + hi = 0``; its real part is
    negative inside the stable region and positive just outside.
    """
    z1 = crossing_frequencies(tp, g.h)[0]
    s = 1j * z1
    for _ in range(maxiter):
        e = cmath.exp(s)
        f = s * (1.0 + tp * s) * e + g.h * s + g.hi
        df = (1.0 + 2.0 * tp * s + s * (1.0 + tp * s)) * e + g.h
        step = f / df
        s -= step
        if abs(step) < 1e-14 * max(1.0, abs(s)):
            return s
    raise NumericalError(f"characteristic root did not converge for tp={tp}, {g}")


def ultimate_point(tp):
    """Pure-proportional stability limit: ``z_u`` with ``tan z_u = -tp z_u``."""

    def f(z):
        return math.sin(z) + tp * z * math.cos(z)

    if tp == 0:
        return math.pi, 1.0
    z_u = _roots.scan_roots(f, SCAN_STEP, math.pi, SCAN_STEP, 1, ROOT_TOL)[0]
    return z_u, math.sqrt(1.0 + (z_u * tp) ** 2)


def borderline_curve(tp, n=200):
    """Stability borderline as a polyline ``(h, hi)`` from ``h = 0`` to ``hi = 0``.

    Parametrised by the crossing frequency from the ``h = 0`` crossing to the
    pure-proportional limit ``z_u``.
    """
    z0 = crossing_frequencies(tp, 0.0)[0]
    z_u, _ = ultimate_point(tp)
    z = np.linspace(z0, z_u, n)
    h, hi = gain_borderline(tp, z), integral_borderline(tp, z)
    # the end points are h = 0 and hi = 0 by construction; drop round-off
    h[0] = 0.0
    hi[-1] = 0.0
    return h, hi


def constant_pm_curve(tp, pm_deg, n=200):
    """Points of constant phase margin as a polyline ``(h, hi)``.

    At crossover ``F(i z) = -exp(i PM)``, which is linear in ``(hi, h)``:
    ``hi + i h z = -exp(i PM) i z (1 + i tp z) e^{i z}``.  Only the branch
    with ``h, hi > 0`` starting from low frequency is returned.
    """
    pm = math.radians(pm_deg)
    zs = np.linspace(1e-4, 2.0 * math.pi, 20000)
    w = -np.exp(1j * pm) * 1j * zs * (1.0 + 1j * tp * zs) * np.exp(1j * zs)
    hi = w.real
    h = w.imag / zs
    ok = (h > 0) & (hi > 0)
    if not ok.any():
        return np.zeros(0), np.zeros(0)
    first = int(np.argmax(ok))
    last = first
    while last + 1 < len(ok) and ok[last + 1]:
        last += 1
    z = np.linspace(zs[first], zs[last], n)
    w = -np.exp(1j * pm) * 1j * z * (1.0 + 1j * tp * z) * np.exp(1j * z)
    return w.imag / z, w.real
