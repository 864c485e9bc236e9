"""Minimum-ISE tuning under overshoot limits for the delay loop.

For a fixed proportional gain ``h`` both overshoots grow with the integral
gain, so each limit traces a curve ``hi(h)`` in the tuning chart.  The
tighter of the two curves is the admissible edge, and the ISE falls as
``hi`` rises towards it; the optimum is the point of least ISE along that
edge.
"""

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import _roots
from .errors import InfeasibleError, NumericalError, RangeError
from .model import Gains
from .stability import hi_bounds, ultimate_gain
from .steps import PerformanceIndexes, evaluate

PO_Y_TARGET = 0.0105
PO_V_TARGET = 0.1
N_GRID = 50
EDGE_TRIM = 0.02
SCAN_POINTS = 200
RESIDUAL_TOL = 1e-7


class Curve(str, enum.Enum):
    GAMMA_Y = "gamma_y"
    GAMMA_V = "gamma_v"


_INDEX = {Curve.GAMMA_Y: "po_y", Curve.GAMMA_V: "po_v"}


@dataclass(frozen=True)
class CurvePoint:
    h: float
    hi: float
    indexes: PerformanceIndexes
    curve: Curve


@dataclass(frozen=True)
class OptimumResult:
    tp: float
    point: CurvePoint
    active_curve: Curve
    scan: Tuple[CurvePoint, ...] = field(repr=False)

    @property
    def gains(self) -> Gains:
        return Gains(self.point.h, self.point.hi)


def trace_curve(tp, curve, h, target=None, setpoint_weight=0.0) -> Optional[CurvePoint]:
    """Integral gain on the overshoot curve at proportional gain ``h``.

    Bisects inside the stable ``hi`` interval assuming the overshoot rises
    with ``hi``; if the end values do not bracket the target a uniform scan
    looks for the first upward crossing.  Returns ``None`` when the target is
    not reached inside the stable interval.
    """
    curve = Curve(curve)
    if target is None:
        target = PO_Y_TARGET if curve is Curve.GAMMA_Y else PO_V_TARGET
    attr = _INDEX[curve]
    lo, up = hi_bounds(tp, h)
    width = up - lo
    lo_hi = lo + 1e-9 * width
    up_hi = up - 1e-9 * width

    cache = {}

    def f(hi):
        res = evaluate(tp, Gains(h, hi), setpoint_weight)
        cache[hi] = res
        return getattr(res, attr) - target

    f_lo, f_up = f(lo_hi), f(up_hi)
    bracket = None
    if f_lo < 0 < f_up:
        bracket = (lo_hi, up_hi, f_lo, f_up)
    else:
        grid = np.linspace(lo_hi, up_hi, SCAN_POINTS)
        prev, f_prev = grid[0], f_lo
        for x in grid[1:]:
            fx = f(x)
            if f_prev < 0 <= fx:
                bracket = (prev, x, f_prev, fx)
                break
            prev, f_prev = x, fx
    if bracket is None:
        return None
    a, b, fa, fb = bracket
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if abs(fm) < RESIDUAL_TOL or b - a < 1e-14:
            break
        if fm < 0:
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return CurvePoint(h, mid, cache[mid], curve)


def binding_point(tp, h, py=PO_Y_TARGET, pv=PO_V_TARGET, setpoint_weight=0.0) -> Optional[CurvePoint]:
    """The curve point at ``h`` with the smaller ``hi`` (the limit hit first)."""
    pts = [
        trace_curve(tp, Curve.GAMMA_Y, h, py, setpoint_weight),
        trace_curve(tp, Curve.GAMMA_V, h, pv, setpoint_weight),
    ]
    pts = [p for p in pts if p is not None]
    if not pts:
        return None
    return min(pts, key=lambda p: (p.hi, p.curve.value))


def worker_count(requested=None) -> int:
    """Thread count from ``requested`` or ``PI_TUNE_THREADS`` (0 means auto)."""
    if requested is None:
        try:
            requested = int(os.environ.get("PI_TUNE_THREADS", "1"))
        except ValueError:
            requested = 1
    if requested <= 0:
        requested = os.cpu_count() or 1
    return max(1, requested)


def _safe_binding(tp, h, po_y, po_v, setpoint_weight):
    try:
        return binding_point(tp, h, po_y, po_v, setpoint_weight)
    except (RangeError, NumericalError):
        # h beyond the pure-proportional limit has no stabilising hi
        return None


def find_optimum(tp, po_y=PO_Y_TARGET, po_v=PO_V_TARGET, n_grid=N_GRID, refine=True,
                 setpoint_weight=0.0, workers=None) -> OptimumResult:
    """Minimum-ISE point on the admissible edge.

    ``n_grid`` gains are spread evenly over ``(0, h_u)``, trimmed by 2% at
    both ends; the best grid cell is then refined by golden-section search
    to ``1e-3 h_u``.  Grid points are evaluated on ``workers`` threads; the
    reduction runs in grid order, so ties go to the smaller ``h`` and the
    result does not depend on the thread count.
    """
    h_u, _ = ultimate_gain(tp)
    hs = [float(h) for h in np.linspace(EDGE_TRIM * h_u, (1.0 - EDGE_TRIM) * h_u, n_grid)]
    n_workers = worker_count(workers)
    if n_workers > 1:
        with ThreadPoolExecutor(n_workers) as pool:
            grid_pts = list(pool.map(lambda h: _safe_binding(tp, h, po_y, po_v, setpoint_weight), hs))
    else:
        grid_pts = [_safe_binding(tp, h, po_y, po_v, setpoint_weight) for h in hs]
    scan: List[CurvePoint] = []
    best_k, best = None, None
    for k, p in enumerate(grid_pts):
        if p is None:
            continue
        scan.append(p)
        if best is None or p.indexes.ise < best.indexes.ise:
            best_k, best = k, p
    if best is None:
        raise InfeasibleError(f"no point meets PO_y={po_y}, PO_v={po_v} for tp={tp}")

    if refine:
        lo = hs[max(best_k - 1, 0)]
        up = hs[min(best_k + 1, n_grid - 1)]
        probes = {}

        def ise_at(h):
            p = _safe_binding(tp, h, po_y, po_v, setpoint_weight)
            probes[h] = p
            return math.inf if p is None else p.indexes.ise

        h_star, _ = _roots.golden_min(ise_at, lo, up, 1e-3 * h_u)
        for h in sorted(probes):
            if probes[h] is not None:
                scan.append(probes[h])
        cand = probes.get(h_star)
        if cand is not None and cand.indexes.ise < best.indexes.ise:
            best = cand
    return OptimumResult(tp, best, best.curve, tuple(scan))
