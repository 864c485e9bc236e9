"""Brute-force fixed-step simulation of the closed loops.

This is the reference the closed-form solvers are checked against.  It
integrates the plant state together with the controller's integral state
using classical RK4, and looks up the delayed controller output in a stored
history by cubic Hermite interpolation (values and slopes are both known
exactly at every node), which keeps the scheme fourth order.  Nothing here
uses the method of steps.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .model import Gains, NoDelayGains
from .steps import SampledResponse

SAMPLE_STEP = 0.01


@dataclass(frozen=True)
class OracleConfig:
    step: float = 1e-4
    horizon: float = 7.0

    def __post_init__(self):
        if not self.step > 0 or not self.horizon > 0:
            raise InvalidParameterError("step and horizon must be positive")
        ratio = SAMPLE_STEP / self.step
        if abs(ratio - round(ratio)) > 1e-9 * ratio:
            raise InvalidParameterError(f"step {self.step} does not divide {SAMPLE_STEP}")
        n = self.horizon / SAMPLE_STEP
        if abs(n - round(n)) > 1e-9 * n:
            raise InvalidParameterError("horizon must be a multiple of the sampling step")

    @property
    def stride(self) -> int:
        return int(round(SAMPLE_STEP / self.step))

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / SAMPLE_STEP)) * self.stride

    @property
    def per_delay(self) -> int:
        return int(round(1.0 / self.step))


def simulate_loop_batch(tp, h, hi, cfg: OracleConfig = OracleConfig(), setpoint_weight=0.0, full=False):
    """Simulate many gain pairs at once; ``h`` and ``hi`` broadcast together.

    Returns ``(t, y, v)`` with one column per gain pair, sampled every 0.01
    (or at every integration step when ``full`` is true).  ``v`` holds
    right limits at the nodes.
    """
    h, hi = np.broadcast_arrays(np.atleast_1d(np.asarray(h, float)), np.atleast_1d(np.asarray(hi, float)))
    b = setpoint_weight
    dt = cfg.step
    n = cfg.n_steps
    nd = cfg.per_delay
    m = h.shape[0]
    y = np.empty((n + 1, m))
    J = np.zeros(m)
    v = np.empty((n + 1, m))
    dv_r = np.empty((n + 1, m))
    dv_l = np.empty((n + 1, m))
    y[0] = 1.0
    bias = 1.0 + h * (1.0 - b)

    def delayed(j):
        """Right limit of v at history node j (the history before t=0 is 1)."""
        return v[j] if j >= 0 else 1.0

    def delayed_left(j):
        return v[j] if j > 0 else 1.0

    def node_terms(k):
        yk = y[k]
        v[k] = bias - h * yk - hi * J
        dy_r = (delayed(k - nd) - yk) / tp
        dy_l = (delayed_left(k - nd) - yk) / tp
        dv_r[k] = -h * dy_r - hi * yk
        dv_l[k] = -h * dy_l - hi * yk

    node_terms(0)
    for k in range(n):
        j = k - nd
        if j < 0:
            u0 = um = u1 = 1.0
        else:
            u0, u1 = v[j], v[j + 1]
            um = 0.5 * (u0 + u1) + dt * (dv_r[j] - dv_l[j + 1]) / 8.0
        yk = y[k]
        k1 = (u0 - yk) / tp
        y2 = yk + 0.5 * dt * k1
        k2 = (um - y2) / tp
        y3 = yk + 0.5 * dt * k2
        k3 = (um - y3) / tp
        y4 = yk + dt * k3
        k4 = (u1 - y4) / tp
        y[k + 1] = yk + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        J = J + dt / 6.0 * (yk + 2 * y2 + 2 * y3 + y4)
        node_terms(k + 1)
    t = np.arange(n + 1) * dt
    if full:
        return t, y, v
    s = cfg.stride
    return np.arange(n // s + 1) * SAMPLE_STEP, y[::s], v[::s]


def simulate_loop(tp: float, g: Gains, cfg: OracleConfig = OracleConfig(), setpoint_weight=0.0) -> SampledResponse:
    if not tp > 0:
        raise InvalidParameterError("tp must be positive")
    t, y, v = simulate_loop_batch(tp, g.h, g.hi, cfg, setpoint_weight)
    return SampledResponse(t, y[:, 0], v[:, 0])


def simulate_nodelay(g: NoDelayGains, step=1e-3, horizon=60.0):
    """RK4 integration of ``ti y'' + ti (1+h) y' + h y = h`` from rest.

    Returns ``(t, y, v)`` at every step, with ``v = y + y'``.
    """
    n = int(round(horizon / step))
    h, ti = g.h, g.ti

    def f(y, dy):
        return dy, (h - h * y - ti * (1.0 + h) * dy) / ti

    y = np.empty(n + 1)
    dy = np.empty(n + 1)
    y[0] = dy[0] = 0.0
    yk = dyk = 0.0
    for k in range(n):
        a1, b1 = f(yk, dyk)
        a2, b2 = f(yk + 0.5 * step * a1, dyk + 0.5 * step * b1)
        a3, b3 = f(yk + 0.5 * step * a2, dyk + 0.5 * step * b2)
        a4, b4 = f(yk + step * a3, dyk + step * b3)
        yk += step / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4)
        dyk += step / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4)
        y[k + 1] = yk
        dy[k + 1] = dyk
    t = np.arange(n + 1) * step
    return t, y, y + dy


def convergence_rate(tp, g: Gains, coarse=0.01, setpoint_weight=0.0):
    """Observed order from three step sizes ``coarse, coarse/2, coarse/4``."""
    runs = [
        simulate_loop(tp, g, OracleConfig(step=coarse / 2 ** k), setpoint_weight).y
        for k in range(3)
    ]
    e1 = np.max(np.abs(runs[0] - runs[1]))
    e2 = np.max(np.abs(runs[1] - runs[2]))
    return float(np.log2(e1 / e2))


def growth_rate(y, dt=SAMPLE_STEP, start=1.0, order=8, stride=25):
    """Real part of the slowest-decaying mode seen in a sampled response.

    Fits a linear predictor of ``order`` taps to ``y`` subsampled every
    ``stride`` samples from ``start`` onwards (Prony's method) and returns
    the largest real part among the implied continuous-time exponents.  A
    positive value means the response grows.  Seven delays hold only one or
    two oscillation periods, too few for an envelope test, yet enough for
    the fit.
    """
    y = np.asarray(y, dtype=float)
    x = y[int(round(start / dt))::stride]
    if len(x) < 2 * order + 1:
        raise InvalidParameterError("too few samples for the requested predictor order")
    a = np.column_stack([x[order - 1 - k:len(x) - 1 - k] for k in range(order)])
    coef, *_ = np.linalg.lstsq(a, x[order:], rcond=None)
    roots = np.roots(np.r_[1.0, -coef]).astype(complex)
    roots = roots[roots != 0]
    lam = np.log(roots) / (dt * stride)
    return float(lam.real.max())
