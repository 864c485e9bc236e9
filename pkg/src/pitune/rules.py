"""Classical tuning rules and the empirical quadratic fits of the optimum.

All rules return dimensionless gains for a plant with normalised time
constant ``tp``.  The Ziegler-Nichols step-response slope ``K/tp`` never
appears explicitly: ``Kp = 0.9 tp / K`` already absorbs it.
"""

import enum
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import published
from .errors import InvalidParameterError, NumericalError, RuleRangeError
from .model import Gains
from .stability import ultimate_point
from .steps import PerformanceIndexes, evaluate


class RuleId(str, enum.Enum):
    ZN_TIME = "zn_time"
    ZN_FREQ = "zn_freq"
    ZA_ISTE = "za_iste"
    PROPOSED_FIT = "proposed_fit"


RULE_RANGES = {
    RuleId.ZN_TIME: (0.0, math.inf),
    RuleId.ZN_FREQ: (0.0, math.inf),
    RuleId.ZA_ISTE: (0.5, 10.0),
    RuleId.PROPOSED_FIT: (0.1, 10.0),
}

# sub-ranges with published formulas; gaps between them are bridged and flagged.
# The first ZA set is used up to and including tp = 1: the benchmark table
# lists (0.786, 0.570) there, which only the first set produces.
ZA_SPLIT = 1.0
ZA_DEFINED = ((0.5, 0.9), (1.0, 10.0))
FIT_BRANCHES = {"gamma_y": (0.1, 0.7), "gamma_v": (0.85, 10.0)}


@dataclass(frozen=True)
class RuleGains(Gains):
    rule: str = ""
    extrapolated: bool = False


@dataclass(frozen=True)
class QuadraticFit:
    c0: float
    c1: float
    c2: float
    range: Tuple[float, float]
    residuals: Tuple[float, ...] = ()

    def __post_init__(self):
        if not self.range[1] >= self.range[0]:
            raise InvalidParameterError("fit range is empty")

    def __call__(self, tp):
        return self.c0 + self.c1 * tp + self.c2 * tp * tp

    @property
    def coefficients(self):
        return (self.c0, self.c1, self.c2)


def _check_range(rule, tp):
    lo, hi = RULE_RANGES[rule]
    if not tp > 0 or not lo <= tp <= hi:
        raise RuleRangeError(rule.value, tp, (lo, hi))


def zn_time(tp):
    h = 0.9 * tp
    return RuleGains(h, h / 3.0, rule=RuleId.ZN_TIME.value)


def zn_freq(tp):
    z_u, ku = ultimate_point(tp)
    h = 0.4 * ku
    # Ti/L = 0.8 * 2 pi / z_u
    return RuleGains(h, h * z_u / (1.6 * math.pi), rule=RuleId.ZN_FREQ.value)


def za_iste(tp):
    extrapolated = not any(lo <= tp <= hi for lo, hi in ZA_DEFINED)
    if tp <= ZA_SPLIT:
        h = 0.786 * (1.0 / tp) ** -0.559
        ti = tp / (0.883 - 0.158 / tp)
    else:
        h = 0.712 * (1.0 / tp) ** -0.921
        ti = tp / (0.968 - 0.247 / tp)
    return RuleGains(h, h / ti, rule=RuleId.ZA_ISTE.value, extrapolated=extrapolated)


def printed_fits():
    out = {}
    for branch, (ch, chi) in published.FIT_COEFFS.items():
        rng = FIT_BRANCHES[branch]
        out[branch] = (QuadraticFit(*ch, range=rng), QuadraticFit(*chi, range=rng))
    return out


def fit_branch_for(tp):
    """Branch name for ``tp`` and whether ``tp`` falls between the branches."""
    for name, (lo, hi) in FIT_BRANCHES.items():
        if lo <= tp <= hi:
            return name, False
    lo_v = FIT_BRANCHES["gamma_v"][0]
    hi_y = FIT_BRANCHES["gamma_y"][1]
    return ("gamma_y" if tp < 0.5 * (hi_y + lo_v) else "gamma_v"), True


def proposed_fit(tp, fits=None):
    fits = printed_fits() if fits is None else fits
    branch, gap = fit_branch_for(tp)
    fh, fhi = fits[branch]
    return RuleGains(fh(tp), fhi(tp), rule=RuleId.PROPOSED_FIT.value, extrapolated=gap)


_RULES = {
    RuleId.ZN_TIME: zn_time,
    RuleId.ZN_FREQ: zn_freq,
    RuleId.ZA_ISTE: za_iste,
    RuleId.PROPOSED_FIT: proposed_fit,
}


def apply_rule(rule, tp: float) -> RuleGains:
    rule = RuleId(rule)
    _check_range(rule, tp)
    return _RULES[rule](tp)


def _solve_full_pivot(a, b):
    """Gaussian elimination with complete pivoting."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = len(b)
    perm = list(range(n))
    scale = np.max(np.abs(a)) or 1.0
    for k in range(n):
        sub = np.abs(a[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        i += k
        j += k
        if sub.max() <= 1e-13 * scale:
            raise NumericalError("design matrix is rank deficient")
        a[[k, i]] = a[[i, k]]
        b[[k, i]] = b[[i, k]]
        a[:, [k, j]] = a[:, [j, k]]
        perm[k], perm[j] = perm[j], perm[k]
        for r in range(k + 1, n):
            f = a[r, k] / a[k, k]
            a[r, k:] -= f * a[k, k:]
            b[r] -= f * b[k]
    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    out = np.zeros(n)
    out[perm] = x
    return out


def fit_quadratic(tp: Sequence[float], values: Sequence[float]) -> QuadraticFit:
    """Ordinary least squares on ``{1, tp, tp^2}`` via the normal equations."""
    tp = np.asarray(tp, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(tp) < 3:
        raise NumericalError("a quadratic fit needs at least three points")
    design = np.vander(tp, 3, increasing=True)
    coef = _solve_full_pivot(design.T @ design, design.T @ values)
    resid = values - design @ coef
    return QuadraticFit(*coef, range=(float(tp.min()), float(tp.max())), residuals=tuple(resid))


def fit_quadratics(points: Sequence[Tuple[float, float, float]], split_tp: float = 0.775):
    """Fit ``h`` and ``hi`` separately on each side of ``split_tp``.

    Returns ``{"gamma_y": (fit_h, fit_hi), "gamma_v": (fit_h, fit_hi)}``.
    """
    pts = sorted(points)
    out = {}
    for name, sel in (("gamma_y", [p for p in pts if p[0] <= split_tp]),
                      ("gamma_v", [p for p in pts if p[0] > split_tp])):
        if len(sel) < 3:
            raise NumericalError(f"branch {name} needs at least three points, got {len(sel)}")
        tps = [p[0] for p in sel]
        out[name] = (fit_quadratic(tps, [p[1] for p in sel]), fit_quadratic(tps, [p[2] for p in sel]))
    return out


def refit_published():
    """Refit the quadratics from the published optimum points."""
    rows = published.TABLE1["proposed"]
    return fit_quadratics([(tp, h, hi) for tp, (h, hi) in rows.items()])


@dataclass(frozen=True)
class FitRow:
    tp: float
    branch: str
    h: float
    hi: float
    indexes: PerformanceIndexes
    between_branches: bool = False


def fit_table(tp_values: Sequence[float] = published.TP_ROWS, fits=None) -> List[FitRow]:
    """Gains from the quadratic fits with their indexes.

    ``tp`` between the two branch ranges yields one row per branch, flagged.
    """
    fits = refit_published() if fits is None else fits
    rows = []
    for tp in tp_values:
        _check_range(RuleId.PROPOSED_FIT, tp)
        _, gap = fit_branch_for(tp)
        branches: Tuple[str, ...] = ("gamma_y", "gamma_v") if gap else (fit_branch_for(tp)[0],)
        for br in branches:
            fh, fhi = fits[br]
            g = Gains(fh(tp), fhi(tp))
            rows.append(FitRow(tp, br, g.h, g.hi, evaluate(tp, g), gap))
    return rows


def rule_or_none(rule, tp) -> Optional[RuleGains]:
    try:
        return apply_rule(rule, tp)
    except RuleRangeError:
        return None
