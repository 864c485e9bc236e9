"""Tuning-chart curve bundles, comparison tables and their file emitters.

A chart is a set of named polylines in the ``(h, hi)`` plane (delay loop) or
the ``(h, ti)`` plane (delay-free loop) plus a few named tuning points.
Nothing is drawn here: the emitters write flat CSV or JSON files that any
plotting tool can read.
"""

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import nodelay, rules, stability
from .errors import InvalidParameterError, NumericalError, RangeError
from .model import Gains
from .optimizer import Curve, find_optimum, trace_curve, worker_count
from .steps import PerformanceIndexes, evaluate

CURVE_POINTS = 200
PM_LEVELS = (30, 45, 60)
NODELAY_PO_Y_LEVELS = (0.001, 0.0105, 0.02)
NODELAY_ISE_LEVELS = (1.0, 1.2, 1.4)
NODELAY_H_RANGE = (0.02, 4.0)

Polyline = Tuple[np.ndarray, np.ndarray]


def fmt(x) -> str:
    """Decimal text of ``x`` rounded to 6 significant digits."""
    if x is None:
        return ""
    return format(float(x), ".6g")


def rounded(x) -> Optional[float]:
    return None if x is None else float(fmt(x))


@dataclass(frozen=True)
class ChartBundle:
    """Named polylines and tuning points of one chart.

    ``tp`` is ``None`` for the delay-free chart, whose second coordinate is
    the normalised integral time ``ti`` rather than ``hi``.
    """

    tp: Optional[float]
    curves: Dict[str, Polyline]
    points: Dict[str, Tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        if self.tp is None and "gamma_s" in self.curves:
            raise InvalidParameterError("the delay-free chart has no stability borderline")
        for name, (x, y) in self.curves.items():
            x, y = np.asarray(x), np.asarray(y)
            if x.shape != y.shape:
                raise InvalidParameterError(f"curve {name}: coordinate arrays differ in length")
            if len(x) and not (np.all(x > 0) and np.all(y > 0)):
                raise InvalidParameterError(f"curve {name} leaves the quadrant h > 0, {self.second_axis} > 0")

    @property
    def second_axis(self) -> str:
        return "ti" if self.tp is None else "hi"


def _quadrant(x, y) -> Polyline:
    x, y = np.asarray(x, float), np.asarray(y, float)
    keep = (x > 0) & (y > 0) & np.isfinite(x) & np.isfinite(y)
    return x[keep], y[keep]


def _map(fn, items, workers):
    n = worker_count(workers)
    if n > 1:
        with ThreadPoolExecutor(n) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def overshoot_polyline(tp, curve, n=CURVE_POINTS, workers=None) -> Polyline:
    """Points of Γ_y or Γ_v at ``n`` gains spread over the stabilisable range.

    Gains where the overshoot level is not reached inside the stable
    interval are left out, so the polyline may be shorter than ``n``.
    """
    _, k_u = stability.ultimate_point(tp)
    hs = np.linspace(0.0, k_u, n + 2)[1:-1]

    def one(h):
        try:
            p = trace_curve(tp, curve, float(h))
        except (RangeError, NumericalError):
            return None
        return None if p is None else (p.h, p.hi)

    pts = [p for p in _map(one, hs, workers) if p is not None]
    if not pts:
        return np.zeros(0), np.zeros(0)
    return _quadrant(*zip(*pts))


def delay_chart(tp, n=CURVE_POINTS, workers=None, optimum=None) -> ChartBundle:
    """Tuning chart for the delay loop at normalised time constant ``tp``.

    Points B1, B2 and B3 are the Ziegler-Nichols time, Ziegler-Nichols
    frequency and Zhuang-Atherton ISTE tunings (B3 only where that rule is
    defined); B4 is the constrained ISE optimum, computed unless given.
    """
    curves = {"gamma_s": _quadrant(*stability.borderline_curve(tp, n))}
    for pm in PM_LEVELS:
        curves[f"pm_{pm}"] = _quadrant(*stability.constant_pm_curve(tp, pm, n))
    curves["gamma_y"] = overshoot_polyline(tp, Curve.GAMMA_Y, n, workers)
    curves["gamma_v"] = overshoot_polyline(tp, Curve.GAMMA_V, n, workers)

    points = {}
    for name, rule in (("B1", rules.RuleId.ZN_TIME), ("B2", rules.RuleId.ZN_FREQ), ("B3", rules.RuleId.ZA_ISTE)):
        g = rules.rule_or_none(rule, tp)
        if g is not None:
            points[name] = (float(g.h), float(g.hi))
    if optimum is None:
        optimum = find_optimum(tp, workers=workers)
    points["B4"] = (float(optimum.point.h), float(optimum.point.hi))
    return ChartBundle(tp, curves, points)


def nodelay_chart(n=CURVE_POINTS, h_range=NODELAY_H_RANGE) -> ChartBundle:
    """Tuning chart of the delay-free loop in the ``(h, ti)`` plane."""
    hs = np.linspace(h_range[0], h_range[1], n)
    curves = {"damping_borderline": _quadrant(hs, nodelay.damping_borderline(hs))}

    def level_curve(index, level):
        pts = [(h, nodelay.trace_ti(float(h), index, level)) for h in hs]
        pts = [(h, t) for h, t in pts if t is not None]
        return _quadrant(*zip(*pts)) if pts else (np.zeros(0), np.zeros(0))

    curves["gamma_v"] = level_curve("po_v", nodelay.PO_V_LIMIT)
    for k, level in enumerate(NODELAY_PO_Y_LEVELS, 1):
        curves[f"gamma_y{k}"] = level_curve("po_y", level)
    for k, level in enumerate(NODELAY_ISE_LEVELS, 1):
        curves[f"gamma_i{k}"] = level_curve("ise", level)
    b = nodelay.nodelay_optimum()
    return ChartBundle(None, curves, {"B": (float(b.h), float(b.ti))})


def _curve_rows(x, y):
    return [[rounded(a), rounded(b)] for a, b in zip(x, y)]


def chart_document(bundle: ChartBundle) -> dict:
    """JSON-ready representation with rounded numbers and sorted names."""
    return {
        "tp": bundle.tp,
        "axes": ["h", bundle.second_axis],
        "curves": {name: _curve_rows(*bundle.curves[name]) for name in sorted(bundle.curves)},
        "points": {name: [rounded(v) for v in bundle.points[name]] for name in sorted(bundle.points)},
    }


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in r])
    return buf.getvalue()


def emit_chart(bundle: ChartBundle, fmt_name: str, out_dir) -> List[str]:
    """Write the bundle below ``out_dir`` and return the written paths.

    ``csv`` gives one two-column file per curve plus ``points.csv``;
    ``json`` gives a single ``chart.json``.  Write failures surface as
    ``OSError``.
    """
    os.makedirs(out_dir, exist_ok=True)
    axis = bundle.second_axis
    written = []
    if fmt_name == "csv":
        for name in sorted(bundle.curves):
            path = os.path.join(out_dir, f"{name}.csv")
            x, y = bundle.curves[name]
            _write(path, _csv_text(["h", axis], zip(x, y)))
            written.append(path)
        path = os.path.join(out_dir, "points.csv")
        rows = [(name, *bundle.points[name]) for name in sorted(bundle.points)]
        _write(path, _csv_text(["name", "h", axis], rows))
        written.append(path)
    elif fmt_name == "json":
        path = os.path.join(out_dir, "chart.json")
        _write(path, json.dumps(chart_document(bundle), indent=1) + "\n")
        written.append(path)
    else:
        raise InvalidParameterError(f"unknown chart format {fmt_name!r}")
    return written


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- comparison tables -------------------------------------------------------

TABLE_RULES = ("zn_time", "zn_freq", "za_iste", "proposed")


@dataclass(frozen=True)
class ComparisonRow:
    """Gains and indexes of every rule at one ``tp``; ``None`` marks a blank."""

    tp: float
    gains: Dict[str, Optional[Gains]]
    indexes: Dict[str, Optional[PerformanceIndexes]]


def comparison_row(tp, include_optimum=True, workers=None) -> ComparisonRow:
    gains: Dict[str, Optional[Gains]] = {}
    for name in TABLE_RULES[:3]:
        g = rules.rule_or_none(name, tp)
        gains[name] = None if g is None else Gains(g.h, g.hi)
    if include_optimum:
        gains["proposed"] = find_optimum(tp, workers=workers).gains
    idx = {name: (None if g is None else evaluate(tp, g)) for name, g in gains.items()}
    return ComparisonRow(tp, gains, idx)


def comparison_rows(tps: Sequence[float], include_optimum=True, workers=None) -> List[ComparisonRow]:
    return [comparison_row(tp, include_optimum, workers) for tp in tps]


COMPARISON_HEADER = ["tp", "rule", "h", "hi", "po_y", "po_v", "ise"]


def comparison_csv(rows: Sequence[ComparisonRow]) -> str:
    out = []
    for row in rows:
        for name, g in row.gains.items():
            ix = row.indexes[name]
            if g is None:
                out.append([fmt(row.tp), name, "", "", "", "", ""])
            else:
                out.append([fmt(row.tp), name, fmt(g.h), fmt(g.hi), fmt(ix.po_y), fmt(ix.po_v), fmt(ix.ise)])
    return _csv_text(COMPARISON_HEADER, out)


FIT_HEADER = ["tp", "branch", "h", "hi", "po_y", "po_v", "ise", "between_branches"]


def fit_table_csv(rows: Sequence[rules.FitRow]) -> str:
    out = [
        [fmt(r.tp), r.branch, fmt(r.h), fmt(r.hi), fmt(r.indexes.po_y), fmt(r.indexes.po_v),
         fmt(r.indexes.ise), "yes" if r.between_branches else "no"]
        for r in rows
    ]
    return _csv_text(FIT_HEADER, out)


def polyline_csv(x, y, axis="hi") -> str:
    return _csv_text(["h", axis], zip(x, y))
