"""Static SVG line charts.

Layout is fixed so pixel positions can be derived by hand: the plot area
spans ``[60, width - 20]`` horizontally and ``[20, height - 60]`` vertically,
and each axis covers the data range padded by 5% on both sides. A point maps
to::

    px = 60 + (x - x_lo) / (x_hi - x_lo) * (width - 80)
    py = (height - 60) - (y - y_lo) / (y_hi - y_lo) * (height - 80)

Coordinates are written with two decimals. Dates are placed by ordinal day.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date
from typing import Sequence, Union
from xml.sax.saxutils import escape

from .errors import EmptySeries, NonFiniteValue

MARGIN_LEFT = 60
MARGIN_BOTTOM = 60
MARGIN_TOP = 20
MARGIN_RIGHT = 20
PAD_FRACTION = 0.05
DASH_PATTERN = "6,4"

XValue = Union[date, int, float]


@dataclass(frozen=True)
class LineSeries:
    name: str
    points: tuple[tuple[XValue, float], ...]
    color: str = "blue"
    style: str = "solid"  # or "dashed"

    def __post_init__(self):
        if self.style not in ("solid", "dashed"):
            raise ValueError(f"unknown line style {self.style!r}")
        object.__setattr__(self, "points", tuple(self.points))


@dataclass(frozen=True)
class PlotSpec:
    title: str
    x_label: str
    y_label: str
    series: tuple[LineSeries, ...] = field(default=())
    width: int = 900
    height: int = 500

    def __post_init__(self):
        object.__setattr__(self, "series", tuple(self.series))


def _xnum(x: XValue) -> float:
    return float(x.toordinal()) if isinstance(x, date) else float(x)


def _xlabel(x: XValue) -> str:
    return x.isoformat() if isinstance(x, date) else _num(float(x))


def _num(v: float) -> str:
    return f"{v:.6g}"


def _padded(lo: float, hi: float) -> tuple[float, float]:
    span = hi - lo
    if span == 0.0:
        # flat data: pad relative to the value itself
        span = abs(lo) if lo else 1.0
    return lo - span * PAD_FRACTION, hi + span * PAD_FRACTION


def validate(spec: PlotSpec) -> None:
    if not spec.series:
        raise EmptySeries("a chart needs at least one series")
    for s in spec.series:
        if len(s.points) < 2:
            raise EmptySeries(f"series {s.name!r} has {len(s.points)} point(s); need at least 2")
        for x, y in s.points:
            if not math.isfinite(float(y)) or not math.isfinite(_xnum(x)):
                raise NonFiniteValue(f"series {s.name!r} has a non-finite point ({x}, {y})")


def pixel_mapper(spec: PlotSpec):
    """Return ``(to_px, x_range, y_range)`` for the combined data extent of every series."""
    xs = [_xnum(x) for s in spec.series for x, _ in s.points]
    ys = [float(y) for s in spec.series for _, y in s.points]
    x_lo, x_hi = _padded(min(xs), max(xs))
    y_lo, y_hi = _padded(min(ys), max(ys))
    plot_w = spec.width - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = spec.height - MARGIN_TOP - MARGIN_BOTTOM
    bottom = spec.height - MARGIN_BOTTOM

    def to_px(x: XValue, y: float) -> tuple[float, float]:
        px = MARGIN_LEFT + (_xnum(x) - x_lo) / (x_hi - x_lo) * plot_w
        py = bottom - (float(y) - y_lo) / (y_hi - y_lo) * plot_h
        return px, py

    return to_px, (x_lo, x_hi), (y_lo, y_hi)


def render_line_chart(spec: PlotSpec) -> str:
    validate(spec)
    to_px, _, _ = pixel_mapper(spec)
    w, h = spec.width, spec.height
    left, right = MARGIN_LEFT, w - MARGIN_RIGHT
    top, bottom = MARGIN_TOP, h - MARGIN_BOTTOM

    all_x = [x for s in spec.series for x, _ in s.points]
    all_y = [float(y) for s in spec.series for _, y in s.points]
    x_min = min(all_x, key=_xnum)
    x_max = max(all_x, key=_xnum)
    y_min, y_max = min(all_y), max(all_y)
    px_xmin, py_ymin = to_px(x_min, y_min)
    px_xmax, py_ymax = to_px(x_max, y_max)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
        f'<text x="{w / 2:.2f}" y="14" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13">{escape(spec.title)}</text>',
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>',
    ]
    # min/max tick labels on both axes
    for px, label in ((px_xmin, _xlabel(x_min)), (px_xmax, _xlabel(x_max))):
        out.append(f'<line x1="{px:.2f}" y1="{bottom}" x2="{px:.2f}" y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{bottom + 18}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="10">{escape(label)}</text>')
    for py, label in ((py_ymin, _num(y_min)), (py_ymax, _num(y_max))):
        out.append(f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 7}" y="{py + 3:.2f}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="10">{escape(label)}</text>')
    out.append(f'<text x="{(left + right) / 2:.2f}" y="{h - 12}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="11">{escape(spec.x_label)}</text>')
    out.append(f'<text x="14" y="{(top + bottom) / 2:.2f}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="11" transform="rotate(-90 14 {(top + bottom) / 2:.2f})">{escape(spec.y_label)}</text>')

    for k, s in enumerate(spec.series):
        coords = " ".join("{:.2f},{:.2f}".format(*to_px(x, y)) for x, y in s.points)
        dash = f' stroke-dasharray="{DASH_PATTERN}"' if s.style == "dashed" else ""
        out.append(f'<polyline fill="none" stroke="{escape(s.color)}" stroke-width="2"{dash} '
                   f'points="{coords}"><title>{escape(s.name)}</title></polyline>')
        ly = top + 12 + 14 * k
        out.append(f'<line x1="{right - 120}" y1="{ly}" x2="{right - 96}" y2="{ly}" '
                   f'stroke="{escape(s.color)}" stroke-width="2"{dash}/>')
        out.append(f'<text x="{right - 90}" y="{ly + 4}" font-family="sans-serif" '
                   f'font-size="10">{escape(s.name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def history_forecast_plot(history, forecast, title: str = "Inflation, consumer prices (annual %)") -> str:
    """Historical series in solid blue, forecast in dashed red."""
    spec = PlotSpec(
        title=title, x_label="Year", y_label="Inflation (%)",
        series=(
            LineSeries("history", tuple(history.points), "blue", "solid"),
            LineSeries("forecast", tuple(zip(forecast.horizon_dates, forecast.values)), "red", "dashed"),
        ),
    )
    return render_line_chart(spec)


def actual_vs_predicted_plot(actual: Sequence[float], predicted: Sequence[float],
                             x: Sequence[XValue] | None = None,
                             title: str = "Actual vs predicted close") -> str:
    """Actual prices in blue, predictions in red, both solid."""
    if len(actual) != len(predicted):
        raise ValueError(f"{len(actual)} actual vs {len(predicted)} predicted values")
    xs = list(x) if x is not None else list(range(len(actual)))
    if len(xs) != len(actual):
        raise ValueError("x positions do not align with values")
    spec = PlotSpec(
        title=title, x_label="Date" if xs and isinstance(xs[0], date) else "Test sample",
        y_label="Price",
        series=(
            LineSeries("actual", tuple(zip(xs, map(float, actual))), "blue", "solid"),
            LineSeries("predicted", tuple(zip(xs, map(float, predicted))), "red", "solid"),
        ),
    )
    return render_line_chart(spec)
