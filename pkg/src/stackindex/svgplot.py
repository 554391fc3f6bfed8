"""Static SVG export of history + forecast + interval band.

Hand-built geometry (polylines and one band polygon) so figure export does
not pull in a plotting dependency. Output is byte-stable for equal inputs.
"""

from __future__ import annotations

from .dataset import TagSeries
from .models import Forecast

WIDTH = 960
HEIGHT = 480
MARGIN = 56


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _scale(values, lo, hi, out_lo, out_hi):
    span = hi - lo
    if span <= 0:
        span = 1.0
    return [out_lo + (v - lo) / span * (out_hi - out_lo) for v in values]


def _polyline(xs, ys, stroke: str, width: float = 2.0, dash: str | None = None) -> str:
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    return (f'<polyline fill="none" stroke="{stroke}" stroke-width="{width}"'
            f'{dash_attr} points="{pts}"/>')


def render_forecast_svg(series: TagSeries, forecast: Forecast,
                        changepoints=None, title: str | None = None) -> str:
    """History polyline, forecast polyline, shaded interval band, and
    optional vertical change-point markers."""
    changepoints = changepoints or []
    hist_idx = [m.index for m in series.months]
    fc_idx = [p.month.index for p in forecast.points]
    all_idx = hist_idx + fc_idx
    values = list(series.values) + [p.upper for p in forecast.points] \
        + [p.lower for p in forecast.points] + [p.yhat for p in forecast.points]
    x_lo, x_hi = min(all_idx), max(all_idx)
    y_lo, y_hi = min(values + [0.0]), max(values)

    def sx(idx):
        return _scale(idx, x_lo, x_hi, MARGIN, WIDTH - MARGIN)

    def sy(vals):
        return _scale(vals, y_lo, y_hi, HEIGHT - MARGIN, MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        parts.append(f'<text x="{WIDTH // 2}" y="28" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="18">{title}</text>')

    # axes
    parts.append(f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
                 f'y2="{HEIGHT - MARGIN}" stroke="#444"/>')
    parts.append(f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" '
                 f'y2="{HEIGHT - MARGIN}" stroke="#444"/>')
    labels = [
        (MARGIN, str(series.start)), (WIDTH - MARGIN, str(forecast.points[-1].month)),
    ]
    for x, text in labels:
        parts.append(f'<text x="{_fmt(x)}" y="{HEIGHT - MARGIN + 20}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="12">{text}</text>')
    for v in (y_lo, y_hi):
        y = sy([v])[0]
        parts.append(f'<text x="{MARGIN - 8}" y="{_fmt(y + 4)}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="12">{_fmt(v)}</text>')

    # interval band: upper path forward, lower path back
    band_x = sx(fc_idx)
    upper_y = sy([p.upper for p in forecast.points])
    lower_y = sy([p.lower for p in forecast.points])
    band_pts = [f"{_fmt(x)},{_fmt(y)}" for x, y in zip(band_x, upper_y)]
    band_pts += [f"{_fmt(x)},{_fmt(y)}" for x, y in zip(reversed(band_x), reversed(lower_y))]
    parts.append(f'<polygon fill="#4477aa" fill-opacity="0.2" stroke="none" '
                 f'points="{" ".join(band_pts)}"/>')

    parts.append(_polyline(sx(hist_idx), sy(list(series.values)), "#222222"))
    parts.append(_polyline(band_x, sy([p.yhat for p in forecast.points]),
                           "#4477aa", dash="6,3"))

    for cp in changepoints:
        x = sx([cp.month.index])[0]
        parts.append(f'<line x1="{_fmt(x)}" y1="{MARGIN}" x2="{_fmt(x)}" '
                     f'y2="{HEIGHT - MARGIN}" stroke="#cc3311" stroke-width="1.5" '
                     f'stroke-dasharray="2,3"/>')
        parts.append(f'<text x="{_fmt(x + 4)}" y="{MARGIN + 14}" font-family="sans-serif" '
                     f'font-size="11" fill="#cc3311">{cp.month}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
