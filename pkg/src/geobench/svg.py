"""Bare-bones static SVG charts. Output is deterministic; styling is minimal."""

from __future__ import annotations

from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from geobench.geo import AreaGeometry


def _ramp(t: float) -> str:
    # dark purple -> yellow
    t = min(max(t, 0.0), 1.0)
    lo, hi = (68, 1, 84), (253, 231, 37)
    r, g, b = (round(a + (c - a) * t) for a, c in zip(lo, hi))
    return f"#{r:02x}{g:02x}{b:02x}"


def bar_chart(items: Sequence[tuple[str, float]], title: str = "", width: int = 640) -> str:
    """Vertical bars in the given order, labels rotated under the axis."""
    height, top, bottom, left = 360, 30, 120, 50
    plot_h = height - top - bottom
    bar_w = (width - left - 10) / max(len(items), 1)
    peak = max((v for _, v in items), default=0) or 1
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    for i, (label, value) in enumerate(items):
        h = plot_h * value / peak
        x = left + i * bar_w
        y = top + plot_h - h
        parts.append(
            f'<rect x="{x + 2:.1f}" y="{y:.1f}" width="{bar_w - 4:.1f}" height="{h:.1f}" fill="#3b528b">'
            f"<title>{escape(label)}: {value:g}</title></rect>"
        )
        lx, ly = x + bar_w / 2, top + plot_h + 8
        parts.append(
            f'<text x="{lx:.1f}" y="{ly:.1f}" font-size="10" text-anchor="end" '
            f'transform="rotate(-60 {lx:.1f} {ly:.1f})">{escape(label)}</text>'
        )
    parts.append("</svg>\n")
    return "\n".join(parts)


def choropleth(
    areas: Sequence[AreaGeometry], values: Mapping[str, float], title: str = "", width: int = 480
) -> str:
    """Areas drawn in plate-carree, filled by value; areas without data are grey."""
    lats = [v[0] for a in areas for poly in a.polygons for ring in poly for v in ring]
    lons = [v[1] for a in areas for poly in a.polygons for ring in poly for v in ring]
    lat0, lat1, lon0, lon1 = min(lats), max(lats), min(lons), max(lons)
    scale = (width - 20) / max(lon1 - lon0, 1e-9)
    height = int((lat1 - lat0) * scale) + 50
    peak = max(values.values(), default=0) or 1

    def xy(lat: float, lon: float) -> str:
        return f"{10 + (lon - lon0) * scale:.2f},{40 + (lat1 - lat) * scale:.2f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    for area in areas:
        value = values.get(area.name)
        fill = "#cccccc" if not value else _ramp(value / peak)
        path = " ".join(
            "M " + " L ".join(xy(lat, lon) for lat, lon in ring) + " Z"
            for poly in area.polygons
            for ring in poly
        )
        label = f"{area.name}: {value:g}" if value is not None else area.name
        parts.append(
            f'<path d="{path}" fill="{fill}" fill-rule="evenodd" stroke="#333" stroke-width="0.5">'
            f"<title>{escape(label)}</title></path>"
        )
    parts.append("</svg>\n")
    return "\n".join(parts)
