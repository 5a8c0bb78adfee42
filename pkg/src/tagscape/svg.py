"""SVG rendering of a layout bundle at one zoom level.

Coordinates are ground meters mapped into an SVG user space with north
up; the canvas pixel size shrinks with the level's zoom ratio while the
drawing itself stays in ground units, so deeper levels show fewer,
relatively larger tags on a smaller canvas.
"""

from __future__ import annotations

import math

from .multiscale import ground_units_per_pt

_PAD_FRACTION = 0.02


def _find_level(bundle, ratio: float):
    for lv in bundle.levels:
        if math.isclose(lv.ratio, ratio, rel_tol=1e-12, abs_tol=0.0):
            return lv
    baked = [lv.ratio for lv in bundle.levels]
    raise ValueError(f"no level with ratio {ratio} in bundle (baked: {baked})")


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def export_svg(bundle, ratio: float = 1.0) -> str:
    """Render the level with the given zoom ratio as an SVG document."""
    level = _find_level(bundle, ratio)
    x0, y0, x1, y1 = bundle.region.bbox
    pad = _PAD_FRACTION * max(x1 - x0, y1 - y0)
    width = (x1 - x0) + 2 * pad
    height = (y1 - y0) + 2 * pad

    def tx(x: float) -> float:
        return x - x0 + pad

    def ty(y: float) -> float:
        return (y1 - y) + pad

    dpi = bundle.config.screen[2]
    px_per_m = bundle.config.scale * ratio * dpi / 0.0254
    px_w = max(1, round(width * px_per_m))
    px_h = max(1, round(height * px_per_m))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{px_w}" height="{px_h}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]

    ring_paths = []
    for poly in bundle.region.polygons:
        for ring in poly.rings:
            pts = " L ".join(f"{_fmt(tx(x))} {_fmt(ty(y))}" for x, y in ring[:-1])
            ring_paths.append(f"M {pts} Z")
    parts.append(f'<path d="{" ".join(ring_paths)}" fill="#eef3f7" '
                 'stroke="#5b7a99" stroke-width="0.5%" fill-rule="evenodd"/>')

    visible = {e.text for e in level.entries if e.visible}
    m_per_pt = ground_units_per_pt(bundle.config.scale)
    for tag in sorted(bundle.placed, key=lambda t: t.rank):
        if level.empty or tag.spec.text not in visible:
            continue
        cx, cy = tx(tag.box.center.x), ty(tag.box.center.y)
        size = tag.font_pt * m_per_pt
        transform = ""
        if tag.box.angle != 0.0:
            transform = f' transform="rotate({_fmt(-tag.box.angle)} {_fmt(cx)} {_fmt(cy)})"'
        parts.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" font-size="{_fmt(size)}" '
            f'font-family="sans-serif" text-anchor="middle" '
            f'dominant-baseline="central" fill="#1a2633"{transform}>'
            f'{_escape(tag.spec.text)}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))
