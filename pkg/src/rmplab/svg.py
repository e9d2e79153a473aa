"""Minimal deterministic SVG scatter emitter (no plotting dependency).

Output bytes depend only on the input points and style, so renders are safe
to diff across runs.
"""

from __future__ import annotations


def _fmt(x: float) -> str:
    return f"{float(x):.6f}"


def emit_svg_scatter(points, title: str = "", width: int = 480, height: int = 360,
                     radius: float = 1.5, color: str = "#1f4e8c",
                     xlim=None, ylim=None) -> str:
    """Self-contained SVG scatter of (x, y) pairs with an axes box.

    Limits default to the data extent padded by 5%; an empty point list
    yields a valid empty-axes document.
    """
    pts = [(float(x), float(y)) for x, y in points]
    margin = 40.0
    if pts:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x0, x1 = (min(xs), max(xs)) if xlim is None else (float(xlim[0]), float(xlim[1]))
        y0, y1 = (min(ys), max(ys)) if ylim is None else (float(ylim[0]), float(ylim[1]))
    else:
        x0, x1 = (0.0, 1.0) if xlim is None else (float(xlim[0]), float(xlim[1]))
        y0, y1 = (0.0, 1.0) if ylim is None else (float(ylim[0]), float(ylim[1]))
    padx = 0.05 * (x1 - x0) or 0.5
    pady = 0.05 * (y1 - y0) or 0.5
    x0, x1 = x0 - padx, x1 + padx
    y0, y1 = y0 - pady, y1 + pady
    iw, ih = width - 2 * margin, height - 2 * margin

    def sx(x):
        return margin + (x - x0) / (x1 - x0) * iw

    def sy(y):
        return height - margin - (y - y0) / (y1 - y0) * ih

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{_fmt(margin)}" y="{_fmt(margin)}" width="{_fmt(iw)}" '
        f'height="{_fmt(ih)}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    if title:
        lines.append(
            f'<text x="{_fmt(width / 2)}" y="{_fmt(margin / 2)}" '
            f'text-anchor="middle" font-family="monospace" font-size="13">{title}</text>'
        )
    for label, val, anchor in (
        (_fmt(x0), (margin, height - margin / 3), "start"),
        (_fmt(x1), (width - margin, height - margin / 3), "end"),
        (_fmt(y0), (margin / 4, height - margin), "start"),
        (_fmt(y1), (margin / 4, margin), "start"),
    ):
        lines.append(
            f'<text x="{_fmt(val[0])}" y="{_fmt(val[1])}" text-anchor="{anchor}" '
            f'font-family="monospace" font-size="10">{label}</text>'
        )
    for x, y in pts:
        lines.append(
            f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="{_fmt(radius)}" '
            f'fill="{color}" fill-opacity="0.55"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
