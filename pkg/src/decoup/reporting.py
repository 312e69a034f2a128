"""Report serialization: deterministic JSON (rationals as "p/q" strings,
floats in shortest round-trip form), CSV rows, and dependency-free SVG."""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .intervals import Interval


def jsonable(obj: Any) -> Any:
    """Recursively convert library objects to JSON-ready structures."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}" if obj.denominator != 1 else str(obj.numerator)
    if isinstance(obj, Interval):
        return {"lo": jsonable(obj.lo), "hi": jsonable(obj.hi)}
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    return obj


def dump_json(obj: Any, path: str | Path) -> None:
    """Byte-stable JSON: sorted keys, shortest round-trip floats, newline EOF."""
    Path(path).write_text(json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n")


def dumps_json(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_csv(path: str | Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(x) if isinstance(x, float) else str(x) for x in row))
    Path(path).write_text("\n".join(lines) + "\n")


def partition_csv(cuts: Sequence[float]) -> str:
    """One-line CSV of cut points."""
    return ",".join(repr(float(c)) for c in cuts) + "\n"


# ---------------------------------------------------------------------------
# minimal SVG plotting (no plotting stack required)


def _svg_doc(width: int, height: int, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def partition_strip_svg(cuts: Sequence[float], path: str | Path, width: int = 800) -> None:
    """Strip plot of partition cells: alternating shaded rectangles."""
    lo, hi = float(cuts[0]), float(cuts[-1])
    span = hi - lo or 1.0
    body = []
    for i, (a, b) in enumerate(zip(cuts, cuts[1:])):
        x0 = 20 + (float(a) - lo) / span * (width - 40)
        x1 = 20 + (float(b) - lo) / span * (width - 40)
        fill = "#4a90d9" if i % 2 == 0 else "#d94a4a"
        body.append(
            f'<rect x="{x0:.2f}" y="20" width="{max(x1 - x0, 0.3):.2f}" '
            f'height="40" fill="{fill}" fill-opacity="0.6"/>'
        )
    body.append(f'<line x1="20" y1="60" x2="{width - 20}" y2="60" stroke="black"/>')
    Path(path).write_text(_svg_doc(width, 90, body))


def loglog_svg(
    xs: Sequence[float], series: dict[str, Sequence[float]], path: str | Path,
    width: int = 640, height: int = 480,
) -> None:
    """Log-log scatter/line plot of max-ratio curves."""
    import math

    lx = [math.log10(x) for x in xs]
    all_y = [math.log10(y) for ys in series.values() for y in ys]
    x0, x1 = min(lx), max(lx)
    y0, y1 = min(all_y), max(all_y)
    if y1 - y0 < 0.1:
        y0 -= 0.05
        y1 += 0.05
    pad = 50

    def sx(v: float) -> float:
        return pad + (v - x0) / (x1 - x0 or 1) * (width - 2 * pad)

    def sy(v: float) -> float:
        return height - pad - (v - y0) / (y1 - y0 or 1) * (height - 2 * pad)

    colors = ["#4a90d9", "#d94a4a", "#3aa655", "#bb8800"]
    body = [
        f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" '
        f'height="{height - 2 * pad}" fill="none" stroke="#888"/>'
    ]
    for i, (name, ys) in enumerate(sorted(series.items())):
        pts = " ".join(f"{sx(a):.1f},{sy(math.log10(b)):.1f}" for a, b in zip(lx, ys))
        c = colors[i % len(colors)]
        body.append(f'<polyline points="{pts}" fill="none" stroke="{c}" stroke-width="1.5"/>')
        for a, b in zip(lx, ys):
            body.append(f'<circle cx="{sx(a):.1f}" cy="{sy(math.log10(b)):.1f}" r="3" fill="{c}"/>')
        body.append(
            f'<text x="{width - pad + 4}" y="{pad + 16 * i + 10}" font-size="11" '
            f'fill="{c}">{name}</text>'
        )
    body.append(
        f'<text x="{width // 2}" y="{height - 12}" font-size="12" '
        f'text-anchor="middle">log10(1/delta)</text>'
    )
    Path(path).write_text(_svg_doc(width, height, body))


def neighborhood_svg(
    phase_vals: Sequence[tuple[float, float]], r: float,
    cap: tuple[float, float, float, float] | None, path: str | Path,
    width: int = 640, height: int = 400,
) -> None:
    """Cap sketch: the curve, its r-neighborhood band, and the tangent
    parallelogram (x0, x1, slope, intercept) if given."""
    xs = [p[0] for p in phase_vals]
    ys = [p[1] for p in phase_vals]
    x0v, x1v = min(xs), max(xs)
    y0v, y1v = min(ys) - 4 * r, max(ys) + 4 * r
    pad = 30

    def sx(v: float) -> float:
        return pad + (v - x0v) / (x1v - x0v or 1) * (width - 2 * pad)

    def sy(v: float) -> float:
        return height - pad - (v - y0v) / (y1v - y0v or 1) * (height - 2 * pad)

    body = []
    band = [f"{sx(x):.1f},{sy(y + r):.1f}" for x, y in phase_vals]
    band += [f"{sx(x):.1f},{sy(y - r):.1f}" for x, y in reversed(phase_vals)]
    body.append(f'<polygon points="{" ".join(band)}" fill="#4a90d9" fill-opacity="0.25"/>')
    curve = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in phase_vals)
    body.append(f'<polyline points="{curve}" fill="none" stroke="#1a1a1a" stroke-width="1.5"/>')
    if cap is not None:
        a, b, slope, intercept = cap
        hh = 3 * r
        corners = [
            (a, slope * a + intercept + hh),
            (b, slope * b + intercept + hh),
            (b, slope * b + intercept - hh),
            (a, slope * a + intercept - hh),
        ]
        pts = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in corners)
        body.append(f'<polygon points="{pts}" fill="none" stroke="#d94a4a" stroke-width="1.5"/>')
    Path(path).write_text(_svg_doc(width, height, body))
