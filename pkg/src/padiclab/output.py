"""CSV/JSON/SVG emission with reproducible metadata headers.

All numeric output is formatted with 17 significant digits so repeated runs
are byte-identical; no timestamps or environment state enter the headers.
"""

from __future__ import annotations

import json
from typing import IO, Mapping, Sequence


def format_number(x) -> str:
    if isinstance(x, (int,)) or hasattr(x, "__index__"):
        return str(int(x))
    return f"{float(x):.17g}"


def metadata_lines(command: str, params: Mapping[str, object], version: str) -> list[str]:
    parts = " ".join(f"{k}={v}" for k, v in params.items())
    return [f"# padiclab v{version}", f"# {command} {parts}".rstrip()]


def write_csv(
    stream: IO[str],
    columns: Mapping[str, Sequence],
    meta: Sequence[str] = (),
) -> None:
    for line in meta:
        stream.write(line + "\n")
    names = list(columns)
    stream.write(",".join(names) + "\n")
    rows = zip(*(columns[n] for n in names))
    for row in rows:
        stream.write(",".join(format_number(v) for v in row) + "\n")


def write_json(stream: IO[str], payload: Mapping, meta: Mapping[str, object]) -> None:
    doc = {"meta": dict(meta)}
    doc.update(payload)
    json.dump(doc, stream, indent=2, default=_jsonable)
    stream.write("\n")


def _jsonable(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if hasattr(obj, "as_dict"):
        return obj.as_dict()
    return str(obj)


def polyline_svg(
    xs: Sequence[float],
    ys: Sequence[float],
    *,
    title: str = "",
    meta: Sequence[str] = (),
    width: int = 800,
    height: int = 480,
) -> str:
    """Self-contained SVG polyline with axis ticks; no plotting dependency.

    Hermetic by design: the golden figures regenerate identically anywhere.
    """
    if len(xs) != len(ys) or len(xs) == 0:
        raise ValueError("polyline needs equal, nonempty coordinate sequences")
    margin = 60.0
    x0, x1 = float(min(xs)), float(max(xs))
    y0, y1 = float(min(ys)), float(max(ys))
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    sx = (width - 2 * margin) / (x1 - x0)
    sy = (height - 2 * margin) / (y1 - y0)

    def px(x: float) -> float:
        return margin + (x - x0) * sx

    def py(y: float) -> float:
        return height - margin - (y - y0) * sy

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">',
    ]
    out.extend(f"<!-- {line.lstrip('# ')} -->" for line in meta)
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    if title:
        out.append(
            f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="15">{title}</text>'
        )
    ax = f'stroke="black" stroke-width="1"'
    out.append(f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" {ax}/>')
    out.append(f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" {ax}/>')
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        yv = y0 + (y1 - y0) * k / 4
        out.append(
            f'<line x1="{px(xv):.2f}" y1="{height - margin}" x2="{px(xv):.2f}" y2="{height - margin + 6}" {ax}/>'
            f'<text x="{px(xv):.2f}" y="{height - margin + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{xv:.6g}</text>'
        )
        out.append(
            f'<line x1="{margin - 6}" y1="{py(yv):.2f}" x2="{margin}" y2="{py(yv):.2f}" {ax}/>'
            f'<text x="{margin - 9}" y="{py(yv):.2f}" text-anchor="end" dominant-baseline="middle" '
            f'font-family="sans-serif" font-size="11">{yv:.6g}</text>'
        )
    points = " ".join(f"{px(float(x)):.3f},{py(float(y)):.3f}" for x, y in zip(xs, ys))
    out.append(f'<polyline points="{points}" fill="none" stroke="#1f77b4" stroke-width="1.3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
