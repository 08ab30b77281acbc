"""Report renderers: JSON, CSV, appendix-style text table and SVG figures."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .model import SearchReport, SolutionRecord


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def report_to_json(report: SearchReport, indent: int | None = 1) -> str:
    # json writes floats with repr(), the shortest string that round-trips
    return json.dumps(_jsonable(report.to_dict()), indent=indent)


def report_from_json(text: str) -> SearchReport:
    return SearchReport.from_dict(json.loads(text))


CSV_COLUMNS = ["n", "reduced_potential", "morse_index", "fp_index", "isotropy", "chiral", "collinear"]


def report_to_csv(report: SearchReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.solutions:
        w.writerow([report.spec.n, repr(r.reduced_potential), r.morse_index, r.fp_index,
                    r.isotropy_order, int(r.chiral), int(r.collinear)])
    return buf.getvalue()


def _num(v: float) -> str:
    # fixed 8 decimals with the leading zero dropped, e.g. -.50000000
    if abs(v) < 5e-9:
        v = 0.0
    s = f"{v:.8f}"
    if s.startswith("0.") and v != 0:
        s = s[1:]
    elif s.startswith("-0."):
        s = "-" + s[2:]
    return s


def isotropy_label(r: SolutionRecord) -> str:
    return f"{r.isotropy_order}/2" if r.chiral else str(r.isotropy_order)


def _u_label(report: SearchReport) -> str:
    spec = report.spec
    if spec.is_log:
        return "exp(U)/I^(S/2)"
    if spec.alpha == -3:
        return "U*sqrt(I)"
    return f"U*I^({-1 - spec.alpha / 2:g})"


def render_record(r: SolutionRecord, u_label: str = "U*sqrt(I)") -> str:
    z = r.configuration.points
    # presentation: outermost body at (1, 0) as in the reference tables
    z = z / np.abs(z).max()
    lines = [f"{u_label:>9} = {r.reduced_potential:.8f}",
             f"{'Crit ind':>9} = {r.morse_index}",
             f"{'FP ind':>9} = {r.fp_index}",
             f"{'Isotropy':>9} = {isotropy_label(r)}"]
    flags = [name for name, on in (("collinear", r.collinear), ("degenerate", r.morse_degenerate or r.fp_degenerate)) if on]
    if flags:
        lines.append(f"{'':>9}   ({', '.join(flags)})")
    for k, p in enumerate(z, 1):
        lines.append(f"{'z_' + str(k):>9} = ({_num(p.real)},{_num(p.imag)})")
    return "\n".join(lines)


def report_to_table(report: SearchReport) -> str:
    head = f"Central configurations for {report.spec.n} bodies " \
           f"({report.spec.kind.value}, alpha={report.spec.alpha:g}): {len(report.solutions)} classes"
    rule = "-" * max(len(head), 40)
    label = _u_label(report)
    blocks = [head, rule]
    for r in report.solutions:
        blocks += [render_record(r, label), rule]
    blocks.append(f"attempts {report.attempts}, converged {report.successes}, "
                  f"failures {dict(sorted(report.failures.items()))}, Morse sum {report.morse_sum}")
    return "\n".join(blocks) + "\n"


FORMATS = {"json": report_to_json, "csv": report_to_csv, "table": report_to_table}


def render(report: SearchReport, fmt: str) -> str:
    try:
        return FORMATS[fmt](report)
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}") from None


def record_svg(r: SolutionRecord, size: int = 240) -> str:
    """One class as an SVG drawing: bodies as filled circles, unit circle for reference."""
    z = r.configuration.points
    z = z / np.abs(z).max()
    half = size / 2
    scale = 0.42 * size

    def xy(p):
        return half + scale * p.real, half - scale * p.imag

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>',
             f'<circle cx="{half}" cy="{half}" r="{scale:.2f}" fill="none" stroke="#999" '
             f'stroke-dasharray="3,3"/>']
    for k, p in enumerate(z, 1):
        x, y = xy(p)
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="black"/>')
        parts.append(f'<text x="{x + 6:.2f}" y="{y - 6:.2f}" font-size="10" font-family="sans-serif">{k}</text>')
    parts.append(f'<text x="4" y="{size - 6}" font-size="10" font-family="sans-serif">'
                 f'u={r.reduced_potential:.8f} h={r.morse_index} fp={r.fp_index} '
                 f'iso={isotropy_label(r)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_figures(report: SearchReport, directory: str | Path) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, r in enumerate(report.solutions, 1):
        p = d / f"n{report.spec.n}_class{k:02d}.svg"
        p.write_text(record_svg(r))
        paths.append(p)
    return paths
