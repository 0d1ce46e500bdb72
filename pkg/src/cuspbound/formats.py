"""Stable text renderings: JSON documents, hull CSV and SVG, plain tables."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .bounds import BoundReport, phi_all_coefficients
from .flow import format_rational as fr
from .hull import CrossingResult, HullBoundary


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _original_indices(report: BoundReport, images) -> list[int]:
    return [report.flow.applied_sort[i - 1] for i in images]


def bound_report_dict(report: BoundReport, ks=None) -> dict:
    alpha = report.flow
    ks = sorted(report.per_k) if ks is None else ks
    per_k = []
    for k in ks:
        rec = report.per_k[k]
        per_k.append({
            "k": k,
            "m_k": rec.m_k,
            "C_k": fr(rec.coefficient),
            "bound": fr(rec.bound),
            "witness": str(rec.witness.rep),
            "witness_original_indices": _original_indices(report, rec.witness.rep.images),
        })
    if report.phi_all is not None:
        z1, zd = phi_all_coefficients(alpha.d, report.phi_all_m)
        phi = {"m": report.phi_all_m, "z_1": fr(z1), "z_d": fr(zd)}
    else:
        phi = None
    return {
        "flow": {
            "original": [fr(x) for x in alpha.original],
            "sorted": [fr(x) for x in alpha.entries],
            "applied_sort": list(alpha.applied_sort),
            "projected": alpha.projected,
        },
        "d": alpha.d,
        "h_G": fr(report.total),
        "degenerate": report.degenerate,
        "borel": fr(report.borel_bound),
        "whole_cusp": fr(report.whole_cusp_bound),
        "maximal_parabolics": per_k,
        "phi_all": phi,
    }


def bound_report_table(report: BoundReport, ks=None) -> str:
    alpha = report.flow
    ks = sorted(report.per_k) if ks is None else ks
    lines = [
        f"flow (sorted)   : {', '.join(fr(x) for x in alpha.entries)}",
        f"h(G,a)          : {fr(report.total)}",
        f"Borel bound     : {fr(report.borel_bound)}",
        f"whole-cusp bound: {fr(report.whole_cusp_bound)}",
    ]
    if report.degenerate:
        lines.append("degenerate      : zero flow, m conventions set to 1")
    if report.phi_all is not None:
        z1, zd = phi_all_coefficients(alpha.d, report.phi_all_m)
        lines.append(f"phi_all         : m={report.phi_all_m}  z_1={fr(z1)}  z_d={fr(zd)}")
    lines.append("")
    lines.append(f"{'k':>3} {'m_k':>4} {'C_k':>10} {'bound':>10}  witness")
    for k in ks:
        rec = report.per_k[k]
        lines.append(f"{k:>3} {rec.m_k:>4} {fr(rec.coefficient):>10} {fr(rec.bound):>10}  {rec.witness.rep}")
    return "\n".join(lines) + "\n"


def hull_rows(boundary: HullBoundary) -> list[dict]:
    """One row per vertex, in tau order.

    ``s`` is the last tau-index merged into the vertex; ``slope`` and ``d_s``
    describe the edge leaving it towards ``tau^(s+1)`` and are blank on the
    final vertex.
    """
    edges = {
        s: (slope, width)
        for s, slope, width in zip(boundary.edge_tau_index, boundary.edge_slopes, boundary.edge_widths)
    }
    rows = []
    for v, run in zip(boundary.vertices, boundary.vertex_tau_indices):
        s = run[-1]
        slope, width = edges.get(s, (None, None))
        rows.append({
            "s": s,
            "psi": fr(v.psi),
            "h": fr(v.h),
            "slope": "" if slope is None else fr(slope),
            "d_s": "" if width is None else fr(width),
        })
    rows.sort(key=lambda r: r["s"])
    return rows


def hull_csv(boundary: HullBoundary) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["s", "psi", "h", "slope", "d_s"], lineterminator="\n")
    writer.writeheader()
    writer.writerows(hull_rows(boundary))
    return buf.getvalue()


def hull_dict(boundary: HullBoundary, crossing: CrossingResult) -> dict:
    return {
        "k": boundary.k,
        "flow": [fr(x) for x in boundary.flow.entries],
        "vertices": [
            {"psi": fr(v.psi), "h": fr(v.h), "witness": str(v.witness.rep)} for v in boundary.vertices
        ],
        "edge_slopes": [fr(c) for c in boundary.edge_slopes],
        "edge_widths": [fr(w) for w in boundary.edge_widths],
        "collapsed_steps": list(boundary.collapsed),
        "crossing": {
            "f": fr(crossing.f),
            "slope_interval": [fr(c) for c in crossing.slope_interval],
            "vertex": None if crossing.vertex_hit is None else str(crossing.vertex_hit.rep),
        },
    }


def _num(x: float) -> str:
    return f"{x:.3f}"


def hull_svg(boundary: HullBoundary, crossing: CrossingResult, width: int = 640, height: int = 480) -> str:
    """Polyline of the upper boundary with the ``psi_k = 0`` axis and the crossing marked."""
    margin = 48
    pts = boundary.points()
    xs = [p[0] for p in pts] + [Fraction(0)]
    ys = [p[1] for p in pts] + [crossing.f]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span_x = (x1 - x0) or Fraction(1)
    span_y = (y1 - y0) or Fraction(1)
    sx = Fraction(width - 2 * margin) / span_x
    sy = Fraction(height - 2 * margin) / span_y

    def px(x: Fraction) -> str:
        return _num(float(margin + (x - x0) * sx))

    def py(y: Fraction) -> str:
        return _num(float(height - margin - (y - y0) * sy))

    poly = " ".join(f"{px(x)},{py(y)}" for x, y in pts)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        "<metadata>",
        f"k={boundary.k}; flow={','.join(fr(x) for x in boundary.flow.entries)}; "
        f"psi_range=[{fr(x0)},{fr(x1)}]; h_range=[{fr(y0)},{fr(y1)}]; "
        f"x_scale={fr(sx)}; y_scale={fr(sy)}; f={fr(crossing.f)}",
        "</metadata>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{px(Fraction(0))}" y1="{margin}" x2="{px(Fraction(0))}" y2="{height - margin}" '
        'stroke="grey" stroke-dasharray="4 4"/>',
        f'<text x="{px(Fraction(0))}" y="{margin - 8}" font-size="12" text-anchor="middle">psi_{boundary.k} = 0</text>',
        f'<polyline points="{poly}" fill="none" stroke="black" stroke-width="2"/>',
    ]
    for x, y in pts:
        lines.append(f'<circle cx="{px(x)}" cy="{py(y)}" r="3" fill="black"/>')
    lines.append(f'<circle cx="{px(Fraction(0))}" cy="{py(crossing.f)}" r="5" fill="none" stroke="red" stroke-width="2"/>')
    lines.append(
        f'<text x="{_num(float(margin + (0 - x0) * sx) + 8)}" y="{py(crossing.f)}" font-size="12" fill="red">'
        f"f = {fr(crossing.f)}</text>"
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
