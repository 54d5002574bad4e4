"""Render a population as demand circles and offer dots.

Each demand is a circle whose radius is the agent's reservation radius at
m = 0 (any offer strictly inside it beats staying alone); the agent's offer
is a dot tied to the circle centre by a thin segment. Matches, when an
outcome is given, are drawn as edges between partners' demand centres.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Sequence

from .engine import Outcome
from .model import Agent, FrustrationState, reservation_radius

SVG_NS = "http://www.w3.org/2000/svg"

PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"]


class RenderGuardError(ValueError):
    """Raised for populations the renderer cannot draw faithfully."""


def _fmt(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


def render_svg(
    agents: Sequence[Agent],
    outcome: Outcome | None = None,
    labels: dict[int, str] | None = None,
    size: int = 480,
) -> str:
    labels = labels or {}
    dims = {a.dimension for a in agents}
    if dims and max(dims) > 2:
        raise RenderGuardError(
            f"can only draw 1-D or 2-D populations (got d={max(dims)}); projection is not supported"
        )

    def xy(p):
        return (p[0], p[1]) if len(p) == 2 else (p[0], 0.0)

    radius = {a.id: reservation_radius(a, FrustrationState(a.id)) for a in agents}
    xs, ys = [], []
    for a in agents:
        (dx, dy), (ox, oy), r = xy(a.demand), xy(a.offer), radius[a.id]
        xs += [dx - r, dx + r, ox]
        ys += [dy - r, dy + r, oy]
    if not xs:
        xs, ys = [-1.0, 1.0], [-1.0, 1.0]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    pad = 0.05 * span
    x0, y0 = min(xs) - pad, min(ys) - pad
    scale = size / (span + 2 * pad)
    dot_r = max(2.0, size / 120)

    def px(x, y):
        # SVG y grows downward
        return (x - x0) * scale, size - (y - y0) * scale

    root = ET.Element(
        "svg",
        {"xmlns": SVG_NS, "version": "1.1", "width": str(size), "height": str(size),
         "viewBox": f"0 0 {size} {size}"},
    )
    ET.SubElement(root, "rect", {"width": str(size), "height": str(size), "fill": "white"})
    if dims == {1}:
        _, ay = px(0.0, 0.0)
        ET.SubElement(root, "line", {"class": "axis", "x1": "0", "y1": _fmt(ay), "x2": str(size),
                                     "y2": _fmt(ay), "stroke": "#999", "stroke-width": "1"})

    if outcome is not None:
        by_id = {a.id: a for a in agents}
        for a, b in outcome.matching:
            x1, y1 = px(*xy(by_id[a].demand))
            x2, y2 = px(*xy(by_id[b].demand))
            ET.SubElement(root, "line", {"class": "match", "x1": _fmt(x1), "y1": _fmt(y1), "x2": _fmt(x2),
                                         "y2": _fmt(y2), "stroke": "black", "stroke-width": "2",
                                         "stroke-dasharray": "6 3"})

    for k, a in enumerate(agents):
        color = PALETTE[k % len(PALETTE)]
        g = ET.SubElement(root, "g", {"class": "agent", "id": f"agent-{a.id}"})
        cx, cy = px(*xy(a.demand))
        ox, oy = px(*xy(a.offer))
        r = radius[a.id] * scale
        ET.SubElement(g, "line", {"class": "link", "x1": _fmt(cx), "y1": _fmt(cy), "x2": _fmt(ox),
                                  "y2": _fmt(oy), "stroke": color, "stroke-width": "1"})
        ET.SubElement(g, "circle", {"class": "demand", "cx": _fmt(cx), "cy": _fmt(cy), "r": _fmt(r),
                                    "fill": "none", "stroke": color, "stroke-width": "1.5"})
        ET.SubElement(g, "circle", {"class": "offer", "cx": _fmt(ox), "cy": _fmt(oy), "r": _fmt(dot_r),
                                    "fill": color})
        text = ET.SubElement(g, "text", {"x": _fmt(cx + dot_r + 1), "y": _fmt(cy - dot_r - 1),
                                         "font-family": "sans-serif", "font-size": "12"})
        text.text = labels.get(a.id, str(a.id))
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def demand_circle_radius(agent: Agent) -> float:
    return reservation_radius(agent, FrustrationState(agent.id))


__all__ = ["render_svg", "RenderGuardError", "demand_circle_radius"]
