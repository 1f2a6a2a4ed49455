"""Deterministic single-file SVG scenes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from .lattice import CellDecomposition

SIZE = 600.0
PAD = 20.0

CLASS_TINT = {
    "left": "#cfe3ff", "right": "#cfe3ff", "top": "#ffe0c2", "bottom": "#ffe0c2",
    "corner_tl": "#e0e0e0", "corner_tr": "#e0e0e0", "corner_bl": "#e0e0e0", "corner_br": "#e0e0e0",
    "interior": "#f4f4f4", "outside": "none",
}


@dataclass(frozen=True)
class SceneSpec:
    dec: CellDecomposition
    occupied: frozenset = frozenset()
    boundary: tuple = ()
    euler: tuple = ()
    dual: object = None
    rect: object = None
    classification: Mapping = field(default_factory=dict)
    cell_paths: tuple = ()
    vertex_paths: tuple = ()
    title: str = ""


class _Frame:
    def __init__(self, pts: Sequence[tuple[float, float]]):
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), 1e-9)
        self.k = (SIZE - 2 * PAD) / span
        self.w = (max(xs) - self.x0) * self.k + 2 * PAD
        self.h = (self.y1 - min(ys)) * self.k + 2 * PAD

    def __call__(self, p) -> str:
        return f"{PAD + (p[0] - self.x0) * self.k:.2f},{PAD + (self.y1 - p[1]) * self.k:.2f}"


def _poly(frame: _Frame, pts, **attrs) -> str:
    a = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
    return f'<polygon points="{" ".join(frame(p) for p in pts)}" {a}/>'


def _line(frame: _Frame, pts, **attrs) -> str:
    a = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
    return f'<polyline points="{" ".join(frame(p) for p in pts)}" fill="none" {a}/>'


def render_svg(scene: SceneSpec) -> str:
    dec = scene.dec
    lat = dec.lattice
    pts = list(lat.coords.values())
    if scene.rect is not None:
        r = scene.rect
        pts += [(r.x0, r.y0), (r.x1, r.y1)]
    f = _Frame(pts)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{f.w:.0f}" height="{f.h:.0f}" '
        f'viewBox="0 0 {f.w:.2f} {f.h:.2f}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" '
        'orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#c0392b"/></marker></defs>',
    ]
    if scene.title:
        out.append(f"<title>{escape(scene.title)}</title>")
    out.append('<g id="cells">')
    for cell in dec.cells:
        cid = cell.cell_id
        cls = scene.classification.get(cid)
        fill = "#8fd18f" if cid in scene.occupied else CLASS_TINT.get(getattr(cls, "value", cls), "none")
        out.append(_poly(f, cell.polygon, fill=fill, stroke="none"))
    out.append("</g>")
    out.append('<g id="lattice" stroke="#555" stroke-width="1">')
    for e in lat.edges:
        out.append(_line(f, lat.segment(e)))
    out.append("</g>")
    if scene.rect is not None:
        r = scene.rect
        box = [(r.x0, r.y0), (r.x1, r.y0), (r.x1, r.y1), (r.x0, r.y1)]
        out.append(_poly(f, box, fill="none", stroke="#1f5fbf", stroke_width="1.5", stroke_dasharray="6 3"))
    if scene.dual is not None:
        out.append('<g id="dual" stroke="#999" stroke-width="0.8" stroke-dasharray="3 2">')
        for de in scene.dual.dual_edges:
            out.append(_line(f, scene.dual.polyline(de)))
        out.append("</g>")
    if scene.boundary:
        out.append('<g id="boundary" stroke-width="3.5" stroke-linejoin="round">')
        palette = ("#c0392b", "#8e44ad", "#d35400", "#16a085")
        for i, cyc in enumerate(scene.boundary):
            out.append(_poly(f, lat.polygon(cyc), fill="none", stroke=palette[i % len(palette)]))
        out.append("</g>")
    if scene.euler:
        out.append('<g id="euler" stroke="#c0392b" stroke-width="1">')
        for a, b in zip(scene.euler, scene.euler[1:]):
            out.append(_line(f, (lat.coords[a], lat.coords[b]), marker_end="url(#arrow)"))
        out.append("</g>")
    for path in scene.cell_paths:
        out.append('<g class="witness" stroke="#e67e22" stroke-width="3">')
        out.append(_line(f, [dec.by_id[c].site for c in path]))
        out.append("</g>")
    for path in scene.vertex_paths:
        out.append('<g class="witness" stroke="#27ae60" stroke-width="3">')
        out.append(_line(f, [lat.coords[v] for v in path]))
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

