"""
SVG and PNG drawings of meshes.

Hyperbolic meshes are drawn in the Klein disk (straight chords) or the
Poincare disk (arcs orthogonal to the unit circle); Euclidean meshes get a
fitted view box; spherical meshes are projected orthographically onto the
xy-plane with great-circle arcs sampled as polylines, hidden edges in grey.
"""
import io
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from .errors import RenderError
from .hyp_kernel import klein_to_poincare_many
from .mesh import Geometry, Mesh
from .utils.atomic_io import atomic_write

logger = logging.getLogger(__name__)

DISK_MODELS = ('klein', 'poincare')
DISK_VIEWBOX = (-1.05, -1.05, 2.1, 2.1)
SAGITTA_MIN = 1e-9
ARC_SAMPLES = 24
COLORS = {'edge': '#000000', 'hidden': '#b0b0b0', 'circle': '#808080', 'background': '#ffffff'}


@dataclass(frozen=True)
class Stroke:
    """One drawable edge: a line, a circular arc or a polyline, in model coordinates."""
    kind: str                 # 'line' | 'arc' | 'polyline'
    points: tuple             # endpoints, or all polyline vertices
    center: tuple = None
    radius: float = 0.0
    hidden: bool = False

    def sampled(self, n: int = ARC_SAMPLES) -> list:
        if self.kind != 'arc':
            return list(self.points)
        (x0, y0), (x1, y1) = self.points
        cx, cy = self.center
        a0 = math.atan2(y0 - cy, x0 - cx)
        a1 = math.atan2(y1 - cy, x1 - cx)
        delta = (a1 - a0 + math.pi) % (2 * math.pi) - math.pi
        return [(cx + self.radius * math.cos(a0 + delta * t / n), cy + self.radius * math.sin(a0 + delta * t / n))
                for t in range(n + 1)]


def _fmt(x: float) -> str:
    s = f"{x:.8f}".rstrip('0').rstrip('.')
    return '0' if s in ('-0', '') else s


def poincare_arc(u, v):
    """
    Centre and radius of the circle through u and v orthogonal to the unit
    circle, or None when the geodesic is (numerically) a diameter.
    """
    (ux, uy), (vx, vy) = u, v
    det = ux * vy - uy * vx
    if abs(det) < 1e-12:
        return None
    bu = (ux * ux + uy * uy + 1.0) / 2.0
    bv = (vx * vx + vy * vy + 1.0) / 2.0
    cx = (bu * vy - bv * uy) / det
    cy = (ux * bv - vx * bu) / det
    r2 = cx * cx + cy * cy - 1.0
    if r2 <= 0:
        return None
    r = math.sqrt(r2)
    half = math.hypot(ux - vx, uy - vy) / 2.0
    sagitta = r - math.sqrt(max(r2 - half * half, 0.0))
    if sagitta < SAGITTA_MIN:
        return None
    return (cx, cy), r


def _great_circle(p: np.ndarray, q: np.ndarray, n: int = ARC_SAMPLES) -> np.ndarray:
    omega = math.atan2(np.linalg.norm(np.cross(p, q)), float(p @ q))
    if omega < 1e-12:
        return np.stack([p, q])
    t = np.linspace(0.0, 1.0, n + 1)[:, None]
    return (np.sin((1 - t) * omega) * p + np.sin(t * omega) * q) / math.sin(omega)


def strokes(m: Mesh, disk_model: str = 'klein') -> list:
    if disk_model not in DISK_MODELS:
        raise RenderError(f"unknown disk model {disk_model!r}; choose from {', '.join(DISK_MODELS)}")
    if m.geometry is Geometry.COMBINATORIAL:
        raise RenderError("a combinatorial mesh has no coordinates to draw")
    if disk_model == 'poincare' and m.geometry is not Geometry.HYPERBOLIC:
        raise RenderError("the Poincare model applies to hyperbolic meshes only")

    out = []
    if m.geometry is Geometry.SPHERICAL:
        for u, v in m.edges:
            pts = _great_circle(m.positions[u], m.positions[v])
            hidden = bool(np.mean(pts[:, 2]) < 0)
            out.append(Stroke('polyline', tuple(map(tuple, pts[:, :2].tolist())), hidden=hidden))
        return out

    pos = m.positions
    if disk_model == 'poincare':
        pos = klein_to_poincare_many(pos)
    for u, v in m.edges:
        a, b = tuple(pos[u].tolist()), tuple(pos[v].tolist())
        arc = poincare_arc(a, b) if disk_model == 'poincare' else None
        if arc is None:
            out.append(Stroke('line', (a, b)))
        else:
            out.append(Stroke('arc', (a, b), center=arc[0], radius=arc[1]))
    return out


def view_box(m: Mesh) -> tuple:
    if m.geometry is not Geometry.EUCLIDEAN:
        return DISK_VIEWBOX
    lo = m.positions.min(axis=0)
    hi = m.positions.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    pad = 0.05 * span
    # y is flipped on output
    return (float(lo[0]) - pad, float(-hi[1]) - pad, float(hi[0] - lo[0]) + 2 * pad,
            float(hi[1] - lo[1]) + 2 * pad)


def _svg_path(s: Stroke) -> str:
    (x0, y0) = s.points[0]
    if s.kind == 'line':
        (x1, y1) = s.points[1]
        return f"M {_fmt(x0)} {_fmt(-y0)} L {_fmt(x1)} {_fmt(-y1)}"
    if s.kind == 'arc':
        (x1, y1) = s.points[1]
        cx, cy = s.center
        # screen coordinates have y flipped
        cross = (x0 - cx) * (-(y1) + cy) - (-(y0) + cy) * (x1 - cx)
        sweep = 1 if cross > 0 else 0
        r = _fmt(s.radius)
        return f"M {_fmt(x0)} {_fmt(-y0)} A {r} {r} 0 0 {sweep} {_fmt(x1)} {_fmt(-y1)}"
    rest = ' '.join(f"L {_fmt(x)} {_fmt(-y)}" for x, y in s.points[1:])
    return f"M {_fmt(x0)} {_fmt(-y0)} {rest}"


def render_svg(m: Mesh, disk_model: str = 'klein', stroke_width: float = 0.002, size: int = 1024) -> str:
    items = strokes(m, disk_model)
    vb = view_box(m)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="{" ".join(_fmt(c) for c in vb)}">',
        f'<rect x="{_fmt(vb[0])}" y="{_fmt(vb[1])}" width="{_fmt(vb[2])}" height="{_fmt(vb[3])}" '
        f'fill="{COLORS["background"]}"/>',
    ]
    if m.geometry is not Geometry.EUCLIDEAN:
        lines.append(f'<circle cx="0" cy="0" r="1" fill="none" stroke="{COLORS["circle"]}" '
                     f'stroke-width="{_fmt(stroke_width)}"/>')
    for hidden in (True, False):
        group = [s for s in items if s.hidden == hidden]
        if not group:
            continue
        color = COLORS['hidden'] if hidden else COLORS['edge']
        lines.append(f'<g fill="none" stroke="{color}" stroke-width="{_fmt(stroke_width)}" '
                     f'stroke-linecap="round" stroke-linejoin="round">')
        lines.extend(f'<path d="{_svg_path(s)}"/>' for s in group)
        lines.append('</g>')
    lines.append('</svg>')
    logger.info("[Render] svg: %d strokes, model %s", len(items), disk_model)
    return '\n'.join(lines) + '\n'


def render_png(m: Mesh, disk_model: str = 'klein', stroke_width: float = 0.002, size: int = 1024) -> Image.Image:
    items = strokes(m, disk_model)
    x0, y0, w, h = view_box(m)
    scale = size / max(w, h)
    width_px = max(1, int(round(stroke_width * scale)))

    def to_px(p):
        return ((p[0] - x0) * scale, (-p[1] - y0) * scale)

    img = Image.new('RGB', (size, size), COLORS['background'])
    draw = ImageDraw.Draw(img)
    if m.geometry is not Geometry.EUCLIDEAN:
        (ax, ay), (bx, by) = to_px((-1.0, 1.0)), to_px((1.0, -1.0))
        draw.ellipse([ax, ay, bx, by], outline=COLORS['circle'], width=width_px)
    for s in sorted(items, key=lambda s: not s.hidden):
        color = COLORS['hidden'] if s.hidden else COLORS['edge']
        draw.line([to_px(p) for p in s.sampled()], fill=color, width=width_px)
    logger.info("[Render] png: %d strokes, %dx%d", len(items), size, size)
    return img


def render_to_file(m: Mesh, path, fmt: str = 'svg', disk_model: str = 'klein',
                   stroke_width: float = 0.002, size: int = 1024) -> Path:
    if fmt == 'svg':
        return atomic_write(path, render_svg(m, disk_model, stroke_width, size))
    if fmt == 'png':
        buf = io.BytesIO()
        render_png(m, disk_model, stroke_width, size).save(buf, format='PNG')
        return atomic_write(path, buf.getvalue())
    raise RenderError(f"unknown output format {fmt!r}")
