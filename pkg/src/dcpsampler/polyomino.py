"""Digitally convex polyominoes glued from four NW-convex quarter paths.

The quarter words are all stored in the NW frame (0 = east, 1 = north,
read along the clockwise contour).  At assembly the frames are un-rotated:
WN is used as-is from the W corner, NE maps 1 -> east / 0 -> south, ES
maps 1 -> south / 0 -> west, SW maps 1 -> west / 0 -> north.
"""

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .boltzmann import (
    DEFAULT_DRAW_BUDGET,
    SampleReport,
    TrialCapExceeded,
    _multiset_counts,
    assemble_path,
)
from .christoffel import EMPTY_MULTISET, CoprimeSegment, PathWord, SegmentMultiset
from .gfseries import GfContext
from .rng import RngStream


class ContourError(RuntimeError):
    """Internal invariant violation while assembling a contour."""


@dataclass(frozen=True)
class Polyomino:
    """Four compatible quarter words plus derived geometry.

    contour is the clockwise step sequence over 'NESW' starting at the W
    corner; cell_runs are scanline rows (y, x0, x1) with x1 exclusive;
    width/height are the bounding box in cells; perimeter equals the total
    word length and 2 * (width + height).
    """

    wn: PathWord
    ne: PathWord
    es: PathWord
    sw: PathWord
    contour: str
    start: tuple[int, int]
    cell_runs: tuple[tuple[int, int, int], ...]
    cells: frozenset[tuple[int, int]]
    width: int
    height: int
    perimeter: int


def closure_check(wn: PathWord, ne: PathWord, es: PathWord, sw: PathWord) -> bool:
    """East steps of the top half must balance the bottom half, and north
    steps of the left half must balance the right half."""
    wn0 = wn.count("0")
    ne0 = ne.count("0")
    es0 = es.count("0")
    sw0 = sw.count("0")
    wn1 = len(wn) - wn0
    ne1 = len(ne) - ne0
    es1 = len(es) - es0
    sw1 = len(sw) - sw0
    return wn0 + ne1 == es0 + sw1 and ne0 + es1 == sw0 + wn1


_STEP = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}
_FRAME = {  # word letter -> contour direction, per quarter
    "wn": {"1": "N", "0": "E"},
    "ne": {"1": "E", "0": "S"},
    "es": {"1": "S", "0": "W"},
    "sw": {"1": "W", "0": "N"},
}


def assemble_contour(wn: PathWord, ne: PathWord, es: PathWord, sw: PathWord) -> Polyomino:
    """Glue the four quarters into a closed clockwise contour and derive
    cells (horizontal scanline between boundary crossings), bounding box
    and perimeter.

    Raises ValueError if the closure equations fail and ContourError if the
    walk breaks an invariant that NW-convex inputs cannot break (reused
    edge, open contour, odd scanline crossings).
    """
    if not closure_check(wn, ne, es, sw):
        raise ValueError("quarter words do not satisfy the closure equations")

    contour = []
    for name, word in (("wn", wn), ("ne", ne), ("es", es), ("sw", sw)):
        frame = _FRAME[name]
        contour.extend(frame[ch] for ch in word)
    contour = "".join(contour)

    # The boundary of a disconnected digitally convex set revisits pinch
    # corridors, so an undirected edge may appear twice (once per
    # direction); the same *directed* edge twice or a half-turn cannot
    # happen for NW-convex quarters.
    x = y = 0
    min_x = min_y = 0
    seen_directed = set()
    prev_dir = contour[-1]
    opposite = {"N": "S", "S": "N", "E": "W", "W": "E"}
    rows: dict[int, list[int]] = {}
    for d in contour:
        if d == opposite[prev_dir]:
            raise ContourError(f"half-turn at ({x}, {y})")
        prev_dir = d
        dx, dy = _STEP[d]
        nx, ny = x + dx, y + dy
        edge = ((x, y), (nx, ny))
        if edge in seen_directed:
            raise ContourError(f"contour reuses directed edge {edge}")
        seen_directed.add(edge)
        if d == "N":
            rows.setdefault(y, []).append(x)
        elif d == "S":
            rows.setdefault(ny, []).append(x)
        x, y = nx, ny
        min_x = min(min_x, x)
        min_y = min(min_y, y)
    if (x, y) != (0, 0):
        raise ContourError(f"contour does not close: ends at ({x}, {y})")

    runs = []
    cells = set()
    for row in sorted(rows):
        xs = sorted(rows[row])
        if len(xs) % 2:
            raise ContourError(f"odd number of crossings in row {row}")
        for i in range(0, len(xs), 2):
            x0, x1 = xs[i] - min_x, xs[i + 1] - min_x
            if x1 == x0:
                continue  # zero-width pinch corridor, no cells
            runs.append((row - min_y, x0, x1))
            for cx in range(x0, x1):
                cells.add((cx, row - min_y))

    width = wn.count("0") + ne.count("1")
    height = len(wn) - wn.count("0") + sw.count("0")
    perimeter = len(contour)
    if perimeter != 2 * (width + height):
        raise ContourError("perimeter does not match the bounding box")

    return Polyomino(
        wn=wn,
        ne=ne,
        es=es,
        sw=sw,
        contour=contour,
        start=(-min_x, -min_y),
        cell_runs=tuple(runs),
        cells=frozenset(cells),
        width=width,
        height=height,
        perimeter=perimeter,
    )


def sample_dcp(
    ctx: GfContext, rng: RngStream, draw_budget: int = DEFAULT_DRAW_BUDGET
) -> SampleReport:
    """Repeat four independent quarter draws until the closure equations
    hold, then assemble.  trials counts the rejection rounds."""
    draws = 0
    trials = 0
    while True:
        trials += 1
        quarters = []
        for _ in range(4):
            counts, size, components = _multiset_counts(ctx, rng)
            draws += size + components + 2
            east = sum(e * m for (e, _), m in counts.items())
            north = sum(q * m for (_, q), m in counts.items()) + 1
            quarters.append((counts, size, east, north))
        (_, _, e0, n0), (_, _, e1, n1), (_, _, e2, n2), (_, _, e3, n3) = quarters
        if e0 + n1 == e2 + n3 and e1 + n2 == e3 + n0:
            words = []
            total = 0
            for counts, size, _, _ in quarters:
                if counts:
                    m = SegmentMultiset.from_counts(
                        {CoprimeSegment(e, q): c for (e, q), c in counts.items()}
                    )
                else:
                    m = EMPTY_MULTISET
                words.append(assemble_path(m))
                total += size
            poly = assemble_contour(*words)
            return SampleReport(value=poly, trials=trials, size=total)
        if draws > draw_budget:
            raise TrialCapExceeded(
                f"polyomino closure: no acceptance within {draw_budget} draws "
                f"({trials} rounds)",
                trials=trials,
                draws=draws,
            )


def is_digitally_convex(poly: Polyomino) -> bool:
    """Hull-fill oracle: every lattice cell whose four corners lie inside
    the convex hull of the cell corners must belong to the polyomino.

    The hull cross-section [xleft(y), xright(y)] is collected exactly
    (Fractions) at every integer height from the hull edges; a cell fits
    inside the hull iff both its rows leave it at least one unit of room.
    """
    corners = set()
    for y, x0, x1 in poly.cell_runs:
        corners.update(((x0, y), (x1, y), (x0, y + 1), (x1, y + 1)))
    if not corners:
        return True
    pts = sorted(corners)

    def chain(points):
        out = []
        for p in points:
            while len(out) >= 2:
                (x1, y1), (x2, y2) = out[-2], out[-1]
                if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    hull = chain(pts)[:-1] + chain(pts[::-1])[:-1]  # closed, counterclockwise

    left: dict[int, Fraction] = {}
    right: dict[int, Fraction] = {}
    for (x1, y1), (x2, y2) in zip(hull, hull[1:] + hull[:1]):
        lo, hi = min(y1, y2), max(y1, y2)
        for yy in range(lo, hi + 1):
            if y1 == y2:
                xs = (Fraction(x1), Fraction(x2))
            else:
                xs = (Fraction(x1) + Fraction((x2 - x1) * (yy - y1), y2 - y1),)
            for xx in xs:
                if yy not in left or xx < left[yy]:
                    left[yy] = xx
                if yy not in right or xx > right[yy]:
                    right[yy] = xx

    for y in range(poly.height):
        if y not in left or y + 1 not in left:
            continue
        l_here = max(left[y], left[y + 1])
        r_here = min(right[y], right[y + 1])
        if r_here - l_here < 1:
            continue
        cx_min = math.ceil(l_here)
        cx_max = math.floor(r_here - 1)
        for cx in range(cx_min, cx_max + 1):
            if (cx, y) not in poly.cells:
                return False
    return True


def polyomino_record(report: SampleReport) -> str:
    """One line-structured record for an accepted polyomino."""
    poly: Polyomino = report.value
    return json.dumps(
        {
            "size": report.size,
            "trials": report.trials,
            "perimeter": poly.perimeter,
            "width": poly.width,
            "height": poly.height,
            "cells": len(poly.cells),
            "wn": poly.wn,
            "ne": poly.ne,
            "es": poly.es,
            "sw": poly.sw,
        },
        separators=(",", ":"),
    )


def render_svg(poly: Polyomino, scale: float = 10.0) -> str:
    """Deterministic vector rendering: grey filled cells, black contour.

    Identical polyomino and scale give byte-identical output.
    """
    margin = 10.0
    w = poly.width * scale + 2 * margin
    h = poly.height * scale + 2 * margin

    def fx(v: float) -> str:
        return format(v, "g")

    def px(cx: float) -> float:
        return margin + cx * scale

    def py(cy: float) -> float:
        return margin + (poly.height - cy) * scale

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fx(w)}" height="{fx(h)}" '
        f'viewBox="0 0 {fx(w)} {fx(h)}">',
    ]
    for y, x0, x1 in poly.cell_runs:
        lines.append(
            f'<rect x="{fx(px(x0))}" y="{fx(py(y + 1))}" '
            f'width="{fx((x1 - x0) * scale)}" height="{fx(scale)}" fill="#c8c8c8"/>'
        )
    x, y = poly.start
    pts = [(x, y)]
    for d in poly.contour:
        dx, dy = _STEP[d]
        x, y = x + dx, y + dy
        pts.append((x, y))
    # collapse collinear runs so a unit square keeps exactly four segments
    corners = [pts[0]]
    for i in range(1, len(pts) - 1):
        (ax, ay), (bx, by), (cx, cy) = pts[i - 1], pts[i], pts[i + 1]
        if (bx - ax, by - ay) != (cx - bx, cy - by):
            corners.append(pts[i])
    d_attr = f"M {fx(px(corners[0][0]))} {fx(py(corners[0][1]))}"
    for cxy in corners[1:]:
        d_attr += f" L {fx(px(cxy[0]))} {fx(py(cxy[1]))}"
    d_attr += " Z"
    lines.append(
        f'<path d="{d_attr}" fill="none" stroke="#000000" stroke-width="{fx(scale * 0.12)}"/>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
