"""Stroke decomposition into point/line/arc primitives with Freeman relations.

A thinned stroke is decomposed by first harvesting straight pixel runs
(greedy growth under a distance budget), then clustering the leftover
pixels into ellipse-arc runs.  Each resulting primitive carries three
Freeman directions toward the next three primitives; sub-words carry the
same relation between their centroids at word level.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from . import geomfit
from .geomfit import (
    DegenerateInputError,
    EllipseArcCode,
    LineSegmentCode,
    NonEllipseError,
    NumericalFitError,
    PolarLine,
    arc_angles,
    conic_to_geometric,
    fit_ellipse,
    fit_line,
    point_line_distance,
    sampson_residual,
    segment_extent,
)
from .raster import BinaryRaster, Stroke, segment, thin

__all__ = [
    "FREEMAN_NULL",
    "PointCode",
    "CodedElement",
    "SubWordCode",
    "WordEntry",
    "WordCode",
    "EncoderConfig",
    "EllipseArcCode",
    "LineSegmentCode",
    "freeman_direction",
    "order_strokes",
    "neighbor_directions",
    "extract_lines",
    "cluster_ellipses",
    "encode_stroke",
    "encode_word",
    "scale_subword",
    "scale_word",
    "word_to_json",
    "word_from_json",
    "subword_to_obj",
    "subword_from_obj",
]

FREEMAN_NULL = 9


@dataclass(frozen=True)
class PointCode:
    """A dot, represented by its centroid."""

    x: float
    y: float


@dataclass(frozen=True)
class CodedElement:
    """One primitive plus Freeman directions to the next three elements.

    `anchor` is the centroid of the pixels that produced the primitive;
    it drives ordering and direction computation and is not part of the
    serialized code.
    """

    code: PointCode | LineSegmentCode | EllipseArcCode
    dirs: tuple[int, int, int]
    anchor: tuple[float, float] | None = None


@dataclass(frozen=True)
class SubWordCode:
    elements: tuple[CodedElement, ...]

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class WordEntry:
    code: SubWordCode
    dirs: tuple[int, int, int]


@dataclass(frozen=True)
class WordCode:
    subwords: tuple[WordEntry, ...]

    def __len__(self) -> int:
        return len(self.subwords)


@dataclass(frozen=True)
class EncoderConfig:
    """Decomposition knobs.

    dd      -- line accuracy factor: max point-to-line distance, px
    l_min   -- minimum kept segment length, px
    e_res   -- max mean squared normalized algebraic distance for arc runs
               (gradient-weighted, approximately px^2)
    dot_max -- max pixel count for a stroke to be coded as a dot
    """

    dd: float = 1.0
    l_min: float = 4.0
    e_res: float = 0.5
    dot_max: int = 9


def freeman_direction(src, dst) -> int:
    """Freeman code of the direction src -> dst in screen coordinates.

    0=E, 1=NE, 2=N, ... anticlockwise, with the image y-axis pointing
    down compensated; 9 when the points coincide.  Sector boundaries
    round toward the lower code.
    """
    dx = dst[0] - src[0]
    dy = dst[1] - src[1]
    if math.hypot(dx, dy) < 1e-12:
        return FREEMAN_NULL
    ang = math.degrees(math.atan2(-dy, dx)) % 360.0
    q = (ang + 22.5) / 45.0
    k = math.floor(q)
    if q == k:  # exactly on a sector boundary
        k -= 1
    return int(k) % 8


def order_strokes(strokes) -> list[Stroke]:
    """Left-to-right, top-to-bottom by centroid; bigger strokes first on ties."""
    return sorted(
        strokes, key=lambda s: (s.centroid[0], s.centroid[1], -len(s.pixels))
    )


def neighbor_directions(anchors) -> list[tuple[int, int, int]]:
    """Freeman directions from each anchor to the following three anchors."""
    out = []
    n = len(anchors)
    for i in range(n):
        dirs = []
        for j in range(1, 4):
            if i + j < n:
                dirs.append(freeman_direction(anchors[i], anchors[i + j]))
            else:
                dirs.append(FREEMAN_NULL)
        out.append(tuple(dirs))
    return out


# ---------------------------------------------------------------------------
# path walking over skeleton pixels

_NBRS = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)]


def _rowmajor(p):
    return (p[1], p[0])


def _neighbors(p, pool):
    return [(p[0] + dx, p[1] + dy) for dx, dy in _NBRS if (p[0] + dx, p[1] + dy) in pool]


def _walk_paths(pixels) -> list[list[tuple[int, int]]]:
    """Maximal 8-connected pixel paths covering the set, deterministically.

    Each walk starts at a degree-1 pixel when one exists (else the
    row-major first pixel) and prefers continuing in the current travel
    direction; every pixel is visited exactly once.
    """
    remaining = set(pixels)
    paths = []
    while remaining:
        endpoints = [p for p in remaining if len(_neighbors(p, remaining)) == 1]
        start = min(endpoints, key=_rowmajor) if endpoints else min(
            remaining, key=_rowmajor
        )
        path = [start]
        remaining.discard(start)
        cur = start
        heading = None
        while True:
            nbrs = _neighbors(cur, remaining)
            if not nbrs:
                break
            if heading is None:
                nxt = min(nbrs, key=_rowmajor)
            else:
                def turn(n):
                    ang = math.atan2(n[1] - cur[1], n[0] - cur[0])
                    d = abs(ang - heading) % (2 * math.pi)
                    return min(d, 2 * math.pi - d)

                nxt = min(nbrs, key=lambda n: (turn(n), _rowmajor(n)))
            heading = math.atan2(nxt[1] - cur[1], nxt[0] - cur[0])
            path.append(nxt)
            remaining.discard(nxt)
            cur = nxt
        paths.append(path)
    return paths


def _pixel_centroid(pixels) -> tuple[float, float]:
    xs = [p[0] for p in pixels]
    ys = [p[1] for p in pixels]
    return sum(xs) / len(xs), sum(ys) / len(ys)


def extract_lines(stroke: Stroke, cfg: EncoderConfig):
    """Harvest straight runs from the stroke's skeleton pixels.

    Walks maximal paths; each run seeds on two pixels and grows while the
    next path pixel stays within `dd` of the current best-fit line,
    refitting after every append.  Runs whose projected extent exceeds
    `l_min` are kept as segments and claim their pixels (the terminating
    corner pixel stays with the just-closed run); everything else ends up
    in the residual set.
    """
    if not stroke.pixels:
        raise ValueError("stroke must be nonempty")
    claimed: list[tuple[LineSegmentCode, frozenset]] = []
    residual: set[tuple[int, int]] = set()
    for path in _walk_paths(stroke.pixels):
        i = 0
        n = len(path)
        while i < n:
            if n - i < 2:
                residual.update(path[i:])
                break
            run = path[i : i + 2]
            line = fit_line(run)
            j = i + 2
            while j < n and point_line_distance(path[j], line) <= cfg.dd:
                run.append(path[j])
                line = fit_line(run)
                j += 1
            # refitting can drift: trim the tail until every claimed pixel
            # really is within dd of the final line
            while len(run) > 2:
                line = fit_line(run)
                if max(point_line_distance(p, line) for p in run) <= cfg.dd:
                    break
                run.pop()
                j -= 1
            length, _, _ = segment_extent(run, line)
            if length > cfg.l_min:
                claimed.append((line, set(run)))
            else:
                residual.update(run)
            i = j
    _absorb_stray_pixels(claimed, residual, cfg)
    out = []
    for line, run in claimed:
        line = fit_line(run)
        length, _, _ = segment_extent(run, line)
        out.append((LineSegmentCode(line.p, line.alpha, length), frozenset(run)))
    return out, residual


def _absorb_stray_pixels(claimed, residual, cfg: EncoderConfig) -> None:
    """Fold skeleton staircase strays back into adjacent straight runs.

    Thinning leaves occasional pixels parallel to a digital line; the
    path walk strands them.  A residual pixel 8-adjacent to a claimed run
    is absorbed when it lies within `dd` of the run's line and inside the
    run's projected extent (so runs never creep along their own axis).
    """
    bounds = []
    for line, run in claimed:
        a = math.radians(line.alpha)
        dx, dy = -math.sin(a), math.cos(a)
        ts = [px * dx + py * dy for px, py in run]
        bounds.append((line, dx, dy, min(ts) - 0.5, max(ts) + 0.5))
    changed = True
    while changed:
        changed = False
        for p in sorted(residual, key=_rowmajor):
            for k, (line, run) in enumerate(claimed):
                if not any(n in run for n in _neighbors(p, run)):
                    continue
                line_k, dx, dy, tlo, thi = bounds[k]
                if point_line_distance(p, line_k) > cfg.dd:
                    continue
                t = p[0] * dx + p[1] * dy
                if not tlo <= t <= thi:
                    continue
                run.add(p)
                residual.discard(p)
                changed = True
                break


def _components(pixels) -> list[set]:
    remaining = set(pixels)
    comps = []
    while remaining:
        seed = min(remaining, key=_rowmajor)
        comp = {seed}
        frontier = [seed]
        remaining.discard(seed)
        while frontier:
            cur = frontier.pop()
            for nb in _neighbors(cur, remaining):
                remaining.discard(nb)
                comp.add(nb)
                frontier.append(nb)
        comps.append(comp)
    return comps


def _arc_from_run(run, cfg: EncoderConfig) -> EllipseArcCode | None:
    """Fit an ellipse to the ordered run and code its arc, if possible."""
    if len(run) < 5:
        return None
    try:
        coef = fit_ellipse(run)
    except (DegenerateInputError, NumericalFitError):
        return None
    try:
        geo = conic_to_geometric(coef)
    except NonEllipseError:
        return None
    # the arc endpoints are wherever the pixels leave the largest angular
    # gap around the fitted center (robust to arbitrary run ordering)
    x0, y0, _, _, phi = geo
    by_angle = sorted(
        set(run),
        key=lambda p: (math.degrees(math.atan2(p[1] - y0, p[0] - x0)) - phi)
        % 360.0,
    )
    angles = [
        (math.degrees(math.atan2(p[1] - y0, p[0] - x0)) - phi) % 360.0
        for p in by_angle
    ]
    gaps = [
        ((angles[(k + 1) % len(angles)] - angles[k]) % 360.0, k)
        for k in range(len(angles))
    ]
    _, k = max(gaps)
    start, end = by_angle[(k + 1) % len(by_angle)], by_angle[k]
    if start == end:
        return None
    try:
        beta, gamma = arc_angles(geo, start, end)
    except DegenerateInputError:
        return None
    # a closed curve has no meaningful endpoints: canonicalize so equal
    # shapes produce equal codes regardless of where the tiny gap fell
    if (gamma - beta) % 360.0 >= 350.0:
        beta, gamma = 0.0, 359.0
    return EllipseArcCode(geo[0], geo[1], geo[2], geo[3], phi, beta, gamma)


def cluster_ellipses(residual, cfg: EncoderConfig):
    """Group leftover pixels into ellipse-arc runs.

    The residual is split into 8-connected components; inside each, path
    ordered runs grow greedily while the gradient-weighted fit residual
    stays within `e_res`.  Runs too small to host an ellipse are merged
    into an adjacent accepted run when one exists, otherwise returned as
    leftover groups for the caller to degrade into points.

    Returns (arcs, leftovers): arcs as (EllipseArcCode, pixel set) pairs.
    """
    arcs: list[tuple[EllipseArcCode, frozenset]] = []
    leftovers: list[frozenset] = []
    for comp in _components(residual):
        comp_arcs: list[list[tuple[int, int]]] = []
        comp_small: list[list[tuple[int, int]]] = []
        for path in _walk_paths(comp):
            i = 0
            n = len(path)
            while i < n:
                if n - i < 5:
                    comp_small.append(path[i:])
                    break
                run = path[i : i + 5]
                j = i + 5
                while j < n:
                    candidate = run + [path[j]]
                    try:
                        coef = fit_ellipse(candidate)
                    except (DegenerateInputError, NumericalFitError):
                        run = candidate  # cannot judge yet; keep growing
                        j += 1
                        continue
                    if sampson_residual(candidate, coef) <= cfg.e_res:
                        run = candidate
                        j += 1
                    else:
                        break
                code = _arc_from_run(run, cfg)
                if code is not None:
                    comp_arcs.append(run)
                else:
                    comp_small.append(run)
                i = j
        # incremental growth is brittle on shallow partial arcs: re-join
        # runs whenever their union still fits a single ellipse well
        merged_any = True
        while merged_any and len(comp_arcs) > 1:
            merged_any = False
            for ia in range(len(comp_arcs)):
                for ib in range(ia + 1, len(comp_arcs)):
                    union = comp_arcs[ia] + comp_arcs[ib]
                    try:
                        coef = fit_ellipse(union)
                    except (DegenerateInputError, NumericalFitError):
                        continue
                    if (
                        sampson_residual(union, coef) <= cfg.e_res
                        and _arc_from_run(union, cfg) is not None
                    ):
                        comp_arcs[ia] = union
                        del comp_arcs[ib]
                        merged_any = True
                        break
                if merged_any:
                    break
        # merge undersized runs into the nearest accepted run in the component
        for small in comp_small:
            if comp_arcs:
                sc = _pixel_centroid(small)
                nearest = min(
                    range(len(comp_arcs)),
                    key=lambda k: math.dist(sc, _pixel_centroid(comp_arcs[k])),
                )
                merged = comp_arcs[nearest] + small
                if _arc_from_run(merged, cfg) is not None:
                    comp_arcs[nearest] = merged
                    continue
            leftovers.append(frozenset(small))
        for run in comp_arcs:
            code = _arc_from_run(run, cfg)
            arcs.append((code, frozenset(run)))
    return arcs, leftovers


def encode_stroke(stroke: Stroke, cfg: EncoderConfig) -> SubWordCode:
    """Code one stroke as an ordered primitive sequence with directions."""
    if len(stroke.pixels) <= cfg.dot_max:
        cx, cy = stroke.centroid
        return SubWordCode(
            (CodedElement(PointCode(cx, cy), (9, 9, 9), (cx, cy)),)
        )
    segments, residual = extract_lines(stroke, cfg)
    arcs, leftovers = cluster_ellipses(residual, cfg)
    primitives: list[tuple] = []
    for code, pixels in segments:
        primitives.append((code, _pixel_centroid(pixels)))
    for code, pixels in arcs:
        primitives.append((code, _pixel_centroid(pixels)))
    for group in leftovers:
        cx, cy = _pixel_centroid(group)
        primitives.append((PointCode(cx, cy), (cx, cy)))
    # same ordering rule as strokes: left-to-right, top-to-bottom
    primitives.sort(key=lambda pr: (pr[1][0], pr[1][1]))
    anchors = [pr[1] for pr in primitives]
    dirs = neighbor_directions(anchors)
    return SubWordCode(
        tuple(
            CodedElement(code, d, anchor)
            for (code, anchor), d in zip(primitives, dirs)
        )
    )


def encode_word(image: BinaryRaster, cfg: EncoderConfig | None = None) -> WordCode:
    """Full pipeline: thin, segment, order, encode, relate sub-words."""
    cfg = cfg or EncoderConfig()
    skeleton = thin(image)
    strokes = order_strokes(segment(skeleton))
    if not strokes:
        return WordCode(())
    codes = [encode_stroke(s, cfg) for s in strokes]
    dirs = neighbor_directions([s.centroid for s in strokes])
    return WordCode(
        tuple(WordEntry(code, d) for code, d in zip(codes, dirs))
    )


# ---------------------------------------------------------------------------
# scaling (used for size normalization when building codebooks)

def _scale_primitive(code, f: float):
    if isinstance(code, PointCode):
        return PointCode(code.x * f, code.y * f)
    if isinstance(code, LineSegmentCode):
        return LineSegmentCode(code.p * f, code.alpha, code.l * f)
    return replace(
        code, x0=code.x0 * f, y0=code.y0 * f, a=code.a * f, b=code.b * f
    )


def scale_subword(code: SubWordCode, f: float) -> SubWordCode:
    """Scale all lengths/axes/positions by `f`; angles and directions stay."""
    return SubWordCode(
        tuple(
            CodedElement(
                _scale_primitive(el.code, f),
                el.dirs,
                None if el.anchor is None else (el.anchor[0] * f, el.anchor[1] * f),
            )
            for el in code.elements
        )
    )


def scale_word(word: WordCode, f: float) -> WordCode:
    return WordCode(
        tuple(
            WordEntry(scale_subword(e.code, f), e.dirs) for e in word.subwords
        )
    )


# ---------------------------------------------------------------------------
# JSON forms: lines [p, alpha, l], arcs [x0, y0, a, b, phi, beta, gamma],
# points [x, y]; elements {"code": ..., "dirs": [F1, F2, F3]}

def _primitive_to_obj(code):
    if isinstance(code, PointCode):
        return [code.x, code.y]
    if isinstance(code, LineSegmentCode):
        return [code.p, code.alpha, code.l]
    return [code.x0, code.y0, code.a, code.b, code.phi, code.beta, code.gamma]


def _primitive_from_obj(obj):
    vals = [float(v) for v in obj]
    if len(vals) == 2:
        return PointCode(*vals)
    if len(vals) == 3:
        return LineSegmentCode(*vals)
    if len(vals) == 7:
        return EllipseArcCode(*vals)
    raise ValueError(f"primitive arity {len(vals)} not recognized")


def subword_to_obj(code: SubWordCode):
    return [
        {"code": _primitive_to_obj(el.code), "dirs": list(el.dirs)}
        for el in code.elements
    ]


def subword_from_obj(obj) -> SubWordCode:
    return SubWordCode(
        tuple(
            CodedElement(
                _primitive_from_obj(el["code"]),
                tuple(int(d) for d in el["dirs"]),
            )
            for el in obj
        )
    )


def word_to_json(word: WordCode, indent=None) -> str:
    obj = [
        {"elements": subword_to_obj(e.code), "dirs": list(e.dirs)}
        for e in word.subwords
    ]
    return json.dumps(obj, indent=indent)


def word_from_json(text: str) -> WordCode:
    obj = json.loads(text)
    return WordCode(
        tuple(
            WordEntry(
                subword_from_obj(e["elements"]),
                tuple(int(d) for d in e["dirs"]),
            )
            for e in obj
        )
    )
