"""3-D curves to disk-radius filtrations of tangle diagrams.

Curves are projected along an axis; crossings are detected as transverse
double points with over/under read off the depth coordinate.  Growing
disks about a center clip the arrangement into tangle diagrams, and the
tracked strand pieces give closure morphisms between consecutive clips.
Crossing births (and piece merges) break the filtration into runs, since
no induced chain map is defined across a changing crossing set.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

from .diagram import Crossing, TangleDiagram
from .persistence import ClosureMorphismSpec, Filtration


class GenericityError(ValueError):
    """Non-generic geometry within tolerance; carries a location."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


@dataclass(frozen=True)
class Polyline:
    points: tuple  # 3-D points
    closed: bool

    def __post_init__(self):
        object.__setattr__(self, "points",
                           tuple(tuple(map(float, p)) for p in self.points))
        if len(self.points) < 2:
            raise ValueError("polyline needs at least 2 points")


@dataclass(frozen=True)
class CurveSet:
    curves: tuple
    axis: str = "z"
    center: tuple = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "center", tuple(map(float, self.center)))
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"unknown projection axis {self.axis!r}")

    @classmethod
    def from_json(cls, data):
        return cls(curves=tuple(
            Polyline(points=c["points"], closed=bool(c.get("closed", False)))
            for c in data["curves"]),
            axis=data.get("axis", "z"),
            center=tuple(data.get("center", (0.0, 0.0))))

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))


_PLANE = {"z": (0, 1, 2), "x": (1, 2, 0), "y": (2, 0, 1)}


@dataclass
class Strand:
    """A projected polyline: plane points plus a depth per vertex."""

    points: list   # 2-D
    depths: list
    closed: bool

    @property
    def nseg(self):
        return len(self.points) if self.closed else len(self.points) - 1

    def seg(self, i):
        a = self.points[i]
        b = self.points[(i + 1) % len(self.points)]
        return a, b

    def at(self, t):
        i = min(int(t), self.nseg - 1)
        f = t - i
        a, b = self.seg(i)
        return (a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]))

    def depth_at(self, t):
        i = min(int(t), self.nseg - 1)
        f = t - i
        d0 = self.depths[i]
        d1 = self.depths[(i + 1) % len(self.depths)]
        return d0 + f * (d1 - d0)

    def dir_at(self, t):
        i = min(int(t), self.nseg - 1)
        a, b = self.seg(i)
        return (b[0] - a[0], b[1] - a[1])


@dataclass(frozen=True)
class CrossingRecord:
    pos: tuple
    under: tuple    # (strand index, parameter)
    over: tuple
    sign: int
    over_in_slot: int  # 1 or 3; under always enters at slot 0, leaves at 2


@dataclass
class PlanarArrangement:
    strands: list
    crossings: list
    tol: float
    report: dict = dc_field(default_factory=dict)


def _cross2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _seg_intersection(p1, p2, p3, p4, tol):
    """Parameters (t, u) of the transverse intersection, or None."""
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (p4[0] - p3[0], p4[1] - p3[1])
    den = _cross2(d1, d2)
    diag = max(abs(x) for x in d1 + d2) or 1.0
    if abs(den) <= tol * diag * diag:
        return None  # parallel; overlap handled by the caller's tol checks
    w = (p3[0] - p1[0], p3[1] - p1[1])
    t = _cross2(w, d2) / den
    u = _cross2(w, d1) / den
    if -tol < t < 1 + tol and -tol < u < 1 + tol:
        if not (tol < t < 1 - tol and tol < u < 1 - tol):
            raise GenericityError(
                "segment intersection at an endpoint (tangential or "
                "shared-vertex crossing)",
                location=(p1[0] + t * d1[0], p1[1] + t * d1[1]))
        return t, u
    return None


def project_and_detect(c: CurveSet, tol=1e-9) -> PlanarArrangement:
    """Project the curves and find all transverse crossings.

    Over-strand is the one with the greater depth coordinate; the sign is
    +1 when the frame (under direction, over direction) is positively
    oriented in the projection plane.
    """
    if not c.curves:
        raise ValueError("curve set is empty")
    ix, iy, iz = _PLANE[c.axis]
    strands = []
    for poly in c.curves:
        strands.append(Strand(points=[(p[ix], p[iy]) for p in poly.points],
                              depths=[p[iz] for p in poly.points],
                              closed=poly.closed))

    segs = [(si, k) for si, s in enumerate(strands) for k in range(s.nseg)]
    raw = []
    for a in range(len(segs)):
        s1, k1 = segs[a]
        st1 = strands[s1]
        p1, p2 = st1.seg(k1)
        for b in range(a + 1, len(segs)):
            s2, k2 = segs[b]
            if s1 == s2:
                adj = abs(k1 - k2) == 1 or (
                    st1.closed and {k1, k2} == {0, st1.nseg - 1})
                if adj:
                    continue
            st2 = strands[s2]
            p3, p4 = st2.seg(k2)
            hit = _seg_intersection(p1, p2, p3, p4, tol)
            if hit is None:
                continue
            t, u = hit
            raw.append(((s1, k1 + t), (s2, k2 + u),
                        (p1[0] + t * (p2[0] - p1[0]),
                         p1[1] + t * (p2[1] - p1[1]))))

    # triple points: any two crossings too close together
    for i in range(len(raw)):
        for j in range(i + 1, len(raw)):
            pi, pj = raw[i][2], raw[j][2]
            if math.hypot(pi[0] - pj[0], pi[1] - pj[1]) <= tol * 10:
                raise GenericityError("two crossings coincide (triple point)",
                                      location=pi)

    crossings = []
    for (sa, ta), (sb, tb), pos in raw:
        da = strands[sa].depth_at(ta)
        db = strands[sb].depth_at(tb)
        scale = max(abs(da), abs(db), 1.0)
        if abs(da - db) <= tol * scale:
            raise GenericityError(
                f"equal depths at crossing {pos}", location=pos)
        if da > db:
            over, under = (sa, ta), (sb, tb)
        else:
            over, under = (sb, tb), (sa, ta)
        du = strands[under[0]].dir_at(under[1])
        do = strands[over[0]].dir_at(over[1])
        sign = 1 if _cross2(du, do) > 0 else -1
        # counterclockwise port slots starting from the under-in direction
        base = math.atan2(-du[1], -du[0])
        rel = (math.atan2(-do[1], -do[0]) - base) % (2 * math.pi)
        over_in_slot = 1 if rel < math.pi else 3
        crossings.append(CrossingRecord(pos=pos, under=under, over=over,
                                        sign=sign,
                                        over_in_slot=over_in_slot))
    crossings.sort(key=lambda c: (c.under, c.over))
    return PlanarArrangement(strands=strands, crossings=crossings, tol=tol,
                             report={"n_crossings": len(crossings)})


# -- critical radii ------------------------------------------------------


@dataclass(frozen=True)
class FiltrationEvent:
    radius: float
    cause: str   # see CAUSES
    where: tuple


CAUSES = ("crossing enters disk", "boundary-endpoint count changes",
          "component fully enclosed", "component first enters")


def _strand_distance_profile(strand: Strand, center):
    """(parameter, distance) at every vertex and interior foot point.

    Between consecutive entries the distance is monotone, so the local
    extrema of this list are exactly those of the strand.
    """
    cx, cy = center
    out = []
    for i in range(strand.nseg):
        a, b = strand.seg(i)
        out.append((float(i), math.hypot(a[0] - cx, a[1] - cy)))
        dx, dy = b[0] - a[0], b[1] - a[1]
        L2 = dx * dx + dy * dy
        if L2 > 0:
            tf = ((cx - a[0]) * dx + (cy - a[1]) * dy) / L2
            if 0 < tf < 1:
                fx, fy = a[0] + tf * dx, a[1] + tf * dy
                out.append((i + tf, math.hypot(fx - cx, fy - cy)))
    if not strand.closed:
        p = strand.points[-1]
        out.append((float(strand.nseg), math.hypot(p[0] - cx, p[1] - cy)))
    return out


def _local_extrema(profile, closed, tol):
    """(parameter, distance, 'min'|'max') entries of a distance profile."""
    n = len(profile)
    vals = [d for _, d in profile]
    spread = max(vals) - min(vals)
    if spread <= tol * max(1.0, max(vals)):
        # constant distance (circle about the center)
        return [(profile[0][0], vals[0], "const")]
    out = []
    idxs = range(n) if closed else range(1, n - 1)
    for i in idxs:
        prev = vals[(i - 1) % n]
        nxt = vals[(i + 1) % n]
        # skip plateaus by walking to the nearest differing neighbor
        k = (i - 1) % n
        while abs(prev - vals[i]) <= tol and k != i:
            k = (k - 1) % n if closed else max(k - 1, 0)
            prev = vals[k]
            if not closed and k == 0 and abs(prev - vals[i]) <= tol:
                break
        if vals[i] > prev and vals[i] > nxt:
            out.append((profile[i][0], vals[i], "max"))
        elif vals[i] < prev and vals[i] < nxt:
            out.append((profile[i][0], vals[i], "min"))
    if not closed:
        for i in (0, n - 1):
            j = 1 if i == 0 else n - 2
            kind = "max" if vals[i] > vals[j] else "min"
            out.append((profile[i][0], vals[i], kind))
    return out


def critical_radii(pa: PlanarArrangement, center, flat_tol=1e-3):
    """Events at crossing distances and strand distance extrema, sorted.

    Extrema of one strand whose radii agree within ``flat_tol`` (relative)
    are merged into a single event; this collapses the sampling wiggle of
    polylines approximating curves at locally constant distance.
    """
    cx, cy = center
    events = []
    for c in pa.crossings:
        events.append(FiltrationEvent(
            radius=math.hypot(c.pos[0] - cx, c.pos[1] - cy),
            cause="crossing enters disk", where=c.pos))
    for si, strand in enumerate(pa.strands):
        prof = _strand_distance_profile(strand, center)
        ext = _local_extrema(prof, strand.closed, pa.tol)
        if not ext:
            continue
        ext.sort(key=lambda e: e[1])
        clusters = [[ext[0]]]
        for e in ext[1:]:
            if e[1] - clusters[-1][-1][1] <= flat_tol * max(1.0, e[1]):
                clusters[-1].append(e)
            else:
                clusters.append([e])
        gmin = ext[0][1]
        gmax = ext[-1][1]
        for cl in clusters:
            lo, hi = cl[0][1], cl[-1][1]
            is_min = lo <= gmin
            is_max = hi >= gmax
            if is_max and strand.closed:
                cause = "component fully enclosed"
                radius = hi
            elif is_min:
                cause = "component first enters"
                radius = lo
            else:
                cause = "boundary-endpoint count changes"
                radius = (lo + hi) / 2.0
            events.append(FiltrationEvent(radius=radius, cause=cause,
                                          where=strand.at(cl[0][0])))
    events.sort(key=lambda e: e.radius)
    return events


def sample_grades(events):
    """Midpoints between consecutive event radii, plus one below the
    first and one above the last."""
    if not events:
        return [1.0]
    radii = []
    for e in events:
        if not radii or e.radius - radii[-1] > 1e-12:
            radii.append(e.radius)
    grades = [radii[0] / 2.0]
    for a, b in zip(radii, radii[1:]):
        grades.append((a + b) / 2.0)
    grades.append(radii[-1] + max(radii[-1], 1.0) / 2.0)
    return grades


# -- clipping ------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """A maximal parameter interval of one strand inside the disk."""

    strand: int
    lo: float
    hi: float          # hi may exceed nseg on wrapped closed pieces
    whole: bool        # entire closed strand inside
    passages: tuple    # (parameter, crossing index, "under"|"over")

    def contains(self, t, nseg):
        if self.whole:
            return True
        if self.lo <= t <= self.hi:
            return True
        return self.hi > nseg and self.lo <= t + nseg <= self.hi


@dataclass
class ClipResult:
    diagram: TangleDiagram
    pieces: list            # all pieces, in (strand, lo) order
    arc_pieces: dict        # portless-arc canonical index -> piece
    circle_strands: list    # free-circle canonical index -> strand index


def _circle_hits(strand: Strand, i, center, radius):
    """Parameters in (0, 1) where segment i crosses the clip circle."""
    a, b = strand.seg(i)
    cx, cy = center
    dx, dy = b[0] - a[0], b[1] - a[1]
    fx, fy = a[0] - cx, a[1] - cy
    A = dx * dx + dy * dy
    B = 2 * (fx * dx + fy * dy)
    C = fx * fx + fy * fy - radius * radius
    if A == 0:
        return []
    disc = B * B - 4 * A * C
    if disc <= 0:
        return []
    sq = math.sqrt(disc)
    return sorted(t for t in ((-B - sq) / (2 * A), (-B + sq) / (2 * A))
                  if 0 < t < 1)


def clip(pa: PlanarArrangement, center, radius):
    """The tangle diagram inside the disk of the given radius.

    Returns a ClipResult carrying the component registry used to build
    closure morphisms between nested clips.
    """
    cx, cy = center
    tol = pa.tol
    for c in pa.crossings:
        d = math.hypot(c.pos[0] - cx, c.pos[1] - cy)
        if abs(d - radius) <= tol * max(1.0, radius):
            raise GenericityError(
                f"clip radius {radius} passes through a crossing",
                location=c.pos)

    included = [k for k, c in enumerate(pa.crossings)
                if math.hypot(c.pos[0] - cx, c.pos[1] - cy) < radius]
    passages = {}  # strand -> list of (param, crossing index, role)
    for k in included:
        c = pa.crossings[k]
        passages.setdefault(c.under[0], []).append((c.under[1], k, "under"))
        passages.setdefault(c.over[0], []).append((c.over[1], k, "over"))

    pieces = []
    for si, strand in enumerate(pa.strands):
        cuts = []
        for i in range(strand.nseg):
            cuts.extend(i + t for t in _circle_hits(strand, i, center, radius))
        dist0 = math.hypot(strand.points[0][0] - cx,
                           strand.points[0][1] - cy)
        if abs(dist0 - radius) <= tol * max(1.0, radius):
            raise GenericityError("clip circle passes through a vertex",
                                  location=strand.points[0])
        if not cuts:
            if dist0 < radius:
                if not strand.closed:
                    raise GenericityError(
                        "open curve endpoint inside the clip disk",
                        location=strand.points[0])
                ps = tuple(sorted(passages.get(si, ())))
                pieces.append(Piece(strand=si, lo=0.0,
                                    hi=float(strand.nseg),
                                    whole=True, passages=ps))
            continue
        inside0 = dist0 < radius
        nseg = strand.nseg
        if strand.closed:
            ivals = []
            flag = inside0
            prev = 0.0
            for t in cuts:
                if flag:
                    ivals.append((prev, t))
                prev = t
                flag = not flag
            if flag:
                if ivals and ivals[0][0] == 0.0:
                    first = ivals.pop(0)
                    ivals.append((prev, first[1] + nseg))
                else:
                    ivals.append((prev, float(nseg)))
            for lo, hi in ivals:
                ps = tuple(sorted(
                    (t if t >= lo else t + nseg, k, role)
                    for t, k, role in passages.get(si, ())
                    if lo <= t <= hi or lo <= t + nseg <= hi))
                pieces.append(Piece(strand=si, lo=lo, hi=hi, whole=False,
                                    passages=ps))
        else:
            if inside0:
                raise GenericityError(
                    "open curve endpoint inside the clip disk",
                    location=strand.points[0])
            endd = math.hypot(strand.points[-1][0] - cx,
                              strand.points[-1][1] - cy)
            if endd < radius:
                raise GenericityError(
                    "open curve endpoint inside the clip disk",
                    location=strand.points[-1])
            for j in range(0, len(cuts) - 1, 2):
                lo, hi = cuts[j], cuts[j + 1]
                ps = tuple(sorted(
                    (t, k, role) for t, k, role in passages.get(si, ())
                    if lo <= t <= hi))
                pieces.append(Piece(strand=si, lo=lo, hi=hi, whole=False,
                                    passages=ps))
    pieces.sort(key=lambda p: (p.strand, p.lo))

    # assemble the diagram
    crossings = []
    for k in included:
        c = pa.crossings[k]
        slots = [None] * 4
        slots[0] = ("x", k, 0)
        slots[2] = ("x", k, 2)
        slots[c.over_in_slot] = ("x", k, c.over_in_slot)
        out_slot = 4 - c.over_in_slot  # 1 <-> 3
        slots[out_slot] = ("x", k, out_slot)
        crossings.append(Crossing(id=k, ports=tuple(slots), sign=c.sign))

    def port_pair(k, role):
        c = pa.crossings[k]
        if role == "under":
            return ("x", k, 0), ("x", k, 2)
        return ("x", k, c.over_in_slot), ("x", k, 4 - c.over_in_slot)

    boundary_pts = []   # (angle, label)
    connections = []
    free_strands = []
    for pi, piece in enumerate(pieces):
        strand = pa.strands[piece.strand]
        if piece.whole and not piece.passages:
            free_strands.append(piece.strand)
            continue
        walk = []
        if not piece.whole:
            for which, t in (("in", piece.lo), ("out", piece.hi)):
                x, y = strand.at(t % strand.nseg if t >= strand.nseg else t)
                ang = math.atan2(y - cy, x - cx)
                label = ("bd", pi, which)
                boundary_pts.append((ang, label))
            walk.append(("bd", pi, "in"))
        for t, k, role in piece.passages:
            pin, pout = port_pair(k, role)
            walk.append(pin)
            walk.append(pout)
        if not piece.whole:
            walk.append(("bd", pi, "out"))
        # pair consecutive out/in nodes
        if piece.whole:
            seq = walk
            m = len(seq)
            for j in range(1, m, 2):
                connections.append((seq[j], seq[(j + 1) % m]))
        else:
            for j in range(0, len(walk), 2):
                connections.append((walk[j], walk[j + 1]))

    boundary_pts.sort()
    if any(abs(a1 - a2) <= tol
           for (a1, _), (a2, _) in zip(boundary_pts, boundary_pts[1:])):
        raise GenericityError("two boundary endpoints at the same angle")
    diagram = TangleDiagram(
        boundary=tuple(lbl for _, lbl in boundary_pts),
        crossings=crossings,
        connections=connections,
        free_circles=len(free_strands))

    arc_pieces = {}
    eps = {frozenset(pair): i for i, pair in enumerate(diagram.portless_arcs())}
    for pi, piece in enumerate(pieces):
        if piece.whole or piece.passages:
            continue
        key = frozenset((("bd", pi, "in"), ("bd", pi, "out")))
        arc_pieces[eps[key]] = piece
    return ClipResult(diagram=diagram, pieces=pieces,
                      arc_pieces=arc_pieces, circle_strands=free_strands)


# -- filtration assembly -------------------------------------------------


def _match_piece(piece: Piece, target: ClipResult, nseg):
    """The target piece containing the source piece, if unique."""
    hits = [q for q in target.pieces
            if q.strand == piece.strand
            and q.contains(piece.lo % nseg if piece.lo >= nseg else piece.lo,
                           nseg)]
    return hits[0] if len(hits) == 1 else None


def build_filtration(pa: PlanarArrangement, center, grades,
                     functor="G", field=None) -> Filtration:
    """Clip at every grade and join consecutive clips by closure steps.

    Steps where the crossing set changes, a piece merge occurs, or an
    open piece closes around ambiguously are emitted as run boundaries.
    """
    if list(grades) != sorted(set(grades)):
        raise ValueError("grades must be strictly increasing")
    clips = [clip(pa, center, g) for g in grades]
    steps = []
    for a, b in zip(clips, clips[1:]):
        step = _closure_step(pa, a, b)
        steps.append(step)
    return Filtration(grades=list(grades),
                      diagrams=[c.diagram for c in clips],
                      steps=steps, functor=functor, field=field)


def _closure_step(pa, a: ClipResult, b: ClipResult):
    if tuple(c.id for c in a.diagram.crossings) != \
            tuple(c.id for c in b.diagram.crossings):
        return {"kind": "break", "cause": "crossing set changes"}
    # map every source piece into the unique target piece containing it
    mapping = {}
    for pi, piece in enumerate(a.pieces):
        nseg = pa.strands[piece.strand].nseg
        tgt = _match_piece(piece, b, nseg)
        if tgt is None:
            return {"kind": "break", "cause": "piece correspondence lost"}
        mapping[pi] = b.pieces.index(tgt)
    if len(set(mapping.values())) != len(mapping):
        return {"kind": "break", "cause": "pieces merge"}

    # canonical index lookups on the target
    tgt_arc_index = {}
    for k, piece in b.arc_pieces.items():
        tgt_arc_index[b.pieces.index(piece)] = k
    tgt_circle_index = {s: i for i, s in enumerate(b.circle_strands)}

    arc_images = []
    for k in sorted(a.arc_pieces):
        piece = a.arc_pieces[k]
        pi = a.pieces.index(piece)
        qi = mapping[pi]
        q = b.pieces[qi]
        if qi in tgt_arc_index:
            arc_images.append(("arc", tgt_arc_index[qi]))
        elif q.whole and not q.passages:
            arc_images.append(("circle", tgt_circle_index[q.strand]))
        else:
            return {"kind": "break", "cause": "arc absorbed into a strand"}
    circle_images = []
    for s in a.circle_strands:
        if s not in tgt_circle_index:
            return {"kind": "break", "cause": "free circle gained crossings"}
        circle_images.append(tgt_circle_index[s])

    spec = ClosureMorphismSpec(source=a.diagram, target=b.diagram,
                               arc_images=tuple(arc_images),
                               circle_images=tuple(circle_images))
    return {"kind": "closure", "spec": spec}


def events_json(events):
    return [{"radius": e.radius, "cause": e.cause,
             "where": list(e.where)} for e in events]
