import math

import pytest

from tanglekh.algebra import QQ
from tanglekh.complex import build_complex, homology
from tanglekh.ingest import (CurveSet, GenericityError, Polyline,
                             build_filtration, clip, critical_radii,
                             events_json, project_and_detect, sample_grades)

from conftest import braid_closure, circle_polyline, flat_trefoil_points


def curves(*polys, axis="z"):
    return CurveSet(curves=[Polyline(points=p, closed=c)
                            for p, c in polys], axis=axis)


def cross_fixture(over_dir=1):
    """Two open segments crossing at the origin; the y-strand is on top
    and runs in +-y depending on over_dir."""
    under = ([(-1, 0, 0), (1, 0, 0)], False)
    over = ([(0, -over_dir, 1), (0, over_dir, 1)], False)
    return curves(under, over)


def test_single_crossing_positive():
    pa = project_and_detect(cross_fixture(+1))
    (c,) = pa.crossings
    assert c.over[0] == 1 and c.under[0] == 0
    # under runs +x, over runs +y: positively oriented frame by hand
    assert c.sign == 1
    assert c.over_in_slot == 1
    assert abs(c.pos[0]) < 1e-9 and abs(c.pos[1]) < 1e-9


def test_single_crossing_negative():
    pa = project_and_detect(cross_fixture(-1))
    (c,) = pa.crossings
    assert c.sign == -1
    assert c.over_in_slot == 3


def test_axis_projection():
    # same picture living in the yz-plane, projected along x
    cs = curves(([(0, -1, 0), (0, 1, 0)], False),
                ([(1, 0, -1), (1, 0, 1)], False), axis="x")
    pa = project_and_detect(cs)
    (c,) = pa.crossings
    assert c.over[0] == 1


def test_equal_depth_rejected():
    cs = curves(([(-1, 0, 0.5), (1, 0, 0.5)], False),
                ([(0, -1, 0.5), (0, 1, 0.5)], False))
    with pytest.raises(GenericityError) as ei:
        project_and_detect(cs)
    assert ei.value.location is not None


def test_shared_endpoint_rejected():
    cs = curves(([(-1, 0, 0), (1, 0, 0)], False),
                ([(1, 0, 1), (2, 1, 1)], False))
    with pytest.raises(GenericityError):
        project_and_detect(cs)


def test_parallel_segments_no_crossing():
    cs = curves(([(-1, 0, 0), (1, 0, 0)], False),
                ([(-1, 1, 1), (1, 1, 1)], False))
    pa = project_and_detect(cs)
    assert pa.crossings == []


def test_triple_point_rejected():
    cs = curves(([(-1, 0, 0), (1, 0, 0)], False),
                ([(0, -1, 1), (0, 1, 1)], False),
                ([(-1, -1, 2), (1, 1, 2)], False))
    with pytest.raises(GenericityError):
        project_and_detect(cs)


# -- events and clipping -------------------------------------------------


def test_circle_events_single_enclosure():
    cs = curves((circle_polyline(2.0, n=128), True))
    pa = project_and_detect(cs)
    events = critical_radii(pa, (0, 0))
    assert len(events) == 1
    assert events[0].cause == "component fully enclosed"
    assert abs(events[0].radius - 2.0) < 0.01


def test_offset_circle_enter_and_enclose():
    cs = curves((circle_polyline(1.0, cx=3.0), True))
    pa = project_and_detect(cs)
    events = critical_radii(pa, (0, 0))
    causes = [e.cause for e in events]
    assert causes == ["component first enters", "component fully enclosed"]
    assert abs(events[0].radius - 2.0) < 0.01
    assert abs(events[1].radius - 4.0) < 0.01


def test_sample_grades_bracket_events():
    cs = curves((circle_polyline(1.0, cx=3.0), True))
    pa = project_and_detect(cs)
    events = critical_radii(pa, (0, 0))
    grades = sample_grades(events)
    assert grades == sorted(grades)
    assert grades[0] < events[0].radius
    assert grades[-1] > events[-1].radius
    radii = sorted({e.radius for e in events})
    for lo, hi in zip(radii, radii[1:]):
        assert any(lo < g < hi for g in grades)


def test_clip_circle_stages():
    cs = curves((circle_polyline(1.0, cx=3.0), True))
    pa = project_and_detect(cs)
    empty = clip(pa, (0, 0), 1.0)
    assert empty.diagram.free_circles == 0 and not empty.diagram.boundary
    arc = clip(pa, (0, 0), 3.0)
    assert len(arc.diagram.boundary) == 2
    assert len(arc.arc_pieces) == 1
    whole = clip(pa, (0, 0), 5.0)
    assert whole.diagram.free_circles == 1
    assert whole.circle_strands == [0]


def test_clip_radius_through_crossing_rejected():
    pa = project_and_detect(cross_fixture())
    with pytest.raises(GenericityError):
        clip(pa, (5, 0), 5.0)


def test_open_endpoint_inside_disk_rejected():
    cs = curves(([(0, 0, 0), (3, 0, 0)], False))
    pa = project_and_detect(cs)
    with pytest.raises(GenericityError):
        clip(pa, (0, 0), 1.0)


def test_events_json_shape():
    cs = curves((circle_polyline(2.0), True))
    pa = project_and_detect(cs)
    rows = events_json(critical_radii(pa, (0, 0)))
    assert rows and set(rows[0]) == {"radius", "cause", "where"}


# -- filtration assembly -------------------------------------------------


def test_far_circles_filtration_single_run():
    cs = curves((circle_polyline(1.0, n=128), True),
                (circle_polyline(1.0, cx=10.0, n=128), True))
    pa = project_and_detect(cs)
    grades = sample_grades(critical_radii(pa, (0, 0)))
    filt = build_filtration(pa, (0, 0), grades, field=QQ)
    assert all(s["kind"] == "closure" for s in filt.steps)
    for s in filt.steps:
        s["spec"].validate()
    (run,) = filt.runs()
    rows = filt.barcode_report()
    inf = [r for r in rows if r["death"] is None]
    births = sorted({r["birth"] for r in inf})
    # the empty clip already carries a class; each circle adds bars when
    # it becomes fully enclosed
    assert len(births) == 3
    assert births[0] == grades[0]
    assert births[1] < 10.0 < births[2]
    h = homology(build_complex(filt.diagrams[-1], field=QQ),
                 representatives=False)
    assert h.ranks == {(0, 2): 1, (0, 0): 2, (0, -2): 1}


def test_filtration_rejects_bad_grades():
    cs = curves((circle_polyline(1.0), True))
    pa = project_and_detect(cs)
    with pytest.raises(ValueError):
        build_filtration(pa, (0, 0), [2.0, 2.0])


def test_detection_is_deterministic_under_reordering():
    a = curves((circle_polyline(1.0, cx=1.0), True),
               (circle_polyline(1.0, cx=2.0, z=1.0), True))
    b = curves((circle_polyline(1.0, cx=2.0, z=1.0), True),
               (circle_polyline(1.0, cx=1.0), True))
    pa, pb = project_and_detect(a), project_and_detect(b)
    assert len(pa.crossings) == len(pb.crossings) == 2
    assert sorted(c.sign for c in pa.crossings) == \
        sorted(c.sign for c in pb.crossings)
    ra = sorted(round(e.radius, 6) for e in critical_radii(pa, (0, 0)))
    rb = sorted(round(e.radius, 6) for e in critical_radii(pb, (0, 0)))
    assert ra == rb


def test_flat_trefoil_pipeline():
    cs = curves((flat_trefoil_points(), True))
    pa = project_and_detect(cs)
    assert len(pa.crossings) == 3
    assert len({c.sign for c in pa.crossings}) == 1
    # off-center disk so the three symmetric crossing radii are distinct
    center = (0.21, 0.13)
    events = critical_radii(pa, center)
    xr = sorted(e.radius for e in events if e.cause == "crossing enters disk")
    assert len(xr) == 3
    grades = sample_grades(events)
    filt = build_filtration(pa, center, grades, field=QQ)
    # crossing births always break the runs, one per crossing radius
    xbreaks = [i for i, s in enumerate(filt.steps)
               if s["kind"] == "break" and s["cause"] == "crossing set changes"]
    assert len(xbreaks) == 3
    for i, r in zip(xbreaks, xr):
        assert filt.grades[i] < r < filt.grades[i + 1]
    h = homology(build_complex(filt.diagrams[-1], field=QQ),
                 representatives=False)
    href = homology(build_complex(braid_closure([1, 1, 1], 2), field=QQ),
                    representatives=False)
    assert h.ranks == href.ranks
    # within every run the closure registries are valid morphisms
    for s in filt.steps:
        if s["kind"] == "closure":
            s["spec"].validate()
