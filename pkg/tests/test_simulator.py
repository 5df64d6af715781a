import math
import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmsflows.classifier import orbit_twisted
from nmsflows.gluing import GluingMatrix, HandleKind, ModelFlow, SignGluing, SurfaceGluing
from nmsflows.oracle import enumerate_gluings
from nmsflows.simulator import (
    ATTRACTOR,
    GROUP_LAW_TOL,
    REPELLER,
    SCALING_TOL,
    BoundaryPoint,
    ChartPoint,
    deck_power,
    default_seeds,
    detect_twist,
    meridian_image_winding,
    model_flow,
    quotient_distance,
    realize_gluing,
    realize_gluing_inverse,
    reduce,
    sample_portrait,
    suspension_flow,
    transit_time,
    winding_vector,
)

OR, NON = HandleKind.ORIENTABLE, HandleKind.NONORIENTABLE

FAMILIES = (
    enumerate_gluings(2, OR)
    + enumerate_gluings(2, NON)
    + enumerate_gluings(3, OR, 2)[::4]
    + enumerate_gluings(3, NON)
    + enumerate_gluings(4, OR)
    + enumerate_gluings(5, NON)
)


def approx_tuple(a, b, tol=1e-12):
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))


def random_point(rng, f, chart=None):
    h = rng.random()
    radius = 2.0 ** (-h) * rng.random()
    v = [rng.gauss(0, 1) for _ in range(f.dim - 1)]
    norm = math.sqrt(sum(c * c for c in v))
    return ChartPoint(chart or rng.choice([REPELLER, ATTRACTOR]), tuple(radius * c / norm for c in v), h)


# --- reduce / suspension ---------------------------------------------------------

def test_reduce_examples():
    y, h = reduce(OR, (0.5,), 1.1)
    assert approx_tuple(y, (1.0,)) and h == pytest.approx(0.1, abs=1e-12)
    assert reduce(OR, (0.3,), 0.4) == ((0.3,), 0.4)
    y, h = reduce(NON, (0.5, 0.2), 1.3)
    assert approx_tuple(y, (-1.0, 0.4)) and h == pytest.approx(0.3, abs=1e-12)


def test_reduce_negative_heights():
    y, h = reduce(NON, (0.4, 0.1), -0.75)
    assert approx_tuple(y, (-0.2, 0.05)) and h == 0.25


@given(st.floats(-20, 20), st.floats(-1, 1), st.floats(-1, 1), st.sampled_from([OR, NON]))
def test_reduce_idempotent_and_deck_invariant(h, y1, y2, kind):
    y, hr = reduce(kind, (y1, y2), h)
    assert 0.0 <= hr < 1.0
    assert reduce(kind, y, hr) == (y, hr)
    # g(y, h) = (a(y), h - 1) has the same reduced form
    yg, hg = reduce(kind, deck_power(kind, (y1, y2), 1), h - 1)
    assert yg == y
    assert hg == pytest.approx(hr, abs=1e-12)


@pytest.mark.parametrize("kind, y, h, t, expected", [
    (OR, (0.0,), 0.2, 5.3, ((0.0,), 0.5)),
    (OR, (0.1,), 0.0, 1.0, ((0.2,), 0.0)),
    (NON, (0.1, 0.0), 0.0, 1.0, ((-0.2, 0.0), 0.0)),
])
def test_suspension_examples(kind, y, h, t, expected):
    yy, hh = suspension_flow(kind, y, h, t)
    assert approx_tuple(yy, expected[0])
    assert hh == pytest.approx(expected[1], abs=1e-12)


@given(st.floats(0, 0.999), st.floats(-1, 1), st.floats(-10, 10), st.floats(-10, 10))
def test_suspension_group_law(h, y1, t, s):
    for kind in (OR, NON):
        a = suspension_flow(kind, (y1,), h, t + s)
        y, hh = suspension_flow(kind, (y1,), h, t)
        b = suspension_flow(kind, y, hh, s)
        pa, pb = ChartPoint("R", *a), ChartPoint("R", *b)
        assert quotient_distance(kind, pa, pb) < 1e-12 * max(1.0, 2.0 ** abs(t + s))


# --- transit ------------------------------------------------------------------------

def bisect_exit(y, h):
    """Independent: first cover time where |y| meets 2^-(h + t), by bisection."""
    r = math.sqrt(sum(c * c for c in y))
    lo, hi = -h - 60.0, 60.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if r < 2.0 ** (-(h + mid)):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@pytest.mark.parametrize("y, h, expected", [
    ((1.0,), 0.0, 0.0),
    ((0.5,), 0.0, 1.0),
    ((0.25, 0.0), 0.5, 1.5),
])
def test_transit_time_examples(y, h, expected):
    assert transit_time(y, h) == pytest.approx(expected, abs=1e-12)
    assert transit_time(y, h) == pytest.approx(bisect_exit(y, h), abs=1e-9)


def test_transit_time_axis():
    assert transit_time((0.0, 0.0), 0.3) is None


@given(st.floats(0, 0.999), st.floats(1e-6, 1.0), st.floats(0, 2 * math.pi))
def test_transit_time_matches_bisection(h, frac, angle):
    r = frac * 2.0 ** (-h)
    y = (r * math.cos(angle), r * math.sin(angle))
    t = transit_time(y, h)
    assert t == pytest.approx(bisect_exit(y, h), abs=1e-9)
    assert r == pytest.approx(2.0 ** (-(h + t)), rel=1e-12)


# --- realize_gluing --------------------------------------------------------------

def test_realize_gluing_examples():
    swap = ModelFlow(3, OR, GluingMatrix.from_rows([[0, 1], [1, 0]]))
    out = realize_gluing(swap, BoundaryPoint(lam=0.25, mu=0.0))
    assert (out.lam, out.mu) == (0.0, 0.25)
    ident = ModelFlow(3, OR, GluingMatrix.identity())
    b = BoundaryPoint(lam=0.4, mu=0.7)
    assert realize_gluing(ident, b) == b
    j3 = ModelFlow(2, OR, SurfaceGluing(False, (-1, 1)))
    out = realize_gluing(j3, BoundaryPoint(lam=0.3, component=1))
    assert out.component == 1 and out.lam == pytest.approx(0.7)
    out = realize_gluing(j3, BoundaryPoint(lam=0.3, component=2))
    assert out.component == 2 and out.lam == pytest.approx(0.3)


def test_realize_gluing_rejects_unreduced():
    with pytest.raises(ValueError):
        realize_gluing(ModelFlow(3, OR, GluingMatrix.identity()), BoundaryPoint(lam=1.2, mu=0.0))


def test_sign_realization_is_well_defined_across_seam():
    # (u, 1-) is deck-identified with (a(u)/|a(u)|, 0+); images must be close
    for handle in (OR, NON):
        f = ModelFlow(3 if handle is NON else 4, handle, SignGluing(-1))
        u = (0.6, 0.8) + ((0.0,) if f.dim == 4 else ())
        eps = 1e-9
        left = realize_gluing(f, BoundaryPoint(lam=1 - eps, u=u))
        flipped = deck_power(handle, u, 1)
        norm = math.sqrt(sum(c * c for c in flipped))
        right = realize_gluing(f, BoundaryPoint(lam=eps, u=tuple(c / norm for c in flipped)))
        pl = ChartPoint("A", tuple(c * 2 ** -left.lam for c in left.u), left.lam)
        pr = ChartPoint("A", tuple(c * 2 ** -right.lam for c in right.u), right.lam)
        assert quotient_distance(handle, pl, pr) < 1e-6


@pytest.mark.parametrize("f", FAMILIES, ids=str)
def test_inverse_realization(f):
    rng = random.Random(7)
    for _ in range(50):
        p = random_point(rng, f, REPELLER)
        step = model_flow(f, p, 20.0)
        if step.transit is None:
            continue
        back = realize_gluing_inverse(f, step.transit.after)
        assert abs(back.lam - step.transit.before.lam) % 1.0 < 1e-9 or abs(back.lam - step.transit.before.lam) % 1.0 > 1 - 1e-9


# --- model flow -----------------------------------------------------------------

def test_model_flow_examples():
    f = ModelFlow(2, OR, SurfaceGluing(False, (1, 1)))
    axis = ChartPoint(ATTRACTOR, (0.0,), 0.3)
    assert model_flow(f, axis, 1.0).point == axis

    step = model_flow(f, ChartPoint(REPELLER, (0.5,), 0.0), 2.0)
    assert step.transit is not None
    assert step.transit.time == pytest.approx(1.0)
    assert step.transit.before == BoundaryPoint(lam=0.0, component=1)
    assert step.transit.after == BoundaryPoint(lam=0.0, component=1)
    # entered at (1.0, 0) in the attractor chart, then descends one period
    assert step.point.chart == ATTRACTOR
    assert approx_tuple(step.point.y, (0.5,)) and step.point.h == 0.0

    step = model_flow(f, ChartPoint(ATTRACTOR, (0.4,), 0.0), 1.0)
    assert step.transit is None
    assert approx_tuple(step.point.y, (0.2,)) and step.point.h == 0.0


def test_model_flow_transit_uses_gluing():
    f = ModelFlow(3, OR, GluingMatrix.from_rows([[2, 1], [1, 1]]))
    p = ChartPoint(REPELLER, (0.25, 0.0), 0.5)
    step = model_flow(f, p, 10.0)
    b = step.transit.before
    assert step.transit.time == pytest.approx(1.5)
    assert b.lam == pytest.approx(0.0, abs=1e-12) and b.mu == pytest.approx(0.0, abs=1e-12)
    a = step.transit.after
    assert (a.lam, a.mu) == pytest.approx((0.0, 0.0), abs=1e-12)


@pytest.mark.parametrize("f", FAMILIES, ids=str)
def test_group_law(f):
    rng = random.Random(hash(str(f)) % 1000)
    for _ in range(200):
        p = random_point(rng, f)
        t, s = rng.uniform(0, 5), rng.uniform(0, 5)
        a = model_flow(f, p, t + s).point
        b = model_flow(f, model_flow(f, p, t).point, s).point
        assert quotient_distance(f.handle, a, b) < GROUP_LAW_TOL


@pytest.mark.parametrize("f", FAMILIES[::3], ids=str)
def test_backward_time_round_trip(f):
    rng = random.Random(3)
    for _ in range(100):
        p = random_point(rng, f)
        t = rng.uniform(-5, 5)
        q = model_flow(f, model_flow(f, p, t).point, -t).point
        assert quotient_distance(f.handle, p, q) < GROUP_LAW_TOL


@pytest.mark.parametrize("f", FAMILIES[::2], ids=str)
def test_radial_scaling(f):
    rng = random.Random(11)
    for _ in range(100):
        p = random_point(rng, f, ATTRACTOR)
        t = rng.uniform(0, 4)
        r0 = model_flow(f, p, t).point.radius
        r1 = model_flow(f, p, t + 1).point.radius
        assert abs(r1 - r0 / 2) < SCALING_TOL
        q = random_point(rng, f, REPELLER)
        q = ChartPoint(REPELLER, tuple(c * 1e-3 for c in q.y), q.h)
        r0 = model_flow(f, q, 0.5).point.radius
        r1 = model_flow(f, q, 1.5).point.radius
        assert abs(r1 - 2 * r0) < SCALING_TOL


@pytest.mark.parametrize("f", FAMILIES, ids=str)
def test_axis_period_one(f):
    for chart, h in product((REPELLER, ATTRACTOR), (0.0, 0.1, 0.37, 0.999)):
        p = ChartPoint(chart, (0.0,) * (f.dim - 1), h)
        assert model_flow(f, p, 1.0).point == p
        assert model_flow(f, p, 3.0).point == p
        assert model_flow(f, p, 0.5).point != p


@pytest.mark.parametrize("f", FAMILIES, ids=str)
def test_detect_twist_agrees(f):
    assert detect_twist(f, 1e-3) == orbit_twisted(f)


def test_detect_twist_examples():
    assert detect_twist(ModelFlow(2, OR, SurfaceGluing(False, (1, 1))), 1e-3) == (False, False)
    assert detect_twist(ModelFlow(3, NON, SignGluing(1)), 1e-3) == (True, True)
    with pytest.raises(ValueError):
        detect_twist(ModelFlow(3, NON, SignGluing(1)), 0.7)


# --- homology --------------------------------------------------------------------

def test_winding_vector_of_straight_lines():
    n = 50
    assert winding_vector([((3 * i / n) % 1, (-2 * i / n) % 1) for i in range(n)]) == (3, -2)


@pytest.mark.parametrize("rows", [[[0, 1], [1, 0]], [[1, 0], [0, 1]], [[2, 5], [1, 3]], [[-3, 4], [2, -3]]])
def test_meridian_winding(rows):
    f = ModelFlow(3, OR, GluingMatrix.from_rows(rows))
    g = f.gluing
    assert meridian_image_winding(f) == (g.p, g.q)


# --- portraits ---------------------------------------------------------------------

def test_sample_portrait_axis_constant():
    f = ModelFlow(2, OR, SurfaceGluing(False, (1, 1)))
    seed = ChartPoint(REPELLER, (0.0,), 0.0)
    (traj,) = sample_portrait(f, [seed], 3.0, 1.0)
    assert [t for t, _ in traj.samples] == [0.0, 1.0, 2.0, 3.0]
    assert all(p == seed for _, p in traj.samples)
    assert traj.transits == []


@pytest.mark.parametrize("f", FAMILIES[::3], ids=str)
def test_sample_portrait_converges(f):
    trajs = sample_portrait(f, default_seeds(f), 14.0, 0.1)
    for traj in trajs:
        times = [t for t, _ in traj.samples]
        assert all(b > a for a, b in zip(times, times[1:]))
        first, last = traj.samples[0][1], traj.samples[-1][1]
        assert last.chart == ATTRACTOR and last.radius < first.radius
        assert len(traj.transits) == 1
        # transit time is exact, not snapped to the sampling grid
        assert traj.transits[0].time == pytest.approx(transit_time(first.y, first.h))


def test_sample_portrait_meridian_seeds_wind():
    f = ModelFlow(3, OR, GluingMatrix.from_rows([[2, 3], [1, 2]]))
    seeds = [ChartPoint(REPELLER, (0.5 * math.cos(a), 0.5 * math.sin(a)), 0.0)
             for a in (2 * math.pi * i / 40 for i in range(40))]
    trajs = sample_portrait(f, seeds, 2.0, 0.25)
    image = [(t.transits[0].after.lam, t.transits[0].after.mu) for t in trajs]
    assert winding_vector(image) == (3, 2)


def test_sample_portrait_validates():
    f = ModelFlow(2, OR, SurfaceGluing(False, (1, 1)))
    with pytest.raises(ValueError):
        sample_portrait(f, [], 1.0, 0.0)
    with pytest.raises(ValueError):
        sample_portrait(f, [ChartPoint(REPELLER, (0.1, 0.1), 0.0)], 1.0, 0.1)


@settings(max_examples=50)
@given(st.floats(0, 0.999), st.floats(0.01, 1.0), st.floats(0, 10), st.floats(0, 10))
def test_group_law_hypothesis_klein(h, frac, t, s):
    f = ModelFlow(2, NON, SurfaceGluing.nonorientable(-1))
    p = ChartPoint(REPELLER, (frac * 2.0 ** (-h),), h)
    a = model_flow(f, p, t + s).point
    b = model_flow(f, model_flow(f, p, t).point, s).point
    assert quotient_distance(f.handle, a, b) < GROUP_LAW_TOL
