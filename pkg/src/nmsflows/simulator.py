"""
Closed-form simulation of model flows.

Each handle is the quotient of the tube ``|y| <= 2**(-x)`` in R^n = R^(n-1) x R
by the deck map ``g(y, x) = (a(y), x - 1)``, where ``a`` doubles every
coordinate and additionally flips the first one for the nonorientable
handle. A point of a handle is stored in the fundamental slab ``0 <= h < 1``.

The repeller chart carries the unit upward translation, the attractor chart
the downward one. A repeller trajectory leaves its tube at an explicitly
computed time, crosses the separating hypersurface through a concrete
realization of the gluing, and then descends in the attractor chart. No
numerical integration is involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .gluing import GluingMatrix, HandleKind, ModelFlow, SignGluing, SurfaceGluing, invert_surface

REPELLER = "R"
ATTRACTOR = "A"

GROUP_LAW_TOL = 1e-9
SCALING_TOL = 1e-12
# slack when checking that a point lies in the tube
_TUBE_SLACK = 1e-9


def _frac(x: float) -> float:
    """``x mod 1`` in ``[0, 1)``; guards against ``-tiny % 1 == 1.0``."""
    value = x % 1.0
    return 0.0 if value >= 1.0 else value


def _norm(y: Sequence[float]) -> float:
    return math.sqrt(math.fsum(c * c for c in y))


@dataclass(frozen=True)
class ChartPoint:
    """A point of one handle: chart tag, transverse coordinates ``y`` and height ``h``."""

    chart: str
    y: tuple[float, ...]
    h: float

    def __post_init__(self):
        if self.chart not in (REPELLER, ATTRACTOR):
            raise ValueError(f"chart must be 'R' or 'A', got {self.chart!r}")
        object.__setattr__(self, "y", tuple(float(c) for c in self.y))
        object.__setattr__(self, "h", float(self.h))

    @property
    def radius(self) -> float:
        return _norm(self.y)

    def is_reduced(self) -> bool:
        return 0.0 <= self.h < 1.0 and self.radius <= 2.0 ** (-self.h) * (1 + _TUBE_SLACK)


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the boundary of a handle.

    ``lam`` is the longitude coordinate (the height). The remaining fields
    depend on the handle: ``component`` (1 or 2) for the annulus, ``mu``
    (meridian angle in turns) for the solid torus, otherwise the unit
    direction ``u`` of the transverse coordinates.
    """

    lam: float
    component: Optional[int] = None
    mu: Optional[float] = None
    u: Optional[tuple[float, ...]] = None

    def to_json(self) -> dict:
        out: dict = {"lam": self.lam}
        if self.component is not None:
            out["component"] = self.component
        if self.mu is not None:
            out["mu"] = self.mu
        if self.u is not None:
            out["u"] = list(self.u)
        return out


class Transit(NamedTuple):
    time: float
    before: BoundaryPoint
    after: BoundaryPoint


class Step(NamedTuple):
    point: ChartPoint
    transit: Optional[Transit]


@dataclass(frozen=True)
class Trajectory:
    samples: list[tuple[float, ChartPoint]]
    transits: list[Transit]


# ---------------------------------------------------------------------------
# suspension on a single handle
# ---------------------------------------------------------------------------

def deck_power(kind: HandleKind, y: Sequence[float], k: int) -> tuple[float, ...]:
    """Transverse part of ``g^k``: scale by ``2^k``, flip x1 ``k`` times if nonorientable."""
    kind = HandleKind(kind)
    out = [math.ldexp(c, k) for c in y]
    if out and kind is HandleKind.NONORIENTABLE and k % 2:
        out[0] = -out[0]
    return tuple(out)


def _shift(kind: HandleKind, y: Sequence[float], h: float, t: float) -> tuple[tuple[float, ...], float]:
    # split t so that integer shifts stay exact
    whole = math.floor(t)
    part = t - whole
    height = h + part
    carry = math.floor(height)
    height -= carry
    if height >= 1.0:
        height, carry = 0.0, carry + 1
    k = int(whole) + int(carry)
    return deck_power(kind, y, k), height


def reduce(kind: HandleKind, y: Sequence[float], h: float) -> tuple[tuple[float, ...], float]:
    """Bring ``(y, h)`` into the slab ``0 <= h < 1`` using the deck map."""
    return _shift(kind, y, 0.0, h)


def suspension_flow(kind: HandleKind, y: Sequence[float], h: float, t: float) -> tuple[tuple[float, ...], float]:
    """Upward unit-speed translation for time ``t``, reduced to the slab."""
    return _shift(kind, y, h, t)


def transit_time(y: Sequence[float], h: float) -> Optional[float]:
    """Time for the upward flow from ``(y, h)`` to reach the tube boundary.

    Returns None for points on the core axis, which never leave.
    """
    radius = _norm(y)
    if radius == 0.0:
        return None
    return -math.log2(radius) - h


# ---------------------------------------------------------------------------
# boundary coordinates and the gluing
# ---------------------------------------------------------------------------

def _uses_components(f: ModelFlow) -> bool:
    return f.dim == 2 and f.handle is HandleKind.ORIENTABLE


def boundary_point(f: ModelFlow, y: Sequence[float], h: float) -> BoundaryPoint:
    """Boundary coordinates of the point of ``dH`` above ``y``'s direction at height ``h``."""
    if _uses_components(f):
        return BoundaryPoint(lam=h, component=1 if y[0] > 0 else 2)
    if isinstance(f.gluing, GluingMatrix):
        return BoundaryPoint(lam=h, mu=_frac(math.atan2(y[1], y[0]) / (2 * math.pi)))
    radius = _norm(y)
    return BoundaryPoint(lam=h, u=tuple(c / radius for c in y))


def boundary_to_chart(f: ModelFlow, b: BoundaryPoint, chart: str) -> ChartPoint:
    """Chart coordinates of a boundary point, reduced to the slab."""
    scale = 2.0 ** (-b.lam)
    if b.component is not None:
        direction: tuple[float, ...] = (1.0 if b.component == 1 else -1.0,)
    elif b.mu is not None:
        angle = 2 * math.pi * b.mu
        direction = (math.cos(angle), math.sin(angle))
    else:
        direction = b.u
    y, h = reduce(f.handle, tuple(scale * c for c in direction), b.lam)
    return ChartPoint(chart, y, h)


def _normalize_boundary(f: ModelFlow, b: BoundaryPoint) -> BoundaryPoint:
    """Bring ``lam`` into ``[0, 1)``, applying the deck identification."""
    if 0.0 <= b.lam < 1.0:
        return b
    k = math.floor(b.lam)
    lam = _frac(b.lam)
    if b.u is not None:
        u = deck_power(f.handle, b.u, int(k))
        norm = _norm(u)
        return BoundaryPoint(lam=lam, u=tuple(c / norm for c in u))
    return BoundaryPoint(lam=lam, component=b.component, mu=b.mu)


def _sign_flip(f: ModelFlow, b: BoundaryPoint) -> BoundaryPoint:
    # (u, lam) -> (u, 1 - lam); well defined on the boundary mapping torus
    return _normalize_boundary(f, BoundaryPoint(lam=1.0 - b.lam, u=b.u))


def _apply_gluing(f: ModelFlow, b: BoundaryPoint, inverse: bool) -> BoundaryPoint:
    g = f.gluing
    if isinstance(g, GluingMatrix):
        m = g.inverse() if inverse else g
        return BoundaryPoint(
            lam=_frac(m.r * b.lam + m.p * b.mu),
            mu=_frac(m.s * b.lam + m.q * b.mu),
        )
    if _uses_components(f):
        s = invert_surface(g) if inverse else g
        eps = s.sign_on(b.component)
        return BoundaryPoint(lam=_frac(eps * b.lam), component=s.route(b.component))
    sign = g.signs[0] if isinstance(g, SurfaceGluing) else g.sign
    return b if sign == 1 else _sign_flip(f, b)


def realize_gluing(f: ModelFlow, b: BoundaryPoint) -> BoundaryPoint:
    """Concrete boundary homeomorphism inducing the gluing's action.

    Matrices act affinely on the torus ``(lam, mu)``; surface gluings route
    circles and reflect ``lam``; a sign -1 gluing is ``(u, lam) -> (u, 1 - lam)``.
    """
    if not 0.0 <= b.lam < 1.0:
        raise ValueError("boundary point is not reduced (lam must lie in [0, 1))")
    return _apply_gluing(f, b, inverse=False)


def realize_gluing_inverse(f: ModelFlow, b: BoundaryPoint) -> BoundaryPoint:
    if not 0.0 <= b.lam < 1.0:
        raise ValueError("boundary point is not reduced (lam must lie in [0, 1))")
    return _apply_gluing(f, b, inverse=True)


# ---------------------------------------------------------------------------
# the model flow
# ---------------------------------------------------------------------------

def _boundary_hit(f: ModelFlow, y, h, t_hit) -> BoundaryPoint:
    yb, hb = suspension_flow(f.handle, y, h, t_hit)
    return boundary_point(f, yb, hb)


def model_flow(f: ModelFlow, p: ChartPoint, t: float) -> Step:
    """Flow ``p`` for time ``t``; reports the boundary transit if one happens.

    Forward time moves repeller points outward and attractor points inward,
    so only repeller points (t > 0) and attractor points (t < 0) can cross.
    """
    # upward speed in this chart: forward time in R, backward time in A
    up = t if p.chart == REPELLER else -t
    if up <= 0:
        y, h = suspension_flow(f.handle, p.y, p.h, up)
        return Step(ChartPoint(p.chart, y, h), None)
    t_hit = transit_time(p.y, p.h)
    if t_hit is None or up < t_hit:
        y, h = suspension_flow(f.handle, p.y, p.h, up)
        return Step(ChartPoint(p.chart, y, h), None)
    t_hit = max(t_hit, 0.0)
    before = _boundary_hit(f, p.y, p.h, t_hit)
    if p.chart == REPELLER:
        after = realize_gluing(f, before)
        other = ATTRACTOR
    else:
        after = realize_gluing_inverse(f, before)
        other = REPELLER
    entry = boundary_to_chart(f, after, other)
    # the other chart moves in the opposite vertical direction
    y, h = suspension_flow(f.handle, entry.y, entry.h, -(up - t_hit))
    time = t_hit if t > 0 else -t_hit
    return Step(ChartPoint(other, y, h), Transit(time, before, after))


def quotient_distance(kind: HandleKind, a: ChartPoint, b: ChartPoint) -> float:
    """Sup-distance between chart points, minimized over one deck application."""
    if a.chart != b.chart:
        return math.inf
    best = math.inf
    for k in (-1, 0, 1):
        y = deck_power(kind, a.y, k)
        h = a.h - k
        d = max([abs(h - b.h)] + [abs(u - v) for u, v in zip(y, b.y)])
        best = min(best, d)
    return best


def detect_twist(f: ModelFlow, eps: float = 1e-3) -> tuple[bool, bool]:
    """Whether one turn around each periodic orbit reverses an offset along x1."""
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 0.5)")
    offset = (eps,) + (0.0,) * (f.dim - 2)
    result = []
    for chart in (REPELLER, ATTRACTOR):
        step = model_flow(f, ChartPoint(chart, offset, 0.0), 1.0)
        assert step.transit is None and step.point.chart == chart
        result.append(step.point.y[0] < 0)
    return result[0], result[1]


def sample_portrait(
    f: ModelFlow,
    seeds: Sequence[ChartPoint],
    horizon: float,
    dt: float,
) -> list[Trajectory]:
    """One trajectory per seed, sampled at multiples of ``dt`` up to ``horizon``.

    Transits are recorded at their exact times, independently of the grid.
    """
    if dt <= 0 or horizon <= 0:
        raise ValueError("dt and horizon must be positive")
    count = int(math.floor(horizon / dt + 1e-9))
    times = [i * dt for i in range(count + 1)]
    out = []
    for seed in seeds:
        if len(seed.y) != f.dim - 1:
            raise ValueError(f"seed has {len(seed.y)} transverse coordinates, expected {f.dim - 1}")
        samples = [(t, model_flow(f, seed, t).point) for t in times]
        final = model_flow(f, seed, horizon)
        transits = [final.transit] if final.transit is not None else []
        out.append(Trajectory(samples, transits))
    return out


def winding_vector(points: Sequence[tuple[float, float]]) -> tuple[int, int]:
    """Homology class of a closed sampled curve on the torus ``(R/Z)^2``."""
    total = [0.0, 0.0]
    closed = list(points) + [points[0]]
    for (a0, b0), (a1, b1) in zip(closed, closed[1:]):
        for i, d in enumerate((a1 - a0, b1 - b0)):
            total[i] += d - round(d)
    return round(total[0]), round(total[1])


def meridian_image_winding(f: ModelFlow, samples: int = 256) -> tuple[int, int]:
    """Winding vector of the image of the meridian under the realized gluing.

    Seeds on a meridian circle inside the repeller tube are flowed through
    the transit; their exit points form the meridian ``{lam = 0}`` and the
    entry points its image.
    """
    if not isinstance(f.gluing, GluingMatrix):
        raise ValueError("meridian winding is defined for solid-torus gluings")
    g = f.gluing
    samples = max(samples, 4 * (abs(g.p) + abs(g.q) + abs(g.r) + abs(g.s)) + 4)
    image = []
    for i in range(samples):
        angle = 2 * math.pi * i / samples
        seed = ChartPoint(REPELLER, (0.5 * math.cos(angle), 0.5 * math.sin(angle)), 0.0)
        step = model_flow(f, seed, 2.0)
        assert step.transit is not None
        after = step.transit.after
        image.append((after.lam, after.mu))
    return winding_vector(image)


def default_seeds(f: ModelFlow) -> list[ChartPoint]:
    """Off-axis repeller seeds spread over both sides and two heights."""
    seeds = []
    for h in (0.0, 0.5):
        for radius in (0.1, 0.3):
            for sign in (1.0, -1.0):
                y = [0.0] * (f.dim - 1)
                y[0] = sign * radius
                if f.dim > 2:
                    y[1] = 0.5 * radius
                seeds.append(ChartPoint(REPELLER, tuple(y), h))
    return seeds
