"""Identifiers for the ambient manifolds of two-orbit NMS flows."""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Union


class ManifoldError(ValueError):
    pass


@dataclass(frozen=True)
class Torus:
    def __str__(self) -> str:
        return "T2"


@dataclass(frozen=True)
class KleinBottle:
    def __str__(self) -> str:
        return "K2"


@dataclass(frozen=True)
class Lens:
    """Lens space L(p, q); ``(p, q)`` is the class of the meridian image.

    Stored reduced: ``0 <= q < p`` for ``p > 0``, and ``q = 1`` for ``p = 0``.
    """

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p < 0:
            raise ManifoldError(f"L({p},{q}): p must be non-negative")
        if gcd(p, q) != 1:
            raise ManifoldError(f"L({p},{q}): p and q must be coprime")
        if p == 0 and q != 1:
            raise ManifoldError(f"L(0,{q}): use q = 1")
        if p > 0 and not 0 <= q < p:
            raise ManifoldError(f"L({p},{q}): q must lie in [0, p)")

    @classmethod
    def from_meridian(cls, p: int, q: int) -> "Lens":
        """Normalized lens space for an arbitrary coprime meridian image."""
        p = abs(p)
        if gcd(p, q) != 1:
            raise ManifoldError(f"meridian image ({p},{q}) is not primitive")
        if p == 0:
            return cls(0, 1)
        return cls(p, min(q % p, (-q) % p))

    def canonical(self) -> "Lens":
        return Lens.from_meridian(self.p, self.q)

    def __str__(self) -> str:
        return f"L({self.p},{self.q})"


@dataclass(frozen=True)
class SphereProdCircle:
    """S^(n-1) x S^1."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ManifoldError(f"SxS1({self.n}): dimension must be at least 2")

    def __str__(self) -> str:
        return f"SxS1({self.n})"


@dataclass(frozen=True)
class TwistedSphereBundle:
    """The nonorientable S^(n-1)-bundle over the circle."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ManifoldError(f"StxS1({self.n}): dimension must be at least 2")

    def __str__(self) -> str:
        return f"StxS1({self.n})"


ManifoldId = Union[Torus, KleinBottle, Lens, SphereProdCircle, TwistedSphereBundle]


def canonical(m: ManifoldId) -> ManifoldId:
    """Normal form used for homeomorphism tests.

    Low-dimensional sphere bundles are rewritten as the surface or lens space
    they are: S^1 x S^1 is the torus, the twisted one is the Klein bottle,
    and S^2 x S^1 is L(0, 1).
    """
    if isinstance(m, Lens):
        return m.canonical()
    if isinstance(m, SphereProdCircle):
        if m.n == 2:
            return Torus()
        if m.n == 3:
            return Lens(0, 1)
    if isinstance(m, TwistedSphereBundle) and m.n == 2:
        return KleinBottle()
    return m


def dimension(m: ManifoldId) -> int:
    if isinstance(m, (Torus, KleinBottle)):
        return 2
    if isinstance(m, Lens):
        return 3
    return m.n


_PATTERNS = [
    (re.compile(r"^T2$"), lambda g: Torus()),
    (re.compile(r"^K2$"), lambda g: KleinBottle()),
    (re.compile(r"^L\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$"), lambda g: Lens(int(g[0]), int(g[1]))),
    (re.compile(r"^SxS1\(\s*(\d+)\s*\)$"), lambda g: SphereProdCircle(int(g[0]))),
    (re.compile(r"^StxS1\(\s*(\d+)\s*\)$"), lambda g: TwistedSphereBundle(int(g[0]))),
]


def parse_manifold(text: str) -> ManifoldId:
    """Parse ``"T2"``, ``"K2"``, ``"L(p,q)"``, ``"SxS1(n)"`` or ``"StxS1(n)"``.

    Lens parameters must already be reduced (``0 <= q < p``); use
    ``Lens.from_meridian`` for arbitrary meridian images.
    """
    text = text.strip()
    for pattern, build in _PATTERNS:
        match = pattern.match(text)
        if match:
            return build(match.groups())
    raise ManifoldError(f"unrecognized manifold {text!r}")
