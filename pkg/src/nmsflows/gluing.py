"""
Gluing data for model flows and the integer/sign algebra acting on the
fundamental group of the boundary of a handle.

A model flow is two copies of the same handle (a generalized solid torus or
solid Klein bottle) glued along their boundaries by a homeomorphism ``j``.
Only the induced action of ``j`` matters for classification, so ``j`` is
stored as:

* ``SurfaceGluing`` for n = 2 (routing of boundary circles plus a sign per
  circle),
* ``GluingMatrix`` for n = 3 with the orientable handle (the action on the
  boundary torus in the longitude/meridian basis),
* ``SignGluing`` otherwise (the action on the infinite cyclic image of the
  boundary group inside the handle).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Sequence, Union


class GluingError(ValueError):
    """Raised for malformed or inconsistent gluing data."""


class HandleKind(str, Enum):
    ORIENTABLE = "orientable"
    NONORIENTABLE = "nonorientable"

    @property
    def deck_sign(self) -> int:
        """Sign applied to the first coordinate by one deck transformation."""
        return 1 if self is HandleKind.ORIENTABLE else -1


def _check_sign(value: int, what: str) -> int:
    if value not in (1, -1):
        raise GluingError(f"{what} must be +1 or -1, got {value!r}")
    return int(value)


# ---------------------------------------------------------------------------
# n = 3, orientable handle: unimodular matrices
# ---------------------------------------------------------------------------

def is_unimodular(m: Union["GluingMatrix", Sequence[Sequence[int]]]) -> bool:
    """True iff the 2x2 integer matrix has determinant +1 or -1.

    Accepts a ``GluingMatrix`` or nested rows ``[[r, p], [s, q]]``.
    """
    if isinstance(m, GluingMatrix):
        return abs(m.det) == 1
    (r, p), (s, q) = m
    return abs(r * q - p * s) == 1


@dataclass(frozen=True)
class GluingMatrix:
    """Unimodular integer matrix ``[[r, p], [s, q]]``.

    Columns are images of the basis curves: the longitude goes to ``(r, s)``
    and the meridian to ``(p, q)``.
    """

    r: int
    p: int
    s: int
    q: int

    def __post_init__(self):
        for name in ("r", "p", "s", "q"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise GluingError(f"matrix entry {name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if abs(self.det) != 1:
            raise GluingError("matrix not unimodular")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "GluingMatrix":
        if len(rows) != 2 or any(len(row) != 2 for row in rows):
            raise GluingError("matrix must be 2x2")
        (r, p), (s, q) = rows
        return cls(r, p, s, q)

    @classmethod
    def identity(cls) -> "GluingMatrix":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.r * self.q - self.p * self.s

    def rows(self) -> list[list[int]]:
        return [[self.r, self.p], [self.s, self.q]]

    def inverse(self) -> "GluingMatrix":
        d = self.det  # d == 1/d for d in {1, -1}
        return GluingMatrix(d * self.q, -d * self.p, -d * self.s, d * self.r)

    def __matmul__(self, other: "GluingMatrix") -> "GluingMatrix":
        return GluingMatrix(
            self.r * other.r + self.p * other.s,
            self.r * other.p + self.p * other.q,
            self.s * other.r + self.q * other.s,
            self.s * other.p + self.q * other.q,
        )

    def apply(self, a: int, b: int) -> tuple[int, int]:
        """Image of the class ``a*longitude + b*meridian``."""
        return self.r * a + self.p * b, self.s * a + self.q * b

    def __str__(self) -> str:
        return f"[[{self.r},{self.p}],[{self.s},{self.q}]]"


def boundary_action(m: int, delta: int) -> GluingMatrix:
    """Matrix ``[[1, 0], [m, delta]]`` of a boundary map fixing the handle's core class."""
    return GluingMatrix(1, 0, m, _check_sign(delta, "delta"))


def preserves_core(m: GluingMatrix) -> bool:
    """The i*-condition: the map sends the longitude to longitude + k*meridian
    and the meridian to +-meridian, i.e. the first row is (1, 0)."""
    return m.r == 1 and m.p == 0


# ---------------------------------------------------------------------------
# n = 2: circle routings with signs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceGluing:
    """Boundary map of a 2-dimensional handle.

    The orientable handle (annulus) has two boundary circles, numbered 1 and
    2; ``signs[i]`` is the sign with which input circle ``i + 1`` is mapped
    and ``swap`` says whether the circles are exchanged. The nonorientable
    handle (Moebius band) has a single boundary circle and one sign.
    """

    swap: bool
    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(_check_sign(e, "surface sign") for e in self.signs)
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "swap", bool(self.swap))
        if len(signs) not in (1, 2):
            raise GluingError("a surface gluing carries one or two signs")
        if len(signs) == 1 and self.swap:
            raise GluingError("the nonorientable handle has one boundary circle; swap is undefined")

    @classmethod
    def nonorientable(cls, sign: int) -> "SurfaceGluing":
        return cls(False, (sign,))

    @property
    def handle(self) -> HandleKind:
        return HandleKind.ORIENTABLE if len(self.signs) == 2 else HandleKind.NONORIENTABLE

    def route(self, component: int) -> int:
        """Index (1 or 2) of the circle that ``component`` is sent to."""
        if len(self.signs) == 1:
            return 1
        return 3 - component if self.swap else component

    def sign_on(self, component: int) -> int:
        return self.signs[component - 1]

    @property
    def is_pure(self) -> bool:
        """All component signs are +1 (identity or pure swap)."""
        return all(e == 1 for e in self.signs)

    def __str__(self) -> str:
        signs = ",".join("+" if e > 0 else "-" for e in self.signs)
        if len(self.signs) == 1:
            return f"({signs})"
        return f"({'swap' if self.swap else 'no-swap'},({signs}))"


def compose_surface(a: SurfaceGluing, b: SurfaceGluing) -> SurfaceGluing:
    """Gluing datum of ``a o b`` (apply ``b`` first)."""
    if a.handle is not b.handle:
        raise GluingError("cannot compose surface gluings of different handle kinds")
    signs = tuple(
        b.sign_on(c) * a.sign_on(b.route(c)) for c in range(1, len(b.signs) + 1)
    )
    return SurfaceGluing(a.swap != b.swap, signs)


def invert_surface(a: SurfaceGluing) -> SurfaceGluing:
    # the inverse sends circle route(c) back to c with the same sign
    signs = [0] * len(a.signs)
    for c in range(1, len(a.signs) + 1):
        signs[a.route(c) - 1] = a.sign_on(c)
    return SurfaceGluing(a.swap, tuple(signs))


def all_surface_gluings(handle: HandleKind) -> list[SurfaceGluing]:
    """The 8 (orientable) or 2 (nonorientable) surface gluing data."""
    if handle is HandleKind.NONORIENTABLE:
        return [SurfaceGluing.nonorientable(e) for e in (1, -1)]
    return [
        SurfaceGluing(swap, signs)
        for swap in (False, True)
        for signs in product((1, -1), repeat=2)
    ]


# ---------------------------------------------------------------------------
# sign gluings: n = 3 nonorientable and n > 3
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignGluing:
    """Boundary map known only through its sign on the core class."""

    sign: int

    def __post_init__(self):
        object.__setattr__(self, "sign", _check_sign(self.sign, "gluing sign"))

    def __str__(self) -> str:
        return f"sign {'+1' if self.sign > 0 else '-1'}"


Gluing = Union[GluingMatrix, SurfaceGluing, SignGluing]


def gluing_variant(dim: int, handle: HandleKind) -> type:
    """The gluing class that encodes ``j`` for a (dimension, handle) pair."""
    if dim < 2:
        raise GluingError(f"dimension must be at least 2, got {dim}")
    if dim == 2:
        return SurfaceGluing
    if dim == 3 and handle is HandleKind.ORIENTABLE:
        return GluingMatrix
    return SignGluing


@dataclass(frozen=True)
class ModelFlow:
    """Two copies of the same handle glued along the boundary by ``gluing``.

    Copy 0 carries the repelling orbit, copy 1 the attracting one.
    """

    dim: int
    handle: HandleKind
    gluing: Gluing

    def __post_init__(self):
        if isinstance(self.dim, bool) or int(self.dim) != self.dim:
            raise GluingError(f"dimension must be an integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "handle", HandleKind(self.handle))
        expected = gluing_variant(self.dim, self.handle)
        if not isinstance(self.gluing, expected):
            raise GluingError(
                f"dim={self.dim} {self.handle.value} flows need a {expected.__name__}, "
                f"got {type(self.gluing).__name__}"
            )
        if isinstance(self.gluing, SurfaceGluing) and self.gluing.handle is not self.handle:
            raise GluingError("surface gluing does not match the handle kind")

    def __str__(self) -> str:
        return f"n={self.dim} {self.handle.value} {self.gluing}"


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixCertificate:
    """Boundary actions ``h_k* = [[1, 0], [m_k, delta_k]]`` with h1 j = j' h0."""

    m0: int
    delta0: int
    m1: int
    delta1: int

    @property
    def h0(self) -> GluingMatrix:
        return boundary_action(self.m0, self.delta0)

    @property
    def h1(self) -> GluingMatrix:
        return boundary_action(self.m1, self.delta1)


@dataclass(frozen=True)
class SurfaceCertificate:
    h0: SurfaceGluing
    h1: SurfaceGluing


@dataclass(frozen=True)
class SignCertificate:
    h0_sign: int = 1
    h1_sign: int = 1


Certificate = Union[MatrixCertificate, SurfaceCertificate, SignCertificate]


def check_certificate(cert: Certificate, j: Gluing, j_prime: Gluing) -> bool:
    """Validate ``h1 j = j' h0`` with both boundary maps fixing the core class."""
    if isinstance(cert, MatrixCertificate):
        if not (isinstance(j, GluingMatrix) and isinstance(j_prime, GluingMatrix)):
            return False
        if cert.delta0 not in (1, -1) or cert.delta1 not in (1, -1):
            return False
        return cert.h1 @ j == j_prime @ cert.h0
    if isinstance(cert, SurfaceCertificate):
        if not (isinstance(j, SurfaceGluing) and isinstance(j_prime, SurfaceGluing)):
            return False
        if len({j.handle, j_prime.handle, cert.h0.handle, cert.h1.handle}) != 1:
            return False
        if not (cert.h0.is_pure and cert.h1.is_pure):
            return False
        return compose_surface(cert.h1, j) == compose_surface(j_prime, cert.h0)
    if isinstance(cert, SignCertificate):
        if not (isinstance(j, SignGluing) and isinstance(j_prime, SignGluing)):
            return False
        return (
            cert.h0_sign == 1
            and cert.h1_sign == 1
            and cert.h1_sign * j.sign == j_prime.sign * cert.h0_sign
        )
    return False
