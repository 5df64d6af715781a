"""
Exact decision procedures for two-orbit model flows.

Equivalences are side preserving: a conjugacy maps the repeller handle to
the repeller handle and the separating hypersurface to itself. Two model
flows with gluings ``j`` and ``j'`` are then equivalent iff some boundary
map ``h0`` fixing the core class of the handle makes ``h1 = j' h0 j^-1``
fix it as well. The functions below decide this in closed form; the
``oracle`` module checks the same relation by brute force.
"""
from __future__ import annotations

from itertools import product
from typing import Optional

from .gluing import (
    Certificate,
    GluingMatrix,
    HandleKind,
    MatrixCertificate,
    ModelFlow,
    SignCertificate,
    SignGluing,
    SurfaceCertificate,
    SurfaceGluing,
    compose_surface,
    invert_surface,
)
from .manifolds import (
    KleinBottle,
    Lens,
    ManifoldId,
    SphereProdCircle,
    Torus,
    TwistedSphereBundle,
    canonical,
)

# boundary circle c of an oriented annulus gets orientation BOUNDARY_SIDE[c]
# times the longitude direction
BOUNDARY_SIDE = {1: 1, 2: -1}


def surface_is_orientable(g: SurfaceGluing) -> bool:
    """Whether two handles glued by ``g`` form an orientable surface.

    Searches orientations ``(o0, o1)`` of the two annuli for one under which
    ``g`` reverses the induced boundary orientation on every circle.
    """
    if g.handle is HandleKind.NONORIENTABLE:
        return False
    for o0, o1 in product((1, -1), repeat=2):
        if all(
            g.sign_on(c) * o0 * BOUNDARY_SIDE[c] == -o1 * BOUNDARY_SIDE[g.route(c)]
            for c in (1, 2)
        ):
            return True
    return False


def manifold_of(f: ModelFlow) -> ManifoldId:
    """Canonical identifier of the ambient manifold of ``f``."""
    if f.dim == 2:
        return Torus() if surface_is_orientable(f.gluing) else KleinBottle()
    if f.dim == 3 and f.handle is HandleKind.ORIENTABLE:
        return Lens.from_meridian(f.gluing.p, f.gluing.q)
    if f.handle is HandleKind.ORIENTABLE:
        return SphereProdCircle(f.dim)
    return TwistedSphereBundle(f.dim)


def manifolds_homeomorphic(a: ManifoldId, b: ManifoldId) -> bool:
    return canonical(a) == canonical(b)


def orbit_twisted(f: ModelFlow) -> tuple[bool, bool]:
    """(repeller twisted, attractor twisted); both copies share the handle."""
    twisted = f.handle is HandleKind.NONORIENTABLE
    return twisted, twisted


def matrix_certificate(j: GluingMatrix, j_prime: GluingMatrix) -> Optional[MatrixCertificate]:
    """Solve ``h1 j = j' h0`` for ``h_k = [[1, 0], [m_k, delta_k]]``.

    Comparing first rows gives ``p = delta0 p'`` and ``r = r' + m0 p'``.
    """
    if abs(j.p) != abs(j_prime.p):
        return None
    if j.p == 0:
        # r, r' are both +-1 here and m0, delta0 are unconstrained
        if j.r != j_prime.r:
            return None
        m0, delta0 = 0, 1
    else:
        delta0 = j.p // j_prime.p
        m0, rem = divmod(j.r - j_prime.r, j_prime.p)
        if rem:
            return None
    h0 = GluingMatrix(1, 0, m0, delta0)
    h1 = j_prime @ h0 @ j.inverse()
    # unimodularity forces h1 into the admissible shape once the first rows agree
    assert h1.r == 1 and h1.p == 0, h1
    return MatrixCertificate(m0, delta0, h1.s, h1.q)


def surface_certificate(j: SurfaceGluing, j_prime: SurfaceGluing) -> Optional[SurfaceCertificate]:
    """Equivalence of surface flows.

    The admissible ``h0`` are the identity and the pure swap, so classes are
    the orbits of pure swaps acting on both sides; the invariant is the
    multiset of component signs.
    """
    if j.handle is not j_prime.handle:
        return None
    if sorted(j.signs) != sorted(j_prime.signs):
        return None
    same = j.signs == j_prime.signs
    h0 = SurfaceGluing(not same, (1,) * len(j.signs))
    h1 = compose_surface(j_prime, compose_surface(h0, invert_surface(j)))
    assert h1.is_pure, h1
    return SurfaceCertificate(h0, h1)


def flows_equivalent(f: ModelFlow, g: ModelFlow) -> Optional[Certificate]:
    """Certificate of topological equivalence, or None if inequivalent."""
    if f.dim != g.dim or f.handle is not g.handle:
        return None
    if isinstance(f.gluing, GluingMatrix):
        return matrix_certificate(f.gluing, g.gluing)
    if isinstance(f.gluing, SurfaceGluing):
        return surface_certificate(f.gluing, g.gluing)
    if f.gluing.sign == g.gluing.sign:
        return SignCertificate(1, 1)
    return None


def class_invariant(f: ModelFlow) -> tuple[int, ...]:
    """A complete invariant of the equivalence class within (dim, handle).

    Matrices: ``(|p|, r mod |p|)`` (``(0, r)`` when ``p = 0``).
    Surfaces: the sorted component signs. Sign gluings: ``(sign,)``.
    """
    g = f.gluing
    if isinstance(g, GluingMatrix):
        p = abs(g.p)
        return (p, g.r % p if p else g.r)
    if isinstance(g, SurfaceGluing):
        return tuple(sorted(g.signs))
    return (g.sign,)


# ---------------------------------------------------------------------------
# counting and representatives
# ---------------------------------------------------------------------------

def _lens_residues(lens: Lens) -> list[int]:
    """Longitude-image residues ``r mod p`` of the flows on ``lens``.

    A meridian image ``(p, +-q)`` forces ``r = +-q^-1 (mod p)``. The two
    candidate classes ``r`` and ``-r`` merge exactly when ``r + n1 p = -r + n2 p``
    has a solution, which for ``gcd(r, p) = 1`` happens only for ``p`` in {1, 2}.
    """
    p, q = lens.p, lens.q
    if p == 0:
        candidates = [1, -1]
    elif p == 1:
        candidates = [0, 0]
    else:
        r0 = pow(q, -1, p)
        candidates = [r0, (-r0) % p]
    residues: list[int] = []
    for r in candidates:
        if not any(_congruent(r, other, p) for other in residues):
            residues.append(r)
    return residues


def _congruent(a: int, b: int, p: int) -> bool:
    return a == b if p == 0 else (a - b) % p == 0


def count_classes(m: ManifoldId) -> int:
    """Number of equivalence classes of two-orbit flows on ``m``."""
    m = canonical(m)
    if isinstance(m, Torus):
        return 2
    if isinstance(m, KleinBottle):
        return 3
    if isinstance(m, Lens):
        return len(_lens_residues(m))
    return 2


def _symmetric(r: int, p: int) -> int:
    """Residue of ``r`` with the least absolute value, positive on ties."""
    if p == 0:
        return r
    r %= p
    return r - p if r > p - r else r


def _lens_matrix(lens: Lens, r: int) -> GluingMatrix:
    p, q = lens.p, lens.q
    solutions = [(r * q - d) // p for d in (1, -1) if p and (r * q - d) % p == 0]
    if p == 0:
        solutions = [0]
    s = min(solutions, key=lambda v: (abs(v), v < 0))
    return GluingMatrix(r, p, s, q)


def representatives(m: ManifoldId) -> list[ModelFlow]:
    """One model flow per equivalence class on ``m``, in a fixed order.

    Gluing data are chosen with the smallest entries available and listed
    with positive signs/residues first.
    """
    m = canonical(m)
    if isinstance(m, Torus):
        return [
            ModelFlow(2, HandleKind.ORIENTABLE, SurfaceGluing(False, (1, 1))),
            ModelFlow(2, HandleKind.ORIENTABLE, SurfaceGluing(False, (-1, -1))),
        ]
    if isinstance(m, KleinBottle):
        return [
            ModelFlow(2, HandleKind.ORIENTABLE, SurfaceGluing(False, (-1, 1))),
            ModelFlow(2, HandleKind.NONORIENTABLE, SurfaceGluing.nonorientable(1)),
            ModelFlow(2, HandleKind.NONORIENTABLE, SurfaceGluing.nonorientable(-1)),
        ]
    if isinstance(m, Lens):
        rs = sorted(
            (_symmetric(r, m.p) for r in _lens_residues(m)),
            key=lambda r: (abs(r), r < 0),
        )
        return [ModelFlow(3, HandleKind.ORIENTABLE, _lens_matrix(m, r)) for r in rs]
    handle = HandleKind.ORIENTABLE if isinstance(m, SphereProdCircle) else HandleKind.NONORIENTABLE
    return [ModelFlow(m.n, handle, SignGluing(e)) for e in (1, -1)]
