"""
Brute-force reference path for flow equivalence.

Nothing here uses the closed forms of ``classifier``: candidate boundary maps
``h0`` are enumerated, ``h1 = j' h0 j^-1`` is computed, and the core-class
condition is checked directly. Slow by design.
"""
from __future__ import annotations

import os
from itertools import combinations, product
from typing import Optional, Sequence

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
    all_surface_gluings,
    compose_surface,
    invert_surface,
    is_unimodular,
    preserves_core,
)

DEFAULT_BOUND = 8
BOUND_ENV = "NMS_SEARCH_BOUND"


def default_bound() -> int:
    """Search bound, overridable through ``NMS_SEARCH_BOUND``."""
    value = os.environ.get(BOUND_ENV)
    if value is None or value.strip() == "":
        return DEFAULT_BOUND
    bound = int(value)
    if bound < 0:
        raise ValueError(f"{BOUND_ENV} must be non-negative, got {bound}")
    return bound


def _m_values(bound: int):
    yield 0
    for k in range(1, bound + 1):
        yield k
        yield -k


def search_certificate(f: ModelFlow, g: ModelFlow, bound: int = DEFAULT_BOUND) -> Optional[Certificate]:
    """First admissible ``h0`` (by increasing ``|m0|``) whose ``h1`` fixes the core class."""
    if f.dim != g.dim or f.handle is not g.handle:
        return None
    j, jp = f.gluing, g.gluing
    if isinstance(j, GluingMatrix):
        j_inv = j.inverse()
        for m0 in _m_values(bound):
            for delta0 in (1, -1):
                h0 = GluingMatrix(1, 0, m0, delta0)
                h1 = jp @ h0 @ j_inv
                if preserves_core(h0) and preserves_core(h1):
                    return MatrixCertificate(m0, delta0, h1.s, h1.q)
        return None
    if isinstance(j, SurfaceGluing):
        j_inv = invert_surface(j)
        swaps = (False, True) if j.handle is HandleKind.ORIENTABLE else (False,)
        for swap in swaps:
            h0 = SurfaceGluing(swap, (1,) * len(j.signs))
            h1 = compose_surface(jp, compose_surface(h0, j_inv))
            if h1.is_pure:
                return SurfaceCertificate(h0, h1)
        return None
    # a sign gluing's h0 must act trivially on the core class
    h1_sign = jp.sign * j.sign
    if h1_sign == 1:
        return SignCertificate(1, h1_sign)
    return None


def enumerate_gluings(dim: int, handle: HandleKind, entry_bound: int = 1) -> list[ModelFlow]:
    """All gluing data for (dim, handle); matrices with entries in ``[-entry_bound, entry_bound]``."""
    handle = HandleKind(handle)
    if dim < 2:
        raise ValueError(f"dimension must be at least 2, got {dim}")
    if dim == 2:
        return [ModelFlow(2, handle, g) for g in all_surface_gluings(handle)]
    if dim == 3 and handle is HandleKind.ORIENTABLE:
        span = range(-entry_bound, entry_bound + 1)
        return [
            ModelFlow(3, handle, GluingMatrix(r, p, s, q))
            for r, p, s, q in product(span, repeat=4)
            if is_unimodular([[r, p], [s, q]])
        ]
    return [ModelFlow(dim, handle, SignGluing(e)) for e in (1, -1)]


def partition_by_equivalence(flows: Sequence[ModelFlow], bound: int = DEFAULT_BOUND) -> list[list[ModelFlow]]:
    """Blocks of the relation "a certificate exists within ``bound``".

    Every pair is searched (no transitivity is assumed); blocks are the
    connected components, in order of first appearance.
    """
    parent = list(range(len(flows)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in combinations(range(len(flows)), 2):
        if search_certificate(flows[a], flows[b], bound) is not None:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    blocks: dict[int, list[ModelFlow]] = {}
    for i, flow in enumerate(flows):
        blocks.setdefault(find(i), []).append(flow)
    return list(blocks.values())
