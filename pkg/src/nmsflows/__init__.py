"""Classification and simulation of non-singular Morse-Smale flows with
exactly two periodic orbits (one attractor, one repeller)."""

from .classifier import (
    count_classes,
    flows_equivalent,
    manifold_of,
    manifolds_homeomorphic,
    orbit_twisted,
    representatives,
)
from .gluing import (
    GluingError,
    GluingMatrix,
    HandleKind,
    MatrixCertificate,
    ModelFlow,
    SignCertificate,
    SignGluing,
    SurfaceCertificate,
    SurfaceGluing,
    check_certificate,
    compose_surface,
    invert_surface,
    is_unimodular,
)
from .manifolds import KleinBottle, Lens, SphereProdCircle, Torus, TwistedSphereBundle, parse_manifold

__version__ = "0.1.0"
