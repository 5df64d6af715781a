"""JSON forms of flows, certificates and trajectories."""
from __future__ import annotations

import json
from typing import Any

from .gluing import (
    Certificate,
    GluingError,
    GluingMatrix,
    HandleKind,
    MatrixCertificate,
    ModelFlow,
    SignCertificate,
    SignGluing,
    SurfaceCertificate,
    SurfaceGluing,
)
from .simulator import ChartPoint, Trajectory, Transit

SCHEMA_VERSION = 1
SIG_DIGITS = 12


class SpecError(ValueError):
    pass


def flow_from_spec(spec: Any) -> ModelFlow:
    """Build a ``ModelFlow`` from a flow-spec object.

    ``{"dim": n, "handle": "orientable"|"nonorientable", "gluing": G}`` with
    ``G`` one of ``{"matrix": [[r, p], [s, q]]}``, ``{"swap": b, "signs": [..]}``
    or ``{"sign": e}``.
    """
    if not isinstance(spec, dict):
        raise SpecError("flow spec must be a JSON object")
    try:
        dim = spec["dim"]
        handle = HandleKind(spec["handle"])
        gluing = spec["gluing"]
    except KeyError as exc:
        raise SpecError(f"flow spec is missing field {exc.args[0]!r}") from None
    except ValueError:
        raise SpecError(f"unknown handle kind {spec.get('handle')!r}") from None
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise SpecError("dim must be an integer")
    if not isinstance(gluing, dict):
        raise SpecError("gluing must be a JSON object")

    if "matrix" in gluing:
        g = GluingMatrix.from_rows(gluing["matrix"])
    elif "signs" in gluing:
        g = SurfaceGluing(bool(gluing.get("swap", False)), tuple(gluing["signs"]))
    elif "sign" in gluing:
        # n = 2 Moebius-band handles are surface gluings with one sign
        if dim == 2:
            g = SurfaceGluing.nonorientable(gluing["sign"])
        else:
            g = SignGluing(gluing["sign"])
    else:
        raise SpecError("gluing needs one of 'matrix', 'signs' or 'sign'")
    return ModelFlow(dim, handle, g)


def flow_to_spec(f: ModelFlow) -> dict:
    g = f.gluing
    if isinstance(g, GluingMatrix):
        gluing: dict = {"matrix": g.rows()}
    elif isinstance(g, SurfaceGluing):
        gluing = {"swap": g.swap, "signs": list(g.signs)}
    else:
        gluing = {"sign": g.sign}
    return {"dim": f.dim, "handle": f.handle.value, "gluing": gluing}


def certificate_to_json(cert: Certificate) -> dict:
    if isinstance(cert, MatrixCertificate):
        return {"kind": "matrix", "m0": cert.m0, "delta0": cert.delta0, "m1": cert.m1, "delta1": cert.delta1}
    if isinstance(cert, SurfaceCertificate):
        return {
            "kind": "surface",
            "h0": {"swap": cert.h0.swap, "signs": list(cert.h0.signs)},
            "h1": {"swap": cert.h1.swap, "signs": list(cert.h1.signs)},
        }
    if isinstance(cert, SignCertificate):
        return {"kind": "sign", "h0_sign": cert.h0_sign, "h1_sign": cert.h1_sign}
    raise TypeError(f"not a certificate: {cert!r}")


def chart_point_from_json(item: Any) -> ChartPoint:
    """``[chart, [y...], h]`` or ``{"chart": .., "y": [..], "h": ..}``."""
    if isinstance(item, dict):
        return ChartPoint(item["chart"], tuple(item["y"]), item["h"])
    chart, y, h = item
    return ChartPoint(chart, tuple(y), h)


def _transit_json(tr: Transit) -> list:
    return [tr.time, tr.before.to_json(), tr.after.to_json()]


def trajectory_to_json(f: ModelFlow, traj: Trajectory) -> dict:
    return {
        "flow": flow_to_spec(f),
        "samples": [[t, p.chart, list(p.y), p.h] for t, p in traj.samples],
        "transits": [_transit_json(tr) for tr in traj.transits],
    }


def round_floats(obj: Any, digits: int = SIG_DIGITS) -> Any:
    """Round every float to ``digits`` significant digits (for stable output)."""
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, floats at 12 significant digits."""
    return json.dumps(round_floats(obj), sort_keys=True, ensure_ascii=False)


__all__ = [
    "SCHEMA_VERSION",
    "SpecError",
    "GluingError",
    "flow_from_spec",
    "flow_to_spec",
    "certificate_to_json",
    "chart_point_from_json",
    "trajectory_to_json",
    "round_floats",
    "dumps",
]
