"""JSON schemas for operators, subspaces, lattice elements and certificates.

Matrices travel as ``{"dim": n, "re": [[...]], "im": [[...]]}`` with
row-major 64-bit floats; composite objects nest that schema.
"""

from __future__ import annotations

import json

import numpy as np

from .convex_geometry import FaceCertificate
from .operators import DEFAULT_TOL, DensityOp, HermOp, SpaceShape, Tolerances
from .subspaces import HermSubspace
from .lattice import LatticeElement
from .vn_lattice import VNElement

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "density_from_json",
    "subspace_to_json",
    "subspace_from_json",
    "element_to_json",
    "element_from_json",
    "vn_to_json",
    "vn_from_json",
    "certificate_to_json",
    "verdict_to_json",
    "load_json",
    "dump_json",
]


def matrix_to_json(op) -> dict:
    m = op.mat if isinstance(op, (HermOp, DensityOp)) else np.asarray(op, dtype=complex)
    return {
        "dim": int(m.shape[0]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def _require(doc: dict, keys, kind: str):
    for k in keys:
        if k not in doc:
            raise ValueError(f"{kind} document is missing key {k!r}")


def matrix_from_json(doc: dict, tol: Tolerances = DEFAULT_TOL) -> HermOp:
    _require(doc, ("dim", "re", "im"), "matrix")
    n = int(doc["dim"])
    m = np.asarray(doc["re"], dtype=float) + 1j * np.asarray(doc["im"], dtype=float)
    if m.shape != (n, n):
        raise ValueError(f"matrix payload has shape {m.shape}, declared dim {n}")
    return HermOp(m, tol)


def density_from_json(doc: dict, tol: Tolerances = DEFAULT_TOL) -> DensityOp:
    return DensityOp(matrix_from_json(doc, tol), tol)


def subspace_to_json(sub: HermSubspace) -> dict:
    return {
        "ambient_hilbert_dim": sub.ambient_dim,
        "basis": [matrix_to_json(b) for b in sub.basis],
    }


def subspace_from_json(doc: dict, tol: Tolerances = DEFAULT_TOL) -> HermSubspace:
    _require(doc, ("ambient_hilbert_dim", "basis"), "subspace")
    n = int(doc["ambient_hilbert_dim"])
    basis = [matrix_from_json(b, tol) for b in doc["basis"]]
    return HermSubspace(n, basis, tol)


def element_to_json(el: LatticeElement) -> dict:
    doc = subspace_to_json(el.rep)
    doc["shape"] = list(el.shape.factors)
    return doc


def element_from_json(doc: dict, tol: Tolerances = DEFAULT_TOL,
                      assume_good: bool = True) -> LatticeElement:
    _require(doc, ("ambient_hilbert_dim", "basis", "shape"), "lattice element")
    shape = SpaceShape(tuple(int(f) for f in doc["shape"]))
    sub = subspace_from_json(doc, tol)
    return LatticeElement(sub, shape, tol=tol, assume_good=assume_good)


def vn_to_json(p: VNElement) -> dict:
    doc = matrix_to_json(p.projector)
    doc["rank"] = p.rank
    return doc


def vn_from_json(doc: dict, tol: Tolerances = DEFAULT_TOL) -> VNElement:
    _require(doc, ("dim", "re", "im", "rank"), "projector")
    p = VNElement(matrix_from_json(doc, tol), tol)
    if p.rank != int(doc["rank"]):
        raise ValueError(f"declared rank {doc['rank']} but projector has rank {p.rank}")
    return p


def certificate_to_json(cert: FaceCertificate) -> dict:
    return {
        "support": matrix_to_json(cert.support),
        "interior_point": matrix_to_json(cert.interior_point),
        "reduction_steps": [matrix_to_json(z) for z in cert.reduction_steps],
    }


def verdict_to_json(verdict) -> dict:
    doc = {
        "status": verdict.status,
        "ppt_min_eigenvalue": verdict.ppt_min_eigenvalue,
        "note": verdict.note,
    }
    if verdict.decomposition is not None:
        doc["decomposition"] = [
            {"weight": w, "factor1": matrix_to_json(r1), "factor2": matrix_to_json(r2)}
            for w, r1, r2 in verdict.decomposition
        ]
        doc["residual"] = verdict.residual
    return doc


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(doc: dict, path: str | None) -> str:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
