"""Projector lattice of closed Hilbert subspaces, and its face embedding.

Faces of the density body are in bijection with projectors; embedding a
projector p as the subspace {X : X = pXp} lands exactly on the closed
representative of the corresponding face, so the projector lattice sits
inside the state lattice as a subposet.  The embedding preserves meets
exactly, while joins and complements only dominate their state-lattice
counterparts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import (
    LatticeElement,
    join,
    leq,
    meet,
    neg,
    same_element,
    zero_element,
)
from .operators import DEFAULT_BUDGET, DEFAULT_TOL, HermOp, SpaceShape, Tolerances, _herm_basis_stack
from .subspaces import HermSubspace

__all__ = [
    "VNElement",
    "vn_meet",
    "vn_join",
    "vn_neg",
    "face_embed",
    "compare_ops",
    "FaceComparisonReport",
]

_EIG_01_TOL = 1e-8


class VNElement:
    """An orthogonal projector on the Hilbert space, with its rank."""

    __slots__ = ("projector", "rank")

    def __init__(self, projector, tol: Tolerances = DEFAULT_TOL):
        if not isinstance(projector, HermOp):
            projector = HermOp(projector, tol)
        m = projector.mat
        defect = float(np.linalg.norm(m @ m - m))
        if defect > tol.proj:
            raise ValueError(f"not idempotent (defect {defect:.3e})")
        lam = np.linalg.eigvalsh(m)
        if float(np.abs(lam - np.round(lam)).max()) > _EIG_01_TOL:
            raise ValueError("eigenvalues are not within tolerance of {0, 1}")
        self.projector = projector
        self.rank = int(round(float(lam.sum())))

    @classmethod
    def from_columns(cls, cols, tol: Tolerances = DEFAULT_TOL) -> "VNElement":
        """Projector onto the column span of a matrix, orthonormalized by QR."""
        c = np.asarray(cols, dtype=np.complex128)
        if c.ndim == 1:
            c = c.reshape(-1, 1)
        q, r = np.linalg.qr(c)
        keep = np.abs(np.diag(r)) > tol.proj * max(1.0, float(np.abs(r).max()))
        q = q[:, keep]
        return cls(HermOp(q @ q.conj().T), tol)

    @classmethod
    def zero(cls, n: int) -> "VNElement":
        return cls(HermOp(np.zeros((n, n))))

    @classmethod
    def identity(cls, n: int) -> "VNElement":
        return cls(HermOp(np.eye(n)))

    @property
    def dim(self) -> int:
        return self.projector.dim

    def range_basis(self) -> np.ndarray:
        """Orthonormal columns spanning the range."""
        lam, vec = np.linalg.eigh(self.projector.mat)
        return vec[:, lam > 0.5]

    def __repr__(self) -> str:
        return f"VNElement(dim={self.dim}, rank={self.rank})"


def _check_same_dim(p: VNElement, q: VNElement):
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")


def vn_meet(p: VNElement, q: VNElement, tol: Tolerances = DEFAULT_TOL) -> VNElement:
    """Projector onto the intersection of the two ranges."""
    _check_same_dim(p, q)
    n = p.dim
    eye = np.eye(n)
    stacked = np.vstack([eye - p.projector.mat, eye - q.projector.mat])
    _, s, vt = np.linalg.svd(stacked)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > max(tol.proj * smax, 1e-12)))
    cols = vt[rank:].conj().T
    return VNElement(HermOp(cols @ cols.conj().T), tol)


def vn_join(p: VNElement, q: VNElement, tol: Tolerances = DEFAULT_TOL) -> VNElement:
    """Projector onto the closed linear span of the two ranges."""
    _check_same_dim(p, q)
    cols = np.hstack([p.range_basis(), q.range_basis()])
    if cols.shape[1] == 0:
        return VNElement.zero(p.dim)
    return VNElement.from_columns(cols, tol)


def vn_neg(p: VNElement, tol: Tolerances = DEFAULT_TOL) -> VNElement:
    """Orthocomplement I - p."""
    return VNElement(HermOp(np.eye(p.dim) - p.projector.mat), tol)


def vn_leq(p: VNElement, q: VNElement, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Range inclusion: p <= q iff qp = p."""
    _check_same_dim(p, q)
    return float(np.linalg.norm(q.projector.mat @ p.projector.mat - p.projector.mat)) <= 1e-8


def face_embed(p: VNElement, shape: SpaceShape | None = None,
               tol: Tolerances = DEFAULT_TOL) -> LatticeElement:
    """State-lattice element of the face supported inside range(p).

    The closed representative is known in closed form: all Hermitian X
    with X = pXp, of dimension rank(p)^2, built by conjugating the
    canonical basis of the compressed block.  Rank 0 gives the bottom
    element; full rank gives the top.
    """
    n = p.dim
    if shape is None:
        shape = SpaceShape.simple(n)
    if p.rank == 0:
        return zero_element(shape)
    u = p.range_basis()
    block = _herm_basis_stack(p.rank)
    lifted = np.einsum("ab,ibc,dc->iad", u, block, u.conj())
    basis = [HermOp(m) for m in lifted]
    return LatticeElement(HermSubspace(n, basis, tol), shape, tol=tol, assume_good=True)


@dataclass(frozen=True)
class FaceComparisonReport:
    """How the two lattices' operations compare on a pair of projectors."""

    meet_preserved: bool          # embed(p ^ q) equals embed(p) ^ embed(q)
    join_dominated: bool          # embed(p) v embed(q) <= embed(p v q)
    join_strict: bool             # ... with strict inequality
    neg_dominated: bool           # not(embed(p)) <= embed(I - p)
    neg_strict: bool
    nested_joins_agree: bool      # p <= q forces both joins to collapse to embed(q)
    embed_meet_dim: int
    embed_join_dim: int
    face_join_dim: int


def compare_ops(p: VNElement, q: VNElement, tol: Tolerances = DEFAULT_TOL,
                budget: int = DEFAULT_BUDGET) -> FaceComparisonReport:
    """Check the meet/join/neg comparison relations for one projector pair."""
    _check_same_dim(p, q)
    fp = face_embed(p, tol=tol)
    fq = face_embed(q, tol=tol)

    meet_faces = face_embed(vn_meet(p, q, tol), tol=tol)
    meet_lattice = meet(fp, fq, tol, budget)
    meet_preserved = same_element(meet_faces, meet_lattice, tol)

    join_lattice = join(fp, fq, tol, budget)
    join_faces = face_embed(vn_join(p, q, tol), tol=tol)
    join_dominated = leq(join_lattice, join_faces, tol)
    join_strict = join_dominated and not leq(join_faces, join_lattice, tol)

    neg_lattice = neg(fp, tol, budget)
    neg_faces = face_embed(vn_neg(p, tol), tol=tol)
    neg_dominated = leq(neg_lattice, neg_faces, tol)
    neg_strict = neg_dominated and not leq(neg_faces, neg_lattice, tol)

    nested_joins_agree = True
    if vn_leq(p, q, tol):
        nested_joins_agree = same_element(join_lattice, fq, tol) and same_element(
            join_faces, fq, tol
        )

    return FaceComparisonReport(
        meet_preserved=meet_preserved,
        join_dominated=join_dominated,
        join_strict=join_strict,
        neg_dominated=neg_dominated,
        neg_strict=neg_strict,
        nested_joins_agree=nested_joins_agree,
        embed_meet_dim=meet_lattice.dim,
        embed_join_dim=join_lattice.dim,
        face_join_dim=join_faces.dim,
    )
