"""Real-linear subspaces of the Hermitian operator space under the trace inner product.

Subspaces are stored as trace-orthonormal operator bases, and all linear
algebra happens in the real coordinates induced by the canonical basis of
:func:`statelattice.operators.herm_basis`, where the trace inner product is
the plain dot product.
"""

from __future__ import annotations

import numpy as np

from .operators import DEFAULT_TOL, HermOp, Tolerances, _herm_basis_stack

__all__ = [
    "HermSubspace",
    "span",
    "intersect",
    "subspace_sum",
    "orth_complement",
    "contains",
    "same_subspace",
    "subspace_distance",
]

_GRAM_TOL = 1e-10


def coords_of(mat: np.ndarray, n: int) -> np.ndarray:
    """Real coordinate vector of a Hermitian matrix in the canonical basis."""
    return np.einsum("ijk,kj->i", _herm_basis_stack(n), mat).real


def op_from_coords(c: np.ndarray, n: int) -> np.ndarray:
    """Hermitian matrix with the given canonical coordinates."""
    return np.einsum("i,ijk->jk", c, _herm_basis_stack(n))


def ops_from_coords(rows: np.ndarray, n: int) -> np.ndarray:
    """Batched version of :func:`op_from_coords`; rows of shape (k, n^2)."""
    return np.einsum("bi,ijk->bjk", rows, _herm_basis_stack(n))


def trace_vector(n: int) -> np.ndarray:
    """Coordinates of the trace functional: tr(a) = trace_vector . coords(a)."""
    return np.einsum("ijj->i", _herm_basis_stack(n)).real


# Singular values below this are numerical noise regardless of scale; the
# operands here (orthonormal bases, projectors, densities) are all O(1).
_SV_FLOOR = 1e-12


def _orthonormal_rows(rows: np.ndarray, rel_cutoff: float) -> np.ndarray:
    """Orthonormal row basis of the row space, rank cut at rel_cutoff * s_max."""
    if rows.size == 0:
        return rows.reshape(0, rows.shape[-1] if rows.ndim == 2 else 0)
    s, vt = np.linalg.svd(rows, full_matrices=False)[1:]
    if s.size == 0 or s[0] <= _SV_FLOOR:
        return rows[:0]
    rank = int(np.sum(s > max(rel_cutoff * s[0], _SV_FLOOR)))
    return vt[:rank]


def _null_space_rows(rows: np.ndarray, dim: int, rel_cutoff: float) -> np.ndarray:
    """Orthonormal basis (as rows) of the null space of a stacked matrix."""
    if rows.shape[0] == 0:
        return np.eye(dim)
    s, vt = np.linalg.svd(rows, full_matrices=True)[1:]
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > max(rel_cutoff * smax, _SV_FLOOR)))
    return vt[rank:]


class HermSubspace:
    """A subspace of Hermitian operators with a trace-orthonormal basis."""

    __slots__ = ("ambient_dim", "basis", "coords")

    def __init__(self, ambient_dim: int, basis, tol: Tolerances = DEFAULT_TOL, coords=None):
        ambient_dim = int(ambient_dim)
        if ambient_dim < 1:
            raise ValueError("ambient dimension must be at least 1")
        basis = tuple(b if isinstance(b, HermOp) else HermOp(b, tol) for b in basis)
        for b in basis:
            if b.dim != ambient_dim:
                raise ValueError(f"basis element has dim {b.dim}, expected {ambient_dim}")
        if len(basis) > ambient_dim**2:
            raise ValueError("more basis elements than the ambient dimension allows")
        if coords is None:
            coords = np.array([coords_of(b.mat, ambient_dim) for b in basis])
            coords = coords.reshape(len(basis), ambient_dim**2)
        if len(basis) > 0:
            gram = coords @ coords.T
            defect = float(np.abs(gram - np.eye(len(basis))).max())
            if defect > _GRAM_TOL:
                raise ValueError(f"basis is not trace-orthonormal (defect {defect:.3e})")
        coords = np.asarray(coords, dtype=float)
        coords.setflags(write=False)
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.coords = coords

    @classmethod
    def _from_coords(cls, rows: np.ndarray, n: int) -> "HermSubspace":
        rows = np.asarray(rows, dtype=float).reshape(-1, n**2)
        basis = [HermOp(m) for m in ops_from_coords(rows, n)] if rows.shape[0] else []
        return cls(n, basis, coords=rows)

    @classmethod
    def zero(cls, n: int) -> "HermSubspace":
        return cls._from_coords(np.zeros((0, n**2)), n)

    @classmethod
    def full(cls, n: int) -> "HermSubspace":
        return cls._from_coords(np.eye(n**2), n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def project_coords(self, c: np.ndarray) -> np.ndarray:
        """Orthogonal projection of a coordinate vector onto the subspace."""
        if self.dim == 0:
            return np.zeros_like(c)
        return self.coords.T @ (self.coords @ c)

    def __repr__(self) -> str:
        return f"HermSubspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def _check_same_ambient(s: HermSubspace, t: HermSubspace):
    if s.ambient_dim != t.ambient_dim:
        raise ValueError(f"ambient mismatch: {s.ambient_dim} vs {t.ambient_dim}")


def span(generators, tol: Tolerances = DEFAULT_TOL, ambient_dim: int | None = None) -> HermSubspace:
    """Trace-orthonormalized span of a list of Hermitian operators.

    Rank is decided by singular values above ``tol.rank`` relative to the
    largest one.  An empty generator list needs ``ambient_dim``.
    """
    mats = [g if isinstance(g, HermOp) else HermOp(g, tol) for g in generators]
    if not mats:
        if ambient_dim is None:
            raise ValueError("spanning nothing requires an explicit ambient_dim")
        return HermSubspace.zero(ambient_dim)
    n = mats[0].dim
    for g in mats:
        if g.dim != n:
            raise ValueError(f"mixed dimensions in generators: {g.dim} vs {n}")
    if ambient_dim is not None and ambient_dim != n:
        raise ValueError(f"generators have dim {n}, expected {ambient_dim}")
    rows = np.array([coords_of(g.mat, n) for g in mats])
    return HermSubspace._from_coords(_orthonormal_rows(rows, tol.rank), n)


def intersect(s: HermSubspace, t: HermSubspace, tol: Tolerances = DEFAULT_TOL) -> HermSubspace:
    """Intersection, via the null space of the stacked complement projectors."""
    _check_same_ambient(s, t)
    n = s.ambient_dim
    N = n**2
    eye = np.eye(N)
    ps = s.coords.T @ s.coords if s.dim else np.zeros((N, N))
    pt = t.coords.T @ t.coords if t.dim else np.zeros((N, N))
    stacked = np.vstack([eye - ps, eye - pt])
    rows = _null_space_rows(stacked, N, tol.rank)
    return HermSubspace._from_coords(rows, n)


def subspace_sum(s: HermSubspace, t: HermSubspace, tol: Tolerances = DEFAULT_TOL) -> HermSubspace:
    """Smallest subspace containing both arguments."""
    _check_same_ambient(s, t)
    rows = np.vstack([s.coords, t.coords])
    if rows.shape[0] == 0:
        return HermSubspace.zero(s.ambient_dim)
    return HermSubspace._from_coords(_orthonormal_rows(rows, tol.rank), s.ambient_dim)


def orth_complement(s: HermSubspace, tol: Tolerances = DEFAULT_TOL) -> HermSubspace:
    """Orthogonal complement with respect to the trace inner product."""
    rows = _null_space_rows(s.coords, s.ambient_dim**2, tol.rank)
    return HermSubspace._from_coords(rows, s.ambient_dim)


def _residual(s: HermSubspace, c: np.ndarray) -> float:
    scale = max(1.0, float(np.linalg.norm(c)))
    return float(np.linalg.norm(c - s.project_coords(c))) / scale


def contains(s: HermSubspace, x, tol: Tolerances = DEFAULT_TOL, atol: float | None = None) -> bool:
    """Membership of an operator, or inclusion of a subspace, by projection residual."""
    if atol is None:
        atol = tol.rank
    if isinstance(x, HermSubspace):
        _check_same_ambient(s, x)
        if x.dim == 0:
            return True
        return max(_residual(s, row) for row in x.coords) <= atol
    if not isinstance(x, HermOp):
        x = HermOp(x, tol)
    if x.dim != s.ambient_dim:
        raise ValueError(f"ambient mismatch: {s.ambient_dim} vs {x.dim}")
    return _residual(s, coords_of(x.mat, s.ambient_dim)) <= atol


def same_subspace(s: HermSubspace, t: HermSubspace, tol: Tolerances = DEFAULT_TOL,
                  atol: float | None = None) -> bool:
    """Equality as mutual inclusion; bases are never compared directly."""
    return contains(s, t, tol, atol) and contains(t, s, tol, atol)


def subspace_distance(s: HermSubspace, t: HermSubspace) -> float:
    """Spectral gap between the two orthogonal projectors.

    For subspaces of equal dimension this is the sine of the largest
    principal angle.
    """
    _check_same_ambient(s, t)
    N = s.ambient_dim**2
    ps = s.coords.T @ s.coords if s.dim else np.zeros((N, N))
    pt = t.coords.T @ t.coords if t.dim else np.zeros((N, N))
    return float(np.linalg.norm(ps - pt, ord=2))
