"""Hermitian-operator algebra on finite-dimensional Hilbert spaces.

Every value is immutable after construction and every function is pure,
so values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import sqrt

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "DEFAULT_BUDGET",
    "HermOp",
    "DensityOp",
    "SpaceShape",
    "hs_inner",
    "hs_norm",
    "is_density",
    "is_pure",
    "expectation",
    "tensor",
    "partial_trace",
    "herm_basis",
]

DEFAULT_BUDGET = 5000


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds threaded through the whole library.

    The defaults assume Hilbert dimensions up to 9 in double precision,
    which leaves several digits of headroom everywhere.
    """

    herm: float = 1e-10        # allowed Hermiticity defect at construction
    trace: float = 1e-10       # allowed |tr - 1| for density operators
    psd: float = 1e-9          # eigenvalues above -psd count as nonnegative
    pure: float = 1e-8         # allowed ||rho^2 - rho|| for purity
    rank: float = 1e-9         # relative singular-value cutoff for subspace ranks
    proj: float = 1e-9         # allowed projector idempotency defect
    interior: float = 1e-7     # spectrum above this counts as strictly interior
    infeasible: float = 1e-6   # best value below -infeasible certifies emptiness
    membership: float = 1e-7   # projection residual for element inclusion / order


DEFAULT_TOL = Tolerances()


def _coerce_matrix(mat) -> np.ndarray:
    if isinstance(mat, HermOp):
        return mat.mat
    if isinstance(mat, DensityOp):
        return mat.op.mat
    return np.asarray(mat, dtype=np.complex128)


class HermOp:
    """An n x n complex Hermitian matrix, an element of the real operator space."""

    __slots__ = ("mat",)

    def __init__(self, mat, tol: Tolerances = DEFAULT_TOL):
        m = np.array(_coerce_matrix(mat), dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValueError("dimension must be at least 1")
        defect = float(np.abs(m - m.conj().T).max())
        if defect > tol.herm:
            raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
        m = (m + m.conj().T) / 2.0
        m.setflags(write=False)
        self.mat = m

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def eigvals(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.mat)

    def __add__(self, other: "HermOp") -> "HermOp":
        return HermOp(self.mat + _coerce_matrix(other))

    def __sub__(self, other: "HermOp") -> "HermOp":
        return HermOp(self.mat - _coerce_matrix(other))

    def __mul__(self, scalar: float) -> "HermOp":
        return HermOp(self.mat * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "HermOp":
        return HermOp(-self.mat)

    def __repr__(self) -> str:
        return f"HermOp(dim={self.dim})"


class DensityOp:
    """A positive semidefinite, trace-one Hermitian operator: a quantum state."""

    __slots__ = ("op",)

    def __init__(self, op, tol: Tolerances = DEFAULT_TOL):
        if not isinstance(op, HermOp):
            op = HermOp(op, tol)
        tr = op.trace()
        if abs(tr - 1.0) > tol.trace:
            raise ValueError(f"trace is {tr:.12f}, not 1")
        lam_min = float(np.linalg.eigvalsh(op.mat)[0])
        if lam_min < -tol.psd:
            raise ValueError(f"not positive semidefinite (min eigenvalue {lam_min:.3e})")
        self.op = op

    @classmethod
    def pure(cls, vec, tol: Tolerances = DEFAULT_TOL) -> "DensityOp":
        """Rank-one state |v><v| from a (not necessarily normalized) vector."""
        v = np.asarray(vec, dtype=np.complex128).reshape(-1)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("zero vector does not define a state")
        v = v / nrm
        return cls(HermOp(np.outer(v, v.conj()), tol), tol)

    @property
    def mat(self) -> np.ndarray:
        return self.op.mat

    @property
    def dim(self) -> int:
        return self.op.dim

    def __repr__(self) -> str:
        return f"DensityOp(dim={self.dim})"


@dataclass(frozen=True)
class SpaceShape:
    """Tensor factorization of the underlying Hilbert space.

    One factor for simple systems, two for bipartite ones.  Factor 1 is
    the left tensor slot throughout.
    """

    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(f) for f in self.factors)
        if len(factors) < 1 or any(f < 1 for f in factors):
            raise ValueError(f"invalid factors {factors}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def simple(cls, n: int) -> "SpaceShape":
        return cls((n,))

    @classmethod
    def parse(cls, text: str) -> "SpaceShape":
        """Parse '2x3' or '4' into a shape."""
        try:
            factors = tuple(int(p) for p in text.lower().split("x"))
        except ValueError:
            raise ValueError(f"cannot parse shape {text!r}") from None
        return cls(factors)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.factors))

    @property
    def is_bipartite(self) -> bool:
        return len(self.factors) == 2

    def __str__(self) -> str:
        return "x".join(str(f) for f in self.factors)


def hs_inner(a: HermOp, b: HermOp) -> float:
    """Trace inner product tr(a.b) of two Hermitian operators."""
    am, bm = _coerce_matrix(a), _coerce_matrix(b)
    if am.shape != bm.shape:
        raise ValueError(f"dimension mismatch: {am.shape[0]} vs {bm.shape[0]}")
    return float(np.einsum("ij,ji->", am, bm).real)


def hs_norm(a: HermOp) -> float:
    m = _coerce_matrix(a)
    return float(np.linalg.norm(m))


def is_density(a: HermOp, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff a has unit trace and nonnegative spectrum within tolerance."""
    m = _coerce_matrix(a)
    if abs(float(np.trace(m).real) - 1.0) > tol.trace:
        return False
    return float(np.linalg.eigvalsh(m)[0]) >= -tol.psd


def is_pure(rho, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff rho^2 = rho within tolerance (Hilbert-Schmidt norm)."""
    m = _coerce_matrix(rho)
    return float(np.linalg.norm(m @ m - m)) <= tol.pure


def expectation(rho: DensityOp, m: HermOp) -> float:
    """Mean value tr(rho.m) of an observable in a state."""
    rm, mm = _coerce_matrix(rho), _coerce_matrix(m)
    if rm.shape != mm.shape:
        raise ValueError(f"dimension mismatch: {rm.shape[0]} vs {mm.shape[0]}")
    return float(np.einsum("ij,ji->", rm, mm).real)


def tensor(a, b) -> HermOp:
    """Kronecker product, with the first argument in the left slot."""
    return HermOp(np.kron(_coerce_matrix(a), _coerce_matrix(b)))


def partial_trace(rho, shape: SpaceShape, keep: int) -> HermOp:
    """Reduced operator on one factor of a bipartite space.

    `keep` is 1-based: keep=1 returns the operator on the left factor
    (tracing out the right one), keep=2 the converse.
    """
    m = _coerce_matrix(rho)
    if not shape.is_bipartite:
        raise ValueError(f"shape {shape} is not bipartite")
    n1, n2 = shape.factors
    if m.shape[0] != n1 * n2:
        raise ValueError(f"operator dim {m.shape[0]} does not match shape {shape}")
    if keep not in (1, 2):
        raise ValueError(f"keep must be 1 or 2, got {keep}")
    t = m.reshape(n1, n2, n1, n2)
    if keep == 1:
        return HermOp(np.einsum("ijkj->ik", t))
    return HermOp(np.einsum("ijil->jl", t))


@lru_cache(maxsize=None)
def _herm_basis_stack(n: int) -> np.ndarray:
    """Stack of n^2 trace-orthonormal Hermitian matrices, identity first.

    Order: normalized identity, then for each pair j<k the symmetric and
    antisymmetric off-diagonal generators, then the diagonal family.
    """
    mats = [np.eye(n, dtype=np.complex128) / sqrt(n)]
    for j in range(n):
        for k in range(j + 1, n):
            sym = np.zeros((n, n), dtype=np.complex128)
            sym[j, k] = sym[k, j] = 1 / sqrt(2)
            mats.append(sym)
            asym = np.zeros((n, n), dtype=np.complex128)
            asym[j, k] = -1j / sqrt(2)
            asym[k, j] = 1j / sqrt(2)
            mats.append(asym)
    for l in range(1, n):
        diag = np.zeros(n, dtype=np.complex128)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag) / sqrt(l * (l + 1)))
    stack = np.stack(mats)
    stack.setflags(write=False)
    return stack


def herm_basis(n: int) -> list[HermOp]:
    """Trace-orthonormal basis of the n x n Hermitian operators.

    Returns n^2 operators; any Hermitian operator expands in them with
    real coefficients, and the expansion is an isometry.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return [HermOp(m) for m in _herm_basis_stack(n)]
