"""The lattice of state-body slices, with elements kept in closed (good) form.

An element is a subspace G that equals the span of its own density slice;
distinct elements have distinct subspaces, so order is subspace inclusion,
meet re-closes the intersection, join is the plain subspace sum (sums of
closed subspaces are closed), and negation re-closes the orthogonal
complement.  Atoms are exactly the single-state rays, one per density
operator, pure or mixed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .convex_geometry import good_representative
from .operators import DEFAULT_BUDGET, DEFAULT_TOL, DensityOp, SpaceShape, Tolerances
from .subspaces import (
    HermSubspace,
    contains,
    intersect,
    orth_complement,
    same_subspace,
    span,
    subspace_sum,
)

__all__ = [
    "LatticeElement",
    "ModularReport",
    "debug_checks",
    "atom",
    "element_from_densities",
    "zero_element",
    "one_element",
    "meet",
    "join",
    "neg",
    "leq",
    "is_atom",
    "same_element",
    "check_modular",
]

# When true, constructions that rely on proven closure facts re-verify them.
debug_checks = False


class LatticeElement:
    """A lattice element: a subspace in good form, tagged with its space shape."""

    __slots__ = ("rep", "shape")

    def __init__(self, rep: HermSubspace, shape: SpaceShape | None = None, *,
                 tol: Tolerances = DEFAULT_TOL, budget: int = DEFAULT_BUDGET,
                 assume_good: bool = False):
        if shape is None:
            shape = SpaceShape.simple(rep.ambient_dim)
        if shape.total_dim != rep.ambient_dim:
            raise ValueError(f"shape {shape} does not match ambient dim {rep.ambient_dim}")
        if not assume_good:
            rep = good_representative(rep, tol, budget)
        elif debug_checks:
            closed = good_representative(rep, tol, budget)
            if not same_subspace(closed, rep, tol, atol=tol.membership):
                raise ValueError("subspace assumed good is not a closure fixpoint")
        self.rep = rep
        self.shape = shape

    @property
    def dim(self) -> int:
        return self.rep.dim

    @property
    def is_zero(self) -> bool:
        return self.rep.dim == 0

    @property
    def is_one(self) -> bool:
        return self.rep.dim == self.rep.ambient_dim**2

    def __repr__(self) -> str:
        return f"LatticeElement(shape={self.shape}, dim={self.dim})"


def _check_compatible(a: LatticeElement, b: LatticeElement):
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def atom(rho: DensityOp, shape: SpaceShape | None = None,
         tol: Tolerances = DEFAULT_TOL) -> LatticeElement:
    """The minimal element {rho} of a single state; its ray is already closed."""
    if not isinstance(rho, DensityOp):
        rho = DensityOp(rho, tol)
    return LatticeElement(span([rho.op], tol), shape, tol=tol, assume_good=True)


def element_from_densities(rhos, shape: SpaceShape | None = None,
                           tol: Tolerances = DEFAULT_TOL) -> LatticeElement:
    """Element spanned by a family of densities; such spans are closed by construction."""
    ops = [r.op if isinstance(r, DensityOp) else DensityOp(r, tol).op for r in rhos]
    if not ops:
        raise ValueError("need at least one density")
    return LatticeElement(span(ops, tol), shape, tol=tol, assume_good=True)


def zero_element(shape: SpaceShape | int) -> LatticeElement:
    if isinstance(shape, int):
        shape = SpaceShape.simple(shape)
    return LatticeElement(HermSubspace.zero(shape.total_dim), shape, assume_good=True)


def one_element(shape: SpaceShape | int) -> LatticeElement:
    if isinstance(shape, int):
        shape = SpaceShape.simple(shape)
    return LatticeElement(HermSubspace.full(shape.total_dim), shape, assume_good=True)


def meet(a: LatticeElement, b: LatticeElement, tol: Tolerances = DEFAULT_TOL,
         budget: int = DEFAULT_BUDGET) -> LatticeElement:
    """Greatest lower bound; the raw intersection need not be closed, so re-close."""
    _check_compatible(a, b)
    raw = intersect(a.rep, b.rep, tol)
    return LatticeElement(raw, a.shape, tol=tol, budget=budget)


def join(a: LatticeElement, b: LatticeElement, tol: Tolerances = DEFAULT_TOL,
         budget: int = DEFAULT_BUDGET) -> LatticeElement:
    """Least upper bound; the sum of closed subspaces is closed."""
    _check_compatible(a, b)
    s = subspace_sum(a.rep, b.rep, tol)
    return LatticeElement(s, a.shape, tol=tol, budget=budget, assume_good=True)


def neg(a: LatticeElement, tol: Tolerances = DEFAULT_TOL,
        budget: int = DEFAULT_BUDGET) -> LatticeElement:
    """Complement-like operation: closed form of the trace-orthogonal subspace."""
    return LatticeElement(orth_complement(a.rep, tol), a.shape, tol=tol, budget=budget)


def leq(a: LatticeElement, b: LatticeElement, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Order: inclusion of the closed representatives."""
    _check_compatible(a, b)
    return contains(b.rep, a.rep, tol, atol=tol.membership)


def is_atom(a: LatticeElement) -> bool:
    """Atoms are exactly the one-dimensional (single density ray) elements."""
    return a.dim == 1


def same_element(a: LatticeElement, b: LatticeElement,
                 tol: Tolerances = DEFAULT_TOL) -> bool:
    return leq(a, b, tol) and leq(b, a, tol)


@dataclass(frozen=True)
class ModularReport:
    holds: bool
    lhs: LatticeElement  # a v (b ^ c)
    rhs: LatticeElement  # (a v b) ^ c


def check_modular(a: LatticeElement, b: LatticeElement, c: LatticeElement,
                  tol: Tolerances = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> ModularReport:
    """Evaluate both sides of the modular law for a <= c and compare them."""
    _check_compatible(a, b)
    _check_compatible(a, c)
    if not leq(a, c, tol):
        raise ValueError("modular law requires a <= c")
    lhs = join(a, meet(b, c, tol, budget), tol, budget)
    rhs = meet(join(a, b, tol, budget), c, tol, budget)
    return ModularReport(same_element(lhs, rhs, tol), lhs, rhs)
