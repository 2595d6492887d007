"""Compound systems: the going-up map, partial-trace projections and separability.

The going-up map sends a pair of subsystem elements to the element spanned
by tensor products of their representatives; the going-down maps re-close
the partial traces of a representative.  Going down after going up is the
identity; going up after going down is not, which is quantum
non-separability in lattice form.  The separability layer classifies
states by the partial-transpose test (exact at 2x2 and 2x3) and searches
for explicit convex decompositions over sampled product dictionaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from .convex_geometry import sample_feasible
from .lattice import (
    LatticeElement,
    atom,
    join,
    leq,
    meet,
    neg,
    same_element,
    zero_element,
)
from .operators import (
    DEFAULT_BUDGET,
    DEFAULT_TOL,
    DensityOp,
    HermOp,
    SpaceShape,
    Tolerances,
    partial_trace,
    tensor,
)
from .subspaces import HermSubspace, contains, coords_of

__all__ = [
    "BipartiteContext",
    "SeparabilityVerdict",
    "TensorMembershipResult",
    "PsiSlotReport",
    "TauMorphismReport",
    "ImPsiReport",
    "SublatticeResult",
    "partial_transpose",
    "psi",
    "tau",
    "tau_pair",
    "is_separable",
    "convex_tensor_membership",
    "psi_fixed_slot_report",
    "tau_morphism_report",
    "im_psi_separability_report",
    "generate_sublattice",
]

_PPT_EXACT_SHAPES = {(2, 2), (2, 3), (3, 2)}
_MAX_PAIRS = 20000
_RECON_TOL = 1e-7


@dataclass(frozen=True)
class BipartiteContext:
    """Shape and numeric policy for one bipartite system."""

    shape: SpaceShape
    tol: Tolerances = DEFAULT_TOL
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not self.shape.is_bipartite:
            raise ValueError(f"shape {self.shape} is not bipartite")

    @property
    def dims(self) -> tuple[int, int]:
        return self.shape.factors  # type: ignore[return-value]

    def factor_shape(self, which: int) -> SpaceShape:
        if which not in (1, 2):
            raise ValueError("factor index must be 1 or 2")
        return SpaceShape.simple(self.shape.factors[which - 1])


def partial_transpose(rho, shape: SpaceShape, sys: int = 2) -> np.ndarray:
    """Partial transpose of a bipartite matrix over one subsystem."""
    m = rho.mat if isinstance(rho, (HermOp,)) else (rho.op.mat if isinstance(rho, DensityOp) else np.asarray(rho))
    n1, n2 = shape.factors
    t = m.reshape(n1, n2, n1, n2)
    if sys == 2:
        return t.transpose(0, 3, 2, 1).reshape(n1 * n2, n1 * n2)
    if sys == 1:
        return t.transpose(2, 1, 0, 3).reshape(n1 * n2, n1 * n2)
    raise ValueError("sys must be 1 or 2")


def _check_factor(ctx: BipartiteContext, el: LatticeElement, which: int):
    expect = ctx.shape.factors[which - 1]
    if el.rep.ambient_dim != expect or len(el.shape.factors) != 1:
        raise ValueError(
            f"element has shape {el.shape}, expected simple factor of dim {expect}"
        )


def psi(a: LatticeElement, b: LatticeElement, ctx: BipartiteContext) -> LatticeElement:
    """Going up: the element spanned by tensor products of the two representatives.

    Tensor products of the closed bases stay trace-orthonormal, and the
    resulting subspace is closed, so no re-closure is needed.
    """
    _check_factor(ctx, a, 1)
    _check_factor(ctx, b, 2)
    if a.is_zero or b.is_zero:
        return zero_element(ctx.shape)
    basis = [tensor(x, y) for x in a.rep.basis for y in b.rep.basis]
    sub = HermSubspace(ctx.shape.total_dim, basis, ctx.tol)
    return LatticeElement(sub, ctx.shape, tol=ctx.tol, budget=ctx.budget, assume_good=True)


def tau(l: LatticeElement, keep: int, ctx: BipartiteContext) -> LatticeElement:
    """Going down: re-closed span of the partial traces of the representative."""
    if l.shape != ctx.shape:
        raise ValueError(f"element shape {l.shape} does not match context {ctx.shape}")
    target = ctx.factor_shape(keep)
    if l.is_zero:
        return zero_element(target)
    reduced = [partial_trace(x, ctx.shape, keep) for x in l.rep.basis]
    from .subspaces import span as _span

    sub = _span(reduced, ctx.tol)
    return LatticeElement(sub, target, tol=ctx.tol, budget=ctx.budget)


def tau_pair(l: LatticeElement, ctx: BipartiteContext) -> tuple[LatticeElement, LatticeElement]:
    return tau(l, 1, ctx), tau(l, 2, ctx)


@dataclass(frozen=True)
class SeparabilityVerdict:
    status: str                                  # "separable" | "entangled" | "inconclusive"
    ppt_min_eigenvalue: float
    decomposition: tuple | None = None           # ((weight, rho1, rho2), ...)
    residual: float | None = None
    note: str = ""

    @property
    def witness(self):
        """The certifying payload: a decomposition, or the PPT-violating eigenvalue."""
        if self.status == "separable":
            return self.decomposition
        if self.status == "entangled":
            return self.ppt_min_eigenvalue
        return None


@dataclass(frozen=True)
class TensorMembershipResult:
    status: str                         # "member" | "outside" | "inconclusive"
    decomposition: tuple | None
    residual: float | None
    reason: str = ""
    functional_gap: float | None = None


def _haar_pure_stack(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    v = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return np.einsum("pi,pj->pij", v, v.conj())


def _side_dictionary(el: LatticeElement | None, n: int, count: int,
                     rng: np.random.Generator, ctx: BipartiteContext) -> np.ndarray:
    """Density dictionary for one side: Haar pure states for the full body,
    feasible samples for a restricted element."""
    if el is None or el.is_one:
        return _haar_pure_stack(rng, n, count)
    pts = sample_feasible(el.rep, max(24, count // 8), seed=int(rng.integers(2**31)),
                          tol=ctx.tol, budget=ctx.budget)
    if not pts:
        return np.zeros((0, n, n), dtype=complex)
    return np.array([p.mat for p in pts])


def _product_columns(d1: np.ndarray, d2: np.ndarray, ii: np.ndarray, jj: np.ndarray,
                     N: int) -> np.ndarray:
    """Coordinate columns of the selected product states; shape (N^2, len(ii))."""
    n1, n2 = d1.shape[1], d2.shape[1]
    prods = np.einsum("pab,pcd->pacbd", d1[ii], d2[jj]).reshape(len(ii), N, N)
    from .operators import _herm_basis_stack

    cols = np.einsum("ijk,pkj->pi", _herm_basis_stack(N), prods).real
    return cols.T


def _perturbed_pure(mat: np.ndarray, rng: np.random.Generator, scale: float) -> np.ndarray:
    lam, vec = np.linalg.eigh(mat)
    v = vec[:, -1] + scale * (rng.standard_normal(len(lam)) + 1j * rng.standard_normal(len(lam)))
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def convex_tensor_membership(rho: DensityOp, a: LatticeElement, b: LatticeElement,
                             ctx: BipartiteContext, budget: int | None = None,
                             seed: int = 0) -> TensorMembershipResult:
    """Decide membership of rho in the convex hull of products from a and b.

    Searches for a decomposition rho = sum_ij w_ij r1_i (x) r2_j with the
    factors feasible in a and b, by nonnegative least squares over sampled
    product dictionaries (seeded with the eigenbasis products of the
    reduced states) plus refinement rounds near active atoms.  A failed
    search is only upgraded to "outside" on sound evidence: the state
    falling outside the going-up span, or a partial-transpose violation;
    otherwise the result is inconclusive.
    """
    if budget is None:
        budget = ctx.budget
    n1, n2 = ctx.dims
    N = ctx.shape.total_dim
    if rho.dim != N:
        raise ValueError(f"state dim {rho.dim} does not match context {ctx.shape}")
    rng = np.random.default_rng(seed)
    side = max(60, min(500, budget // 10))
    d1 = _side_dictionary(a, n1, side, rng, ctx)
    d2 = _side_dictionary(b, n2, side, rng, ctx)

    # eigenbasis products of the reduced states are exact for products
    r1 = partial_trace(rho.op, ctx.shape, 1).mat
    r2 = partial_trace(rho.op, ctx.shape, 2).mat
    full_a = a is None or a.is_one
    full_b = b is None or b.is_one
    if full_a:
        _, v1 = np.linalg.eigh(r1)
        d1 = np.concatenate([d1, np.einsum("ip,jp->pij", v1, v1.conj())])
    if full_b:
        _, v2 = np.linalg.eigh(r2)
        d2 = np.concatenate([d2, np.einsum("ip,jp->pij", v2, v2.conj())])
    if d1.shape[0] == 0 or d2.shape[0] == 0:
        return TensorMembershipResult("inconclusive", None, None, "empty dictionary")

    target = coords_of(rho.mat, N)
    best = None
    for round_idx in range(3):
        k1, k2 = d1.shape[0], d2.shape[0]
        if k1 * k2 <= _MAX_PAIRS:
            ii, jj = np.meshgrid(np.arange(k1), np.arange(k2))
            ii, jj = ii.ravel(), jj.ravel()
        else:
            ii = rng.integers(0, k1, _MAX_PAIRS)
            jj = rng.integers(0, k2, _MAX_PAIRS)
            # always include the seeded tail products
            seed1 = np.arange(max(0, k1 - n1), k1)
            seed2 = np.arange(max(0, k2 - n2), k2)
            si, sj = np.meshgrid(seed1, seed2)
            ii = np.concatenate([ii, si.ravel()])
            jj = np.concatenate([jj, sj.ravel()])
        cols = _product_columns(d1, d2, ii, jj, N)
        x, res = nnls(cols, target)
        if best is None or res < best[0]:
            best = (res, x, ii.copy(), jj.copy())
        if res <= _RECON_TOL:
            break
        # refinement: resample near the active atoms
        active = np.nonzero(x > 1e-10)[0]
        add1, add2 = [], []
        for idx in active[:40]:
            for _ in range(4):
                add1.append(_perturbed_pure(d1[ii[idx]], rng, 0.1))
                add2.append(_perturbed_pure(d2[jj[idx]], rng, 0.1))
        if add1:
            d1 = np.concatenate([d1, np.array(add1)])
            d2 = np.concatenate([d2, np.array(add2)])

    res, x, ii, jj = best
    if res <= _RECON_TOL:
        keep = np.nonzero(x > 1e-12)[0]
        decomposition = tuple(
            (float(x[k]), HermOp(d1[ii[k]]), HermOp(d2[jj[k]])) for k in keep
        )
        return TensorMembershipResult("member", decomposition, float(res))

    # sound outside-certificates only
    big = psi(a, b, ctx)
    if not contains(big.rep, rho.op, ctx.tol, atol=ctx.tol.membership):
        return TensorMembershipResult("outside", None, float(res), "outside going-up span")
    pt_min = float(np.linalg.eigvalsh(partial_transpose(rho, ctx.shape))[0])
    if pt_min < -ctx.tol.psd:
        return TensorMembershipResult("outside", None, float(res),
                                      "partial transpose violation", functional_gap=pt_min)
    # separating functional against the sampled hull, as evidence only
    recon = coords_of(rho.mat, N) - _product_columns(d1, d2, ii, jj, N) @ x
    gap = float(np.linalg.norm(recon))
    return TensorMembershipResult("inconclusive", None, float(res),
                                  "no decomposition found", functional_gap=gap)


def is_separable(rho: DensityOp, ctx: BipartiteContext, budget: int | None = None,
                 decompose: bool = True, seed: int = 0) -> SeparabilityVerdict:
    """Classify a bipartite state as separable, entangled or inconclusive.

    A negative partial-transpose eigenvalue certifies entanglement.  A
    nonnegative partial transpose certifies separability exactly at 2x2
    and 2x3 (an imported standard result, beyond what the lattice layer
    itself provides); there a decomposition is attempted as a witness.
    In larger dimensions a positive partial transpose alone is
    inconclusive unless the decomposition search succeeds.
    """
    if budget is None:
        budget = ctx.budget
    N = ctx.shape.total_dim
    if rho.dim != N:
        raise ValueError(f"state dim {rho.dim} does not match context {ctx.shape}")
    pt_min = float(np.linalg.eigvalsh(partial_transpose(rho, ctx.shape))[0])
    if pt_min < -ctx.tol.psd:
        return SeparabilityVerdict("entangled", pt_min)
    ppt_exact = tuple(ctx.dims) in _PPT_EXACT_SHAPES
    decomposition = None
    residual = None
    note = ""
    if decompose:
        from .lattice import one_element

        ones = (one_element(ctx.factor_shape(1)), one_element(ctx.factor_shape(2)))
        member = convex_tensor_membership(rho, ones[0], ones[1], ctx, budget, seed)
        if member.status == "member":
            decomposition = member.decomposition
            residual = member.residual
        else:
            note = "decomposition search exhausted its budget"
    if ppt_exact:
        return SeparabilityVerdict("separable", pt_min, decomposition, residual,
                                   note or "positive partial transpose is exact here")
    if decomposition is not None:
        return SeparabilityVerdict("separable", pt_min, decomposition, residual)
    return SeparabilityVerdict("inconclusive", pt_min, None, None,
                               "positive partial transpose is not conclusive here")


@dataclass(frozen=True)
class PsiSlotReport:
    """Going-up with one slot fixed: lattice morphism facts and the complement gap."""

    meet_preserved: bool
    join_preserved: bool
    injective: bool
    neg_dominated: bool        # psi(neg a, r2) <= neg(psi(a, r2)) throughout
    neg_strict_some: bool      # ... strictly, for at least one sampled element
    witness_confirmed: bool    # explicit product state inside the gap
    pairs_checked: int


def psi_fixed_slot_report(sample, fixed: LatticeElement, ctx: BipartiteContext,
                          seed: int = 0) -> PsiSlotReport:
    """Verify that going up with a fixed second slot is an injective lattice morphism.

    Also exhibits the failure of complement preservation: with an atom in
    the fixed slot, the image of the complement sits strictly inside the
    complement of the image, witnessed by a product with a different
    second factor.
    """
    sample = list(sample)
    for el in sample:
        _check_factor(ctx, el, 1)
    _check_factor(ctx, fixed, 2)
    rng = np.random.default_rng(seed)

    meet_ok = join_ok = True
    inj_ok = True
    pairs = 0
    for i in range(len(sample)):
        for j in range(i + 1, len(sample)):
            x, y = sample[i], sample[j]
            pairs += 1
            lhs_m = psi(meet(x, y, ctx.tol, ctx.budget), fixed, ctx)
            rhs_m = meet(psi(x, fixed, ctx), psi(y, fixed, ctx), ctx.tol, ctx.budget)
            meet_ok &= same_element(lhs_m, rhs_m, ctx.tol)
            lhs_j = psi(join(x, y, ctx.tol, ctx.budget), fixed, ctx)
            rhs_j = join(psi(x, fixed, ctx), psi(y, fixed, ctx), ctx.tol, ctx.budget)
            join_ok &= same_element(lhs_j, rhs_j, ctx.tol)
            if same_element(psi(x, fixed, ctx), psi(y, fixed, ctx), ctx.tol):
                inj_ok &= same_element(x, y, ctx.tol)

    # complement gap with an atom in the fixed slot
    pts = sample_feasible(fixed.rep, 1, seed=int(rng.integers(2**31)),
                          tol=ctx.tol, budget=ctx.budget)
    rho2 = DensityOp(pts[0], ctx.tol)
    atom2 = atom(rho2, ctx.factor_shape(2), ctx.tol)
    neg_dom = True
    neg_strict = False
    witness_ok = False
    n2 = ctx.dims[1]
    for el in sample:
        na = neg(el, ctx.tol, ctx.budget)
        small = psi(na, atom2, ctx)
        big = neg(psi(el, atom2, ctx), ctx.tol, ctx.budget)
        neg_dom &= leq(small, big, ctx.tol)
        if leq(small, big, ctx.tol) and not leq(big, small, ctx.tol):
            neg_strict = True
            if not witness_ok and not na.is_zero:
                # a product with a different second factor lives in the gap
                p1 = sample_feasible(na.rep, 1, seed=int(rng.integers(2**31)),
                                     tol=ctx.tol, budget=ctx.budget)
                bump = np.eye(n2) / n2
                rho2p = HermOp(0.5 * rho2.mat + 0.5 * bump)
                if np.linalg.norm(rho2p.mat - rho2.mat) < 1e-9:
                    v = np.zeros(n2)
                    v[0] = 1.0
                    rho2p = HermOp(0.7 * rho2.mat + 0.3 * np.outer(v, v))
                if p1:
                    w = tensor(p1[0], rho2p)
                    witness_ok = contains(big.rep, w, ctx.tol, atol=ctx.tol.membership) and not contains(
                        small.rep, w, ctx.tol, atol=ctx.tol.membership
                    )
    return PsiSlotReport(meet_ok, join_ok, inj_ok, neg_dom, neg_strict, witness_ok, pairs)


@dataclass(frozen=True)
class TauMorphismReport:
    join_preserved: bool
    meet_dominated: bool
    meet_gap_strict: bool        # the two-product counterexample came out strict
    surjectivity_confirmed: bool
    non_injectivity_confirmed: bool
    pairs_checked: int


def tau_morphism_report(pairs, ctx: BipartiteContext, seed: int = 0) -> TauMorphismReport:
    """Verify the going-down morphism facts on sampled pairs of bipartite elements.

    Join is preserved; meet is only dominated, with the classic strict
    counterexample of two products sharing their first factor; every
    subsystem element is hit (constructively), by more than one element.
    """
    pairs = list(pairs)
    rng = np.random.default_rng(seed)
    join_ok = True
    meet_dom = True
    for x, y in pairs:
        for keep in (1, 2):
            tx, ty = tau(x, keep, ctx), tau(y, keep, ctx)
            lhs = tau(join(x, y, ctx.tol, ctx.budget), keep, ctx)
            rhs = join(tx, ty, ctx.tol, ctx.budget)
            join_ok &= same_element(lhs, rhs, ctx.tol)
            lhs_m = tau(meet(x, y, ctx.tol, ctx.budget), keep, ctx)
            rhs_m = meet(tx, ty, ctx.tol, ctx.budget)
            meet_dom &= leq(lhs_m, rhs_m, ctx.tol)

    n1, n2 = ctx.dims
    rho1 = _random_density_mat(rng, n1, n1)
    rho2 = _random_density_mat(rng, n2, n2)
    rho2p = _random_density_mat(rng, n2, n2)
    a = atom(DensityOp(HermOp(np.kron(rho1, rho2))), ctx.shape, ctx.tol)
    b = atom(DensityOp(HermOp(np.kron(rho1, rho2p))), ctx.shape, ctx.tol)
    m = meet(a, b, ctx.tol, ctx.budget)
    t_of_meet = tau(m, 1, ctx)
    meet_of_t = meet(tau(a, 1, ctx), tau(b, 1, ctx), ctx.tol, ctx.budget)
    meet_gap_strict = (
        m.is_zero
        and t_of_meet.is_zero
        and same_element(meet_of_t, atom(DensityOp(HermOp(rho1)), tol=ctx.tol), ctx.tol)
    )

    # constructive surjectivity and non-injectivity
    from .harness import random_element

    target = random_element(n1, 2, seed=int(rng.integers(2**31)), tol=ctx.tol)
    pre1 = psi(target, atom(DensityOp(HermOp(rho2)), tol=ctx.tol), ctx)
    pre2 = psi(target, atom(DensityOp(HermOp(rho2p)), tol=ctx.tol), ctx)
    surj = same_element(tau(pre1, 1, ctx), target, ctx.tol)
    noninj = (
        not same_element(pre1, pre2, ctx.tol)
        and same_element(tau(pre2, 1, ctx), target, ctx.tol)
    )
    return TauMorphismReport(join_ok, meet_dom, meet_gap_strict, surj, noninj, len(pairs))


def _random_density_mat(rng: np.random.Generator, n: int, rank: int) -> np.ndarray:
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    m = g @ g.conj().T
    return m / float(np.trace(m).real)


@dataclass(frozen=True)
class ImPsiReport:
    products_contained: bool        # r1 (x) r2 lands in the going-up element
    products_separable: bool
    basis_elements_product_form: bool
    separable_states_recovered: bool  # sampled separable states lie in a going-up image
    entangled_atom_excluded: bool     # an entangled atom equals no sampled image
    trials: int


def _operator_schmidt_rank_one(mat: np.ndarray, n1: int, n2: int, rtol: float = 1e-9) -> bool:
    r = mat.reshape(n1, n2, n1, n2).transpose(0, 2, 1, 3).reshape(n1 * n1, n2 * n2)
    s = np.linalg.svd(r, compute_uv=False)
    return s.size == 0 or (s[0] > 0 and (s.size < 2 or s[1] <= rtol * s[0]))


def im_psi_separability_report(ctx: BipartiteContext, trials: int = 30,
                               seed: int = 0) -> ImPsiReport:
    """Separability content of the going-up image, on sampled element pairs.

    Every image element meets the separable states (through a product of
    feasible factors), consists of combinations of product operators, and
    recovers every sampled separable state; an entangled atom is never an
    image element.
    """
    from .harness import random_element

    rng = np.random.default_rng(seed)
    n1, n2 = ctx.dims
    prod_in = prod_sep = basis_prod = True
    images = []
    for t in range(trials):
        a = random_element(n1, int(rng.integers(1, n1 + 1)), seed=int(rng.integers(2**31)), tol=ctx.tol)
        b = random_element(n2, int(rng.integers(1, n2 + 1)), seed=int(rng.integers(2**31)), tol=ctx.tol)
        image = psi(a, b, ctx)
        images.append(image)
        p1 = sample_feasible(a.rep, 1, seed=int(rng.integers(2**31)), tol=ctx.tol, budget=ctx.budget)
        p2 = sample_feasible(b.rep, 1, seed=int(rng.integers(2**31)), tol=ctx.tol, budget=ctx.budget)
        prod = tensor(p1[0], p2[0])
        prod_in &= contains(image.rep, prod, ctx.tol, atol=ctx.tol.membership)
        verdict = is_separable(DensityOp(prod, ctx.tol), ctx, decompose=False)
        prod_sep &= verdict.status == "separable" or (
            verdict.status == "inconclusive" and verdict.ppt_min_eigenvalue >= -ctx.tol.psd
        )
        basis_prod &= all(
            _operator_schmidt_rank_one(x.mat, n1, n2) for x in image.rep.basis
        )

    sep_ok = True
    for t in range(max(5, trials // 3)):
        k1, k2 = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        f1 = [_random_density_mat(rng, n1, int(rng.integers(1, n1 + 1))) for _ in range(k1)]
        f2 = [_random_density_mat(rng, n2, int(rng.integers(1, n2 + 1))) for _ in range(k2)]
        w = rng.dirichlet(np.ones(k1 * k2))
        rho = sum(
            w[i * k2 + j] * np.kron(f1[i], f2[j]) for i in range(k1) for j in range(k2)
        )
        l1 = LatticeElement(_span_of(f1, n1, ctx.tol), tol=ctx.tol, assume_good=True)
        l2 = LatticeElement(_span_of(f2, n2, ctx.tol), tol=ctx.tol, assume_good=True)
        sep_ok &= contains(psi(l1, l2, ctx).rep, HermOp(rho), ctx.tol, atol=ctx.tol.membership)

    # an entangled atom is not an image element
    d = min(n1, n2)
    v = np.zeros(n1 * n2, dtype=complex)
    for i in range(d):
        v[i * n2 + i] = 1.0 / np.sqrt(d)
    bell = atom(DensityOp.pure(v), ctx.shape, ctx.tol)
    excluded = float(np.linalg.eigvalsh(partial_transpose(bell.rep.basis[0], ctx.shape))[0]) < -ctx.tol.psd
    for image in images:
        excluded &= not same_element(bell, image, ctx.tol)
    return ImPsiReport(prod_in, prod_sep, basis_prod, sep_ok, excluded, trials)


def _span_of(mats, n, tol):
    from .subspaces import span as _span

    return _span([HermOp(m) for m in mats], tol)


@dataclass(frozen=True)
class SublatticeResult:
    elements: tuple
    truncated: bool
    closed_verified: bool


def generate_sublattice(seeds, cap: int = 200, tol: Tolerances = DEFAULT_TOL,
                        budget: int = DEFAULT_BUDGET) -> SublatticeResult:
    """Close a seed set of elements under meet and join, up to a size cap.

    Deduplicates by mutual order; if the cap is hit the result is flagged
    truncated instead of failing.  When untruncated, one full closing pass
    re-verifies closedness.
    """
    elements: list[LatticeElement] = []

    def find(el) -> int:
        for i, e in enumerate(elements):
            if same_element(e, el, tol):
                return i
        return -1

    for s in seeds:
        if find(s) < 0:
            elements.append(s)
    truncated = False
    pending = True
    while pending and not truncated:
        pending = False
        k = len(elements)
        for i in range(k):
            for j in range(i + 1, k):
                for combo in (meet, join):
                    new = combo(elements[i], elements[j], tol, budget)
                    if find(new) < 0:
                        elements.append(new)
                        pending = True
                        if len(elements) > cap:
                            truncated = True
                            break
                if truncated:
                    break
            if truncated:
                break

    closed = False
    if not truncated:
        closed = True
        k = len(elements)
        for i in range(k):
            for j in range(i + 1, k):
                if find(meet(elements[i], elements[j], tol, budget)) < 0:
                    closed = False
                if find(join(elements[i], elements[j], tol, budget)) < 0:
                    closed = False
    return SublatticeResult(tuple(elements), truncated, closed)
