"""Geometry of the density body inside an operator subspace.

For a subspace S of Hermitian operators, the object of interest is the
slice K = {rho in S : tr(rho) = 1, rho >= 0}.  This module decides whether
K is empty, finds the support projector of its maximal-rank elements by
certificate-driven facial reduction, and from that computes the smallest
subspace G with G = span(G intersect densities) and the same slice as S
(the closed form of S).  A self-contained sampling oracle cross-checks the
reduction path on small instances.

The inner solver is projected supergradient ascent on the concave map
rho -> lambda_min(rho) over the affine slice, with 1/sqrt(k) steps and
iterate averaging.  Whenever the ascent flattens out below the interior
threshold, a positive-semidefinite certificate orthogonal to the whole
slice is extracted from the accumulated active eigenvectors; a valid
certificate soundly shrinks the support (every feasible point must live
in its kernel), and the problem restarts on the smaller face.  Emptiness
is declared only from a deeply negative best value or a full-rank
certificate; the band in between surfaces as an explicit error.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .operators import (
    DEFAULT_BUDGET,
    DEFAULT_TOL,
    DensityOp,
    HermOp,
    Tolerances,
    _herm_basis_stack,
)
from .subspaces import (
    HermSubspace,
    coords_of,
    op_from_coords,
    ops_from_coords,
    trace_vector,
)

__all__ = [
    "FeasibilityResult",
    "FaceCertificate",
    "UndecidedFeasibilityError",
    "FacialReductionError",
    "OracleInconclusiveError",
    "feasible_point",
    "minimal_face",
    "good_representative",
    "brute_force_span",
    "sample_feasible",
]

_ALPHA0 = 0.5
_CHUNKS = (300, 700, 1500, 2500)
_ORACLE_EPS = 1e-12       # acceptance cutoff for oracle membership
_ORACLE_SPAN_CUT = 1e-4   # relative singular-value cutoff for the oracle span


class UndecidedFeasibilityError(RuntimeError):
    """Best value landed in the ambiguous band; a larger budget may resolve it."""

    def __init__(self, best_lambda_min: float, budget: int, round_index: int = 0):
        super().__init__(
            f"feasibility undecided after budget {budget} in round {round_index}: "
            f"best value {best_lambda_min:.3e} lies in the ambiguous band"
        )
        self.best_lambda_min = best_lambda_min
        self.budget = budget
        self.round_index = round_index


class FacialReductionError(RuntimeError):
    """The inner ascent flattened out but no valid certificate was found."""

    def __init__(self, round_index: int, best_value: float, message: str = ""):
        super().__init__(
            f"facial reduction did not converge in round {round_index} "
            f"(best value {best_value:.3e}){': ' + message if message else ''}"
        )
        self.round_index = round_index
        self.best_value = best_value


class OracleInconclusiveError(RuntimeError):
    """The sampling oracle accepted no (or too few) feasible points."""


@dataclass(frozen=True)
class FeasibilityResult:
    status: str                    # "feasible" or "empty"
    witness: DensityOp | None      # present iff feasible
    best_lambda_min: float

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


@dataclass(frozen=True)
class FaceCertificate:
    """Support of the maximal face of the slice, with its audit trail."""

    support: HermOp                      # projector onto the common support
    reduction_steps: tuple[HermOp, ...]  # PSD certificates used to shrink
    interior_point: DensityOp            # relative-interior witness


class _SliceProblem:
    """Affine slice of a subspace, restricted to a support and compressed onto it."""

    def __init__(self, sub: HermSubspace, support_cols: np.ndarray, tol: Tolerances):
        n = sub.ambient_dim
        self.n = n
        self.tol = tol
        self.U = support_cols
        self.r = support_cols.shape[1]
        self.empty_slice = False
        if self.r == 0 or sub.dim == 0:
            self.empty_slice = True
            return

        rows = sub.coords
        if self.r < n:
            # restrict to {a in S : a = P a P}; coefficient vectors x must
            # satisfy sum_b x_b (m_b - P m_b P) = 0, i.e. lie in the left-null
            # space of the stacked defect coordinates
            mats = ops_from_coords(rows, n)
            proj = support_cols @ support_cols.conj().T
            defect = mats - proj @ mats @ proj
            dcoords = np.einsum("ijk,bkj->bi", _herm_basis_stack(n), defect).real
            uu, ss, _ = np.linalg.svd(dcoords, full_matrices=True)
            ssmax = ss[0] if ss.size else 0.0
            rk = int(np.sum(ss > 1e-8 * max(ssmax, 1.0)))
            rows = uu[:, rk:].T @ rows
        self.sub_rows = rows  # orthonormal rows spanning {a in S : supported in P}

        tvec = trace_vector(n)
        tau = rows @ tvec
        tau_norm = float(np.linalg.norm(tau))
        if tau_norm <= 1e-9:
            self.empty_slice = True
            return

        v0 = rows.T @ (tau / tau_norm**2)
        xnull_tau = _null_rows_of_vector(tau)
        wrows = xnull_tau @ rows
        self.v0_coords = v0
        self.w_coords = wrows
        self.m = wrows.shape[0]

        self.V0 = op_from_coords(v0, n)
        self.W = ops_from_coords(wrows, n) if self.m else np.zeros((0, n, n), dtype=complex)
        U = support_cols
        self.V0c = U.conj().T @ self.V0 @ U
        self.Wc = (
            np.einsum("ab,mbc,cd->mad", U.conj().T, self.W, U)
            if self.m
            else np.zeros((0, self.r, self.r), dtype=complex)
        )
        # orthonormal rows spanning the slice's linear span in compressed coordinates
        slice_rows = [coords_of(self.V0c, self.r) / np.linalg.norm(coords_of(self.V0c, self.r))]
        for i in range(self.m):
            slice_rows.append(coords_of(self.Wc[i], self.r))
        self.slice_span_rows = np.array(slice_rows)

    def point(self, x: np.ndarray) -> np.ndarray:
        """Ambient matrix of the slice point with ascent coordinates x."""
        c = self.v0_coords + (x @ self.w_coords if self.m else 0.0)
        return op_from_coords(c, self.n)

    def point_compressed(self, x: np.ndarray) -> np.ndarray:
        if self.m:
            return self.V0c + np.tensordot(x, self.Wc, axes=1)
        return self.V0c


def _null_rows_of_vector(v: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning the orthogonal complement of a single vector."""
    v = v / np.linalg.norm(v)
    _, _, vt = np.linalg.svd(v.reshape(1, -1), full_matrices=True)
    return vt[1:]


@dataclass
class _AscentState:
    x: np.ndarray
    best_f: float
    best_x: np.ndarray
    best_cluster: np.ndarray | None
    tail: deque
    x_sum: np.ndarray
    iters: int
    stalled: bool
    near_feasible: list


def _eig_cluster(lam: np.ndarray, vec: np.ndarray) -> np.ndarray:
    spread = float(lam[-1] - lam[0])
    width = max(1e-9, 1e-6 * spread)
    cols = vec[:, lam <= lam[0] + width]
    return cols @ cols.conj().T


def _ascent_chunk(prob: _SliceProblem, iters: int, state: _AscentState | None,
                  tol: Tolerances, tail_maxlen: int = 50) -> _AscentState:
    """Run a block of supergradient steps, tracking the best iterate and tail clusters."""
    m = prob.m
    if state is None:
        x = np.zeros(m)
        M = prob.point_compressed(x)
        lam, vec = np.linalg.eigh(M)
        state = _AscentState(
            x=x,
            best_f=float(lam[0]),
            best_x=x.copy(),
            best_cluster=_eig_cluster(lam, vec),
            tail=deque(maxlen=tail_maxlen),
            x_sum=x.copy(),
            iters=1,
            stalled=False,
            near_feasible=[],
        )
        if state.best_f >= -tol.infeasible:
            state.near_feasible.append((state.best_f, M))
    state.stalled = False
    check_every = 120
    last_check_best = state.best_f
    exit_interior = 2.0 * tol.interior
    for _ in range(iters):
        k = state.iters
        M = prob.point_compressed(state.x)
        lam, vec = np.linalg.eigh(M)
        f = float(lam[0])
        cluster = _eig_cluster(lam, vec)
        state.tail.append(cluster)
        if f > state.best_f:
            state.best_f = f
            state.best_x = state.x.copy()
            state.best_cluster = cluster
        if f >= -tol.psd and len(state.near_feasible) < 12:
            state.near_feasible.append((f, M))
        if state.best_f > exit_interior:
            state.iters += 1
            break
        v = vec[:, 0]
        g = np.einsum("ijk,j,k->i", prob.Wc, v.conj(), v).real
        state.x = state.x + (_ALPHA0 / np.sqrt(k)) * g
        state.x_sum = state.x_sum + state.x
        state.iters += 1
        if state.iters % check_every == 0:
            if state.best_f - last_check_best < 1e-10:
                state.stalled = True
                break
            last_check_best = state.best_f
    # Polyak average as an extra candidate
    x_avg = state.x_sum / state.iters
    lam_avg = np.linalg.eigvalsh(prob.point_compressed(x_avg))
    if float(lam_avg[0]) > state.best_f:
        state.best_f = float(lam_avg[0])
        state.best_x = x_avg.copy()
        lam, vec = np.linalg.eigh(prob.point_compressed(x_avg))
        state.best_cluster = _eig_cluster(lam, vec)
    return state


def _project_perp_slice(mat: np.ndarray, prob: _SliceProblem) -> np.ndarray:
    c = coords_of(mat, prob.r)
    c = c - prob.slice_span_rows.T @ (prob.slice_span_rows @ c)
    return op_from_coords(c, prob.r)


def _extract_certificate(prob: _SliceProblem, candidates, tol: Tolerances):
    """Try to turn an eigenvector aggregate into a PSD certificate orthogonal to the slice.

    Returns ("shrink", kernel_cols, Z), ("empty", Z), or None.  Soundness:
    a nonzero Z >= 0 that is orthogonal to the linear span of the whole
    slice annihilates every feasible point, so feasible supports lie in
    ker(Z); a strictly positive such Z leaves no room at all.
    """
    for cand in candidates:
        if cand is None:
            continue
        scale = float(np.linalg.eigvalsh(cand)[-1]) if cand.size else 0.0
        if scale <= 0.0:
            continue
        Z = cand / scale
        ok = False
        for _ in range(80):
            Z = _project_perp_slice(Z, prob)
            lam, vec = np.linalg.eigh(Z)
            lmax = float(lam[-1])
            if lmax <= 1e-10:
                break
            if float(lam[0]) >= -1e-12 * lmax:
                ok = True
                break
            Z = (vec * np.clip(lam, 0.0, None)) @ vec.conj().T
        if not ok:
            continue
        kernel_mask = lam <= 1e-6 * lmax
        d = int(np.sum(kernel_mask))
        if d == prob.r:
            continue
        # sanity: certificate must annihilate every near-feasible iterate seen
        bad = False
        for f_hat, M_hat in getattr(prob, "_near_feasible", []):
            if abs(float(np.einsum("ij,ji->", Z, M_hat).real)) > max(1e-7, 10 * abs(f_hat)):
                bad = True
                break
        if bad:
            continue
        Z = Z / float(np.trace(Z).real)
        if d == 0:
            return ("empty", Z)
        return ("shrink", vec[:, kernel_mask], Z)
    return None


@dataclass(frozen=True)
class _ReductionOutcome:
    status: str                       # "feasible" or "empty"
    support_cols: np.ndarray | None   # (n, r) orthonormal columns
    interior: np.ndarray | None       # ambient matrix of the interior point
    direction_rows: np.ndarray | None # traceless directions inside the final face
    steps: tuple
    best_value: float


def _facial_reduction(sub: HermSubspace, tol: Tolerances, budget: int) -> _ReductionOutcome:
    n = sub.ambient_dim
    support = np.eye(n, dtype=complex)
    steps: list[HermOp] = []
    best_seen = -np.inf

    for round_index in range(n + 1):
        prob = _SliceProblem(sub, support, tol)
        if prob.empty_slice:
            return _ReductionOutcome("empty", None, None, None, tuple(steps), best_seen)

        if prob.m == 0:
            lam, vec = np.linalg.eigh(prob.V0c)
            f = float(lam[0])
            best_seen = max(best_seen, f)
            if f >= -tol.psd:
                keep = lam > tol.interior
                final = support @ vec[:, keep]
                return _ReductionOutcome(
                    "feasible", final, prob.V0, prob.w_coords, tuple(steps), f
                )
            if f < -tol.infeasible:
                return _ReductionOutcome("empty", None, None, None, tuple(steps), best_seen)
            raise UndecidedFeasibilityError(f, budget, round_index)

        state = None
        used = 0
        chunk_idx = 0
        shrunk = False
        while used < budget:
            size = min(_CHUNKS[min(chunk_idx, len(_CHUNKS) - 1)], budget - used)
            chunk_idx += 1
            state = _ascent_chunk(prob, size, state, tol, tail_maxlen=max(50, budget // 10))
            used = state.iters
            best_seen = max(best_seen, state.best_f)
            prob._near_feasible = state.near_feasible
            if state.best_f > 2.0 * tol.interior:
                break
            tail_agg = (
                np.mean(np.array(state.tail), axis=0) if len(state.tail) else None
            )
            attempt = _extract_certificate(prob, [tail_agg, state.best_cluster], tol)
            if attempt is not None:
                kind = attempt[0]
                if kind == "empty":
                    steps.append(HermOp(support @ attempt[1] @ support.conj().T))
                    return _ReductionOutcome(
                        "empty", None, None, None, tuple(steps), best_seen
                    )
                _, kernel_cols, Z = attempt
                steps.append(HermOp(support @ Z @ support.conj().T))
                support = support @ kernel_cols
                shrunk = True
                break
            if state.stalled:
                break
        if shrunk:
            continue

        # classify the round's outcome
        assert state is not None
        f = state.best_f
        if f > tol.interior:
            interior = prob.point(state.best_x)
            return _ReductionOutcome(
                "feasible",
                support,
                interior,
                prob.w_coords,
                tuple(steps),
                f,
            )
        if f < -tol.infeasible:
            return _ReductionOutcome("empty", None, None, None, tuple(steps), best_seen)
        if f < -tol.psd:
            raise UndecidedFeasibilityError(f, budget, round_index)
        raise FacialReductionError(round_index, f, "flat optimum without certificate")

    raise FacialReductionError(n + 1, best_seen, "support did not stabilize")


def feasible_point(s: HermSubspace, tol: Tolerances = DEFAULT_TOL,
                   budget: int = DEFAULT_BUDGET) -> FeasibilityResult:
    """Decide whether the trace-one positive slice of s is nonempty.

    Feasible results carry a witness density in s.  Emptiness is reported
    when the slice has no trace-one point at all or the certified best
    value is deeply negative; the ambiguous band raises
    :class:`UndecidedFeasibilityError`.
    """
    if s.dim == 0:
        return FeasibilityResult("empty", None, -np.inf)
    out = _facial_reduction(s, tol, budget)
    if out.status == "empty":
        return FeasibilityResult("empty", None, float(out.best_value))
    witness = DensityOp(HermOp(out.interior), tol)
    lam_full = float(np.linalg.eigvalsh(out.interior)[0])
    return FeasibilityResult("feasible", witness, lam_full)


def minimal_face(s: HermSubspace, tol: Tolerances = DEFAULT_TOL,
                 budget: int = DEFAULT_BUDGET) -> FaceCertificate:
    """Support projector of a maximum-rank element of the slice of s."""
    if s.dim == 0:
        raise ValueError("zero subspace has an empty slice; no face to compute")
    out = _facial_reduction(s, tol, budget)
    if out.status == "empty":
        raise ValueError("slice is empty; no face to compute")
    U = out.support_cols
    proj = HermOp(U @ U.conj().T)
    return FaceCertificate(
        support=proj,
        reduction_steps=tuple(out.steps),
        interior_point=DensityOp(HermOp(out.interior), tol),
    )


def good_representative(s: HermSubspace, tol: Tolerances = DEFAULT_TOL,
                        budget: int = DEFAULT_BUDGET) -> HermSubspace:
    """Smallest subspace spanned by the slice of s (the closed form of s).

    Returns the zero subspace when the slice is empty; otherwise the span
    of one relative-interior point together with all traceless directions
    of s supported inside the minimal face.  The result G satisfies
    G <= s, has the same slice, and is a fixpoint of this map.
    """
    n = s.ambient_dim
    if s.dim == 0:
        return s
    out = _facial_reduction(s, tol, budget)
    if out.status == "empty":
        return HermSubspace.zero(n)
    rows = [coords_of(out.interior, n)]
    if out.direction_rows is not None and out.direction_rows.shape[0]:
        rows = [out.direction_rows, np.array(rows)]
        stacked = np.vstack(rows)
    else:
        stacked = np.array(rows)
    u, sv, vt = np.linalg.svd(stacked, full_matrices=False)
    rank = int(np.sum(sv > tol.rank * sv[0]))
    return HermSubspace._from_coords(vt[:rank], n)


def _feasible_mask(points: np.ndarray, eps: float) -> np.ndarray:
    """Batched PSD test: smallest eigenvalue above -eps."""
    lam = np.linalg.eigvalsh(points)
    return lam[..., 0] >= -eps


def _golden_max(fun, lo: float, hi: float, iters: int = 60) -> float:
    """Golden-section maximizer of a unimodal-ish function on [lo, hi]."""
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = fun(d)
    return (a + b) / 2.0


def brute_force_span(s: HermSubspace, samples: int = 20000, seed: int = 0,
                     tol: Tolerances = DEFAULT_TOL, min_accepted: int = 1) -> HermSubspace:
    """Sampling oracle for :func:`good_representative` on small instances.

    Rejection-samples the affine trace-one slice of s at several scales,
    enriches the accepted set with derivative-free coordinate ascent on
    the smallest eigenvalue and with exact bisection extremes along lines
    through accepted points, and returns the span of everything accepted.
    Acceptance is near-exact (eigenvalues above -1e-12), and the span cut
    is deliberately coarse so that tolerance blur cannot manufacture
    dimensions; directions thinner than about 1e-4 are not resolved.

    ``min_accepted`` applies to the sampling path; a zero-dimensional
    slice is decided by one exact eigenvalue evaluation instead.

    Deliberately independent of the facial-reduction path: only plain
    slice parametrization, batched eigenvalue tests and bisection.
    """
    n = s.ambient_dim
    if s.dim == 0:
        return HermSubspace.zero(n)
    rows = s.coords
    tvec = trace_vector(n)
    tau = rows @ tvec
    tau_norm = float(np.linalg.norm(tau))
    if tau_norm <= 1e-9:
        return HermSubspace.zero(n)
    v0 = rows.T @ (tau / tau_norm**2)
    wrows = _null_rows_of_vector(tau) @ rows
    m = wrows.shape[0]
    if m > 6:
        raise ValueError(f"slice direction space has dimension {m} > 6")

    V0 = op_from_coords(v0, n)
    lam_v0 = float(np.linalg.eigvalsh(V0)[0])
    if m == 0:
        if lam_v0 >= -tol.psd:
            return HermSubspace._from_coords(v0.reshape(1, -1) / np.linalg.norm(v0), n)
        return HermSubspace.zero(n)

    Wm = ops_from_coords(wrows, n)
    rng = np.random.default_rng(seed)

    def lam_min_at(x):
        return float(np.linalg.eigvalsh(V0 + np.tensordot(x, Wm, axes=1))[0])

    accepted_x: list[np.ndarray] = []
    accepted_total = 0
    scales = (1e-7, 1e-5, 1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0)
    attempts = 0
    batch_size = 1024
    scale_idx = 0
    while attempts < samples:
        b = min(batch_size, samples - attempts)
        xs = rng.standard_normal((b, m)) * scales[scale_idx % len(scales)]
        scale_idx += 1
        pts = V0[None, :, :] + np.tensordot(xs, Wm, axes=1)
        mask = _feasible_mask(pts, _ORACLE_EPS)
        hits = xs[mask]
        accepted_total += int(mask.sum())
        if hits.shape[0]:
            accepted_x.extend(hits[: 256])
        attempts += b

    # derivative-free coordinate ascent on lambda_min, multi-start
    starts = [np.zeros(m)]
    starts += [x.copy() for x in accepted_x[:4]]
    starts += [rng.standard_normal(m) * 0.3 for _ in range(4)]
    for x in starts:
        x = x.copy()
        for _ in range(2):
            for i in range(m):
                def f1(t, i=i, x=x):
                    y = x.copy()
                    y[i] = t
                    return lam_min_at(y)
                x[i] = _golden_max(f1, x[i] - 2.0, x[i] + 2.0)
        if lam_min_at(x) >= -_ORACLE_EPS:
            accepted_x.append(x)
            accepted_total += 1

    if accepted_total < max(1, min_accepted):
        raise OracleInconclusiveError(
            f"accepted {accepted_total} feasible samples (needed {max(1, min_accepted)})"
        )

    # exact line extremes from accepted points along coordinate and random directions
    bases = accepted_x[:6]
    dirs = [row for row in np.eye(m)]
    dirs += [rng.standard_normal(m) for _ in range(6)]
    extremes: list[np.ndarray] = []
    for base in bases:
        for d in dirs:
            d = d / np.linalg.norm(d)
            for sign in (1.0, -1.0):
                step = sign * d
                t_lo, t_hi = 0.0, 1.0
                grew = 0
                while lam_min_at(base + t_hi * step) >= -_ORACLE_EPS and grew < 40:
                    t_lo = t_hi
                    t_hi *= 2.0
                    grew += 1
                if grew >= 40:
                    t_lo = t_hi  # unbounded direction; keep the far point
                else:
                    for _ in range(60):
                        mid = (t_lo + t_hi) / 2.0
                        if lam_min_at(base + mid * step) >= -_ORACLE_EPS:
                            t_lo = mid
                        else:
                            t_hi = mid
                extremes.append(base + t_lo * step)
    accepted_x.extend(extremes)
    accepted_total += len(extremes)

    coords = [v0 + x @ wrows for x in accepted_x]
    coords.append(v0)
    stacked = np.array(coords)
    u, sv, vt = np.linalg.svd(stacked, full_matrices=False)
    rank = int(np.sum(sv > _ORACLE_SPAN_CUT * sv[0]))
    return HermSubspace._from_coords(vt[:rank], n)


def sample_feasible(s: HermSubspace, count: int, seed: int = 0,
                    tol: Tolerances = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> list[HermOp]:
    """Densities inside s: the interior point, boundary extremes and mixtures.

    Returns an empty list when the slice is empty.  Points are exact slice
    members with spectrum above -1e-12.
    """
    if s.dim == 0:
        return []
    out = _facial_reduction(s, tol, budget)
    if out.status == "empty":
        return []
    n = s.ambient_dim
    center = out.interior
    pts = [center]
    rng = np.random.default_rng(seed)
    wrows = out.direction_rows
    m = wrows.shape[0] if wrows is not None else 0
    if m:
        Wm = ops_from_coords(wrows, n)

        def lam_min_at(mat):
            return float(np.linalg.eigvalsh(mat)[0])

        tries = 0
        while len(pts) < count and tries < 8 * count:
            tries += 1
            d = rng.standard_normal(m)
            D = np.tensordot(d / np.linalg.norm(d), Wm, axes=1)
            t_lo, t_hi = 0.0, 1.0
            grew = 0
            while lam_min_at(center + t_hi * D) >= -1e-12 and grew < 40:
                t_lo = t_hi
                t_hi *= 2.0
                grew += 1
            if grew < 40:
                for _ in range(50):
                    mid = (t_lo + t_hi) / 2.0
                    if lam_min_at(center + mid * D) >= -1e-12:
                        t_lo = mid
                    else:
                        t_hi = mid
            frac = rng.choice([1.0, 0.5, rng.uniform()])
            pts.append(center + frac * t_lo * D)
    while len(pts) < count:
        # convex mixtures of what we already have
        w = rng.dirichlet(np.ones(len(pts)))
        pts.append(np.einsum("i,ijk->jk", w, np.array(pts)))
    return [HermOp(p) for p in pts[:count]]
