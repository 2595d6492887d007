"""Deterministic generators, property suites, the subsystem demo and volume estimator.

Every randomized trial derives its seed as ``mix64(root_seed, trial_index)``
with the published mixing function below, so results are reproducible and
independent of any execution order, and every failing check carries enough
payload to replay the exact operands.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import serialize
from .bipartite import (
    BipartiteContext,
    im_psi_separability_report,
    is_separable,
    partial_transpose,
    psi,
    psi_fixed_slot_report,
    tau,
    tau_morphism_report,
    generate_sublattice,
    convex_tensor_membership,
)
from .lattice import (
    LatticeElement,
    atom,
    check_modular,
    element_from_densities,
    is_atom,
    join,
    leq,
    meet,
    neg,
    one_element,
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
    is_pure,
    partial_trace,
    tensor,
)
from .vn_lattice import VNElement, compare_ops, face_embed, vn_join, vn_leq, vn_meet

__all__ = [
    "mix64",
    "random_density",
    "random_element",
    "random_pure",
    "random_entangled_pure",
    "SuiteConfig",
    "CheckResult",
    "Report",
    "SUITES",
    "run_suite",
    "improper_mixture_demo",
    "separable_volume",
    "VolumeEstimate",
]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(seed: int, index: int) -> int:
    """SplitMix64 finalizer of seed + (index+1) * golden ratio; the trial-seed rule."""
    z = (int(seed) + (int(index) + 1) * _GOLDEN) & _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


def random_density(n: int, rank: int, seed: int, tol: Tolerances = DEFAULT_TOL) -> DensityOp:
    """Random density of the given rank: G G*/tr with G an n x rank complex Gaussian."""
    if not 1 <= rank <= n:
        raise ValueError(f"rank must be in [1, {n}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    m = g @ g.conj().T
    return DensityOp(HermOp(m / float(np.trace(m).real), tol), tol)


def random_pure(n: int, seed: int, tol: Tolerances = DEFAULT_TOL) -> DensityOp:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return DensityOp.pure(v, tol)


def random_element(n: int, k: int, seed: int, tol: Tolerances = DEFAULT_TOL,
                   shape: SpaceShape | None = None) -> LatticeElement:
    """Element spanned by k independent random densities (closed by construction)."""
    if not 1 <= k <= n * n:
        raise ValueError(f"k must be in [1, {n * n}], got {k}")
    rhos = [random_density(n, 1 + mix64(seed, i) % n, mix64(seed, i)) for i in range(k)]
    return element_from_densities(rhos, shape, tol)


def random_entangled_pure(n1: int, n2: int, seed: int, tol: Tolerances = DEFAULT_TOL,
                          attempts: int = 64) -> DensityOp:
    """Haar-random pure bipartite state whose reduction is not pure."""
    shape = SpaceShape((n1, n2))
    for i in range(attempts):
        rho = random_pure(n1 * n2, mix64(seed, i), tol)
        reduced = partial_trace(rho, shape, 1)
        if not is_pure(reduced, tol):
            return rho
    raise RuntimeError(f"no entangled pure state found in {attempts} attempts; re-seed")


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    dims: SpaceShape
    trials: int = 50
    seed: int = 0
    tol: Tolerances = DEFAULT_TOL
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.dims.total_dim > 9:
            raise ValueError(f"total Hilbert dimension {self.dims.total_dim} > 9 unsupported")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    counterexample: dict | None = None


@dataclass(frozen=True)
class Report:
    suite: str
    config: dict
    checks: tuple
    wall_time_s: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                    "counterexample": c.counterexample,
                }
                for c in self.checks
            ],
            "wall_time_s": self.wall_time_s,
        }

    def render_text(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'} "
                 f"({self.wall_time_s:.2f}s)"]
        for c in self.checks:
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}"
                         + (f" - {c.detail}" if c.detail else ""))
            if c.counterexample is not None:
                lines.append(f"         counterexample: {c.counterexample}")
        return "\n".join(lines)


def _config_echo(cfg: SuiteConfig) -> dict:
    return {
        "suite": cfg.suite,
        "dims": str(cfg.dims),
        "trials": cfg.trials,
        "seed": cfg.seed,
        "budget": cfg.budget,
    }


def _element_payload(name: str, el: LatticeElement) -> dict:
    return {name: serialize.element_to_json(el)}


def _suite_modularity(cfg: SuiteConfig) -> list[CheckResult]:
    n = cfg.dims.total_dim
    kmax = min(4, n * n)
    checks = []
    failures = bad_ineq = bad_closed = 0
    payload = None
    for t in range(cfg.trials):
        s = mix64(cfg.seed, t)
        a = random_element(n, 1 + s % kmax, mix64(s, 1), cfg.tol)
        b = random_element(n, 1 + (s // 7) % kmax, mix64(s, 2), cfg.tol)
        y = random_element(n, 1 + (s // 31) % kmax, mix64(s, 3), cfg.tol)
        c = join(a, y, cfg.tol, cfg.budget)
        rep = check_modular(a, b, c, cfg.tol, cfg.budget)
        if not leq(rep.lhs, rep.rhs, cfg.tol):
            bad_ineq += 1
        if not rep.holds:
            failures += 1
            raw = intersect_subspaces(b.rep, c.rep, cfg.tol)
            from .convex_geometry import good_representative as _good

            if same_subspace(_good(raw, cfg.tol, cfg.budget), raw, cfg.tol,
                             atol=cfg.tol.membership):
                bad_closed += 1  # failure even though the meet dropped nothing
            if payload is None:
                payload = {"trial": t, "seed": s}
                payload.update(_element_payload("a", a))
                payload.update(_element_payload("b", b))
                payload.update(_element_payload("c", c))
    checks.append(CheckResult(
        "modular-law-random-triples", failures == 0,
        f"{cfg.trials - failures}/{cfg.trials} triples with a <= c"
        + ("" if failures == 0 else
           "; every failure comes from a meet whose subspace intersection "
           "holds no state"), payload))
    checks.append(CheckResult(
        "modular-inequality-random-triples", bad_ineq == 0,
        f"{cfg.trials - bad_ineq}/{cfg.trials} satisfy lhs <= rhs"))
    checks.append(CheckResult(
        "modular-equality-under-closed-meets", bad_closed == 0,
        "no failures among triples whose raw meet is already state-spanned"))
    a = random_element(n, 2, mix64(cfg.seed, 10**6), cfg.tol)
    b = random_element(n, 2, mix64(cfg.seed, 10**6 + 1), cfg.tol)
    bottom, top = zero_element(cfg.dims), one_element(cfg.dims)
    rep0 = check_modular(bottom, b, a, cfg.tol, cfg.budget)
    both_bc = same_element(rep0.lhs, meet(b, a, cfg.tol, cfg.budget), cfg.tol)
    rep1 = check_modular(a, b, top, cfg.tol, cfg.budget)
    both_ab = same_element(rep1.lhs, join(a, b, cfg.tol, cfg.budget), cfg.tol)
    checks.append(CheckResult("modular-bottom-edge", rep0.holds and both_bc,
                              "a = bottom collapses both sides to b ^ c"))
    checks.append(CheckResult("modular-top-edge", rep1.holds and both_ab,
                              "c = top collapses both sides to a v b"))
    return checks


def _suite_negation(cfg: SuiteConfig) -> list[CheckResult]:
    n = cfg.dims.total_dim
    checks = []
    mixed = atom(DensityOp(HermOp(np.eye(n) / n)), cfg.dims, cfg.tol)
    nn = neg(neg(mixed, cfg.tol, cfg.budget), cfg.tol, cfg.budget)
    counterexample_ok = (
        neg(mixed, cfg.tol, cfg.budget).is_zero
        and nn.is_one
        and not same_element(nn, mixed, cfg.tol)
    )
    checks.append(CheckResult(
        "double-negation-counterexample", counterexample_ok,
        f"neg(neg(maximally mixed atom)) is the top element at n={n}, not the atom"))
    bad_nc = bad_cp = bad_wdn = 0
    payload = None
    for t in range(cfg.trials):
        s = mix64(cfg.seed, t)
        a = random_element(n, 1 + s % 3, mix64(s, 1), cfg.tol)
        b = join(a, random_element(n, 1 + s % 2, mix64(s, 2), cfg.tol), cfg.tol, cfg.budget)
        if not meet(a, neg(a, cfg.tol, cfg.budget), cfg.tol, cfg.budget).is_zero:
            bad_nc += 1
            payload = payload or {"trial": t, **_element_payload("a", a)}
        if not leq(neg(b, cfg.tol, cfg.budget), neg(a, cfg.tol, cfg.budget), cfg.tol):
            bad_cp += 1
            payload = payload or {"trial": t, **_element_payload("a", a),
                                  **_element_payload("b", b)}
        if not leq(a, neg(neg(a, cfg.tol, cfg.budget), cfg.tol, cfg.budget), cfg.tol):
            bad_wdn += 1
            payload = payload or {"trial": t, **_element_payload("a", a)}
    checks.append(CheckResult("non-contradiction", bad_nc == 0,
                              f"{cfg.trials - bad_nc}/{cfg.trials} pairs", payload if bad_nc else None))
    checks.append(CheckResult("contraposition", bad_cp == 0,
                              f"{cfg.trials - bad_cp}/{cfg.trials} nested pairs", payload if bad_cp else None))
    checks.append(CheckResult("weak-double-negation", bad_wdn == 0,
                              f"{cfg.trials - bad_wdn}/{cfg.trials} elements", payload if bad_wdn else None))
    return checks


def _random_projector(n: int, rank: int, seed: int) -> VNElement:
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return VNElement.from_columns(g)


def _suite_vn_embedding(cfg: SuiteConfig) -> list[CheckResult]:
    n = cfg.dims.total_dim
    checks = []
    bad = {"meet": 0, "join": 0, "neg": 0, "nested": 0, "order": 0}
    payload = None
    for t in range(cfg.trials):
        s = mix64(cfg.seed, t)
        p = _random_projector(n, 1 + s % (n - 1), mix64(s, 1))
        q = _random_projector(n, 1 + (s // 7) % (n - 1), mix64(s, 2))
        rep = compare_ops(p, q, cfg.tol, cfg.budget)
        if not rep.meet_preserved:
            bad["meet"] += 1
        if not rep.join_dominated:
            bad["join"] += 1
        if not rep.neg_dominated:
            bad["neg"] += 1
        if not rep.nested_joins_agree:
            bad["nested"] += 1
        if vn_leq(p, q, cfg.tol) != leq(face_embed(p, tol=cfg.tol), face_embed(q, tol=cfg.tol), cfg.tol):
            bad["order"] += 1
        if any(bad.values()) and payload is None:
            payload = {"trial": t, "seed": s}
    ok = not any(bad.values())
    checks.append(CheckResult("face-embedding-relations", ok,
                              f"meet/join/neg/nesting/order on {cfg.trials} pairs: {bad}",
                              payload))
    # the orthogonal rank-one pair: lattice join is a strict sub-face
    e1 = np.zeros(n); e1[0] = 1.0
    e2 = np.zeros(n); e2[1] = 1.0
    p = VNElement.from_columns(e1)
    q = VNElement.from_columns(e2)
    rep = compare_ops(p, q, cfg.tol, cfg.budget)
    strict_ok = rep.join_strict and rep.embed_join_dim == 2 and rep.face_join_dim == 4
    checks.append(CheckResult(
        "orthogonal-rank-one-strictness", strict_ok,
        f"lattice join dim {rep.embed_join_dim} < face join dim {rep.face_join_dim}"))
    return checks


def _suite_psi_tau(cfg: SuiteConfig) -> list[CheckResult]:
    ctx = BipartiteContext(cfg.dims, cfg.tol, cfg.budget)
    n1, n2 = ctx.dims
    checks = []
    bad = 0
    payload = None
    for t in range(cfg.trials):
        s = mix64(cfg.seed, t)
        a = random_element(n1, 1 + s % n1, mix64(s, 1), cfg.tol)
        b = random_element(n2, 1 + (s // 3) % n2, mix64(s, 2), cfg.tol)
        up = psi(a, b, ctx)
        if not (same_element(tau(up, 1, ctx), a, cfg.tol)
                and same_element(tau(up, 2, ctx), b, cfg.tol)):
            bad += 1
            if payload is None:
                payload = {"trial": t, **_element_payload("a", a), **_element_payload("b", b)}
    checks.append(CheckResult("down-after-up-is-identity", bad == 0,
                              f"{cfg.trials - bad}/{cfg.trials} pairs", payload))

    d = min(n1, n2)
    v = np.zeros(n1 * n2, dtype=complex)
    for i in range(d):
        v[i * n2 + i] = 1.0 / np.sqrt(d)
    bell = atom(DensityOp.pure(v), ctx.shape, cfg.tol)
    recomposed = psi(tau(bell, 1, ctx), tau(bell, 2, ctx), ctx)
    checks.append(CheckResult(
        "up-after-down-differs", not same_element(recomposed, bell, cfg.tol),
        "recomposing a maximally entangled atom loses the correlations"))

    mono_ok = True
    for t in range(min(cfg.trials, 10)):
        s = mix64(cfg.seed, 10**6 + t)
        a = random_element(n1, 1, mix64(s, 1), cfg.tol)
        a_big = join(a, random_element(n1, 1, mix64(s, 2), cfg.tol), cfg.tol, cfg.budget)
        b = random_element(n2, 1 + s % n2, mix64(s, 3), cfg.tol)
        mono_ok &= leq(psi(a, b, ctx), psi(a_big, b, ctx), cfg.tol)
    checks.append(CheckResult("up-map-monotone", mono_ok, "a <= a' forces psi(a,b) <= psi(a',b)"))

    sample = [random_element(n1, 1 + mix64(cfg.seed, 500 + i) % n1,
                             mix64(cfg.seed, 600 + i), cfg.tol) for i in range(6)]
    fixed = random_element(n2, 1 + mix64(cfg.seed, 700) % n2, mix64(cfg.seed, 701), cfg.tol)
    srep = psi_fixed_slot_report(sample, fixed, ctx, seed=mix64(cfg.seed, 702))
    checks.append(CheckResult(
        "fixed-slot-morphism",
        srep.meet_preserved and srep.join_preserved and srep.injective,
        f"meet/join/injectivity over {srep.pairs_checked} pairs"))
    checks.append(CheckResult(
        "fixed-slot-complement-gap",
        srep.neg_dominated and srep.neg_strict_some and srep.witness_confirmed,
        "image of complement strictly inside complement of image, witnessed"))

    pairs = []
    for i in range(8):
        s = mix64(cfg.seed, 800 + i)
        pairs.append((
            element_from_densities(
                [random_density(n1 * n2, 1 + s % (n1 * n2), mix64(s, 1))], ctx.shape, cfg.tol),
            element_from_densities(
                [random_density(n1 * n2, 1 + (s // 5) % (n1 * n2), mix64(s, 2))], ctx.shape, cfg.tol),
        ))
    trep = tau_morphism_report(pairs, ctx, seed=mix64(cfg.seed, 900))
    checks.append(CheckResult(
        "down-map-morphism",
        trep.join_preserved and trep.meet_dominated and trep.meet_gap_strict
        and trep.surjectivity_confirmed and trep.non_injectivity_confirmed,
        "join preserved; meet gap strict on shared-factor products; "
        "surjective, not injective"))
    return checks


def _werner(w: float) -> DensityOp:
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1.0 / np.sqrt(2)
    bell = np.outer(v, v.conj())
    return DensityOp(HermOp(w * bell + (1 - w) * np.eye(4) / 4))


def _suite_separability(cfg: SuiteConfig) -> list[CheckResult]:
    ctx = BipartiteContext(cfg.dims, cfg.tol, cfg.budget)
    n1, n2 = ctx.dims
    checks = []
    d = min(n1, n2)
    v = np.zeros(n1 * n2, dtype=complex)
    for i in range(d):
        v[i * n2 + i] = 1.0 / np.sqrt(d)
    bell = DensityOp.pure(v)
    verdict = is_separable(bell, ctx, decompose=False)
    expect_eig = -1.0 / d
    checks.append(CheckResult(
        "maximally-entangled-detected",
        verdict.status == "entangled" and abs(verdict.ppt_min_eigenvalue - expect_eig) < 1e-9,
        f"partial transpose eigenvalue {verdict.ppt_min_eigenvalue:.9f} (expected {expect_eig})"))

    if (n1, n2) == (2, 2):
        sweep_first_entangled = None
        for i in range(0, 101):
            w = i / 100.0
            if is_separable(_werner(w), ctx, decompose=False).status == "entangled":
                sweep_first_entangled = w
                break
        ok = sweep_first_entangled is not None and 0.32 < sweep_first_entangled < 0.35
        checks.append(CheckResult(
            "werner-threshold-localized", ok,
            f"first entangled mixing weight at 0.01 resolution: {sweep_first_entangled}"))
        wv = is_separable(_werner(0.25), ctx, seed=mix64(cfg.seed, 31))
        ok = (wv.status == "separable" and wv.decomposition is not None
              and wv.residual is not None and wv.residual <= 1e-7)
        checks.append(CheckResult(
            "werner-quarter-decomposed", ok,
            f"residual {wv.residual if wv.residual is not None else 'none'}"))

    bad = 0
    worst = 0.0
    for t in range(min(cfg.trials, 12)):
        s = mix64(cfg.seed, 40 + t)
        rho1 = random_density(n1, 1 + s % n1, mix64(s, 1))
        rho2 = random_density(n2, 1 + (s // 3) % n2, mix64(s, 2))
        prod = DensityOp(tensor(rho1, rho2))
        vd = is_separable(prod, ctx, seed=mix64(s, 3))
        if vd.status != "separable" or vd.decomposition is None or vd.residual > 1e-7:
            bad += 1
        else:
            worst = max(worst, vd.residual)
            recon = sum(w * np.kron(r1.mat, r2.mat) for w, r1, r2 in vd.decomposition)
            if np.linalg.norm(recon - prod.mat) > 1e-7:
                bad += 1
    checks.append(CheckResult(
        "products-separable-with-decompositions", bad == 0,
        f"worst reconstruction residual {worst:.2e}"))

    irep = im_psi_separability_report(ctx, trials=min(cfg.trials, 30), seed=mix64(cfg.seed, 77))
    checks.append(CheckResult(
        "going-up-image-separability",
        irep.products_contained and irep.products_separable
        and irep.basis_elements_product_form and irep.separable_states_recovered
        and irep.entangled_atom_excluded,
        f"{irep.trials} sampled image elements"))
    return checks


def _suite_convex_tensor(cfg: SuiteConfig) -> list[CheckResult]:
    ctx = BipartiteContext(cfg.dims, cfg.tol, cfg.budget)
    n1, n2 = ctx.dims
    checks = []
    ones = (one_element(ctx.factor_shape(1)), one_element(ctx.factor_shape(2)))

    s = mix64(cfg.seed, 1)
    rho1 = random_density(n1, n1, mix64(s, 1))
    rho2 = random_density(n2, n2, mix64(s, 2))
    prod = DensityOp(tensor(rho1, rho2))
    a = element_from_densities([rho1], tol=cfg.tol)
    b = element_from_densities([rho2], tol=cfg.tol)
    res = convex_tensor_membership(prod, a, b, ctx, seed=mix64(s, 3))
    checks.append(CheckResult(
        "product-is-one-term-member", res.status == "member" and res.residual <= 1e-7,
        f"status {res.status}, residual {res.residual}"))

    member_in_span = res.status == "member" and leq(
        atom(prod, ctx.shape, cfg.tol), psi(a, b, ctx), cfg.tol)
    checks.append(CheckResult(
        "members-lie-in-going-up-span", member_in_span,
        "every decomposed member also lies in the spanned element"))

    d = min(n1, n2)
    v = np.zeros(n1 * n2, dtype=complex)
    for i in range(d):
        v[i * n2 + i] = 1.0 / np.sqrt(d)
    bell = DensityOp.pure(v)
    res_bell = convex_tensor_membership(bell, ones[0], ones[1], ctx, seed=mix64(s, 4))
    checks.append(CheckResult(
        "entangled-state-certified-outside",
        res_bell.status == "outside" and "transpose" in res_bell.reason,
        f"reason: {res_bell.reason}"))
    return checks


def _suite_sublattice(cfg: SuiteConfig) -> list[CheckResult]:
    n = cfg.dims.total_dim
    checks = []
    bottom, top = zero_element(cfg.dims), one_element(cfg.dims)
    res = generate_sublattice([bottom, top], cap=10, tol=cfg.tol, budget=cfg.budget)
    checks.append(CheckResult(
        "bounds-already-closed", len(res.elements) == 2 and not res.truncated and res.closed_verified,
        f"{len(res.elements)} elements"))

    s = mix64(cfg.seed, 1)
    a1 = atom(random_density(n, 1, mix64(s, 1)), cfg.dims, cfg.tol)
    a2 = atom(random_density(n, 1, mix64(s, 2)), cfg.dims, cfg.tol)
    res = generate_sublattice([a1, a2], cap=20, tol=cfg.tol, budget=cfg.budget)
    checks.append(CheckResult(
        "two-atoms-close-to-four", len(res.elements) == 4 and res.closed_verified,
        f"{len(res.elements)} elements (atoms, their join, bottom)"))

    if cfg.dims.is_bipartite:
        ctx = BipartiteContext(cfg.dims, cfg.tol, cfg.budget)
        n1, n2 = ctx.dims
        seeds = []
        for i in range(2):
            for j in range(2):
                sa = random_element(n1, 1 + i, mix64(cfg.seed, 10 + i), cfg.tol)
                sb = random_element(n2, 1 + j, mix64(cfg.seed, 20 + j), cfg.tol)
                seeds.append(psi(sa, sb, ctx))
        res = generate_sublattice(seeds, cap=200, tol=cfg.tol, budget=cfg.budget)
        contains_images = all(
            any(same_element(s_el, e, cfg.tol) for e in res.elements) for s_el in seeds
        )
        checks.append(CheckResult(
            "image-closure-contains-images",
            contains_images and (res.closed_verified or res.truncated),
            f"{len(res.elements)} elements, truncated={res.truncated}"))
    return checks


def improper_mixture_demo(n1: int, n2: int, seed: int,
                          tol: Tolerances = DEFAULT_TOL,
                          budget: int = DEFAULT_BUDGET,
                          trials: int = 1) -> Report:
    """Side-by-side demo: projector conjunction vs state-lattice atom for a subsystem.

    For an entangled pure state of the whole, the meet of all actual
    projector properties of a subsystem is the support projector of the
    reduced state, of rank > 1, so it is not an atom and does not pin the
    state.  The same reduced state is a genuine atom of the state lattice,
    and equals the meet of sampled elements containing it.  A product pure
    state is the control where rank 1 suffices.
    """
    t0 = time.time()
    shape = SpaceShape((n1, n2))
    shape1 = SpaceShape.simple(n1)
    checks = []
    for t in range(trials):
        s = mix64(seed, t)
        rho = random_entangled_pure(n1, n2, s, tol)
        reduced = partial_trace(rho, shape, 1)
        lam = np.linalg.eigvalsh(reduced.mat)
        support_rank = int(np.sum(lam > tol.interior))
        checks.append(CheckResult(
            f"projector-conjunction-not-atomic[{t}]", support_rank > 1,
            f"support projector of the reduced state has rank {support_rank}"))
        a = atom(DensityOp(reduced, tol), shape1, tol)
        checks.append(CheckResult(
            f"reduced-state-is-lattice-atom[{t}]", is_atom(a),
            f"atom dimension {a.dim}"))
        meets = None
        for i in range(3):
            other = random_element(n1, 1 + mix64(s, 50 + i) % n1, mix64(s, 60 + i), tol)
            cover = join(a, other, tol, budget)
            meets = cover if meets is None else meet(meets, cover, tol, budget)
        checks.append(CheckResult(
            f"atom-equals-meet-of-covers[{t}]", same_element(meets, a, tol),
            "meet of sampled containing elements recovers the atom"))
        # control: a product pure state reduces to a pure state
        v1 = np.random.default_rng(mix64(s, 99)).standard_normal(n1) + \
            1j * np.random.default_rng(mix64(s, 100)).standard_normal(n1)
        v2 = np.random.default_rng(mix64(s, 101)).standard_normal(n2) + \
            1j * np.random.default_rng(mix64(s, 102)).standard_normal(n2)
        prod = DensityOp.pure(np.kron(v1 / np.linalg.norm(v1), v2 / np.linalg.norm(v2)), tol)
        red_prod = partial_trace(prod, shape, 1)
        lam = np.linalg.eigvalsh(red_prod.mat)
        checks.append(CheckResult(
            f"control-product-rank-one[{t}]", int(np.sum(lam > tol.interior)) == 1,
            "projector conjunction is atomic for an uncorrelated whole"))
    cfg = {"suite": "improper-demo", "dims": str(shape), "trials": trials, "seed": seed,
           "budget": budget}
    return Report("improper-demo", cfg, tuple(checks), time.time() - t0)


def _suite_improper_demo(cfg: SuiteConfig) -> list[CheckResult]:
    if not cfg.dims.is_bipartite:
        raise ValueError("improper-demo requires a bipartite shape")
    n1, n2 = cfg.dims.factors
    rep = improper_mixture_demo(n1, n2, cfg.seed, cfg.tol, cfg.budget,
                                trials=min(cfg.trials, 20))
    return list(rep.checks)


@dataclass(frozen=True)
class VolumeEstimate:
    fraction: float
    ci_halfwidth: float
    samples: int
    shape: str
    ppt_exact: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "fraction": self.fraction,
            "ci_halfwidth": self.ci_halfwidth,
            "samples": self.samples,
            "shape": self.shape,
            "ppt_exact": self.ppt_exact,
            "note": self.note,
        }


def separable_volume(shape: SpaceShape, samples: int, seed: int,
                     tol: Tolerances = DEFAULT_TOL) -> VolumeEstimate:
    """Monte-Carlo fraction of separable states in the trace-measure ensemble.

    Full-rank Gaussian-induced states are classified by the partial
    transpose.  At 2x2 the test is exact, so the fraction estimates the
    separable volume; elsewhere the fraction is the positive-partial-
    transpose fraction (an upper bound) and the estimate says so.
    """
    if not shape.is_bipartite:
        raise ValueError(f"shape {shape} is not bipartite")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    n1, n2 = shape.factors
    N = n1 * n2
    ppt_exact = (n1, n2) in {(2, 2), (2, 3), (3, 2)}
    hits = 0
    batch = 512
    done = 0
    while done < samples:
        b = min(batch, samples - done)
        mats = np.empty((b, N, N), dtype=complex)
        for i in range(b):
            rng = np.random.default_rng(mix64(seed, done + i))
            g = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
            m = g @ g.conj().T
            mats[i] = m / np.trace(m).real
        pts = mats.reshape(b, n1, n2, n1, n2).transpose(0, 1, 4, 3, 2).reshape(b, N, N)
        lam = np.linalg.eigvalsh(pts)
        hits += int(np.sum(lam[:, 0] >= -tol.psd))
        done += b
    frac = hits / samples
    half = 1.96 * float(np.sqrt(max(frac * (1 - frac), 1e-12) / samples))
    note = "" if ppt_exact else (
        "positive-partial-transpose fraction only; not exact at this shape")
    return VolumeEstimate(frac, half, samples, str(shape), ppt_exact, note)


def _suite_volume(cfg: SuiteConfig) -> list[CheckResult]:
    samples = max(1000, cfg.trials)
    est1 = separable_volume(cfg.dims, samples, cfg.seed, cfg.tol)
    est1b = separable_volume(cfg.dims, samples, cfg.seed, cfg.tol)
    est2 = separable_volume(cfg.dims, samples, mix64(cfg.seed, 1), cfg.tol)
    checks = [
        CheckResult("volume-deterministic", est1.fraction == est1b.fraction,
                    f"fraction {est1.fraction:.4f} twice from one seed"),
        CheckResult("volume-fraction-nontrivial", 0.0 < est1.fraction < 1.0,
                    f"fraction {est1.fraction:.4f}"),
        CheckResult(
            "volume-seeds-consistent",
            abs(est1.fraction - est2.fraction) < 3 * (est1.ci_halfwidth + est2.ci_halfwidth),
            f"{est1.fraction:.4f} vs {est2.fraction:.4f} "
            f"(ci halfwidths {est1.ci_halfwidth:.4f}, {est2.ci_halfwidth:.4f})"),
    ]
    return checks


SUITES = {
    "modularity": _suite_modularity,
    "negation": _suite_negation,
    "vn-embedding": _suite_vn_embedding,
    "psi-tau": _suite_psi_tau,
    "separability": _suite_separability,
    "convex-tensor": _suite_convex_tensor,
    "sublattice": _suite_sublattice,
    "improper-demo": _suite_improper_demo,
    "volume": _suite_volume,
}


def run_suite(cfg: SuiteConfig) -> Report:
    """Run one named property suite and collect a replayable report."""
    if cfg.suite not in SUITES:
        raise ValueError(f"unknown suite {cfg.suite!r}; known: {sorted(SUITES)}")
    bipartite_only = {"psi-tau", "separability", "convex-tensor", "improper-demo", "volume"}
    if cfg.suite in bipartite_only and not cfg.dims.is_bipartite:
        raise ValueError(f"suite {cfg.suite!r} requires a bipartite shape")
    t0 = time.time()
    checks = SUITES[cfg.suite](cfg)
    return Report(cfg.suite, _config_echo(cfg), tuple(checks), time.time() - t0)
