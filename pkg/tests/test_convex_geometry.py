import numpy as np
import pytest

from statelattice import (
    DensityOp,
    HermOp,
    HermSubspace,
    OracleInconclusiveError,
    UndecidedFeasibilityError,
    brute_force_span,
    contains,
    feasible_point,
    good_representative,
    herm_basis,
    hs_inner,
    minimal_face,
    orth_complement,
    sample_feasible,
    same_subspace,
    span,
    subspace_distance,
)

from conftest import ginibre_density


@pytest.fixture(scope="module")
def boundary_case(paulis):
    # span{|0><0|, sx}: along the slice diag(1,0) + t*sx the determinant is -t^2,
    # so the only density is |0><0| itself; verified by the grid oracle below.
    sx, _, _ = paulis
    p0 = HermOp(np.diag([1.0, 0.0]))
    sub = span([p0, sx])
    for t in np.linspace(-2, 2, 401):
        lam = np.linalg.eigvalsh(p0.mat + t * sx.mat)[0]
        assert lam <= 1e-12
        if abs(t) > 1e-8:
            assert lam < 0
    return sub, p0


class TestFeasiblePoint:
    def test_single_density_ray(self):
        rng = np.random.default_rng(0)
        rho = ginibre_density(rng, 3, 2)
        res = feasible_point(span([rho.op]))
        assert res.feasible
        assert np.allclose(res.witness.mat, rho.mat, atol=1e-9)

    def test_traceless_ray_is_empty(self, paulis):
        _, _, sz = paulis
        res = feasible_point(span([sz]))
        assert res.status == "empty" and res.witness is None

    def test_zero_subspace_is_empty(self):
        assert feasible_point(HermSubspace.zero(2)).status == "empty"

    def test_diagonal_plane_witness(self):
        # oracle: maximize min(p, 1-p) on a grid; the optimum sits at p = 1/2
        grid = np.linspace(-1, 2, 3001)
        best = grid[np.argmax(np.minimum(grid, 1 - grid))]
        assert best == pytest.approx(0.5, abs=1e-3)
        res = feasible_point(span([HermOp(np.diag([1.0, 0])), HermOp(np.diag([0, 1.0]))]))
        assert res.feasible
        assert np.allclose(res.witness.mat, np.diag([0.5, 0.5]), atol=1e-6)

    def test_witness_is_density_inside_subspace(self):
        rng = np.random.default_rng(1)
        for k in (2, 3):
            sub = span([ginibre_density(rng, 3, 2).op for _ in range(k)])
            res = feasible_point(sub)
            assert res.feasible
            assert contains(sub, res.witness.op, atol=1e-9)
            assert res.best_lambda_min >= -1e-9

    def test_undecided_band_raises(self):
        # a single-point slice with min eigenvalue inside the ambiguous band
        eps = 5e-8
        bad = HermOp(np.diag([1.0 + eps, -eps]))
        with pytest.raises(UndecidedFeasibilityError) as err:
            feasible_point(span([bad]))
        assert -1e-6 < err.value.best_lambda_min < -1e-9


class TestMinimalFace:
    def test_full_space_has_full_support(self):
        face = minimal_face(span(herm_basis(2)))
        assert np.allclose(face.support.mat, np.eye(2), atol=1e-9)
        lam = np.linalg.eigvalsh(face.interior_point.mat)
        assert lam[0] > 1e-7

    def test_boundary_case_support(self, boundary_case):
        sub, p0 = boundary_case
        face = minimal_face(sub)
        assert np.allclose(face.support.mat, p0.mat, atol=1e-8)
        assert len(face.reduction_steps) >= 1
        for z in face.reduction_steps:
            assert np.linalg.eigvalsh(z.mat)[0] >= -1e-9
            assert abs(hs_inner(z, face.interior_point.op)) < 1e-7

    def test_full_rank_ray(self):
        rng = np.random.default_rng(2)
        rho = ginibre_density(rng, 3, 3)
        face = minimal_face(span([rho.op]))
        assert np.allclose(face.support.mat, np.eye(3), atol=1e-8)

    def test_empty_slice_rejected(self, paulis):
        _, _, sz = paulis
        with pytest.raises(ValueError, match="empty"):
            minimal_face(span([sz]))

    def test_interior_point_supported_inside(self, boundary_case):
        sub, _ = boundary_case
        face = minimal_face(sub)
        p = face.support.mat
        rho = face.interior_point.mat
        assert np.linalg.norm(rho - p @ rho @ p) < 1e-9


class TestGoodRepresentative:
    def test_density_ray_is_fixed(self):
        rng = np.random.default_rng(3)
        rho = ginibre_density(rng, 2, 1)
        sub = span([rho.op])
        assert same_subspace(good_representative(sub), sub, atol=1e-9)

    def test_traceless_ray_closes_to_zero(self, paulis):
        _, _, sz = paulis
        assert good_representative(span([sz])).dim == 0

    def test_boundary_case(self, boundary_case):
        sub, p0 = boundary_case
        g = good_representative(sub)
        assert g.dim == 1
        assert same_subspace(g, span([p0]), atol=1e-7)

    def test_zero_subspace(self):
        assert good_representative(HermSubspace.zero(3)).dim == 0

    def test_idempotence(self):
        rng = np.random.default_rng(4)
        for _ in range(15):
            n = int(rng.choice([2, 3]))
            k = int(rng.integers(1, 5))
            sub = span([ginibre_density(rng, n, int(rng.integers(1, n + 1))).op
                        for _ in range(k)])
            g = good_representative(sub)
            assert same_subspace(good_representative(g), g, atol=1e-7)

    def test_containment_and_witness(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            sub = span([ginibre_density(rng, 3, 2).op for _ in range(3)])
            g = good_representative(sub)
            assert contains(sub, g, atol=1e-7)
            w = feasible_point(sub).witness
            assert contains(g, w.op, atol=1e-7)

    def test_generator_closure(self):
        rng = np.random.default_rng(6)
        for _ in range(15):
            n = int(rng.choice([2, 3]))
            sub = span([ginibre_density(rng, n, int(rng.integers(1, n + 1))).op
                        for _ in range(int(rng.integers(1, 4)))])
            assert same_subspace(good_representative(sub), sub, atol=1e-7)

    def test_monotonicity(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            small = span([ginibre_density(rng, 3, 2).op for _ in range(2)])
            extra = ginibre_density(rng, 3, 1).op
            big = span(list(small.basis) + [extra])
            gs, gb = good_representative(small), good_representative(big)
            assert contains(gb, gs, atol=1e-7)

    def test_mixed_complement_closes_to_zero(self):
        # a full-rank state has strictly positive overlap with every density,
        # so nothing survives in its orthogonal complement
        rng = np.random.default_rng(8)
        rho = ginibre_density(rng, 2, 2)
        assert good_representative(orth_complement(span([rho.op]))).dim == 0


class TestBruteForceSpan:
    def test_diagonal_plane_dimension(self):
        sub = span([HermOp(np.diag([1.0, 0])), HermOp(np.diag([0, 1.0]))])
        got = brute_force_span(sub, samples=4000, seed=0)
        assert got.dim == 2

    def test_density_ray(self):
        rng = np.random.default_rng(9)
        rho = ginibre_density(rng, 3, 3)
        got = brute_force_span(span([rho.op]), samples=100, seed=1)
        assert got.dim == 1
        assert same_subspace(got, span([rho.op]), atol=1e-8)

    def test_agreement_with_reduction(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            n = int(rng.choice([2, 3]))
            k = int(rng.integers(1, 4))
            sub = span([ginibre_density(rng, n, int(rng.integers(1, n + 1))).op
                        for _ in range(k)])
            g = good_representative(sub)
            o = brute_force_span(sub, samples=4000, seed=int(rng.integers(2**31)))
            assert g.dim == o.dim
            assert subspace_distance(g, o) <= 1e-6

    def test_boundary_case(self, boundary_case):
        sub, p0 = boundary_case
        got = brute_force_span(sub, samples=20000, seed=2)
        assert got.dim == 1 and same_subspace(got, span([p0]), atol=1e-6)

    def test_support_soundness(self, boundary_case):
        sub, _ = boundary_case
        p = minimal_face(sub).support.mat
        pts = sample_feasible(sub, 8, seed=3)
        for x in pts:
            assert np.linalg.norm(x.mat - p @ x.mat @ p) < 1e-6

    def test_wide_slice_rejected(self):
        with pytest.raises(ValueError, match="> 6"):
            brute_force_span(span(herm_basis(3)), samples=100, seed=0)

    def test_inconclusive_when_nothing_accepted(self, paulis):
        sx, _, _ = paulis
        sub = span([HermOp(np.diag([1.5, -0.5])), sx])
        with pytest.raises(OracleInconclusiveError):
            brute_force_span(sub, samples=2000, seed=0)

    def test_min_accepted_enforced(self):
        sub = span([HermOp(np.diag([1.0, 0])), HermOp(np.diag([0, 1.0]))])
        with pytest.raises(OracleInconclusiveError):
            brute_force_span(sub, samples=2000, seed=0, min_accepted=10**9)


class TestSampleFeasible:
    def test_points_are_members(self):
        rng = np.random.default_rng(12)
        sub = span([ginibre_density(rng, 3, 2).op for _ in range(3)])
        pts = sample_feasible(sub, 12, seed=4)
        assert len(pts) == 12
        for x in pts:
            assert contains(sub, x, atol=1e-8)
            assert np.linalg.eigvalsh(x.mat)[0] >= -1e-9
            assert x.trace() == pytest.approx(1.0, abs=1e-10)

    def test_empty_slice_gives_nothing(self, paulis):
        _, _, sz = paulis
        assert sample_feasible(span([sz]), 5, seed=0) == []
