import numpy as np
import pytest

from statelattice import (
    HermOp,
    HermSubspace,
    contains,
    herm_basis,
    hs_inner,
    intersect,
    orth_complement,
    same_subspace,
    span,
    subspace_distance,
    subspace_sum,
)

from conftest import ginibre_density


def _rand_subspace(rng, n, k):
    gens = [ginibre_density(rng, n, int(rng.integers(1, n + 1))).op for _ in range(k)]
    return span(gens)


class TestSpan:
    def test_dependent_generators_collapse(self, paulis):
        sx, _, _ = paulis
        assert span([sx, 2 * sx]).dim == 1

    def test_full_qubit_space(self, paulis):
        sx, sy, sz = paulis
        assert span([HermOp(np.eye(2)), sx, sy, sz]).dim == 4

    def test_empty_span(self):
        assert span([], ambient_dim=2).dim == 0

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(ValueError, match="dim..? mix|mixed"):
            span([HermOp(np.eye(2)), HermOp(np.eye(3))])

    def test_basis_orthonormal(self):
        rng = np.random.default_rng(1)
        s = _rand_subspace(rng, 3, 4)
        gram = np.array([[hs_inner(a, b) for b in s.basis] for a in s.basis])
        assert np.abs(gram - np.eye(s.dim)).max() < 1e-10


class TestIntersect:
    def test_diagonal_planes_cross_in_identity_ray(self, paulis):
        sx, _, sz = paulis
        eye = HermOp(np.eye(2))
        got = intersect(span([eye, sz]), span([eye, sx]))
        # oracle: solve the coordinate linear system directly in the Pauli frame.
        # span{I,sz} = {(a, 0, 0, d)}, span{I,sx} = {(a, b, 0, 0)} in (I,sx,sy,sz)
        # coordinates, so the intersection is {(a, 0, 0, 0)} = span{I}.
        assert got.dim == 1
        assert same_subspace(got, span([eye]))

    def test_self_and_zero(self):
        rng = np.random.default_rng(2)
        s = _rand_subspace(rng, 2, 2)
        assert same_subspace(intersect(s, s), s)
        zero = HermSubspace.zero(2)
        assert intersect(s, zero).dim == 0

    def test_ambient_mismatch(self):
        with pytest.raises(ValueError, match="ambient"):
            intersect(HermSubspace.zero(2), HermSubspace.zero(3))

    def test_dimension_identity_with_sum(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            s = _rand_subspace(rng, 3, int(rng.integers(1, 6)))
            t = _rand_subspace(rng, 3, int(rng.integers(1, 6)))
            lhs = s.dim + t.dim
            rhs = subspace_sum(s, t).dim + intersect(s, t).dim
            assert lhs == rhs

    def test_projection_residuals_small(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            s = _rand_subspace(rng, 3, 5)
            t = _rand_subspace(rng, 3, 6)
            m = intersect(s, t)
            for b in m.basis:
                for sub in (s, t):
                    c = np.array([hs_inner(x, b) for x in sub.basis])
                    proj = sum(ci * x.mat for ci, x in zip(c, sub.basis))
                    assert np.linalg.norm(proj - b.mat) <= 1e-8


class TestSum:
    def test_two_paulis(self, paulis):
        sx, sy, _ = paulis
        assert subspace_sum(span([sx]), span([sy])).dim == 2

    def test_sum_with_zero(self):
        rng = np.random.default_rng(5)
        s = _rand_subspace(rng, 2, 2)
        assert same_subspace(subspace_sum(s, HermSubspace.zero(2)), s)


class TestOrthComplement:
    def test_identity_complement_is_traceless(self, paulis):
        sx, sy, sz = paulis
        oc = orth_complement(span([HermOp(np.eye(2))]))
        assert oc.dim == 3
        assert same_subspace(oc, span([sx, sy, sz]))

    def test_zero_complement_is_full(self):
        assert orth_complement(HermSubspace.zero(3)).dim == 9

    def test_involution(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            s = _rand_subspace(rng, 3, int(rng.integers(1, 7)))
            assert same_subspace(orth_complement(orth_complement(s)), s)

    def test_orthogonality(self):
        rng = np.random.default_rng(7)
        s = _rand_subspace(rng, 3, 4)
        oc = orth_complement(s)
        assert s.dim + oc.dim == 9
        worst = max(abs(hs_inner(a, b)) for a in s.basis for b in oc.basis)
        assert worst < 1e-12


class TestContains:
    def test_diagonal_membership(self, paulis):
        _, _, sz = paulis
        s = span([HermOp(np.eye(2)), sz])
        assert contains(s, HermOp(np.diag([0.3, 0.7])))

    def test_non_membership(self, paulis):
        _, _, sz = paulis
        assert not contains(span([sz]), HermOp(np.eye(2)))

    def test_intersection_contained(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            s = _rand_subspace(rng, 3, 4)
            t = _rand_subspace(rng, 3, 5)
            assert contains(s, intersect(s, t))

    def test_ambient_mismatch(self):
        with pytest.raises(ValueError, match="ambient"):
            contains(HermSubspace.zero(2), HermOp(np.eye(3)))


class TestLatticeLaws:
    def test_modular_law_on_subspaces(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            s = _rand_subspace(rng, 3, 2)
            t = _rand_subspace(rng, 3, 3)
            r = subspace_sum(s, _rand_subspace(rng, 3, 2))  # force s <= r
            lhs = subspace_sum(s, intersect(t, r))
            rhs = intersect(subspace_sum(s, t), r)
            assert same_subspace(lhs, rhs, atol=1e-7)

    def test_de_morgan(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            s = _rand_subspace(rng, 3, 3)
            t = _rand_subspace(rng, 3, 2)
            lhs = orth_complement(subspace_sum(s, t))
            rhs = intersect(orth_complement(s), orth_complement(t))
            assert same_subspace(lhs, rhs, atol=1e-8)


class TestDistance:
    def test_zero_for_same_space(self):
        rng = np.random.default_rng(11)
        s = _rand_subspace(rng, 2, 2)
        # re-span from doubled generators: same space, different basis
        t = span([b for b in s.basis] + [2 * b for b in s.basis])
        assert subspace_distance(s, t) < 1e-12

    def test_orthogonal_rays_are_far(self, paulis):
        sx, sy, _ = paulis
        assert subspace_distance(span([sx]), span([sy])) == pytest.approx(1.0)


class TestConstruction:
    def test_gram_validation(self):
        with pytest.raises(ValueError, match="orthonormal"):
            HermSubspace(2, [HermOp(np.eye(2)), HermOp(np.eye(2))])

    def test_dim_bound(self):
        basis = herm_basis(2)
        with pytest.raises(ValueError, match="dim"):
            HermSubspace(3, basis)
