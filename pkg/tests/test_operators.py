import numpy as np
import pytest

from statelattice import (
    DensityOp,
    HermOp,
    SpaceShape,
    expectation,
    herm_basis,
    hs_inner,
    hs_norm,
    is_density,
    is_pure,
    partial_trace,
    tensor,
)

from conftest import bell_vector, ginibre_density


class TestHermOp:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            HermOp([[0, 1], [0, 0]])

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            HermOp(np.zeros((2, 3)))

    def test_entries_read_only(self):
        a = HermOp(np.eye(2))
        with pytest.raises(ValueError):
            a.mat[0, 0] = 3.0

    def test_real_linear_combinations_stay_hermitian(self, paulis):
        sx, sy, _ = paulis
        assert np.allclose((2 * sx - sy).mat, (2 * sx - sy).mat.conj().T)


class TestDensityOp:
    def test_trace_enforced(self):
        with pytest.raises(ValueError, match="trace"):
            DensityOp(np.eye(2))

    def test_positivity_enforced(self):
        with pytest.raises(ValueError, match="semidefinite"):
            DensityOp(np.diag([1.5, -0.5]))

    def test_pure_constructor_normalizes(self):
        rho = DensityOp.pure([3.0, 0.0])
        assert np.allclose(rho.mat, np.diag([1.0, 0.0]))


class TestHsInner:
    def test_identity_with_itself(self):
        assert hs_inner(HermOp(np.eye(2)), HermOp(np.eye(2))) == pytest.approx(2.0)

    def test_pauli_orthogonality(self, paulis):
        sx, sy, sz = paulis
        assert hs_inner(sx, sy) == pytest.approx(0.0, abs=1e-14)
        assert hs_inner(sy, sz) == pytest.approx(0.0, abs=1e-14)

    def test_pure_state_unit_norm(self):
        rho = DensityOp.pure([1.0, 1.0j])
        assert hs_inner(rho.op, rho.op) == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            hs_inner(HermOp(np.eye(2)), HermOp(np.eye(3)))

    def test_symmetry_and_positivity(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            a = HermOp(_rand_herm(rng, 3))
            b = HermOp(_rand_herm(rng, 3))
            assert hs_inner(a, b) == pytest.approx(hs_inner(b, a), abs=1e-12)
            assert hs_inner(a, a) >= 0.0
        assert hs_norm(a - a) == pytest.approx(0.0, abs=1e-14)


class TestPredicates:
    def test_is_density_examples(self):
        assert is_density(HermOp(np.diag([0.5, 0.5])))
        assert not is_density(HermOp(np.diag([1.5, -0.5])))
        assert is_density(HermOp(np.eye(4) / 4))

    def test_is_pure_examples(self):
        assert is_pure(DensityOp.pure([1.0, 0.0]))
        assert not is_pure(DensityOp(np.eye(2) / 2))
        assert not is_pure(DensityOp(np.diag([0.99, 0.01])))


class TestExpectation:
    def test_examples(self, paulis):
        _, _, sz = paulis
        assert expectation(DensityOp(np.eye(2) / 2), sz) == pytest.approx(0.0)
        assert expectation(DensityOp.pure([1.0, 0.0]), sz) == pytest.approx(1.0)

    def test_product_states_factorize(self, paulis):
        sx, _, sz = paulis
        rng = np.random.default_rng(3)
        for _ in range(10):
            r1 = ginibre_density(rng, 2, 2)
            r2 = ginibre_density(rng, 3, 2)
            o1, o2 = sx, HermOp(_rand_herm(rng, 3))
            joint = expectation(DensityOp(tensor(r1, r2)), tensor(o1, o2))
            assert joint == pytest.approx(
                expectation(r1, o1) * expectation(r2, o2), abs=1e-12
            )


class TestTensor:
    def test_identities(self):
        assert np.allclose(tensor(HermOp(np.eye(2)), HermOp(np.eye(2))).mat, np.eye(4))

    def test_rank_one_projector_placement(self):
        p = tensor(DensityOp.pure([1, 0]), DensityOp.pure([0, 1]))
        expected = np.zeros((4, 4))
        expected[1, 1] = 1.0  # |01>
        assert np.allclose(p.mat, expected)

    def test_trace_multiplicative(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            a, b = HermOp(_rand_herm(rng, 2)), HermOp(_rand_herm(rng, 3))
            assert tensor(a, b).trace() == pytest.approx(a.trace() * b.trace(), rel=1e-12)

    def test_densities_closed_under_tensor(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            a = ginibre_density(rng, 2, 1)
            b = ginibre_density(rng, 3, 3)
            assert is_density(tensor(a, b))


class TestPartialTrace:
    def test_product_reduces_to_factor(self):
        rng = np.random.default_rng(5)
        shape = SpaceShape((2, 3))
        r1, r2 = ginibre_density(rng, 2, 2), ginibre_density(rng, 3, 1)
        joint = tensor(r1, r2)
        assert np.allclose(partial_trace(joint, shape, 1).mat, r1.mat, atol=1e-12)
        assert np.allclose(partial_trace(joint, shape, 2).mat, r2.mat, atol=1e-12)

    def test_bell_reduction_against_direct_sum(self, bell_state):
        # independent oracle: trace the 4x4 matrix over index pairs by hand
        m = bell_state.mat
        direct = np.zeros((2, 2), dtype=complex)
        for i in range(2):
            for k in range(2):
                direct[i, k] = sum(m[i * 2 + j, k * 2 + j] for j in range(2))
        assert np.allclose(direct, np.eye(2) / 2)
        reduced = partial_trace(bell_state, SpaceShape((2, 2)), 1)
        assert np.allclose(reduced.mat, direct, atol=1e-14)

    def test_maximally_mixed(self):
        reduced = partial_trace(HermOp(np.eye(4) / 4), SpaceShape((2, 2)), 2)
        assert np.allclose(reduced.mat, np.eye(2) / 2)

    def test_scaling_identity(self):
        rng = np.random.default_rng(17)
        shape = SpaceShape((3, 2))
        for _ in range(10):
            a, b = HermOp(_rand_herm(rng, 3)), HermOp(_rand_herm(rng, 2))
            lhs = partial_trace(tensor(a, b), shape, 1)
            assert np.allclose(lhs.mat, b.trace() * a.mat, atol=1e-12)

    def test_trace_preserving_and_linear(self):
        rng = np.random.default_rng(19)
        shape = SpaceShape((2, 2))
        a, b = HermOp(_rand_herm(rng, 4)), HermOp(_rand_herm(rng, 4))
        assert partial_trace(a, shape, 1).trace() == pytest.approx(a.trace(), rel=1e-12)
        lhs = partial_trace(a + 2 * b, shape, 2).mat
        rhs = partial_trace(a, shape, 2).mat + 2 * partial_trace(b, shape, 2).mat
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError, match="keep"):
            partial_trace(HermOp(np.eye(4)), SpaceShape((2, 2)), 3)
        with pytest.raises(ValueError, match="match"):
            partial_trace(HermOp(np.eye(4)), SpaceShape((2, 3)), 1)


class TestHermBasis:
    def test_gram_matrix_is_identity(self):
        # the numerical Gram computation is the oracle here
        for n in (2, 3):
            basis = herm_basis(n)
            gram = np.array([[hs_inner(a, b) for b in basis] for a in basis])
            assert np.abs(gram - np.eye(n * n)).max() < 1e-12

    def test_counts(self):
        assert len(herm_basis(2)) == 4
        assert len(herm_basis(3)) == 9
        assert len(herm_basis(1)) == 1

    def test_expand_reconstruct_round_trip(self):
        rng = np.random.default_rng(23)
        for n in (2, 3):
            basis = herm_basis(n)
            a = HermOp(_rand_herm(rng, n))
            coeffs = np.array([hs_inner(b, a) for b in basis])
            recon = sum(c * b.mat for c, b in zip(coeffs, basis))
            assert np.abs(recon - a.mat).max() < 1e-12
            # expansion is an isometry
            assert np.dot(coeffs, coeffs) == pytest.approx(hs_inner(a, a), rel=1e-12)


class TestSpaceShape:
    def test_parse_and_total(self):
        shape = SpaceShape.parse("2x3")
        assert shape.factors == (2, 3) and shape.total_dim == 6 and shape.is_bipartite

    def test_invalid(self):
        with pytest.raises(ValueError):
            SpaceShape.parse("2xq")
        with pytest.raises(ValueError):
            SpaceShape((0, 2))


def _rand_herm(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2
