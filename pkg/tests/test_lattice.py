import numpy as np
import pytest

import statelattice.lattice as lattice_mod
from statelattice import (
    DensityOp,
    HermOp,
    atom,
    contains,
    check_modular,
    same_subspace,
    element_from_densities,
    feasible_point,
    good_representative,
    is_atom,
    join,
    leq,
    meet,
    neg,
    one_element,
    same_element,
    sample_feasible,
    span,
    zero_element,
)

from conftest import ginibre_density


def _rand_element(rng, n, k):
    return element_from_densities(
        [ginibre_density(rng, n, int(rng.integers(1, n + 1))) for _ in range(k)]
    )


class TestAtom:
    def test_pure_state_atom(self):
        a = atom(DensityOp.pure([1.0, 0.0]))
        assert a.dim == 1 and is_atom(a)

    def test_maximally_mixed_is_first_class_atom(self):
        a = atom(DensityOp(np.eye(2) / 2))
        assert a.dim == 1 and is_atom(a)

    def test_atoms_separate_states(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            r1 = ginibre_density(rng, 2, 2)
            r2 = ginibre_density(rng, 2, 2)
            equal_states = np.allclose(r1.mat, r2.mat, atol=1e-12)
            assert same_element(atom(r1), atom(r2)) == equal_states
            assert same_element(atom(r1), atom(r1))


class TestMeet:
    def test_distinct_atoms_meet_to_bottom(self):
        rng = np.random.default_rng(1)
        a = atom(ginibre_density(rng, 2, 1))
        b = atom(ginibre_density(rng, 2, 2))
        assert meet(a, b).is_zero

    def test_idempotent(self):
        rng = np.random.default_rng(2)
        a = _rand_element(rng, 3, 2)
        assert same_element(meet(a, a), a)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            meet(one_element(2), one_element(3))


class TestJoin:
    def test_two_basis_atoms_span_the_diagonal_segment(self):
        a0 = atom(DensityOp.pure([1.0, 0.0]))
        a1 = atom(DensityOp.pure([0.0, 1.0]))
        j = join(a0, a1)
        # oracle: every convex combination of the two projectors is a density,
        # so the slice spans both directions
        assert j.dim == 2
        mid = HermOp(np.diag([0.4, 0.6]))
        assert leq(atom(DensityOp(mid)), j)

    def test_bounds(self):
        rng = np.random.default_rng(3)
        a = _rand_element(rng, 2, 2)
        assert same_element(join(a, zero_element(2)), a)
        assert join(a, one_element(2)).is_one

    def test_join_of_good_parts_is_good(self):
        rng = np.random.default_rng(4)
        lattice_mod.debug_checks = True
        try:
            for _ in range(5):
                a = _rand_element(rng, 3, 2)
                b = _rand_element(rng, 3, 2)
                j = join(a, b)  # would raise if the sum were not closed
                assert j.dim <= a.dim + b.dim
        finally:
            lattice_mod.debug_checks = False


class TestNeg:
    def test_maximally_mixed_double_negation(self):
        for n in (2, 3):
            mixed = atom(DensityOp(np.eye(n) / n))
            first = neg(mixed)
            assert first.is_zero
            again = neg(first)
            assert again.is_one
            assert not same_element(again, mixed)

    def test_neg_of_bottom_is_top(self):
        assert neg(zero_element(2)).is_one

    def test_neg_of_pure_qubit_atom(self):
        # oracle: a trace-one operator orthogonal to |0><0| has the form
        # [[0, b], [conj(b), 1]], which is positive only for b = 0
        for b in (0.1, 0.5, 1j * 0.2):
            m = np.array([[0, b], [np.conj(b), 1.0]])
            assert np.linalg.eigvalsh(m)[0] < 0
        a0 = atom(DensityOp.pure([1.0, 0.0]))
        a1 = atom(DensityOp.pure([0.0, 1.0]))
        assert same_element(neg(a0), a1)


class TestOrder:
    def test_bounds(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            a = _rand_element(rng, 2, int(rng.integers(1, 4)))
            assert leq(zero_element(2), a)
            assert leq(a, one_element(2))

    def test_atom_below_join(self):
        rng = np.random.default_rng(6)
        r, s = ginibre_density(rng, 2, 1), ginibre_density(rng, 2, 2)
        assert leq(atom(r), join(atom(r), atom(s)))

    def test_order_agrees_with_sampled_members(self):
        rng = np.random.default_rng(7)
        for t in range(12):
            a = _rand_element(rng, 2, int(rng.integers(1, 3)))
            b = join(a, _rand_element(rng, 2, 1)) if t % 2 == 0 else _rand_element(rng, 2, 2)
            pts = sample_feasible(a.rep, 6, seed=t)
            sampled_inside = all(
                contains(b.rep, x, atol=1e-7) for x in pts
            )
            assert leq(a, b) == sampled_inside


class TestIsAtom:
    def test_examples(self):
        rng = np.random.default_rng(8)
        assert is_atom(atom(ginibre_density(rng, 2, 2)))
        assert not is_atom(zero_element(2))
        assert not is_atom(one_element(2))
        a, b = atom(ginibre_density(rng, 2, 1)), atom(ginibre_density(rng, 2, 2))
        assert not is_atom(join(a, b))


class TestModularity:
    def test_modular_inequality_always(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            n = int(rng.choice([2, 3]))
            a = _rand_element(rng, n, int(rng.integers(1, 5)))
            b = _rand_element(rng, n, int(rng.integers(1, 5)))
            c = join(a, _rand_element(rng, n, int(rng.integers(1, 5))))
            rep = check_modular(a, b, c)
            assert leq(rep.lhs, rep.rhs)

    def test_modular_equality_when_meet_is_closed(self):
        # when the raw intersection of the operands' subspaces is already
        # spanned by its own densities, both sides collapse to the same set
        from statelattice.subspaces import intersect

        rng = np.random.default_rng(29)
        checked = 0
        for _ in range(60):
            n = int(rng.choice([2, 3]))
            a = _rand_element(rng, n, int(rng.integers(1, 5)))
            b = _rand_element(rng, n, int(rng.integers(1, 5)))
            c = join(a, _rand_element(rng, n, int(rng.integers(1, 5))))
            raw = intersect(b.rep, c.rep)
            if not same_subspace(good_representative(raw), raw, atol=1e-7):
                continue
            checked += 1
            assert check_modular(a, b, c).holds
        assert checked >= 20

    def test_pentagon_counterexample(self):
        # the lattice is not modular: meets can drop to the bottom while the
        # join side keeps everything, embedding a pentagon
        eye = np.eye(2)
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        sy = np.array([[0, -1j], [1j, 0]])
        sz = np.diag([1.0, -1.0]).astype(complex)

        def bloch(x, y, z):
            return DensityOp(HermOp((eye + x * sx + y * sy + z * sz) / 2))

        a = element_from_densities([bloch(0, 0, 0.9), bloch(0, 0, -0.9)])
        c = join(a, atom(bloch(0.8, 0, 0)))
        b = element_from_densities([bloch(0.8, 0.4, 0), bloch(-0.56, 0.56, 0)])
        assert leq(a, c) and not leq(c, a)
        # oracle: the b/c subspaces cross in the ray of a trace-one operator
        # with Bloch radius 4.2, far outside the state body
        from statelattice.subspaces import intersect

        line = intersect(b.rep, c.rep)
        assert line.dim == 1
        point = line.basis[0].mat / np.trace(line.basis[0].mat).real
        assert np.linalg.eigvalsh(point)[0] < -0.5
        # pentagon: a < c, a^b = c^b = bottom, a v b = c v b = top
        assert meet(a, b).is_zero and meet(c, b).is_zero
        assert join(a, b).is_one and join(c, b).is_one
        rep = check_modular(a, b, c)
        assert not rep.holds
        assert same_element(rep.lhs, a) and same_element(rep.rhs, c)

    def test_bottom_edge(self):
        rng = np.random.default_rng(10)
        b, c = _rand_element(rng, 2, 2), _rand_element(rng, 2, 2)
        rep = check_modular(zero_element(2), b, c)
        assert rep.holds and same_element(rep.lhs, meet(b, c))

    def test_top_edge(self):
        rng = np.random.default_rng(11)
        a = _rand_element(rng, 2, 1)
        b = _rand_element(rng, 2, 2)
        rep = check_modular(a, b, one_element(2))
        assert rep.holds and same_element(rep.lhs, join(a, b))

    def test_precondition_enforced(self):
        rng = np.random.default_rng(12)
        a = atom(ginibre_density(rng, 2, 2))
        c = atom(ginibre_density(rng, 2, 2))
        with pytest.raises(ValueError, match="a <= c"):
            check_modular(a, a, c)


class TestNegationLaws:
    def test_non_contradiction(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            a = _rand_element(rng, 2, int(rng.integers(1, 4)))
            assert meet(a, neg(a)).is_zero

    def test_contraposition(self):
        rng = np.random.default_rng(14)
        for _ in range(10):
            a = _rand_element(rng, 3, 1)
            b = join(a, _rand_element(rng, 3, 2))
            assert leq(neg(b), neg(a))

    def test_weak_double_negation(self):
        rng = np.random.default_rng(15)
        for _ in range(10):
            a = _rand_element(rng, 2, int(rng.integers(1, 3)))
            assert leq(a, neg(neg(a)))


class TestAtomStructure:
    def test_atomicity(self):
        rng = np.random.default_rng(16)
        for _ in range(8):
            a = _rand_element(rng, 3, int(rng.integers(2, 4)))
            w = feasible_point(a.rep).witness
            below = atom(w)
            assert is_atom(below) and leq(below, a)

    def test_atom_minimality(self):
        rng = np.random.default_rng(17)
        a = atom(ginibre_density(rng, 2, 2))
        for k in range(6):
            b = meet(a, _rand_element(rng, 2, int(rng.integers(1, 4))))
            assert b.is_zero or same_element(b, a)

    def test_construction_closure_verified(self):
        # spans of densities pass the debug-mode closure verification
        rng = np.random.default_rng(18)
        lattice_mod.debug_checks = True
        try:
            el = element_from_densities([ginibre_density(rng, 2, 2) for _ in range(2)])
            assert good_representative(el.rep).dim == el.dim
        finally:
            lattice_mod.debug_checks = False
