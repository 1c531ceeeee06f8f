import numpy as np
import pytest

import quiverstair as qs
from conftest import random_complex
from quiverstair.errors import ValidationError


class TestQuiverShape:
    def test_wrap(self):
        c = qs.cycle_shape(4, ">>>>")
        assert [c.wrap(n) for n in (0, 1, 4, 5, 9, -1)] == [4, 1, 4, 1, 1, 3]

    def test_arrow_ends(self):
        c = qs.cycle_shape(3, "><>")
        assert c.arrow_ends(1) == (1, 2)
        assert c.arrow_ends(2) == (3, 2)
        assert c.arrow_ends(3) == (3, 1)
        ch = qs.chain_shape(3, "<>")
        assert ch.arrow_ends(1) == (2, 1)
        assert ch.arrow_ends(2) == (2, 3)

    def test_validation(self):
        with pytest.raises(ValidationError):
            qs.cycle_shape(1, ">")
        with pytest.raises(ValidationError):
            qs.chain_shape(3, ">")
        with pytest.raises(ValidationError):
            qs.chain_shape(3, ">x")
        with pytest.raises(ValidationError):
            qs.QuiverShape("loop", 3, ">>>")

    def test_reversed(self):
        c = qs.cycle_shape(3, "><>")
        assert c.reversed().orientations == "<><"


class TestRepresentation:
    def test_shape_validation(self):
        shape = qs.chain_shape(2, ">")
        with pytest.raises(ValidationError):
            qs.Representation(shape, (1, 2), (np.zeros((1, 1)),))
        qs.Representation(shape, (1, 2), (np.zeros((2, 1)),))

    def test_degenerate_shapes_disambiguated(self):
        shape = qs.chain_shape(2, ">")
        rep = qs.Representation(shape, (1, 0), (np.zeros((0, 1)),))
        assert rep.matrices[0].shape == (0, 1)
        with pytest.raises(ValidationError):
            qs.Representation(shape, (1, 0), (np.zeros((1, 0)),))

    def test_matrices_read_only(self):
        rep = qs.Representation(qs.chain_shape(2, ">"), (1, 1), (np.eye(1),))
        with pytest.raises(ValueError):
            rep.matrices[0][0, 0] = 5


class TestDirectSum:
    def test_neutral_element(self):
        shape = qs.cycle_shape(2, "><")
        a = qs.Representation(shape, (1, 1), (np.eye(1), 2 * np.eye(1)))
        z = qs.zero_representation(shape)
        s = qs.direct_sum(a, z)
        assert s.dims == a.dims
        assert all(np.array_equal(x, y) for x, y in zip(s.matrices, a.matrices))

    def test_identity_blocks(self):
        shape = qs.cycle_shape(2, ">>")
        one = qs.Representation(shape, (1, 1), (np.eye(1), np.eye(1)))
        s = qs.direct_sum(one, one)
        assert s.dims == (2, 2)
        assert np.array_equal(s.matrices[0], np.eye(2))
        assert np.array_equal(s.matrices[1], np.eye(2))

    def test_degenerate_stacking_appends_zero_rows(self):
        # M_{p x q} (+) 0_{m x 0} = [M; 0_{m x q}]
        shape = qs.chain_shape(2, ">")
        m = np.array([[1, 2], [3, 4], [5, 6]], dtype=complex)
        a = qs.Representation(shape, (2, 3), (m,))
        b = qs.Representation(shape, (0, 2), (np.zeros((2, 0)),))
        s = qs.direct_sum(a, b)
        assert s.matrices[0].shape == (5, 2)
        assert np.array_equal(s.matrices[0][:3], m)
        assert np.allclose(s.matrices[0][3:], 0)

    def test_shape_mismatch(self):
        a = qs.zero_representation(qs.cycle_shape(2, "><"))
        b = qs.zero_representation(qs.cycle_shape(2, ">>"))
        with pytest.raises(ValidationError):
            qs.direct_sum(a, b)


class TestTranspose:
    def test_involution(self):
        rng = np.random.default_rng(0)
        shape = qs.cycle_shape(3, "><>")
        dims = (2, 3, 1)
        mats = []
        for i in range(1, 4):
            u, v = shape.arrow_ends(i)
            mats.append(random_complex(rng, dims[v - 1], dims[u - 1]))
        rep = qs.Representation(shape, dims, tuple(mats))
        back = qs.transpose_rep(qs.transpose_rep(rep))
        assert back.shape == rep.shape
        assert all(np.array_equal(x, y) for x, y in zip(back.matrices, rep.matrices))

    def test_transpose_not_conjugated(self):
        shape = qs.cycle_shape(2, "><")
        rep = qs.Representation(shape, (1, 1), (1j * np.eye(1), np.eye(1)))
        t = qs.transpose_rep(rep)
        assert t.matrices[0][0, 0] == 1j

    def test_isomorphic_pair_stays_isomorphic(self):
        # {S_v}: A -> B implies {S_v^T}: B^T -> A^T
        rng = np.random.default_rng(1)
        shape = qs.cycle_shape(2, ">>")
        dims = (2, 2)
        rep = qs.Representation(shape, dims, (random_complex(rng, 2, 2), random_complex(rng, 2, 2)))
        s = [qs.random_unitary(2, [5, v]) for v in (1, 2)]
        other = qs.apply_isomorphism(rep, s)
        st = [m.T for m in s]
        assert qs.iso_residual(qs.transpose_rep(other), qs.transpose_rep(rep), st) < 1e-12


class TestIsomorphism:
    def _random_rep(self, seed=0):
        rng = np.random.default_rng(seed)
        shape = qs.cycle_shape(2, ">>")
        return qs.Representation(
            shape, (2, 2), (np.eye(2), qs.jordan_block(2, 0))
        ), rng

    def test_identity_transform(self):
        rep, _ = self._random_rep()
        out = qs.apply_isomorphism(rep, [np.eye(2), np.eye(2)])
        assert all(np.allclose(x, y) for x, y in zip(out.matrices, rep.matrices))

    def test_scalar_transform(self):
        rep, _ = self._random_rep()
        out = qs.apply_isomorphism(rep, [3.0 * np.eye(2), 3.0 * np.eye(2)])
        assert all(np.allclose(x, y) for x, y in zip(out.matrices, rep.matrices))

    def test_unitary_residual(self):
        rep, _ = self._random_rep()
        s = [qs.random_unitary(2, [77, v]) for v in (1, 2)]
        out = qs.apply_isomorphism(rep, s)
        assert qs.iso_residual(rep, out, s) <= 1e-12 * qs.representation_scale(rep)

    def test_singular_transform_rejected(self):
        rep, _ = self._random_rep()
        with pytest.raises(ValidationError):
            qs.apply_isomorphism(rep, [np.zeros((2, 2)), np.eye(2)])

    def test_residual_zero_case_and_norm_case(self):
        rep, _ = self._random_rep()
        ident = [np.eye(2), np.eye(2)]
        zero = qs.Representation(rep.shape, rep.dims, (np.zeros((2, 2)), np.zeros((2, 2))))
        assert qs.iso_residual(rep, rep, ident) == 0
        expect = max(np.linalg.norm(m) for m in rep.matrices)
        assert qs.iso_residual(rep, zero, ident) == pytest.approx(expect)

    def test_residual_matches_entrywise_oracle(self):
        # Brute-force the commuting-square defect entry by entry.
        shape = qs.cycle_shape(2, ">>")
        a1 = np.array([[1, 2], [3, 4]], dtype=complex)
        a2 = np.array([[0, 1], [1, 0]], dtype=complex)
        b1 = np.array([[1, 0], [0, 1]], dtype=complex)
        b2 = np.array([[2, 0], [0, 2]], dtype=complex)
        s1 = np.diag([1.0, 2.0]).astype(complex)
        s2 = np.diag([3.0, 4.0]).astype(complex)
        a = qs.Representation(shape, (2, 2), (a1, a2))
        b = qs.Representation(shape, (2, 2), (b1, b2))
        worst = 0.0
        for mat_a, mat_b, s_src, s_tgt in ((a1, b1, s1, s2), (a2, b2, s2, s1)):
            acc = 0.0
            for r in range(2):
                for c in range(2):
                    lhs = sum(s_tgt[r, k] * mat_a[k, c] for k in range(2))
                    rhs = sum(mat_b[r, k] * s_src[k, c] for k in range(2))
                    acc += abs(lhs - rhs) ** 2
            worst = max(worst, acc**0.5)
        assert qs.iso_residual(a, b, [s1, s2]) == pytest.approx(worst)


class TestMakeL:
    def test_single_vertex_on_two_chain(self):
        forward = qs.make_L(1, 1, qs.chain_shape(2, ">"))
        assert forward.dims == (1, 0)
        assert forward.matrices[0].shape == (0, 1)
        backward = qs.make_L(1, 1, qs.chain_shape(2, "<"))
        assert backward.matrices[0].shape == (1, 0)

    def test_full_interval(self):
        shape = qs.chain_shape(4, "><>")
        rep = qs.make_L(1, 4, shape)
        assert rep.dims == (1, 1, 1, 1)
        assert all(np.array_equal(m, np.eye(1)) for m in rep.matrices)

    def test_inner_interval(self):
        rep = qs.make_L(2, 3, qs.chain_shape(4, ">>>"))
        assert rep.dims == (0, 1, 1, 0)
        assert rep.matrices[1].shape == (1, 1)
        assert rep.matrices[0].shape == (1, 0)
        assert rep.matrices[2].shape == (0, 1)

    def test_out_of_range(self):
        shape = qs.chain_shape(3, ">>")
        for bad in ((0, 1), (2, 1), (1, 4)):
            with pytest.raises(ValidationError):
                qs.make_L(*bad, shape)
        with pytest.raises(ValidationError):
            qs.make_L(1, 1, qs.cycle_shape(3, ">>>"))


class TestMakeG:
    def test_golden_walk_on_six_cycle(self):
        shape = qs.cycle_shape(6, "><<>><")
        rep = qs.make_G(1, 9, shape)
        assert rep.dims == (2, 2, 2, 1, 1, 1)
        expect = [
            np.eye(2),
            np.eye(2),
            np.array([[1.0], [0.0]]),
            np.eye(1),
            np.eye(1),
            np.array([[0.0, 1.0]]),
        ]
        for got, want in zip(rep.matrices, expect):
            assert np.array_equal(got, want)

    def test_single_point_walk(self):
        shape = qs.cycle_shape(4, ">>>>")
        rep = qs.make_G(1, 1, shape)
        assert rep.dims == (1, 0, 0, 0)

    def test_nilpotent_walks(self):
        # G(l, l-1+pt) is all identities except a rank (p-1) nilpotent block
        # at arrow [l-1]: the Jordan block J_p(0) when that arrow points
        # counterclockwise, its transpose when clockwise.
        rng = np.random.default_rng(5)
        for trial in range(20):
            t = int(rng.integers(2, 6))
            orient = "".join("><"[rng.integers(0, 2)] for _ in range(t))
            shape = qs.cycle_shape(t, orient)
            l = int(rng.integers(1, t + 1))
            p = int(rng.integers(1, 4))
            rep = qs.make_G(l, l - 1 + p * t, shape)
            assert rep.dims == (p,) * t
            special = shape.wrap(l - 1)
            jp = qs.jordan_block(p, 0)
            for i in range(1, t + 1):
                m = rep.matrices[i - 1]
                if i != special:
                    assert np.array_equal(m, np.eye(p)), (trial, i)
                elif shape.is_clockwise(i):
                    assert np.array_equal(m, jp.T)
                else:
                    assert np.array_equal(m, jp)

    def test_at_most_one_entry_per_row_and_column(self):
        rng = np.random.default_rng(6)
        for _ in range(30):
            t = int(rng.integers(2, 7))
            orient = "".join("><"[rng.integers(0, 2)] for _ in range(t))
            shape = qs.cycle_shape(t, orient)
            l = int(rng.integers(1, t + 1))
            r = l + int(rng.integers(0, 3 * t))
            rep = qs.make_G(l, r, shape)
            assert sum(rep.dims) == r - l + 1
            for m in rep.matrices:
                assert np.abs(m).sum(axis=0).max(initial=0) <= 1
                assert np.abs(m).sum(axis=1).max(initial=0) <= 1

    def test_out_of_range(self):
        shape = qs.cycle_shape(3, ">>>")
        with pytest.raises(ValidationError):
            qs.make_G(0, 2, shape)
        with pytest.raises(ValidationError):
            qs.make_G(4, 5, shape)
        with pytest.raises(ValidationError):
            qs.make_G(2, 1, shape)


class TestIsRegular:
    def test_identities(self):
        shape = qs.cycle_shape(2, "><")
        rep = qs.Representation(shape, (3, 3), (np.eye(3), np.eye(3)))
        assert qs.is_regular(rep)

    def test_nilpotent_not_regular(self):
        shape = qs.cycle_shape(2, "><")
        rep = qs.Representation(shape, (2, 2), (np.eye(2), qs.jordan_block(2, 0)))
        assert not qs.is_regular(rep)

    def test_jordan_nonzero_eigenvalue(self):
        shape = qs.cycle_shape(3, ">>>")
        rep = qs.Representation(shape, (2, 2, 2), (np.eye(2), np.eye(2), qs.jordan_block(2, 2.0)))
        assert qs.is_regular(rep)

    def test_uneven_dims(self):
        shape = qs.cycle_shape(2, "><")
        rep = qs.Representation(shape, (1, 2), (np.zeros((2, 1)), np.zeros((2, 1))))
        assert not qs.is_regular(rep)
