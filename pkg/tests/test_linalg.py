import itertools

import numpy as np
import pytest

from nipstab import linalg
from nipstab.errors import DimensionError, ShapeError
from oracles import leibniz_det

E = np.eye(3, dtype=complex)


class TestInner:
    def test_standard_basis(self):
        e1, e2 = np.eye(2, dtype=complex)
        assert linalg.inner(e1, e1) == 1 + 0j
        assert linalg.inner(e1, e2) == 0

    def test_hand_expansion(self):
        # (1+i) * conj(-i) = (1+i) * i = -1 + i
        u = np.array([1 + 1j, 0])
        v = np.array([-1j, 0])
        assert linalg.inner(u, v) == -1 + 1j

    def test_conjugate_linear_in_second(self):
        rng = np.random.default_rng(0)
        u, v = linalg.random_vector(rng, 4), linalg.random_vector(rng, 4)
        a = 2 - 3j
        assert linalg.inner(a * u, v) == pytest.approx(a * linalg.inner(u, v), rel=1e-12)
        assert linalg.inner(u, a * v) == pytest.approx(np.conj(a) * linalg.inner(u, v), rel=1e-12)
        assert linalg.inner(u, v) == pytest.approx(np.conj(linalg.inner(v, u)), rel=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            linalg.inner(np.ones(2, complex), np.ones(3, complex))


class TestDeterminant:
    def test_identity(self):
        assert linalg.det(np.eye(2)) == 1

    def test_equal_rows(self):
        m = np.array([[1 + 2j, 3, -1j], [1 + 2j, 3, -1j], [0.5, 2j, 7]])
        assert abs(linalg.det(m)) <= 1e-12

    @pytest.mark.parametrize("size", [1, 2, 3, 4, 5])
    def test_matches_leibniz(self, size):
        rng = np.random.default_rng(size)
        m = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        assert linalg.det(m) == pytest.approx(leibniz_det(m.tolist()), rel=1e-12)

    def test_needs_pivoting(self):
        m = np.array([[0, 1], [1, 0]], dtype=complex)
        assert linalg.det(m) == -1

    def test_singular_zero_column(self):
        m = np.array([[0, 1], [0, 2]], dtype=complex)
        assert linalg.det(m) == 0

    def test_shape_errors(self):
        with pytest.raises(ShapeError):
            linalg.det(np.ones((2, 3)))
        with pytest.raises(ShapeError):
            linalg.det(np.eye(9))


class TestRank:
    def test_examples(self):
        assert linalg.numeric_rank([E[0], E[1]], 1e-10) == 2
        assert linalg.numeric_rank([E[0], 2 * E[0]], 1e-10) == 1
        a = np.array([1, 1, 0], dtype=complex)
        b = np.array([1, 1, 1e-14], dtype=complex)
        # the 2x2 Gram determinant is ~1e-28, far below any sane threshold
        g = np.array([[linalg.inner(a, a), linalg.inner(a, b)],
                      [linalg.inner(b, a), linalg.inner(b, b)]])
        assert abs(leibniz_det(g.tolist())) < 1e-20
        assert linalg.numeric_rank([a, b], 1e-10) == 1

    def test_empty(self):
        assert linalg.numeric_rank([]) == 0

    def test_all_zero(self):
        assert linalg.numeric_rank([np.zeros(3, complex)] * 2) == 0

    def test_mixed_dims(self):
        with pytest.raises(DimensionError):
            linalg.numeric_rank([np.ones(2, complex), np.ones(3, complex)])

    def test_permutation_invariant(self):
        rng = np.random.default_rng(3)
        vs = [linalg.random_vector(rng, 5) for _ in range(3)]
        vs.append(vs[0] + 2j * vs[1])
        ranks = {linalg.numeric_rank(list(p)) for p in itertools.permutations(vs)}
        assert ranks == {3}


class TestSerialisation:
    def test_round_trip(self):
        v = np.array([1 + 2j, -0.5, 3j])
        assert np.array_equal(linalg.vector_from_json(linalg.vector_to_json(v)), v)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            linalg.as_vector([1.0, np.nan])


def test_random_isometry_has_orthonormal_columns():
    rng = np.random.default_rng(9)
    q = linalg.random_isometry(rng, 3, 5)
    assert np.allclose(q.conj().T @ q, np.eye(3), atol=1e-13)


def test_condition_estimate():
    assert linalg.condition_estimate(np.eye(3)) == 1.0
    assert linalg.condition_estimate(np.diag([1.0, 1e-4])) == pytest.approx(1e4)
    assert linalg.condition_estimate(np.zeros((2, 2))) == float("inf")
