import json

import numpy as np
import pytest

from nipstab import linalg
from nipstab.errors import ArityError, AxiomViolationError, DimensionError
from nipstab.nip import NInnerForm, check_axioms, gram_n_inner, n_norm
import oracles

E2 = np.eye(2, dtype=complex)


class TestGramForm:
    def test_orthonormal(self):
        form = NInnerForm(2, 2)
        assert gram_n_inner(form, E2[0], E2[0], [E2[1]]) == pytest.approx(1)

    def test_dependent_trailing(self):
        form = NInnerForm(2, 2)
        assert gram_n_inner(form, E2[0], E2[0], [E2[0]]) == 0

    @pytest.mark.parametrize("seed", range(5))
    def test_n3_matches_leibniz(self, seed):
        rng = np.random.default_rng(seed)
        x, y, a, b = (linalg.random_vector(rng, 4) for _ in range(4))
        form = NInnerForm(3, 4)
        expected = oracles.gram_n_inner(x.tolist(), y.tolist(), [a.tolist(), b.tolist()])
        assert form(x, y, [a, b]) == pytest.approx(expected, rel=1e-12)

    def test_custom_base_inner_uses_generic_path(self):
        form = NInnerForm(2, 3, base_inner=lambda u, v: complex(np.sum(u * np.conj(v))))
        rng = np.random.default_rng(1)
        x, y, t = (linalg.random_vector(rng, 3) for _ in range(3))
        assert form(x, y, [t]) == pytest.approx(NInnerForm(2, 3)(x, y, [t]), rel=1e-13)

    def test_arity_error(self):
        with pytest.raises(ArityError):
            NInnerForm(3, 3)(E2[0], E2[0], [E2[1]])

    def test_dimension_error(self):
        with pytest.raises(DimensionError):
            NInnerForm(2, 3)(E2[0], E2[0], [E2[1]])
        with pytest.raises(DimensionError):
            NInnerForm(3, 2)
        with pytest.raises(ValueError):
            NInnerForm(1, 3)


class TestNNorm:
    def test_unit(self):
        assert n_norm(NInnerForm(2, 2), E2[0], [E2[1]]) == pytest.approx(1.0)

    def test_dependent(self):
        assert n_norm(NInnerForm(2, 2), 3j * E2[1], [E2[1]]) == pytest.approx(0.0, abs=1e-10)

    def test_scaled(self):
        # |2|^2 in the bordered entry, square root gives 2
        assert n_norm(NInnerForm(2, 2), 2 * E2[0], [E2[1]]) == pytest.approx(2.0)

    def test_broken_base_raises(self):
        # bilinear base: <(1+i) e1, (1+i) e1> = 2i is not real
        form = NInnerForm(2, 2, base_inner=lambda u, v: complex(np.sum(u * v)))
        with pytest.raises(AxiomViolationError):
            n_norm(form, (1 + 1j) * E2[0], [E2[1]])


class TestCheckAxioms:
    def test_gram_form_passes(self):
        report = check_axioms(NInnerForm(2, 3), 100, seed=0, tol=1e-9)
        assert report.passed
        assert set(report.records) == {f"nI{i}" for i in range(1, 8)}
        for rec in report.records.values():
            assert rec.samples == 100

    def test_bilinear_base_breaks_symmetry(self):
        bilinear = lambda u, v: complex(np.sum(u * v))  # noqa: E731
        report = check_axioms(NInnerForm(2, 3, base_inner=bilinear), 50, seed=0)
        assert report["nI3"].verdict == "fail"
        assert not report.passed

    def test_dependent_only(self):
        report = check_axioms(NInnerForm(2, 3), 50, seed=4, dependent_only=True)
        assert report["nI2"].max_violation < 1e-14

    def test_deterministic(self):
        a = check_axioms(NInnerForm(3, 4), 20, seed=11).dumps()
        b = check_axioms(NInnerForm(3, 4), 20, seed=11).dumps()
        assert a == b

    def test_json_shape(self):
        data = json.loads(check_axioms(NInnerForm(2, 2), 5, seed=0).dumps())
        first = data["checks"][0]
        assert set(first) == {"axiom_id", "samples", "max_violation", "tol", "verdict"}

    def test_verdict_matches_tolerance(self):
        report = check_axioms(NInnerForm(2, 3), 10, seed=0, tol=1e-30)
        for rec in report.records.values():
            assert (rec.verdict == "pass") == (rec.max_violation <= rec.tol)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            check_axioms(NInnerForm(2, 3), 0, seed=0)
        with pytest.raises(ValueError):
            check_axioms(NInnerForm(2, 3), 5, seed=0, tol=0)
