"""Property tests for the invariants each module promises."""

import itertools
import math

import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from nipstab import linalg
from nipstab.induce import InducedInner
from nipstab.nip import NInnerForm, natural_scale
from nipstab.stability import (ControlFunction, Scheme, closed_form_bound, direct_method_batch,
                               dominating_terms, make_perturbed_map, phi_tilde, sample_points)
import oracles

finite = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)


def cvectors(dim):
    return st.tuples(hnp.arrays(float, dim, elements=finite),
                     hnp.arrays(float, dim, elements=finite)).map(lambda t: t[0] + 1j * t[1])


def cmatrices(n):
    return st.tuples(hnp.arrays(float, (n, n), elements=finite),
                     hnp.arrays(float, (n, n), elements=finite)).map(lambda t: t[0] + 1j * t[1])


scalars = st.tuples(st.floats(0.0, 10.0), st.floats(0.0, 2 * math.pi)).map(
    lambda t: t[0] * complex(math.cos(t[1]), math.sin(t[1])))


def hadamard(m):
    # math.hypot does not underflow on tiny entries
    out = 1.0
    for row in np.asarray(m):
        out *= math.hypot(*(abs(z) for z in row))
    return out


@st.composite
def form_tuples(draw, extra=0):
    n = draw(st.integers(2, 4))
    dim = draw(st.integers(n, 6))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    vs = [linalg.random_vector(rng, dim) for _ in range(n + 1 + extra)]
    return NInnerForm(n, dim), vs[0], vs[1], vs[2:n + 1], vs[n + 1:]


class TestLinalgProperties:
    @given(cvectors(4), cvectors(4), scalars)
    def test_sesquilinear(self, u, v, a):
        base = linalg.inner(u, v)
        slack = 1e-12 * abs(a) * linalg.norm(u) * linalg.norm(v) + 1e-300
        assert abs(linalg.inner(a * u, v) - a * base) <= slack
        assert abs(linalg.inner(u, a * v) - np.conj(a) * base) <= slack

    @given(st.integers(1, 4).flatmap(lambda n: st.tuples(cmatrices(n), cmatrices(n))))
    def test_det_multiplicative(self, pair):
        a, b = pair
        lhs = linalg.det(a @ b)
        rhs = linalg.det(a) * linalg.det(b)
        assert abs(lhs - rhs) <= 1e-10 * (hadamard(a) * hadamard(b) + hadamard(a @ b)) + 1e-300

    @given(st.integers(2, 5).flatmap(lambda n: st.tuples(cmatrices(n), st.integers(0, n - 1),
                                                         st.integers(0, n - 1))))
    def test_duplicated_row(self, args):
        m, i, j = args
        m = m.copy()
        if i == j:
            j = (i + 1) % len(m)
        m[j] = m[i]
        assert abs(linalg.det(m)) <= 1e-12 * hadamard(m) + 1e-300

    @given(st.integers(1, 5).flatmap(lambda n: st.tuples(cmatrices(n), cmatrices(n))))
    def test_det_matches_leibniz(self, pair):
        a, _ = pair
        assert abs(linalg.det(a) - oracles.leibniz_det(a.tolist())) <= 1e-12 * hadamard(a) + 1e-300

    @given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(0, 2))
    def test_rank_permutation_invariant(self, seed, k, dependent):
        rng = np.random.default_rng(seed)
        vs = [linalg.random_vector(rng, 5) for _ in range(k)]
        for _ in range(dependent):
            vs.append(sum(rng.standard_normal() * v for v in vs))
        ranks = {linalg.numeric_rank(list(p)) for p in itertools.permutations(vs)}
        assert ranks == {k}


class TestNInnerProperties:
    @settings(max_examples=60)
    @given(form_tuples())
    def test_conjugate_symmetry(self, t):
        form, x, y, tr, _ = t
        assert abs(form(x, y, tr) - np.conj(form(y, x, tr))) <= 1e-10 * max(1, natural_scale(x, y, tr))

    @settings(max_examples=60)
    @given(form_tuples())
    def test_trailing_permutations(self, t):
        form, x, y, tr, _ = t
        ref = form(x, y, tr)
        scale = natural_scale(x, y, tr)
        for perm in itertools.permutations(tr):
            assert abs(form(x, y, list(perm)) - ref) <= 1e-10 * scale

    @settings(max_examples=60)
    @given(form_tuples(extra=1))
    def test_additivity(self, t):
        form, x, y, tr, (z,) = t
        lhs = form(x + y, z, tr)
        rhs = form(x, z, tr) + form(y, z, tr)
        scale = (linalg.norm(x) + linalg.norm(y)) * natural_scale(z, z, tr) / linalg.norm(z)
        assert abs(lhs - rhs) <= 1e-9 * scale

    @settings(max_examples=60)
    @given(form_tuples(), scalars)
    def test_homogeneity(self, t, a):
        form, x, y, tr, _ = t
        assert abs(form(a * x, y, tr) - a * form(x, y, tr)) <= 1e-10 * (abs(a) * natural_scale(x, y, tr) + 1e-300)

    @settings(max_examples=60)
    @given(form_tuples(), st.booleans())
    def test_positivity_and_dependence(self, t, make_dependent):
        form, x, _, tr, _ = t
        if make_dependent:
            x = sum((k + 1j) * v for k, v in enumerate(tr))
        g = form(x, x, tr)
        scale = natural_scale(x, x, tr)
        assert g.real >= -1e-10 * scale
        assert abs(g.imag) <= 1e-10 * scale
        dependent = linalg.numeric_rank([x, *tr]) < form.n
        assert dependent == make_dependent
        if dependent:
            assert abs(g) <= 1e-10 * scale
        else:
            assert g.real > 1e-10 * scale

    @settings(max_examples=60)
    @given(form_tuples())
    def test_swap(self, t):
        form, x, _, tr, _ = t
        swapped = form(tr[0], tr[0], [x, *tr[1:]])
        assert abs(form(x, x, tr) - swapped) <= 1e-10 * natural_scale(x, x, tr)


class TestInducedProperties:
    @settings(max_examples=40)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.integers(0, 2), scalars)
    def test_inner_product_laws(self, seed, n, extra_dim, a):
        dim = min(n + extra_dim, 6)
        rng = np.random.default_rng(seed)
        anchors = tuple(linalg.random_vector(rng, dim) for _ in range(n))
        ii = InducedInner(NInnerForm(n, dim), anchors)
        x, y, z = (linalg.random_vector(rng, dim) for _ in range(3))
        scale = sum(natural_scale(x, y, list(s)) for s in ii.subsets())
        zscale = sum(natural_scale(x + y, z, list(s)) + natural_scale(x, z, list(s))
                     + natural_scale(y, z, list(s)) for s in ii.subsets())
        assert abs(ii(x, y) - np.conj(ii(y, x))) <= 1e-9 * scale
        assert abs(ii(a * x, y) - a * ii(x, y)) <= 1e-9 * (abs(a) * scale + 1e-300)
        assert abs(ii(x + y, z) - ii(x, z) - ii(y, z)) <= 1e-9 * zscale
        xx = ii(x, x)
        assert xx.real >= -1e-9 * linalg.norm(x) ** 2 * sum(
            natural_scale(x, x, list(s)) / linalg.norm(x) ** 2 for s in ii.subsets())

    @settings(max_examples=30)
    @given(st.integers(0, 2**32 - 1), st.floats(0.01, 100.0))
    def test_scale_equivariance(self, seed, k):
        rng = np.random.default_rng(seed)
        anchors = tuple(linalg.random_vector(rng, 3) for _ in range(2))
        x, y = linalg.random_vector(rng, 3), linalg.random_vector(rng, 3)
        one = InducedInner(NInnerForm(2, 3), anchors, 1.0)
        kk = InducedInner(NInnerForm(2, 3), anchors, k)
        assert kk(x, y) == k * one(x, y)


schemes_in_range = st.one_of(
    st.tuples(st.just(Scheme.DOUBLING), st.floats(0.0, 0.94)),
    st.tuples(st.just(Scheme.JENSEN_TRIPLING), st.floats(0.0, 0.94)),
    st.tuples(st.just(Scheme.JENSEN_SHRINKING), st.floats(2.05, 8.0)),
)


class TestControlProperties:
    @given(schemes_in_range, st.floats(0.0, 5.0), st.floats(0.01, 10.0), st.floats(0.01, 10.0))
    def test_power_closed_form_matches_summation(self, sp, theta, a, b):
        scheme, p = sp
        got = phi_tilde(ControlFunction.power(theta, p), scheme,
                        [a * np.ones(1), b * np.ones(1)]).value
        r = scheme.series_ratio(p)
        terms = max(60, int(math.ceil(math.log(1e-16) / math.log(r))) + 1)
        want = oracles.phi_tilde_power(theta, p, [a, b], scheme.value, count=terms)
        assert abs(got - want) <= 1e-10 * max(abs(want), 1e-300)

    @given(st.floats(0.0, 10.0), st.floats(0.0, 0.999), st.floats(0.0, 50.0))
    def test_doubling_closed_form_is_half_phi_tilde(self, theta, p, a):
        x = a * np.ones(1)
        half = 0.5 * phi_tilde(ControlFunction.power(theta, p), Scheme.DOUBLING, [x, x]).value
        # subnormal results cannot carry 12 significant digits, hence the absolute floor
        assert abs(closed_form_bound(Scheme.DOUBLING, theta, p, a) - half) <= 1e-12 * half + 1e-300

    @given(st.floats(0.0, 3.0), st.floats(4.01, 9.0), st.integers(2, 4),
           st.lists(st.floats(0.0, 10.0), min_size=3, max_size=5))
    def test_domination(self, theta, p, order, norms):
        cf = ControlFunction.power(theta, p, arity=len(norms))
        args = [t * np.ones(1) for t in norms]
        for lower, upper in dominating_terms(cf, args, order, 25):
            assert lower <= upper


class TestDirectMethodProperties:
    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10_000), schemes_in_range, st.floats(0.1, 3.0))
    def test_gap_law_and_final_bound(self, seed, sp, theta):
        scheme, p = sp
        mode = "jensen" if scheme.is_jensen else "cauchy"
        f = make_perturbed_map(theta, p, 3, 3, seed, mode)
        radii = (0.1, 2.0) if scheme.ascending else (0.1, 10.0)
        xs = sample_points(np.random.default_rng(seed), 3, 30, *radii)
        for run in direct_method_batch(f, scheme, xs):
            floor = 1e-12 * max(1.0, linalg.norm(run.x))
            assert np.all(run.gaps <= run.gap_bounds + floor)
            assert run.defect_observed <= run.defect_bound_theoretical + run.tail_bound + 1e-9
