"""n-inner products built from Gram determinants, and statistical axiom checks.

For an inner product space ``(X, <.,.>)`` with ``dim X >= n >= 2`` the form

    <x, y | x2, ..., xn> = det [[<x, y>,  <x, x2>,  ..., <x, xn>],
                                [<x2, y>, <x2, x2>, ..., <x2, xn>],
                                ...
                                [<xn, y>, <xn, x2>, ..., <xn, xn>]]

is an n-inner product. :func:`check_axioms` samples random tuples and
measures how far any (n+1)-ary form is from satisfying the seven defining
conditions nI1..nI7.

nI7 is tested as the additivity *equality*
``<x+y, z | T> = <x, z | T> + <y, z | T>``. An inequality between complex
numbers has no meaning, and additivity is what the Gram construction
actually satisfies.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import ArityError, AxiomViolationError, DimensionError
from .linalg import InnerProduct

AXIOM_IDS = ("nI1", "nI2", "nI3", "nI4", "nI5", "nI6", "nI7")

# imaginary part / negativity allowed in <x, x | T>, relative to the natural scale
SELF_PRODUCT_TOL = 1e-10


@dataclass(frozen=True)
class NInnerForm:
    """Gram-determinant n-inner product on C^space_dim.

    ``base_inner`` defaults to the standard inner product. Passing any other
    callable (even one that is not an inner product) is allowed on purpose,
    so that broken forms can be fed to :func:`check_axioms`.
    """

    n: int
    space_dim: int
    base_inner: InnerProduct = linalg.inner

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.space_dim < self.n:
            raise DimensionError(f"space_dim {self.space_dim} < n {self.n}")

    def __call__(self, x, y, trailing) -> complex:
        return gram_n_inner(self, x, y, trailing)


def _validate(form: NInnerForm, vectors: Sequence[np.ndarray], trailing) -> None:
    if len(trailing) != form.n - 1:
        raise ArityError(f"expected {form.n - 1} trailing vectors, got {len(trailing)}")
    for v in vectors:
        if np.shape(v) != (form.space_dim,):
            raise DimensionError(f"vector of shape {np.shape(v)} not in C^{form.space_dim}")


def gram_n_inner(form: NInnerForm, x, y, trailing: Sequence) -> complex:
    """Evaluate ``<x, y | trailing>`` as the Gram-bordered determinant."""
    _validate(form, [x, y, *trailing], trailing)
    rows = [x, *trailing]
    cols = [y, *trailing]
    if form.base_inner is linalg.inner:
        r = np.asarray(rows, dtype=np.complex128)
        c = np.asarray(cols, dtype=np.complex128)
        g = r @ c.conj().T
    else:
        g = linalg.gram_matrix(rows, cols, form.base_inner)
    return linalg.det(g)


def natural_scale(x, y, trailing) -> float:
    """``|x| |y| prod |t|^2``: the size a Gram n-inner product value can reach."""
    s = linalg.norm(x) * linalg.norm(y)
    for t in trailing:
        s *= linalg.norm(t) ** 2
    return s


def n_norm(form: NInnerForm, x, trailing: Sequence) -> float:
    """``sqrt(<x, x | trailing>)``.

    Raises :class:`AxiomViolationError` when the self-product has a
    non-negligible imaginary part or is clearly negative, which can only
    happen when the base inner product is broken.
    """
    value = gram_n_inner(form, x, x, trailing)
    slack = SELF_PRODUCT_TOL * max(1.0, natural_scale(x, x, trailing))
    if abs(value.imag) > slack:
        raise AxiomViolationError(f"<x, x | ...> has imaginary part {value.imag:.3e}")
    if value.real < -slack:
        raise AxiomViolationError(f"<x, x | ...> is negative: {value.real:.3e}")
    return float(np.sqrt(max(value.real, 0.0)))


@dataclass
class AxiomRecord:
    axiom_id: str
    samples: int
    max_violation: float
    tol: float
    verdict: str
    violations: list[float] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "axiom_id": self.axiom_id,
            "samples": self.samples,
            "max_violation": self.max_violation,
            "tol": self.tol,
            "verdict": self.verdict,
        }


@dataclass
class AxiomReport:
    records: dict[str, AxiomRecord]
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.verdict == "pass" for r in self.records.values())

    def __getitem__(self, axiom_id: str) -> AxiomRecord:
        return self.records[axiom_id]

    def to_json(self) -> dict:
        out = {"checks": [r.to_json() for r in self.records.values()]}
        out.update(self.extra)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def build_report(violations: dict[str, list[float]], tol: float, extra=None) -> AxiomReport:
    records = {}
    for key, vals in violations.items():
        worst = max(vals) if vals else 0.0
        records[key] = AxiomRecord(
            axiom_id=key,
            samples=len(vals),
            max_violation=worst,
            tol=tol,
            verdict="pass" if worst <= tol else "fail",
            violations=list(vals),
        )
    return AxiomReport(records, dict(extra or {}))


def _sample_tuple(rng, form: NInnerForm):
    d = form.space_dim
    x, y, z = (linalg.random_vector(rng, d) for _ in range(3))
    trailing = [linalg.random_vector(rng, d) for _ in range(form.n - 1)]
    alpha = 10.0 * np.sqrt(rng.random()) * linalg.random_unit_scalar(rng)
    coeffs = linalg.random_vector(rng, form.n - 1)
    return x, y, z, trailing, alpha, coeffs


def check_axioms(form: NInnerForm, sample_count: int, seed: int, tol: float = 1e-9,
                 *, dependent_only: bool = False, rank_tol: float = linalg.DEFAULT_RANK_TOL,
                 ) -> AxiomReport:
    """Measure the violation of each axiom nI1..nI7 on seeded random tuples.

    Every violation is relative: the absolute defect divided by the natural
    scale of the values involved (see :func:`natural_scale`). Sample ``s`` is
    drawn from ``default_rng([seed, s])`` so results do not depend on the
    order of evaluation.

    nI2 is checked in both directions on every sample: a tuple made
    dependent on purpose (``x`` a random combination of the trailing vectors)
    must give ``<x, x | T> ~ 0``, and the random tuple, when
    :func:`linalg.numeric_rank` declares it independent, must give a value
    that is clearly positive. With ``dependent_only`` the random tuple is
    replaced by a dependent one everywhere.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    viol: dict[str, list[float]] = {key: [] for key in AXIOM_IDS}
    G = form.__call__
    perms = list(itertools.permutations(range(form.n - 1)))

    for s in range(sample_count):
        rng = np.random.default_rng([seed, s])
        x, y, z, trailing, alpha, coeffs = _sample_tuple(rng, form)
        x_dep = sum(c * t for c, t in zip(coeffs, trailing))
        if dependent_only:
            x = x_dep

        sxx = natural_scale(x, x, trailing)
        sxy = natural_scale(x, y, trailing)
        gxx = G(x, x, trailing)
        gxy = G(x, y, trailing)

        viol["nI1"].append((max(0.0, -gxx.real) + abs(gxx.imag)) / sxx)

        nI2 = [abs(G(x_dep, x_dep, trailing)) / natural_scale(x_dep, x_dep, trailing)]
        if linalg.numeric_rank([x, *trailing], rank_tol) == form.n:
            nI2.append(0.0 if gxx.real > tol * sxx else 1.0)
        elif not dependent_only:
            nI2.append(abs(gxx) / sxx)
        viol["nI2"].append(max(nI2))

        viol["nI3"].append(abs(gxy - np.conj(G(y, x, trailing))) / sxy)

        worst = 0.0
        for perm in perms:
            permuted = [trailing[i] for i in perm]
            worst = max(worst, abs(G(x, y, permuted) - gxy))
        viol["nI4"].append(worst / sxy)

        swapped = G(trailing[0], trailing[0], [x, *trailing[1:]])
        viol["nI5"].append(abs(gxx - swapped) / sxx)

        viol["nI6"].append(abs(G(alpha * x, y, trailing) - alpha * gxy) / (abs(alpha) * sxy))

        lhs = G(x + y, z, trailing)
        rhs = G(x, z, trailing) + G(y, z, trailing)
        add_scale = (linalg.norm(x) + linalg.norm(y)) * natural_scale(z, z, trailing) / linalg.norm(z)
        viol["nI7"].append(abs(lhs - rhs) / add_scale)

    return build_report(viol, tol, {"n": form.n, "dim": form.space_dim, "seed": seed})
