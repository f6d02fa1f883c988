"""Ordinary inner products induced by an n-inner product and a fixed anchor set.

Given linearly independent anchors ``a_1, ..., a_n`` and ``k > 0``,

    <x, y>_a = k * sum_i <x, y | a_1, ..., a_{i-1}, a_{i+1}, ..., a_n>

sums the n-inner product over the ``n`` subsets of size ``n - 1`` of the
anchors. The subset omitting ``a_1`` is added first, then the one omitting
``a_2`` and so on, so the floating-point result is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import AnchorError
from .nip import AxiomReport, NInnerForm, build_report, natural_scale


@dataclass(frozen=True)
class InducedInner:
    source: NInnerForm
    anchors: tuple
    k: float = 1.0
    condition: float = field(init=False)

    def __post_init__(self):
        anchors = tuple(linalg.as_vector(a) for a in self.anchors)
        object.__setattr__(self, "anchors", anchors)
        if self.k <= 0:
            raise ValueError(f"k must be positive, got {self.k}")
        if len(anchors) != self.source.n:
            raise AnchorError(f"need exactly {self.source.n} anchors, got {len(anchors)}")
        if linalg.numeric_rank(anchors) != self.source.n:
            raise AnchorError("anchors are linearly dependent")
        gram = linalg.gram_matrix(anchors, anchors, self.source.base_inner)
        object.__setattr__(self, "condition", linalg.condition_estimate(gram))

    @classmethod
    def from_config(cls, source: NInnerForm, config: dict) -> "InducedInner":
        """Build from the wire format ``{"anchors": [[[re, im], ...], ...], "k": 1.0}``."""
        anchors = [linalg.vector_from_json(a) for a in config["anchors"]]
        return cls(source, tuple(anchors), float(config.get("k", 1.0)))

    def subsets(self):
        a = self.anchors
        return [a[:i] + a[i + 1:] for i in range(len(a))]

    def __call__(self, x, y) -> complex:
        return induced_inner(self, x, y)


def induced_inner(ii: InducedInner, x, y) -> complex:
    total = 0j
    for trailing in ii.subsets():
        total += ii.source(x, y, list(trailing))
    return ii.k * total


def _scale(ii: InducedInner, x, y) -> float:
    return ii.k * sum(natural_scale(x, y, list(t)) for t in ii.subsets())


def verify_inner_product(ii: InducedInner, sample_count: int, seed: int,
                         tol: float = 1e-9) -> AxiomReport:
    """Check that the induced form is an inner product on seeded samples.

    Checks conjugate symmetry, additivity and homogeneity in the first
    argument, and positive-definiteness: ``<x, x>`` is real and positive for
    ``x != 0`` and vanishes at ``x = 0``. Violations are relative to the
    natural scale of each value. The report carries the anchor Gram
    condition estimate under ``anchor_condition``.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    d = ii.source.space_dim
    viol = {key: [] for key in ("symmetry", "additivity", "homogeneity", "positivity")}
    zero = np.zeros(d, dtype=np.complex128)
    for s in range(sample_count):
        rng = np.random.default_rng([seed, s])
        x, y, z = (linalg.random_vector(rng, d) for _ in range(3))
        alpha = 10.0 * np.sqrt(rng.random()) * linalg.random_unit_scalar(rng)

        xy = ii(x, y)
        sxy = _scale(ii, x, y)
        viol["symmetry"].append(abs(xy - np.conj(ii(y, x))) / sxy)

        lhs = ii(x + y, z)
        add_scale = _scale(ii, x, z) + _scale(ii, y, z)
        viol["additivity"].append(abs(lhs - ii(x, z) - ii(y, z)) / add_scale)

        viol["homogeneity"].append(abs(ii(alpha * x, y) - alpha * xy) / (abs(alpha) * sxy))

        xx = ii(x, x)
        sxx = _scale(ii, x, x)
        pos = (max(0.0, -xx.real) + abs(xx.imag)) / sxx
        if xx.real <= 0.0:
            pos = max(pos, 1.0)
        viol["positivity"].append(pos)

    viol["positivity"].append(abs(ii(zero, zero)))
    return build_report(viol, tol, {"anchor_condition": ii.condition, "k": ii.k,
                                    "n": ii.source.n, "dim": d, "seed": seed})
