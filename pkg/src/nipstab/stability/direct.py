"""The direct method: approximate the exact solution by rescaled iterates of ``f``.

``U_l(x) = b^-l f(b^l x)`` for the ascending schemes (b = 2 or 3) and
``U_l(x) = 3^l f(x / 3^l)`` for the shrinking scheme. Every run records the
iterates, the one-step gaps together with their theoretical bounds, the
bound on ``|f(x) - U(x)|``, and an analytic bound on ``|U(x) - U_l(x)|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import linalg
from ..errors import ScaleOverflowError
from ..nip import AxiomReport, NInnerForm, build_report, natural_scale
from .control import ControlFunction, Scheme, gap_bound, scheme_bound, tail_bound
from .maps import sample_points, unit_scalars

OVERFLOW_LIMIT = 1e150
BOUND_SLACK = 1e-9
# rounding floor for comparisons against analytic quantities, times max(1, |x|)
ROUNDING_FLOOR = 1e-12

DEFAULT_L_MAX = {True: 40, False: 30}
DEFAULT_RADII = {True: (0.1, 2.0), False: (0.1, 10.0)}


def default_l_max(scheme: Scheme) -> int:
    return DEFAULT_L_MAX[scheme.ascending]


def default_radii(scheme: Scheme) -> tuple[float, float]:
    return DEFAULT_RADII[scheme.ascending]


def _check_compatible(f, scheme: Scheme) -> None:
    compatible = getattr(f, "compatible", None)
    if compatible is not None and not compatible(scheme):
        raise ValueError(f"map in {f.mode!r} mode does not satisfy the hypothesis of "
                         f"scheme {scheme.value}")


def _scales(scheme: Scheme, l_values) -> np.ndarray:
    return np.array([scheme.scale(l) for l in l_values])


def approximant(f, scheme: Scheme, xs, l: int) -> np.ndarray:
    """``U_l`` evaluated row-wise on ``xs``."""
    xs = np.asarray(xs, dtype=np.complex128)
    s = scheme.scale(l)
    if s * float(np.max(linalg.norms(xs), initial=0.0)) > OVERFLOW_LIMIT:
        raise ScaleOverflowError(f"|{s:g} x| exceeds {OVERFLOW_LIMIT:g}")
    return f(s * xs) / s


def iterate_stack(f, scheme: Scheme, xs, l_max: int) -> np.ndarray:
    """``U_0 .. U_{l_max}`` on every row of ``xs``; shape ``(l_max + 1, *xs.shape[:-1], dim_Y)``."""
    xs = np.asarray(xs, dtype=np.complex128)
    s = _scales(scheme, range(l_max + 1))
    biggest = float(s.max()) * float(np.max(linalg.norms(xs), initial=0.0))
    if biggest > OVERFLOW_LIMIT:
        raise ScaleOverflowError(f"iterate argument norm {biggest:.3g} exceeds {OVERFLOW_LIMIT:g}")
    shape = (len(s),) + (1,) * xs.ndim
    return f(s.reshape(shape) * xs[None]) / s.reshape(shape)


def power_constant(scheme: Scheme, p: float) -> float:
    """``B(x) / (theta |x|^p)`` for a power control."""
    if scheme is Scheme.DOUBLING:
        return 1.0 / (1.0 - 2.0 ** (p - 1.0))
    if scheme is Scheme.JENSEN_TRIPLING:
        return (3.0 + 3.0 ** p) / (3.0 * (1.0 - 3.0 ** (p - 1.0)))
    return (3.0 + 3.0 ** p) * 3.0 ** (-p) / (1.0 - 3.0 ** (1.0 - p))


def _pow(norms, p):
    norms = np.asarray(norms, dtype=float)
    out = np.zeros_like(norms)
    np.power(norms, p, out=out, where=norms > 0)
    return out


def tails(cf: ControlFunction, scheme: Scheme, xs, l: int) -> np.ndarray:
    """:func:`tail_bound` on every row of ``xs``."""
    xs = np.asarray(xs, dtype=np.complex128)
    if cf.is_power:
        norms = linalg.norms(xs)
        r = scheme.series_ratio(cf.p)
        return power_constant(scheme, cf.p) * cf.theta * _pow(norms, cf.p) * r ** l
    flat = xs.reshape(-1, xs.shape[-1])
    return np.array([tail_bound(cf, scheme, x, l) for x in flat]).reshape(xs.shape[:-1])


def gap_bounds(cf: ControlFunction, scheme: Scheme, x, l_max: int) -> np.ndarray:
    """:func:`gap_bound` for l = 0 .. l_max - 1."""
    ls = np.arange(l_max)
    if not cf.is_power:
        return np.array([gap_bound(cf, scheme, x, int(l)) for l in ls])
    a = linalg.norm(np.asarray(x, dtype=np.complex128))
    if a == 0.0:
        return np.zeros(l_max)
    th, p = cf.theta, cf.p
    if scheme is Scheme.DOUBLING:
        return 2.0 ** (-(ls + 1.0)) * th * 2.0 * (2.0 ** ls * a) ** p
    if scheme is Scheme.JENSEN_TRIPLING:
        return 3.0 ** (-(ls + 1.0)) * th * (3.0 + 3.0 ** p) * (3.0 ** ls * a) ** p
    return 3.0 ** ls * th * (3.0 + 3.0 ** p) * (a / 3.0 ** (ls + 1.0)) ** p


@dataclass
class ApproximationRun:
    scheme: Scheme
    x: np.ndarray
    iterates: np.ndarray | None
    approximant: np.ndarray | None
    defect_bound_theoretical: float | None
    defect_observed: float | None
    tail_bound: float | None
    tail_estimate: float | None
    gaps: np.ndarray | None = field(default=None, repr=False)
    gap_bounds: np.ndarray | None = field(default=None, repr=False)
    gap_law_ok: bool = True
    verdict: str = "pass"

    @property
    def excluded(self) -> bool:
        return self.verdict == "excluded"


def _excluded_run(scheme, x) -> ApproximationRun:
    return ApproximationRun(scheme, x, None, None, None, None, None, None, verdict="excluded")


def _assemble(f_x, scheme, x, its, cf, l_max) -> ApproximationRun:
    gaps = linalg.norms(np.diff(its, axis=0))
    gbounds = gap_bounds(cf, scheme, x, l_max)
    floor = ROUNDING_FLOOR * max(1.0, linalg.norm(x))
    gap_ok = bool(np.all(gaps <= gbounds + floor))
    bound = scheme_bound(cf, scheme, x)
    tail = tail_bound(cf, scheme, x, l_max)
    if cf.is_power:
        r = scheme.series_ratio(cf.p)
    elif len(gaps) >= 2 and gaps[-2] > 0:
        r = min(gaps[-1] / gaps[-2], 0.99)
    else:
        r = 0.99
    estimate = float(gaps[-1] * r / (1.0 - r)) if len(gaps) else 0.0
    observed = linalg.norm(f_x - its[-1])
    ok = observed <= bound + tail + BOUND_SLACK and gap_ok
    return ApproximationRun(
        scheme=scheme, x=x, iterates=its, approximant=its[-1],
        defect_bound_theoretical=bound, defect_observed=observed,
        tail_bound=tail, tail_estimate=estimate, gaps=gaps, gap_bounds=gbounds,
        gap_law_ok=gap_ok, verdict="pass" if ok else "fail",
    )


def direct_method_batch(f, scheme: Scheme, xs, l_max: int | None = None,
                        cf: ControlFunction | None = None, order: int = 1,
                        ) -> list[ApproximationRun]:
    """:func:`direct_method` on every row of ``xs`` with one vectorised evaluation of ``f``."""
    scheme = Scheme.parse(scheme)
    _check_compatible(f, scheme)
    l_max = default_l_max(scheme) if l_max is None else l_max
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    cf = f.control(order) if cf is None else cf
    xs = np.atleast_2d(np.asarray(xs, dtype=np.complex128))
    zero = linalg.norms(xs) == 0.0
    runs: list[ApproximationRun | None] = [None] * len(xs)
    if scheme.is_jensen:
        for i in np.flatnonzero(zero):
            runs[i] = _excluded_run(scheme, xs[i])
    live = [i for i in range(len(xs)) if runs[i] is None]
    if live:
        stack = iterate_stack(f, scheme, xs[live], l_max)
        f_xs = f(xs[live])
        for k, i in enumerate(live):
            runs[i] = _assemble(f_xs[k], scheme, xs[i], stack[:, k], cf, l_max)
    return runs


def direct_method(f, scheme: Scheme, x, l_max: int | None = None,
                  cf: ControlFunction | None = None, order: int = 1) -> ApproximationRun:
    """Run the direct method at a single point.

    The verdict passes when ``|f(x) - U_{l_max}(x)|`` stays within the
    scheme bound plus the analytic tail (plus 1e-9) and every measured gap
    obeys its one-step bound. For the Jensen schemes the zero vector lies
    outside the domain of the hypotheses and yields an ``"excluded"`` run.
    """
    x = linalg.as_vector(x)
    return direct_method_batch(f, scheme, x[None], l_max, cf, order)[0]


def certify_linearity(f, scheme: Scheme, sample_count: int, seed: int, tol: float = 1e-6,
                      l_max: int | None = None, cf: ControlFunction | None = None,
                      order: int = 1, radii: tuple[float, float] | None = None,
                      ) -> AxiomReport:
    """Check that ``U = U_{l_max}`` is additive, C-homogeneous and stable in ``l``.

    Each check compares the measured violation with what the analytic tails
    allow: the limit ``U`` is exactly linear and ``|U - U_l| <= T_l``, so
    ``|U_l(x + y) - U_l(x) - U_l(y)| <= T_l(x + y) + T_l(x) + T_l(y)`` and so
    on. A check's per-sample violation is the excess over that allowance
    (plus a 1e-12 rounding floor); the verdict compares it with ``tol``.
    Homogeneity is tested against 64 roots of unity and 64 random unit
    scalars for every sample, and against complex ``alpha = |alpha| mu`` with
    ``|alpha| <= 10``. The uniqueness check compares ``U_{l_max}`` with
    ``U_{l_max + 2}``.
    """
    scheme = Scheme.parse(scheme)
    _check_compatible(f, scheme)
    l = default_l_max(scheme) if l_max is None else l_max
    cf = f.control(order) if cf is None else cf
    r_min, r_max = default_radii(scheme) if radii is None else radii
    rng = np.random.default_rng([seed, 0x4C494E])
    xs = sample_points(rng, f.dim_x, sample_count, r_min, r_max)
    ys = sample_points(rng, f.dim_x, sample_count, r_min, r_max)
    mags = 10.0 * (1.0 - rng.random(sample_count))
    mus = unit_scalars(seed)
    alphas = mags * mus[(np.arange(sample_count) + 17) % len(mus)]

    def U(v):
        return approximant(f, scheme, v, l)

    def floor(v):
        return ROUNDING_FLOOR * np.maximum(1.0, linalg.norms(v))

    raw, excess = {}, {}

    ux, uy = U(xs), U(ys)
    tx = tails(cf, scheme, xs, l)
    diff = linalg.norms(U(xs + ys) - ux - uy)
    allow = tails(cf, scheme, xs + ys, l) + tx + tails(cf, scheme, ys, l) + floor(xs + ys)
    raw["additivity"], excess["additivity"] = diff, np.maximum(0.0, diff - allow)

    mx = mus[None, :, None] * xs[:, None, :]
    diff = linalg.norms(U(mx) - mus[None, :, None] * ux[:, None, :])
    allow = tails(cf, scheme, mx, l) + tx[:, None] + floor(mx)
    raw["unit_homogeneity"] = diff.max(axis=1)
    excess["unit_homogeneity"] = np.maximum(0.0, diff - allow).max(axis=1)

    ax = alphas[:, None] * xs
    diff = linalg.norms(U(ax) - alphas[:, None] * ux)
    allow = tails(cf, scheme, ax, l) + mags * tx + floor(ax)
    raw["complex_homogeneity"], excess["complex_homogeneity"] = diff, np.maximum(0.0, diff - allow)

    diff = linalg.norms(ux - approximant(f, scheme, xs, l + 2))
    allow = tx + floor(xs)
    raw["uniqueness"], excess["uniqueness"] = diff, np.maximum(0.0, diff - allow)

    report = build_report({k: list(map(float, v)) for k, v in excess.items()}, tol,
                          {"scheme": scheme.value, "l_max": l, "seed": seed})
    report.extra["max_raw"] = {k: float(v.max()) for k, v in raw.items()}
    report.extra["uniqueness_ratio"] = float(np.max(raw["uniqueness"] / (tx + floor(xs))))
    return report


@dataclass
class PreservationReport:
    scheme: Scheme
    l_max: int
    order: int
    defects: np.ndarray
    bounds: np.ndarray
    floors: np.ndarray
    norms: np.ndarray = field(repr=False)

    @property
    def verdicts(self) -> np.ndarray:
        return self.defects <= self.bounds + self.floors

    @property
    def passed(self) -> bool:
        return bool(np.all(self.verdicts))

    @property
    def max_defect(self) -> float:
        return float(self.defects.max(initial=0.0))

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme.value, "l_max": self.l_max, "order": self.order,
            "samples": int(len(self.defects)), "max_defect": self.max_defect,
            "max_bound": float(self.bounds.max(initial=0.0)),
            "verdict": "pass" if self.passed else "fail",
        }


def certify_preservation(f, scheme: Scheme, sample_count: int, seed: int,
                         l_max: int | None = None, form_x: NInnerForm | None = None,
                         form_y: NInnerForm | None = None, cf: ControlFunction | None = None,
                         radii: tuple[float, float] | None = None) -> PreservationReport:
    """Orthogonality (or n-orthogonality) defect of ``U_{l_max}`` on seeded tuples.

    Without forms, pairs ``(x, y)`` are tested against plain inner products;
    with forms, ``(n+1)``-tuples against the two n-inner products. Each
    defect must stay below the vanishing bound ``b^-l phi(b^l args)``
    (ascending) or ``3^(2 n l) phi(args / 3^l)`` (shrinking, n = 1 for inner
    products), up to a 1e-12 rounding floor relative to the natural scale
    of the tuple.
    """
    scheme = Scheme.parse(scheme)
    l = default_l_max(scheme) if l_max is None else l_max
    order = 1 if form_x is None else form_x.n
    cf = f.control(order) if cf is None else cf
    r_min, r_max = default_radii(scheme) if radii is None else radii
    rng = np.random.default_rng([seed, 0x505245])
    arity = order + 1
    pts = sample_points(rng, f.dim_x, sample_count * arity, r_min, r_max)
    tuples = pts.reshape(sample_count, arity, f.dim_x)
    images = approximant(f, scheme, tuples, l)
    norms = linalg.norms(tuples)

    defects = np.empty(sample_count)
    floors = np.empty(sample_count)
    for i in range(sample_count):
        t, u = tuples[i], images[i]
        if form_x is None:
            defects[i] = abs(linalg.inner(u[0], u[1]) - linalg.inner(t[0], t[1]))
            floors[i] = ROUNDING_FLOOR * norms[i, 0] * norms[i, 1]
        else:
            defects[i] = abs(form_y(u[0], u[1], list(u[2:])) - form_x(t[0], t[1], list(t[2:])))
            floors[i] = ROUNDING_FLOOR * natural_scale(t[0], t[1], list(t[2:]))

    if cf.is_power:
        s = cf.power_of_norms(norms)
        b = float(scheme.base)
        if scheme.ascending:
            bounds = s * b ** (l * (cf.p - 1.0))
        else:
            bounds = s * 3.0 ** (l * (2.0 * order - cf.p))
    else:
        bounds = np.empty(sample_count)
        for i in range(sample_count):
            if scheme.ascending:
                sc = scheme.scale(l)
                bounds[i] = cf(*(sc * tuples[i])) / sc
            else:
                bounds[i] = 3.0 ** (2 * order * l) * cf(*(tuples[i] / 3.0 ** l))
    return PreservationReport(scheme, l, order, defects, bounds, floors, norms)


def preservation_decay(f, scheme: Scheme, sample_count: int, seed: int,
                       l_max: int | None = None, form_x: NInnerForm | None = None,
                       form_y: NInnerForm | None = None,
                       radii: tuple[float, float] | None = None):
    """Max preservation defect and max bound of ``U_l`` on one tuple set, for l = 0..l_max."""
    scheme = Scheme.parse(scheme)
    l_max = default_l_max(scheme) if l_max is None else l_max
    defects, bounds = np.empty(l_max + 1), np.empty(l_max + 1)
    for l in range(l_max + 1):
        rep = certify_preservation(f, scheme, sample_count, seed, l, form_x, form_y, radii=radii)
        defects[l] = rep.max_defect
        bounds[l] = float(rep.bounds.max(initial=0.0))
    return defects, bounds
