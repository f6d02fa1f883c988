"""Control functions, their scheme-weighted series, and closed-form bounds.

A control function ``phi`` bounds the defect of a map. Each approximation
scheme sums ``phi`` along a geometric sequence of scaled arguments:

* doubling:         sum_j 2^-j phi(2^j x, 2^j y, ...)
* Jensen tripling:  sum_j 3^-j phi(3^j x, 3^j y, ...)
* Jensen shrinking: sum_j 3^j  phi(x / 3^j, y / 3^j, ...)

For the power control ``theta * sum_i |x_i|^p`` every series is geometric
with ratio ``2^(p-1)``, ``3^(p-1)`` and ``3^(1-p)`` respectively.

``order`` is 1 for maps between Hilbert spaces and ``n`` for maps between
n-inner product spaces; it widens the shrinking regime's validity interval
from ``p > 2`` to ``p > 2n`` and sets the arity of the control to
``order + 1``.

Zero arguments contribute nothing to a power control (``|0|^p := 0`` even
for ``p = 0``). With that convention the n-ary Cauchy control
``phi(x, y, 0, ..., 0)`` coincides with the binary one, and the n-ary
bounds reduce to the binary constants.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .. import linalg
from ..errors import DivergenceError

MAX_TABLE_TERMS = 5000
EMPIRICAL_RATIO_CAP = 0.99


class Scheme(enum.Enum):
    DOUBLING = "doubling"
    JENSEN_TRIPLING = "jensen_tripling"
    JENSEN_SHRINKING = "jensen_shrinking"

    @classmethod
    def parse(cls, name: "str | Scheme") -> "Scheme":
        if isinstance(name, Scheme):
            return name
        key = str(name).strip().lower().replace("-", "_")
        for s in cls:
            if key in (s.value, s.name.lower()):
                return s
        raise ValueError(f"unknown scheme {name!r}; expected one of "
                         f"{', '.join(s.value for s in cls)}")

    @property
    def base(self) -> int:
        return 2 if self is Scheme.DOUBLING else 3

    @property
    def ascending(self) -> bool:
        return self is not Scheme.JENSEN_SHRINKING

    @property
    def is_jensen(self) -> bool:
        return self is not Scheme.DOUBLING

    def scale(self, l: int) -> float:
        """Factor applied to the argument of ``f`` at iterate ``l``."""
        return float(self.base) ** l if self.ascending else float(self.base) ** (-l)

    def series_ratio(self, p: float) -> float:
        """Term ratio of the power-control series."""
        if self.ascending:
            return float(self.base) ** (p - 1.0)
        return float(self.base) ** (1.0 - p)

    def validity(self, order: int = 1) -> tuple[float, float, bool]:
        """``(lo, hi, lo_closed)`` with ``hi`` always open."""
        if self.ascending:
            return 0.0, 1.0, True
        return 2.0 * order, math.inf, False

    def validity_text(self, order: int = 1) -> str:
        lo, hi, closed = self.validity(order)
        left = "[" if closed else "("
        lo_s = f"{lo:g}"
        hi_s = "inf" if math.isinf(hi) else f"{hi:g}"
        return f"{left}{lo_s},{hi_s})"

    def in_validity(self, p: float, order: int = 1) -> bool:
        lo, hi, closed = self.validity(order)
        above = p >= lo if closed else p > lo
        return above and p < hi

    def check_p(self, p: float, order: int = 1) -> None:
        if not self.in_validity(p, order):
            raise DivergenceError(
                f"p={p:g} outside validity interval {self.validity_text(order)} "
                f"for scheme {self.value}")


class PhiTilde(NamedTuple):
    value: float
    tail: float
    terms_used: int


def _norm(v) -> float:
    return linalg.norm(np.asarray(v, dtype=np.complex128))


@dataclass(frozen=True)
class ControlFunction:
    """Either ``theta * sum_i |x_i|^p`` or a user-supplied nonnegative function.

    For table controls ``degree`` optionally declares a homogeneity degree
    ``d`` (``phi(s * args) <= s^d phi(args)`` along the scheme's direction);
    it is used to certify truncation tails.
    """

    kind: str
    theta: float = 0.0
    p: float = 0.0
    arity: int = 2
    fn: Callable | None = None
    degree: float | None = None

    @classmethod
    def power(cls, theta: float, p: float, arity: int = 2) -> "ControlFunction":
        if theta < 0 or p < 0:
            raise ValueError("power control needs theta >= 0 and p >= 0")
        return cls("power", theta=float(theta), p=float(p), arity=arity)

    @classmethod
    def table(cls, fn: Callable, arity: int = 2, degree: float | None = None) -> "ControlFunction":
        return cls("table", fn=fn, arity=arity, degree=degree)

    @property
    def is_power(self) -> bool:
        return self.kind == "power"

    def pad(self, args: Sequence) -> list:
        """Fill missing trailing arguments with zero vectors."""
        args = list(args)
        if len(args) > self.arity:
            raise ValueError(f"control takes {self.arity} arguments, got {len(args)}")
        zero = np.zeros_like(np.asarray(args[0], dtype=np.complex128))
        return args + [zero] * (self.arity - len(args))

    def power_of_norms(self, norms) -> np.ndarray:
        """``theta * sum |x_i|^p`` from an array of norms (last axis = arguments)."""
        norms = np.asarray(norms, dtype=float)
        terms = np.zeros_like(norms)
        np.power(norms, self.p, out=terms, where=norms > 0.0)
        return self.theta * terms.sum(axis=-1)

    def __call__(self, *args) -> float:
        args = self.pad(args)
        if self.is_power:
            return float(self.power_of_norms([_norm(a) for a in args]))
        value = float(self.fn(*args))
        if not value >= 0.0:
            raise ValueError(f"control function returned {value}, expected >= 0")
        return value


def _scaled(args, factor):
    return [factor * np.asarray(a) for a in args]


def phi_tilde(cf: ControlFunction, scheme: Scheme, args: Sequence, tol: float = 1e-12,
              ) -> PhiTilde:
    """Sum of ``phi`` along the scheme's geometric sequence of arguments.

    Power controls use the closed form (tail 0). Table controls are summed
    term by term until a geometric majorant of the remaining tail drops
    below ``tol``; the majorant ratio is the scheme's analytic ratio for
    the declared degree when that ratio is < 1, otherwise the last observed
    term ratio capped at 0.99.
    """
    args = cf.pad(args)
    if cf.is_power:
        r = scheme.series_ratio(cf.p)
        if r >= 1.0:
            raise DivergenceError(
                f"series for scheme {scheme.value} diverges at p={cf.p:g} "
                f"(ratio {r:g} >= 1); validity interval {scheme.validity_text()}")
        s = cf.power_of_norms([_norm(a) for a in args])
        return PhiTilde(float(s / (1.0 - r)), 0.0, 0)

    declared = None
    if cf.degree is not None:
        declared = scheme.series_ratio(cf.degree)
        if declared >= 1.0:
            declared = None
    total = 0.0
    prev = None
    b = float(scheme.base)
    for j in range(MAX_TABLE_TERMS):
        if scheme.ascending:
            term = b ** (-j) * cf(*_scaled(args, b ** j))
        else:
            term = b ** j * cf(*_scaled(args, b ** (-j)))
        total += term
        if term == 0.0 and prev == 0.0:
            return PhiTilde(total, 0.0, j + 1)
        if declared is not None:
            r = declared
        elif prev:
            r = min(term / prev, EMPIRICAL_RATIO_CAP)
        else:
            r = EMPIRICAL_RATIO_CAP
        tail = term * r / (1.0 - r)
        if j >= 1 and tail < tol:
            return PhiTilde(total, tail, j + 1)
        prev = term
    raise DivergenceError(
        f"table control series for scheme {scheme.value} did not converge within "
        f"{MAX_TABLE_TERMS} terms")


def scheme_bound(cf: ControlFunction, scheme: Scheme, x, tol: float = 1e-12) -> float:
    """Bound on ``|f(x) - U(x)|`` implied by the control ``cf``.

    * doubling:         phi~(x, x) / 2
    * Jensen tripling:  (phi~(x, -x) + phi~(-x, 3x)) / 3
    * Jensen shrinking: phi~(x/3, -x/3) + phi~(-x/3, x)
    """
    x = np.asarray(x, dtype=np.complex128)
    if scheme is Scheme.DOUBLING:
        return 0.5 * phi_tilde(cf, scheme, [x, x], tol).value
    if scheme is Scheme.JENSEN_TRIPLING:
        return (phi_tilde(cf, scheme, [x, -x], tol).value
                + phi_tilde(cf, scheme, [-x, 3 * x], tol).value) / 3.0
    return (phi_tilde(cf, scheme, [x / 3, -x / 3], tol).value
            + phi_tilde(cf, scheme, [-x / 3, x], tol).value)


def jun_lee_bound(cf: ControlFunction, x) -> float:
    """``(phi~(x, -x) + phi~(-x, 3x)) / 3`` with the tripling series."""
    return scheme_bound(cf, Scheme.JENSEN_TRIPLING, x)


def closed_form_bound(scheme: Scheme, theta: float, p: float, norm_x: float,
                      order: int = 1) -> float:
    """Constant of the power-control bound times ``theta * norm_x^p``."""
    scheme.check_p(p, order)
    xp = norm_x ** p if norm_x > 0 else 0.0
    if scheme is Scheme.DOUBLING:
        const = 2.0 / (2.0 - 2.0 ** p)
    elif scheme is Scheme.JENSEN_TRIPLING:
        const = (3.0 + 3.0 ** p) / (3.0 - 3.0 ** p)
    else:
        const = (3.0 ** p + 3.0) / (3.0 ** p - 3.0)
    return const * theta * xp


def tail_bound(cf: ControlFunction, scheme: Scheme, x, l: int) -> float:
    """Bound on ``|U(x) - U_l(x)|``: the scheme bound re-based at iterate ``l``.

    Summing the one-step gap bounds from ``l`` onward gives
    ``b^-l B(b^l x)`` for ascending schemes and ``3^l B(x / 3^l)`` for
    shrinking, where ``B`` is :func:`scheme_bound`.
    """
    s = scheme.scale(l)
    return scheme_bound(cf, scheme, s * np.asarray(x)) / s


def gap_bound(cf: ControlFunction, scheme: Scheme, x, l: int) -> float:
    """Bound on ``|U_{l+1}(x) - U_l(x)|`` from a single defect inequality.

    * doubling:  U_{l+1} - U_l = 2^-(l+1) (f(2z) - 2 f(z)), z = 2^l x,
      controlled by the Cauchy defect at (z, z).
    * tripling:  f(3z) - 3 f(z) is minus the Jensen defect at (-z, 3z)
      minus the Jensen defect at (z, -z); z = 3^l x.
    * shrinking: the same identity at z = x / 3^(l+1), weighted by 3^l.
    """
    x = np.asarray(x, dtype=np.complex128)
    if scheme is Scheme.DOUBLING:
        z = 2.0 ** l * x
        return 2.0 ** (-(l + 1)) * cf(z, z)
    if scheme is Scheme.JENSEN_TRIPLING:
        z = 3.0 ** l * x
        return 3.0 ** (-(l + 1)) * (cf(z, -z) + cf(-z, 3 * z))
    z = x / 3.0 ** (l + 1)
    return 3.0 ** l * (cf(z, -z) + cf(-z, 3 * z))


def dominating_terms(cf: ControlFunction, args: Sequence, order: int, j_max: int):
    """Pairs ``(3^j phi(args/3^j), 3^(2 order j) phi(args/3^j))`` for j = 0..j_max.

    The second series is the summability hypothesis of the shrinking regime;
    the first is the series that enters its bound. Term-by-term the first
    never exceeds the second.
    """
    args = cf.pad(args)
    out = []
    for j in range(j_max + 1):
        val = cf(*_scaled(args, 3.0 ** (-j)))
        out.append((3.0 ** j * val, 3.0 ** (2 * order * j) * val))
    return out
