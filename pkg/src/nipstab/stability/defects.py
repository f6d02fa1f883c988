"""Defect functionals measuring how far a map is from solving each equation."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .. import linalg
from ..errors import ArityError, UnitScalarError
from ..nip import NInnerForm

UNIT_TOL = 1e-12


def _check_unit(mu) -> complex:
    mu = complex(mu)
    if abs(abs(mu) - 1.0) > UNIT_TOL:
        raise UnitScalarError(f"|mu| = {abs(mu):.15g}, expected 1")
    return mu


def _vec(f: Callable, x) -> np.ndarray:
    return np.asarray(f(np.asarray(x, dtype=np.complex128)), dtype=np.complex128)


def defect_cauchy(f: Callable, mu, x, y) -> float:
    """``|f(mu x + mu y) - mu f(x) - mu f(y)|``."""
    mu = _check_unit(mu)
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    return linalg.norm(_vec(f, mu * x + mu * y) - mu * _vec(f, x) - mu * _vec(f, y))


def defect_jensen(f: Callable, mu, x, y) -> float:
    """``|2 f((mu x + mu y)/2) - mu f(x) - mu f(y)|``."""
    mu = _check_unit(mu)
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    return linalg.norm(2 * _vec(f, (mu * x + mu * y) / 2) - mu * _vec(f, x) - mu * _vec(f, y))


def defect_orthogonality(f: Callable, x, y) -> float:
    """``|<f(x), f(y)> - <x, y>|``."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    return abs(linalg.inner(_vec(f, x), _vec(f, y)) - linalg.inner(x, y))


def defect_n_orthogonality(f: Callable, xs: Sequence, form_x: NInnerForm,
                           form_y: NInnerForm) -> float:
    """``|<f(x0), f(x1) | f(x2), ..., f(xn)>_Y - <x0, x1 | x2, ..., xn>_X|``."""
    if len(xs) != form_x.n + 1 or form_x.n != form_y.n:
        raise ArityError(f"need {form_x.n + 1} vectors for n = {form_x.n} forms")
    xs = [np.asarray(v, dtype=np.complex128) for v in xs]
    fx = [_vec(f, v) for v in xs]
    return abs(form_y(fx[0], fx[1], fx[2:]) - form_x(xs[0], xs[1], xs[2:]))
