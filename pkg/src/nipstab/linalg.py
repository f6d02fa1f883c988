"""Small dense complex linear algebra in double precision.

Vectors are 1-D ``complex128`` numpy arrays and matrices are 2-D ones.
The inner product is linear in the first argument and conjugate-linear
in the second, ``inner(u, v) = sum(u_i * conj(v_i))``; every other module
inherits this convention.

Determinants and ranks are computed by explicit elimination rather than
delegated to LAPACK so the pivoting rules (and therefore the summation
order) are fixed and reproducible across platforms.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError, ShapeError

MAX_MATRIX_SIZE = 8
DEFAULT_RANK_TOL = 1e-10

InnerProduct = Callable[[np.ndarray, np.ndarray], complex]


def as_vector(coords) -> np.ndarray:
    """Coerce ``coords`` into a finite, non-empty complex vector.

    Accepts anything numpy understands, plus the JSON wire format: a list
    of ``[re, im]`` pairs.
    """
    arr = np.asarray(coords)
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    arr = np.asarray(arr, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"expected a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite coordinates")
    return arr


def vector_to_json(v: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=np.complex128)]


def vector_from_json(pairs) -> np.ndarray:
    return as_vector([complex(re, im) for re, im in pairs])


def inner(u: np.ndarray, v: np.ndarray) -> complex:
    """Standard inner product on C^d, conjugate-linear in ``v``."""
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch: {u.shape} vs {v.shape}")
    # np.vdot conjugates its FIRST argument
    return complex(np.vdot(v, u))


def norms(xs) -> np.ndarray:
    """Euclidean norms along the last axis, rescaled so tiny or huge entries do not
    underflow or overflow when squared."""
    xs = np.asarray(xs, dtype=np.complex128)
    big = np.max(np.abs(xs), axis=-1, initial=0.0)
    # power-of-two scaling is exact, even for subnormal entries
    _, e = np.frexp(big)
    re = np.ldexp(xs.real, -e[..., None])
    im = np.ldexp(xs.imag, -e[..., None])
    return np.ldexp(np.sqrt(np.sum(re * re + im * im, axis=-1)), e)


def norm(u: np.ndarray) -> float:
    return float(norms(u))


def gram_matrix(rows: Sequence[np.ndarray], cols: Sequence[np.ndarray],
                inner_product: InnerProduct = inner) -> np.ndarray:
    """Matrix with entries ``inner_product(rows[i], cols[j])``."""
    m = np.empty((len(rows), len(cols)), dtype=np.complex128)
    for i, r in enumerate(rows):
        for j, c in enumerate(cols):
            m[i, j] = inner_product(r, c)
    return m


def _check_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ShapeError(f"expected a non-empty square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_MATRIX_SIZE:
        raise ShapeError(f"matrix size {m.shape[0]} exceeds cap {MAX_MATRIX_SIZE}")
    return m


def _divide(num: np.ndarray, den: complex) -> np.ndarray:
    """``num / den`` with both rescaled by a power of two first; numpy's complex
    division returns nan for subnormal denominators."""
    e = int(np.frexp(abs(den))[1])
    den = complex(np.ldexp(den.real, -e), np.ldexp(den.imag, -e))
    return (np.ldexp(num.real, -e) + 1j * np.ldexp(num.imag, -e)) / den


def lu_pivots(m: np.ndarray) -> tuple[np.ndarray, int]:
    """Diagonal of U from LU with partial pivoting, plus the permutation sign.

    Ties between candidate pivots go to the lowest row index.
    """
    a = _check_square(m).copy()
    size = a.shape[0]
    sign = 1
    for k in range(size):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0:
            continue
        if p != k:
            a[[k, p]] = a[[p, k]]
            sign = -sign
        factors = _divide(a[k + 1:, k], a[k, k])
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
    return np.diag(a).copy(), sign


def _row_exponents(m: np.ndarray) -> np.ndarray:
    return np.frexp(np.max(np.abs(m), axis=1))[1]


def det(m: np.ndarray) -> complex:
    """Determinant by LU decomposition with partial pivoting.

    Rows are first rescaled by exact powers of two so that elimination runs on
    entries of order one; the exponents are restored at the end.
    """
    m = _check_square(m)
    e = _row_exponents(m)
    scaled = np.ldexp(m.real, -e[:, None]) + 1j * np.ldexp(m.imag, -e[:, None])
    pivots, sign = lu_pivots(scaled)
    result = complex(sign)
    for piv in pivots:
        result *= complex(piv)
    total = int(e.sum())
    return complex(np.ldexp(result.real, total), np.ldexp(result.imag, total))


def _complete_pivot_magnitudes(a: np.ndarray) -> list[float]:
    a = a.copy()
    rows, cols = a.shape
    mags = []
    for k in range(min(rows, cols)):
        block = np.abs(a[k:, k:])
        flat = int(np.argmax(block))
        i, j = divmod(flat, block.shape[1])
        i += k
        j += k
        piv = a[i, j]
        if piv == 0:
            break
        mags.append(float(abs(piv)))
        a[[k, i]] = a[[i, k]]
        a[:, [k, j]] = a[:, [j, k]]
        factors = _divide(a[k + 1:, k], a[k, k])
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
    return mags


def numeric_rank(vectors: Sequence[np.ndarray], tol: float = DEFAULT_RANK_TOL) -> int:
    """Numerical rank of a list of vectors.

    Runs Gaussian elimination with complete pivoting on the matrix whose rows
    are the vectors and counts pivots larger than ``tol`` times the first
    (largest) pivot. Works on the vectors directly, not their Gram matrix, so
    conditioning is not squared.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if len(vectors) == 0:
        return 0
    dims = {np.shape(v) for v in vectors}
    if len(dims) != 1:
        raise DimensionError(f"vectors have mixed dimensions: {sorted(dims)}")
    mags = _complete_pivot_magnitudes(np.array(vectors, dtype=np.complex128))
    if not mags:
        return 0
    return sum(1 for mag in mags if mag > tol * mags[0])


def condition_estimate(m: np.ndarray) -> float:
    """Cheap condition estimate: ratio of largest to smallest complete-pivot magnitude.

    Returns ``inf`` for a numerically singular matrix.
    """
    a = _check_square(m)
    mags = _complete_pivot_magnitudes(a)
    if len(mags) < a.shape[0] or mags[-1] == 0.0:
        return float("inf")
    return mags[0] / mags[-1]


def random_vector(rng: np.random.Generator, dim: int, radius: float | None = None) -> np.ndarray:
    """Complex Gaussian vector, optionally rescaled to the given norm."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    if radius is not None:
        v *= radius / norm(v)
    return v


def random_unit_scalar(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def random_isometry(rng: np.random.Generator, dim_in: int, dim_out: int) -> np.ndarray:
    """``dim_out x dim_in`` matrix with orthonormal columns.

    Built from the Q factor of a matrix with entries uniform on the complex
    disc of radius 2, with column phases fixed so the draw is deterministic.
    """
    if dim_out < dim_in:
        raise DimensionError("an isometry needs dim_out >= dim_in")
    radius = 2.0 * np.sqrt(rng.random((dim_out, dim_in)))
    angle = 2.0 * np.pi * rng.random((dim_out, dim_in))
    q, r = np.linalg.qr(radius * np.exp(1j * angle))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases[np.newaxis, :]
