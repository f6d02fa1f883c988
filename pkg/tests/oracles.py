"""Independent reference implementations used to check the library.

Nothing here imports nipstab: each oracle recomputes its quantity by brute force.
"""

import itertools
import math


def permutation_sign(perm):
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def leibniz_det(m):
    """Sum over all permutations; exact for the sizes used in tests (n <= 5)."""
    n = len(m)
    total = 0j
    for perm in itertools.permutations(range(n)):
        term = complex(permutation_sign(perm))
        for i in range(n):
            term *= complex(m[i][perm[i]])
        total += term
    return total


def dot(u, v):
    return sum(complex(a) * complex(b).conjugate() for a, b in zip(u, v))


def gram_bordered(x, y, trailing):
    rows = [x, *trailing]
    cols = [y, *trailing]
    return [[dot(r, c) for c in cols] for r in rows]


def gram_n_inner(x, y, trailing):
    return leibniz_det(gram_bordered(x, y, trailing))


def vnorm(v):
    return math.sqrt(sum(abs(complex(a)) ** 2 for a in v))


def power_phi(theta, p, norms):
    return theta * sum(t ** p if t > 0 else 0.0 for t in norms)


def series(term, count):
    """Plain left-to-right partial sum of ``term(j)`` for j < count."""
    total = 0.0
    for j in range(count):
        total += term(j)
    return total


def phi_tilde_power(theta, p, norms, scheme, count=80):
    if scheme == "doubling":
        return series(lambda j: 2.0 ** -j * power_phi(theta, p, [2.0 ** j * t for t in norms]),
                      count)
    if scheme == "jensen_tripling":
        return series(lambda j: 3.0 ** -j * power_phi(theta, p, [3.0 ** j * t for t in norms]),
                      count)
    return series(lambda j: 3.0 ** j * power_phi(theta, p, [t / 3.0 ** j for t in norms]), count)


def scheme_bound_power(theta, p, norm_x, scheme, count=80):
    """Bound on |f(x) - U(x)| by direct summation of the defining series."""
    a = norm_x
    if scheme == "doubling":
        return 0.5 * phi_tilde_power(theta, p, [a, a], scheme, count)
    if scheme == "jensen_tripling":
        return (phi_tilde_power(theta, p, [a, a], scheme, count)
                + phi_tilde_power(theta, p, [a, 3 * a], scheme, count)) / 3.0
    return (phi_tilde_power(theta, p, [a / 3, a / 3], scheme, count)
            + phi_tilde_power(theta, p, [a / 3, a], scheme, count))
