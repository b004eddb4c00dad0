"""Jacobi polynomials P_n^(a,b) by three-term recurrence.

Every routine accepts either floats (or float arrays) or exact scalars
(``int`` / :class:`fractions.Fraction`). Exact inputs are evaluated in
rational arithmetic and return a ``Fraction``; this is the reference path
used to certify the floating one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

#: floating-point degree cap; exact mode is practical up to n ~ 500
MAX_DEGREE = 10**5


@dataclass(frozen=True)
class JacobiParams:
    n: int
    a: int
    b: int = 0

    def __post_init__(self):
        for name in ("n", "a", "b"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _as_scalar(x):
    if is_exact(x):
        return Fraction(x)
    if isinstance(x, np.ndarray):
        x = x.astype(float)
        if np.any(np.abs(x) > 1.0 + 1e-14):
            raise ValueError("floating evaluation requires |x| <= 1")
        return x
    x = float(x)
    if abs(x) > 1.0 + 1e-14:
        raise ValueError("floating evaluation requires |x| <= 1")
    return x


def _check_degree(n, max_degree):
    if n > max_degree:
        raise ValueError(f"degree limit: n={n} exceeds {max_degree}")


def _recurrence(n, a, b, x):
    """P_0 .. P_n at x; yields successive values."""
    p_prev = x * 0 + 1
    yield p_prev
    if n == 0:
        return
    p_cur = (a + 1) + Fraction(a + b + 2, 2) * (x - 1) if is_exact(x) \
        else (a + 1) + 0.5 * (a + b + 2) * (x - 1)
    yield p_cur
    ab = a + b
    for m in range(2, n + 1):
        c0 = 2 * m * (m + ab) * (2 * m + ab - 2)
        c1 = (2 * m + ab - 1) * (2 * m + ab) * (2 * m + ab - 2)
        c2 = (2 * m + ab - 1) * (a * a - b * b)
        c3 = 2 * (m + a - 1) * (m + b - 1) * (2 * m + ab)
        if is_exact(x):
            p_next = ((c1 * x + c2) * p_cur - c3 * p_prev) / c0
        else:
            p_next = ((c1 * x + c2) * p_cur - c3 * p_prev) * (1.0 / c0)
        p_prev, p_cur = p_cur, p_next
        yield p_cur


def jacobi_eval(params: JacobiParams, x, max_degree: int = MAX_DEGREE):
    """P_n^(a,b)(x). Exact for int/Fraction x, floating otherwise."""
    _check_degree(params.n, max_degree)
    x = _as_scalar(x)
    value = None
    for value in _recurrence(params.n, params.a, params.b, x):
        pass
    return value


def jacobi_table(n_max: int, a: int, b: int, x) -> np.ndarray:
    """Float values P_m^(a,b)(x) for m = 0..n_max, stacked along axis 0."""
    _check_degree(n_max, MAX_DEGREE)
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    for m, value in enumerate(_recurrence(n_max, a, b, x)):
        out[m] = value
    return out


def _rising_half(n, a, b, order, exact):
    # prod_{i<order} (n+a+b+1+i)/2
    coeff = 1
    for i in range(order):
        coeff *= n + a + b + 1 + i
    return Fraction(coeff, 2**order) if exact else coeff / 2.0**order


def jacobi_derivative(params: JacobiParams, order: int, x, max_degree: int = MAX_DEGREE):
    """order-th derivative of P_n^(a,b) at x; zero once the degree is exhausted."""
    if order < 0:
        raise ValueError("order must be >= 0")
    n, a, b = params.n, params.a, params.b
    _check_degree(n, max_degree)
    x = _as_scalar(x)
    exact = is_exact(x)
    if order > n:
        return Fraction(0) if exact else x * 0.0
    shifted = JacobiParams(n - order, a + order, b + order)
    return _rising_half(n, a, b, order, exact) * jacobi_eval(shifted, x, max_degree)


def _value_at_one(n, a, exact):
    return comb(n + a, n) if exact else float(comb(n + a, n))


def normalized_jacobi(pq_gap: int, n: int, x):
    """P_n^(gap,0)(x) / P_n^(gap,0)(1)."""
    value = jacobi_eval(JacobiParams(n, pq_gap, 0), x)
    if is_exact(value):
        return value / comb(n + pq_gap, n)
    return value / _value_at_one(n, pq_gap, False)


def normalized_jacobi_derivative(pq_gap: int, n: int, order: int, x):
    """order-th derivative of the normalized Jacobi polynomial.

    Uses P~_n^(k)(x) = 2^-k (n+gap+1)...(n+gap+k) P_{n-k}^(gap+k,k)(x) / P_n^(gap,0)(1),
    which vanishes when n < k.
    """
    value = jacobi_derivative(JacobiParams(n, pq_gap, 0), order, x)
    if is_exact(value):
        return value / comb(n + pq_gap, n)
    return value / _value_at_one(n, pq_gap, False)


def normalized_taylor_table(pq_gap: int, n_max: int, orders: int, x) -> np.ndarray:
    """Float Taylor coefficients P~_n^(i)(x)/i!.

    Returns shape (n_max + 1, orders) + x.shape, indexed [n, i, ...].
    """
    x = np.asarray(x, dtype=float)
    ns = np.arange(n_max + 1)
    out = np.zeros((n_max + 1, orders) + x.shape)
    norm = np.array([float(comb(n + pq_gap, n)) for n in ns])
    for i in range(orders):
        if i > n_max:
            break
        shifted = jacobi_table(n_max - i, pq_gap + i, i, x)
        coeff = np.ones(n_max + 1 - i)
        for l in range(i):
            coeff = coeff * (ns[i:] + pq_gap + 1 + l) / 2.0
        coeff = coeff / factorial(i) / norm[i:]
        out[i:, i] = coeff.reshape((-1,) + (1,) * x.ndim) * shifted
    return out
