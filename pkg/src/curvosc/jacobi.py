"""Jacobi polynomials P_n^(a, b)(t) for arbitrary real a, b.

Evaluation runs the three-term recurrence in n.  When a + b makes a leading
recurrence coefficient vanish (2k + a + b - 2 = 0 or k + a + b = 0 for some
2 <= k <= n) the terminating hypergeometric sum is used instead.
"""

from __future__ import annotations

import math

import numpy as np


def _recurrence_degenerate(n: int, a: float, b: float) -> bool:
    for k in range(2, n + 1):
        if (k + a + b) == 0.0 or (2 * k + a + b - 2) == 0.0:
            return True
    return False


def _scaled_recurrence(n, a, b, num, den):
    p_prev = np.ones_like(num)
    if n == 0:
        return p_prev
    p = (a + 1.0) * den + 0.5 * (a + b + 2.0) * (num - den)
    den2 = den * den
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2.0 * k * (k + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * num + (a * a - b * b) * den)
        c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s * den2
        p_prev, p = p, (c2 * p - c3 * p_prev) / c1
    return p


def _scaled_hypergeometric(n, a, b, num, den):
    """den**n P_n(num/den) from (a+1)_n/n! 2F1(-n, n+a+b+1; a+1; (1-t)/2)."""
    lead = 1.0
    for j in range(n):
        lead *= (a + 1.0 + j) / (j + 1.0)
    half = 0.5 * (den - num)
    total = np.zeros_like(num)
    coef = 1.0
    for k in range(n + 1):
        total = total + coef * half**k * den ** (n - k)
        coef *= (k - n) * (n + a + b + 1.0 + k) / ((a + 1.0 + k) * (k + 1.0))
    return lead * total


def jacobi_scaled(n: int, a: float, b: float, num, den):
    """den**n * P_n^(a, b)(num / den), finite also where den -> 0."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float) * np.ones_like(num)
    if _recurrence_degenerate(n, a, b):
        return _scaled_hypergeometric(n, a, b, num, den)
    return _scaled_recurrence(n, a, b, num, den)


def jacobi_eval(n: int, a: float, b: float, t):
    """Value of P_n^(a, b) at ``t`` (scalar or array)."""
    out = jacobi_scaled(n, a, b, t, 1.0)
    return float(out) if np.ndim(out) == 0 else out


def jacobi_derivative(n: int, a: float, b: float, t, order: int = 1):
    """d^order/dt^order P_n^(a, b)(t) via d/dt P_n^(a,b) = (n+a+b+1)/2 P_{n-1}^(a+1,b+1)."""
    if order > n:
        out = np.zeros_like(np.asarray(t, dtype=float))
        return float(out) if out.ndim == 0 else out
    factor = 1.0
    for j in range(order):
        factor *= 0.5 * (n + a + b + 1.0 + j)
    out = factor * jacobi_scaled(n - order, a + order, b + order, t, 1.0)
    return float(out) if np.ndim(out) == 0 else out


def jacobi_value_at_one(n: int, a: float) -> float:
    """P_n^(a, b)(1) = binom(n + a, n), independent of b."""
    return math.exp(math.lgamma(n + a + 1.0) - math.lgamma(a + 1.0) - math.lgamma(n + 1.0))
