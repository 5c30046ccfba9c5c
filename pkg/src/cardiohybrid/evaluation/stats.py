"""Paired t-test with a self-contained Student-t tail.

The tail probability uses the regularized incomplete beta function,
evaluated by its continued fraction (modified Lentz iteration):

    P(|T| >= t) = I_x(dof / 2, 1 / 2),   x = dof / (dof + t^2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_TINY = 1e-300


def _beta_cf(a: float, b: float, x: float, max_iter: int = 500, eps: float = 1e-16) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta ``I_x(a, b)`` for ``a, b > 0``, ``0 <= x <= 1``."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    front = math.exp(log_front)
    # the fraction converges fast only below the mean; use symmetry above it
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def t_two_sided_p(t: float, dof: float) -> float:
    """``P(|T| >= |t|)`` for Student's t with ``dof`` degrees of freedom."""
    if dof <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(t):
        return 0.0
    return min(1.0, max(0.0, betainc(dof / 2.0, 0.5, dof / (dof + t * t))))


def t_cdf(t: float, dof: float) -> float:
    half = 0.5 * t_two_sided_p(t, dof)
    return 1.0 - half if t >= 0 else half


@dataclass(frozen=True)
class TTestResult:
    t: float
    dof: int
    p: float

    def to_json(self) -> dict:
        return {"t": self.t, "dof": self.dof, "p": self.p}


def paired_t_test(a, b) -> TTestResult:
    """Two-sided paired t-test on ``d = a - b``.

    Identical samples give ``t = 0, p = 1``. Differences that are constant
    but non-zero leave ``t`` undefined and raise.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"paired samples differ in length: {a.size} vs {b.size}")
    k = a.size
    if k < 2:
        raise ValueError("need at least 2 pairs")
    d = a - b
    mean = float(d.mean())
    sd = math.sqrt(float(((d - mean) ** 2).sum()) / (k - 1))
    if sd == 0.0:
        if mean == 0.0:
            return TTestResult(0.0, k - 1, 1.0)
        raise ValueError("differences are constant and non-zero; the t statistic is undefined")
    t = mean * math.sqrt(k) / sd
    return TTestResult(t, k - 1, t_two_sided_p(t, k - 1))
