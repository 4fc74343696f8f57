"""Regularized incomplete beta and gamma functions.

Continued fractions are evaluated with the modified Lentz method. The beta
fraction is applied directly when ``x < (a + 1) / (a + b + 2)`` and through
the reflection ``I_x(a, b) = 1 - I_{1-x}(b, a)`` otherwise; the gamma function
uses the power series below ``x < a + 1`` and the Legendre continued fraction
above it.
"""

import math

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 100_000
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360, 1 / 156)


def _stirling_tail(z):
    zi = 1.0 / z
    z2 = zi * zi
    total = 0.0
    for coef in reversed(_STIRLING):
        total = total * z2 + coef
    return total * zi


def _lgamma_ratio(b, a):
    """log Gamma(b + a) - log Gamma(b) without cancellation for large ``b``."""
    if b < 10.0:
        return math.lgamma(b + a) - math.lgamma(b)
    return (
        (b - 0.5) * math.log1p(a / b)
        + a * math.log(b + a)
        - a
        + _stirling_tail(b + a)
        - _stirling_tail(b)
    )


def _lbeta(a, b):
    small, big = (a, b) if a <= b else (b, a)
    return math.lgamma(small) - _lgamma_ratio(big, small)


def _betacf(x, a, b):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta fraction did not converge (a={a}, b={b})")


def betainc(a, b, x):
    """Regularized incomplete beta ``I_x(a, b)`` for ``a, b > 0``."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = a * math.log(x) + b * math.log1p(-x) - _lbeta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        val = math.exp(log_front) * _betacf(x, a, b) / a
    else:
        val = 1.0 - math.exp(log_front) * _betacf(1.0 - x, b, a) / b
    return min(1.0, max(0.0, val))


def _gser(a, x):
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ArithmeticError(f"incomplete gamma series did not converge (a={a}, x={x})")


def _gcf(a, x):
    # upper tail Q(a, x)
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h
    raise ArithmeticError(f"incomplete gamma fraction did not converge (a={a}, x={x})")


def gammainc(a, x):
    """Regularized lower incomplete gamma ``P(a, x)`` for ``a > 0``."""
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        val = _gser(a, x)
    else:
        val = 1.0 - _gcf(a, x)
    return min(1.0, max(0.0, val))
