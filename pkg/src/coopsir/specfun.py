"""Gauss hypergeometric kernel for integer parameters, plus gamma utilities.

The outage closed forms need 2F1(a, b; c; z) with small nonnegative integer a,
positive integers b and c, real z < 1. On the hot path c = a + 1 and z <= 0,
where 2F1 reduces to a regularized incomplete beta of integer orders:

    2F1(a, b; a+1; -y) = a * y^-a * B(a, b-a) * I_x(a, b-a),   x = y/(1+y), y > 0

with I_x the regularized incomplete beta, here a binomial right tail:

    I_x(a, m) = P(Bin(a+m-1, x) >= a)

All finite sums of positive terms, anchored in log space, so the kernel stays
accurate for thresholds deep in either tail and for b well past Gamma overflow.

For z < 0 outside the c = a+1 pattern the Pfaff transformation
2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1)) maps onto a series in
w = z/(z-1) in (0,1); the variant is chosen so the transformed series has
nonnegative parameters (no cancellation). The direct power series is used for
z in (0,1). Alternating direct series at z < 0 are avoided entirely: for large
b they cancel catastrophically (2F1(2,30;3;-0.5) loses ~11 digits).
"""
import math

from .errors import ConvergenceError, DomainError, EvaluationOverflowError

SERIES_EPS = 1e-16
SERIES_CAP = 10_000
_LOG_HUGE = math.log(8.98846567431158e307)  # half of float max, overflow guard


def _series(a, b, c, z):
    """Plain power series sum_{n} (a)_n (b)_n / ((c)_n n!) z^n.

    Stops when the term's relative contribution stays below SERIES_EPS for 3
    consecutive terms; raises after SERIES_CAP terms.
    """
    total = 1.0
    term = 1.0
    streak = 0
    for n in range(SERIES_CAP):
        term *= z * (a + n) * (b + n) / ((c + n) * (1.0 + n))
        total += term
        if not math.isfinite(total):
            raise EvaluationOverflowError(
                f"2F1 series overflow at term {n} for (a={a}, b={b}, c={c}, z={z})")
        if abs(term) < SERIES_EPS * abs(total):
            streak += 1
            if streak == 3:
                return total
        else:
            streak = 0
    raise ConvergenceError(
        f"2F1 series did not converge in {SERIES_CAP} terms for (a={a}, b={b}, c={c}, z={z})")


def _betainc_tail(a, m, x):
    """Regularized incomplete beta I_x(a, m) for integer a >= 1, m >= 1.

    Computed as the binomial right tail P(Bin(a+m-1, x) >= a): at most m
    positive terms, anchored in log space, accurate in both tails.
    """
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    n = a + m - 1
    log_anchor = (math.lgamma(n + 1) - math.lgamma(a + 1) - math.lgamma(m)
                  + a * math.log(x) + (m - 1) * math.log1p(-x))
    term = math.exp(log_anchor)
    total = term
    ratio = x / (1.0 - x)
    for j in range(a + 1, n + 1):
        term *= ratio * (n - j + 1) / j
        total += term
    return total


def _log_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _f21_neg_beta(a, b, y):
    """2F1(a, b; a+1; -y) for y > 0, b > a, via the incomplete-beta reduction."""
    if y < 1e-300:
        return 1.0
    x = y / (1.0 + y)
    tail = _betainc_tail(a, b - a, x)
    if tail == 0.0:
        return 0.0
    log_val = math.log(a) - a * math.log(y) + _log_beta(a, b - a) + math.log(tail)
    if log_val > _LOG_HUGE:
        raise EvaluationOverflowError(f"2F1({a},{b};{a + 1};{-y}) exceeds double range")
    return math.exp(log_val)


def _f21_pos_beta(a, b, z):
    """2F1(a, b; a+1; z) for z in (0,1), b > a: finite positive sum.

    2F1 = a z^-a sum_{i=0}^{b-a-1} C(b-a-1, i) Z^(a+i) / (a+i),  Z = z/(1-z).
    Summed in log space because Z^(a+i) can pass double range well before the
    value does.
    """
    m = b - a
    log_ratio = math.log(z) - math.log1p(-z)
    logs = []
    lc = 0.0  # log C(m-1, i), updated incrementally
    for i in range(m):
        logs.append(lc + (a + i) * log_ratio - math.log(a + i))
        if i < m - 1:
            lc += math.log(m - 1 - i) - math.log(i + 1)
    peak = max(logs)
    s = sum(math.exp(v - peak) for v in logs)
    log_val = math.log(a) - a * math.log(z) + peak + math.log(s)
    if log_val > _LOG_HUGE:
        raise EvaluationOverflowError(f"2F1({a},{b};{a + 1};{z}) exceeds double range")
    return math.exp(log_val)


def _f21_pfaff(a, b, c, z):
    """2F1 for z < 0, general integer parameters, via a Pfaff transformation.

    Prefers the variant whose transformed series has nonnegative parameters;
    when both second parameters are negative the shorter of the two resulting
    polynomials is summed with fsum (alternating but short).
    """
    w = z / (z - 1.0)
    if c >= b:
        return math.exp(-a * math.log1p(-z)) * _series(a, c - b, c, w)
    if c >= a:
        return math.exp(-b * math.log1p(-z)) * _series(c - a, b, c, w)
    # both transforms truncate; take the lower-degree polynomial
    if b - c <= a - c:
        outer, p, q, degree = a, a, c - b, b - c
    else:
        outer, p, q, degree = b, c - a, b, a - c
    if degree > 1000:
        raise ConvergenceError(
            f"2F1 polynomial fallback degree {degree} too large for (a={a}, b={b}, c={c}, z={z})")
    terms = []
    t = 1.0
    for n in range(degree + 1):
        terms.append(t)
        t *= w * (p + n) * (q + n) / ((c + n) * (1.0 + n))
    poly = math.fsum(terms)
    return math.exp(-outer * math.log1p(-z)) * poly


def _validate(a, b, c, z):
    for name, v, lo in (("a", a, 0), ("b", b, 1), ("c", c, 1)):
        if not isinstance(v, int) or isinstance(v, bool) or v < lo:
            raise DomainError(f"2F1 parameter {name}={v!r} must be an integer >= {lo}")
    if not (isinstance(z, (int, float)) and math.isfinite(z)):
        raise DomainError(f"2F1 argument z={z!r} must be a finite real")
    if z >= 1.0:
        raise DomainError(f"2F1 argument z={z} outside the real domain z < 1")


def gauss_2f1(a: int, b: int, c: int, z: float) -> float:
    """Ordinary Gauss hypergeometric 2F1(a, b; c; z) for the integer domain.

    a >= 0, b >= 1, c >= 1 integers; z < 1 real. Relative accuracy ~1e-13 on
    the closed-form call domain. Raises DomainError outside the domain,
    ConvergenceError/EvaluationOverflowError on numerical failure.
    """
    _validate(a, b, c, z)
    z = float(z)
    if a == 0 or z == 0.0:
        return 1.0
    if z < 0.0:
        if c == a + 1 and b > a:
            return _f21_neg_beta(a, b, -z)
        return _f21_pfaff(a, b, c, z)
    if c == a + 1 and b > a:
        return _f21_pos_beta(a, b, z)
    return _series(a, b, c, z)


def gauss_2f1_regularized(a: int, b: int, c: int, z: float) -> float:
    """Regularized variant 2F1(a, b; c; z) / Gamma(c).

    Division is done in log space once Gamma(c) approaches double overflow, so
    any c for which the ordinary value is finite is supported (in particular
    c well past 170).
    """
    value = gauss_2f1(a, b, c, z)
    if c <= 170:
        return value / math.gamma(c)
    if value == 0.0:
        return 0.0
    return math.copysign(math.exp(math.log(abs(value)) - math.lgamma(c)), value)


def upper_incomplete_gamma(p: int, x: float) -> float:
    """Upper incomplete gamma Gamma(p, x) for integer order p >= 1, x >= 0.

    Finite-sum identity: Gamma(p, x) = (p-1)! e^-x sum_{m=0}^{p-1} x^m / m!.
    Evaluated directly while every factor fits comfortably in doubles, in log
    space otherwise. The value itself overflows doubles around p ~ 172 at
    small x; that is reported, never returned as inf.
    """
    if not isinstance(p, int) or isinstance(p, bool) or p < 1:
        raise DomainError(f"upper_incomplete_gamma order p={p!r} must be an integer >= 1")
    if not (isinstance(x, (int, float)) and math.isfinite(x)) or x < 0:
        raise DomainError(f"upper_incomplete_gamma argument x={x!r} must be a finite real >= 0")
    x = float(x)
    if x == 0.0:
        try:
            return float(math.factorial(p - 1))
        except OverflowError:
            raise EvaluationOverflowError(f"Gamma({p}, 0) = {p - 1}! exceeds double range") from None
    if p <= 170 and x <= 170.0:
        s = 1.0
        term = 1.0
        for m in range(1, p):
            term *= x / m
            s += term
        return float(math.factorial(p - 1)) * (math.exp(-x) * s)
    logs = []
    lt = 0.0  # log(x^m / m!)
    lx = math.log(x)
    for m in range(p):
        logs.append(lt)
        lt += lx - math.log1p(m)
    peak = max(logs)
    s = sum(math.exp(v - peak) for v in logs)
    log_val = math.lgamma(p) - x + peak + math.log(s)
    if log_val > _LOG_HUGE:
        raise EvaluationOverflowError(f"Gamma({p}, {x}) exceeds double range")
    return math.exp(log_val)
