"""Rate selection under a reliability constraint and minimum-cooperation planning.

Rate convention: rate_silencing is the closed-form inversion

    r = log2( (eps^(-1/(eta-k)) - 1) / delta^alpha + 1 ),

which places the decoding threshold theta = 2^r - 1 at the point where the
complementary CDF (1 + delta^alpha theta)^(-(eta-k)) equals eps, i.e. at the
(1-eps)-quantile of the SIR distribution. rate_mrt inverts the MRT CDF at the
same complementary level by bisection, so the two agree at k=0 and are
comparable at every k. threshold_for_outage is the other inversion (outage
itself equal to eps) for callers that budget failures rather than quantiles.

All decisions here use the closed forms, never Monte Carlo: at the targets of
interest (eps down to 1e-5 and below) sampling lacks tail resolution.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .closedform import outage_mrt, outage_silencing
from .errors import ConvergenceError, DomainError, UnboundedRateError
from .model import Scheme, SchemeParams, Threshold

_LN2 = math.log(2.0)
_BRACKET_REL_WIDTH = 1e-15
_LEVEL_REL_TOL = 1e-13
_MAX_EXPANSIONS = 2000
_LINEAR_SCAN_MAX_ETA = 1000


@dataclass(frozen=True)
class ReliabilityTarget:
    """Outage budget epsilon in (0,1); the reliability floor is 1 - epsilon."""
    epsilon: float

    def __post_init__(self):
        e = self.epsilon
        if not isinstance(e, (int, float)) or not 0.0 < e < 1.0:
            raise DomainError(f"epsilon must lie strictly in (0, 1), got {e!r}")
        object.__setattr__(self, "epsilon", float(e))

    @property
    def reliability_floor(self) -> float:
        return 1.0 - self.epsilon


@dataclass(frozen=True)
class MinKResult:
    """Smallest satisfying cooperation level; k_min None means unachievable."""
    k_min: Optional[int]
    achieved_outage: float
    scheme: Scheme

    @property
    def achievable(self) -> bool:
        return self.k_min is not None


def _silencing_quantile_theta(n: int, c: float, epsilon: float) -> float:
    # theta where (1 + c theta)^(-n) = epsilon
    return math.expm1(-math.log(epsilon) / n) / c


def rate_silencing(params: SchemeParams, target: ReliabilityTarget) -> float:
    """Closed-form rate for the silencing scheme; k=eta has no finite answer."""
    n = params.eta - params.k
    if n == 0:
        raise UnboundedRateError(
            "k=eta leaves no interference: every rate meets every target")
    theta = _silencing_quantile_theta(n, params.delta_alpha, target.epsilon)
    return math.log1p(theta) / _LN2


def _bisect_theta(measure: Callable[[float], float], level: float, lo: float,
                  decreasing: bool) -> float:
    """Find theta > 0 where the monotone measure crosses level.

    lo must sit on the high side (measure(lo) >= level when decreasing,
    <= level when increasing); the upper end is found by doubling. Geometric
    bisection, so the stop rule is relative bracket width.
    """
    def side(theta):
        m = measure(theta)
        return m >= level if decreasing else m <= level

    for _ in range(_MAX_EXPANSIONS):
        if side(lo):
            break
        lo /= 4.0
    else:
        raise ConvergenceError("no admissible lower bracket above the floating-point floor")
    hi = lo * 2.0
    for _ in range(_MAX_EXPANSIONS):
        if not side(hi):
            break
        hi *= 2.0
    else:
        raise ConvergenceError("target not reachable within floating-point range")

    while (hi - lo) > _BRACKET_REL_WIDTH * hi:
        mid = math.sqrt(lo * hi)
        if mid <= lo or mid >= hi:
            break
        m = measure(mid)
        if abs(m - level) <= _LEVEL_REL_TOL * level:
            return mid
        if (m >= level) == decreasing:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


def rate_mrt(params: SchemeParams, target: ReliabilityTarget) -> float:
    """Rate whose threshold puts the MRT complementary CDF at epsilon.

    Bisection on the monotone CDF, seeded at the silencing rate for the same
    k (a lower bound, since joint transmission only improves the SIR).
    """
    n = params.eta - params.k
    if n == 0:
        raise UnboundedRateError(
            "k=eta leaves no interference: every rate meets every target")
    eps = target.epsilon
    seed_theta = _silencing_quantile_theta(n, params.delta_alpha, eps)
    if params.k == 0:
        theta = seed_theta  # empty cooperation sum: the closed form is exact
    else:
        theta = _bisect_theta(
            lambda t: outage_mrt(params, Threshold(t)).reliability,
            eps, seed_theta, decreasing=True)
    return math.log1p(theta) / _LN2


def threshold_for_outage(scheme: Scheme, params: SchemeParams,
                         target: ReliabilityTarget) -> Threshold:
    """Largest usable threshold when budgeting outage itself: outage(theta) = eps."""
    n = params.eta - params.k
    eps = target.epsilon
    if scheme is Scheme.FULL_INTERFERENCE:
        n = params.eta
    if n == 0:
        raise UnboundedRateError(
            "k=eta leaves no interference: outage is identically zero")
    # silencing: (1+c theta)^(-n) = 1 - eps inverted directly
    sil_theta = math.expm1(-math.log1p(-eps) / n) / params.delta_alpha
    if scheme is not Scheme.MRT or params.k == 0:
        return Threshold(sil_theta)
    theta = _bisect_theta(
        lambda t: outage_mrt(params, Threshold(t)).outage,
        eps, sil_theta, decreasing=False)
    return Threshold(theta)


def _outage_at_k(scheme: Scheme, eta: int, k: int, delta: float, alpha: float,
                 theta: Threshold) -> float:
    p = SchemeParams(eta=eta, k=k, delta=delta, alpha=alpha)
    fn = outage_mrt if scheme is Scheme.MRT else outage_silencing
    return fn(p, theta).outage


def min_cooperating(scheme: Scheme, eta: int, delta: float, alpha: float,
                    theta: Threshold, target: ReliabilityTarget) -> MinKResult:
    """Smallest k meeting outage <= epsilon at the given threshold.

    Equality counts as satisfied. Outage is nonincreasing in k for both
    schemes, so a binary search is used once a linear scan would get long.
    """
    if scheme is Scheme.FULL_INTERFERENCE:
        raise DomainError("full interference has no cooperation level to search")
    if scheme not in (Scheme.SILENCING, Scheme.MRT):
        raise DomainError(f"unknown scheme {scheme!r}")
    if not theta.linear > 0.0:
        raise DomainError("threshold must be positive for a cooperation search")
    k_max = eta if scheme is Scheme.SILENCING else eta - 1
    eps = target.epsilon

    def outage(k):
        return _outage_at_k(scheme, eta, k, delta, alpha, theta)

    top = outage(k_max)
    if top > eps:
        return MinKResult(k_min=None, achieved_outage=top, scheme=scheme)
    if eta <= _LINEAR_SCAN_MAX_ETA:
        for k in range(k_max + 1):
            value = outage(k)
            if value <= eps:
                return MinKResult(k_min=k, achieved_outage=value, scheme=scheme)
        return MinKResult(k_min=k_max, achieved_outage=top, scheme=scheme)
    lo, hi = 0, k_max  # invariant: outage(hi) <= eps, outage(lo-1 side) unknown
    if outage(0) <= eps:
        return MinKResult(k_min=0, achieved_outage=outage(0), scheme=scheme)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if outage(mid) <= eps:
            hi = mid
        else:
            lo = mid
    return MinKResult(k_min=hi, achieved_outage=outage(hi), scheme=scheme)
