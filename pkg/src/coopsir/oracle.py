"""Ground-truth estimators, independent of the closed forms.

Monte Carlo: unit-exponential squared envelopes drawn from a counter-based
Philox stream, SIR assembled directly from its definition, outage counted.
The stream is keyed (seed, block-index) and carved into fixed 65536-draw
blocks, so any parallel split over blocks reproduces the serial sample set
bit for bit, and a longer run extends a shorter one's sample prefix.

Quadrature: the MRT outage is the probability that theta * Q > P plus a
conditional exponential tail,

    F(theta) = integral over q of f_Q(q) *
               integral over p in [0, theta q] of (1 - e^(-c(theta q - p))) f_P(p),

with P the sum of the k cooperating envelopes (gamma, shape k) and Q the sum
of the eta-k interfering ones (gamma, shape eta-k), c = delta^alpha. Nested
adaptive one-dimensional integration; domains truncated where the gamma
density falls below 1e-16 of its mode.
"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from .errors import ConvergenceError, DomainError, NoInterferenceError
from .model import Scheme, SchemeParams, Threshold

BLOCK_DRAWS = 65536
_DENSITY_CUT = 1e-16
_QUAD_ABS_TOL = 1e-9


@dataclass(frozen=True)
class FadingDraw:
    """One realization of the squared fading envelopes.

    h0 belongs to the typical link, h_coop to the k cooperating neighbors,
    h_intf to the eta-k interfering ones. All unit exponentials.
    """
    h0: float
    h_coop: Tuple[float, ...]
    h_intf: Tuple[float, ...]

    def __post_init__(self):
        if not self.h0 > 0:
            raise DomainError(f"h0 must be positive, got {self.h0!r}")
        if any(not h > 0 for h in self.h_coop) or any(not h > 0 for h in self.h_intf):
            raise DomainError("all envelope draws must be positive")


@dataclass(frozen=True)
class CdfEstimate:
    """Binomial CDF estimate with a 3-sigma (99.7%) interval.

    stderr is the raw binomial formula sqrt(v(1-v)/n); the interval itself is
    the Wilson score interval at z=3, which keeps nonzero width at counts of
    0 or n where the plain normal interval degenerates to a point.
    """
    value: float
    stderr: float
    ci_low: float
    ci_high: float
    n_samples: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise DomainError(f"estimate {self.value!r} outside [0, 1]")
        if not self.ci_low <= self.value <= self.ci_high:
            raise DomainError("confidence interval does not bracket the estimate")
        if self.n_samples < 1:
            raise DomainError("n_samples must be >= 1")

    @classmethod
    def from_count(cls, count: int, n: int, seed: int) -> "CdfEstimate":
        value = count / n
        stderr = math.sqrt(value * (1.0 - value) / n)
        z2 = 9.0
        denom = 1.0 + z2 / n
        center = (value + z2 / (2.0 * n)) / denom
        half = 3.0 * math.sqrt(value * (1.0 - value) / n + z2 / (4.0 * n * n)) / denom
        # the endpoints are exact at counts 0 and n in real arithmetic;
        # guard the float rounding so the estimate is always bracketed
        return cls(value=value, stderr=stderr,
                   ci_low=min(value, max(0.0, center - half)),
                   ci_high=max(value, min(1.0, center + half)),
                   n_samples=n, seed=seed)


def sample_sir(scheme: Scheme, params: SchemeParams, draw: FadingDraw) -> float:
    """SIR of a single realization: signal envelope(s) over the interference sum."""
    if scheme is Scheme.FULL_INTERFERENCE and params.k != 0:
        raise DomainError("full interference means k=0")
    if len(draw.h_coop) != params.k:
        raise DomainError(
            f"draw has {len(draw.h_coop)} cooperators, params say k={params.k}")
    if len(draw.h_intf) != params.eta - params.k:
        raise DomainError(
            f"draw has {len(draw.h_intf)} interferers, params say {params.eta - params.k}")
    if not draw.h_intf:
        raise NoInterferenceError(
            "no interferers (k=eta): SIR is unbounded, outage is identically 0")
    signal = draw.h0 * params.delta ** -params.alpha
    if scheme is Scheme.MRT:
        signal += sum(draw.h_coop)
    return signal / sum(draw.h_intf)


def _validate_seed(seed: int) -> int:
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2 ** 64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


def _block_counts(task):
    """Outage counts for one 65536-draw block; top level so workers can pickle it.

    Draws an (m, eta+1) uniform matrix from the Philox stream keyed
    (seed, block), maps it to exponentials, and counts SIR < theta per theta.
    Row layout: column 0 is h0, the next k columns cooperate, the rest interfere.
    """
    scheme_value, eta, k, delta, alpha, thetas, seed, block, m = task
    gen = np.random.Generator(np.random.Philox(key=np.array([seed, block], dtype=np.uint64)))
    u = gen.random((m, eta + 1))
    h = -np.log1p(-u)
    intf = np.sum(h[:, 1 + k:], axis=1)
    signal = h[:, 0] * delta ** -alpha
    if scheme_value == Scheme.MRT.value:
        signal = signal + np.sum(h[:, 1:1 + k], axis=1)
    sir = np.sort(signal / intf)
    return np.array([np.searchsorted(sir, t, side="left") for t in thetas], dtype=np.int64)


def empirical_cdf_grid(scheme: Scheme, params: SchemeParams, thetas: Sequence[Threshold],
                       n: int, seed: int, workers: int = 1) -> list:
    """Estimate P(SIR < theta) for every theta from one shared sample stream.

    Bit-identical for identical (scheme, params, thetas, n, seed) at any
    worker count: blocks are keyed by index and integer counts commute.
    """
    _validate_seed(seed)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers!r}")
    if scheme is Scheme.MRT and params.k > params.eta - 1:
        raise DomainError(f"k exceeds eta-1 (k={params.k}, eta={params.eta})")
    theta_values = tuple(t.linear for t in thetas)
    k = 0 if scheme is Scheme.FULL_INTERFERENCE else params.k
    if k == params.eta:
        # every neighbor silenced: SIR is unbounded, no sampling needed
        return [CdfEstimate.from_count(0, n, seed) for _ in theta_values]

    n_blocks = (n + BLOCK_DRAWS - 1) // BLOCK_DRAWS
    tasks = [(scheme.value, params.eta, k, params.delta, params.alpha, theta_values,
              seed, block, min(BLOCK_DRAWS, n - block * BLOCK_DRAWS))
             for block in range(n_blocks)]
    if workers == 1:
        parts = map(_block_counts, tasks)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_block_counts, tasks, chunksize=max(1, n_blocks // (4 * workers))))
    counts = sum(parts, np.zeros(len(theta_values), dtype=np.int64))
    return [CdfEstimate.from_count(int(c), n, seed) for c in counts]


def empirical_cdf(scheme: Scheme, params: SchemeParams, theta: Threshold,
                  n: int, seed: int, workers: int = 1) -> CdfEstimate:
    """Single-threshold Monte Carlo estimate; see empirical_cdf_grid."""
    return empirical_cdf_grid(scheme, params, [theta], n, seed, workers)[0]


def _gamma_support(shape: int) -> Tuple[float, float]:
    """Interval outside which the gamma(shape) density is below 1e-16 of its mode."""
    if shape == 1:
        return 0.0, -math.log(_DENSITY_CUT)

    def logpdf(q):
        return (shape - 1) * math.log(q) - q - math.lgamma(shape)

    mode = shape - 1.0
    target = logpdf(mode) + math.log(_DENSITY_CUT)
    lo = optimize.brentq(lambda q: logpdf(q) - target, 1e-300, mode, xtol=1e-12)
    hi_bracket = mode + 2.0
    while logpdf(hi_bracket) > target:
        hi_bracket *= 2.0
    hi = optimize.brentq(lambda q: logpdf(q) - target, mode, hi_bracket, xtol=1e-12)
    return lo, hi


def silencing_cdf_quadrature(params: SchemeParams, theta: Threshold) -> float:
    """One-dimensional reduction: F = E_Q[1 - e^(-c theta Q)], Q ~ gamma(eta-k)."""
    n = params.eta - params.k
    t = theta.linear
    if n == 0 or t == 0.0:
        return 0.0
    c = params.delta ** params.alpha
    lo, hi = _gamma_support(n)

    lg_n = math.lgamma(n)

    def integrand(q):
        lq = -q if n == 1 else (n - 1) * math.log(q) - q - lg_n
        return -math.expm1(-c * t * q) * math.exp(lq)

    value, err = integrate.quad(integrand, lo, hi, epsabs=1e-12, epsrel=1e-11, limit=200)
    if err > _QUAD_ABS_TOL:
        raise ConvergenceError(
            f"quadrature achieved {err:.3e}, needed {_QUAD_ABS_TOL:.0e}")
    return value


def mrt_cdf_quadrature(params: SchemeParams, theta: Threshold) -> float:
    """Deterministic double integral for the MRT outage; absolute tolerance 1e-9."""
    k, eta = params.k, params.eta
    if k > eta - 1:
        raise DomainError(f"k exceeds eta-1 (k={k}, eta={eta})")
    if k == 0:
        return silencing_cdf_quadrature(params, theta)
    t = theta.linear
    if t == 0.0:
        return 0.0
    c = params.delta ** params.alpha
    m = eta - k
    p_lo, p_hi = _gamma_support(k)
    q_lo, q_hi = _gamma_support(m)
    lg_k, lg_m = math.lgamma(k), math.lgamma(m)

    def inner(q):
        top = min(t * q, p_hi)

        def f_p(p):
            if k == 1:
                lp = -p
            elif p > 0.0:
                lp = (k - 1) * math.log(p) - p - lg_k
            else:
                return 0.0
            return -math.expm1(-c * (t * q - p)) * math.exp(lp)

        value, _ = integrate.quad(f_p, 0.0, top, epsabs=1e-13, epsrel=1e-11, limit=200)
        return value

    def outer(q):
        lq = -q if m == 1 else (m - 1) * math.log(q) - q - lg_m
        return inner(q) * math.exp(lq)

    value, err = integrate.quad(outer, q_lo, q_hi, epsabs=1e-11, epsrel=1e-10, limit=200)
    if err > _QUAD_ABS_TOL:
        raise ConvergenceError(
            f"quadrature achieved {err:.3e}, needed {_QUAD_ABS_TOL:.0e}")
    return min(max(value, 0.0), 1.0)
