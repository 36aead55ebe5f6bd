"""Closed-form SIR outage probabilities for the three coordination schemes.

All squared fading envelopes are unit exponentials, so with k silenced
neighbors the interference is a sum of eta-k unit exponentials scaled by
delta^alpha and the CDF collapses to

    F(theta) = 1 - (1 + delta^alpha theta)^(-(eta-k)).

Joint transmission (MRT) adds the k cooperating envelopes to the signal,
giving a gamma(1+k-ish mixture)/gamma ratio whose CDF assembles from two
Gauss 2F1 values:

    F(theta) = G(eta)/G(eta-k) * theta^k
               * [ H(k,eta;1+k;-theta)
                   - (1+c theta)^(-eta) * H(k,eta;1+k; (c-1)theta/(1+c theta)) ]

with c = delta^alpha, G the gamma function and H the regularized 2F1. The
second argument (c-1)theta/(1+c theta) is what the derivation yields and what
the quadrature oracle confirms; see ERRATA.md for the variants that do not
reproduce the distribution. Everything is assembled in log space and the
bracket is evaluated as -expm1(log-difference), so outage keeps relative
accuracy deep into the tail. Never compute 1 - (1 - tiny).
"""
import math
import os
from dataclasses import dataclass, replace

from .errors import ConsistencyError, DomainError
from .model import Scheme, SchemeParams, Threshold
from .specfun import gauss_2f1

_CONSISTENCY_SLACK = 1e-9

# Fault-injection hook for the self-check's negative control: a relative
# perturbation applied to delta^alpha, read from the environment on every
# call so tests can toggle it without reimporting.
PERTURB_ENV = "COOPSIR_PERTURB_DELTA_ALPHA"


def _delta_alpha(params: SchemeParams) -> float:
    c = params.delta ** params.alpha
    bump = os.environ.get(PERTURB_ENV)
    if bump:
        c *= 1.0 + float(bump)
    return c


@dataclass(frozen=True)
class OutageResult:
    """Outage probability and its complement, tied to the inputs that made it."""
    outage: float
    reliability: float
    scheme: Scheme
    params: SchemeParams
    theta: Threshold

    def __post_init__(self):
        if not 0.0 <= self.outage <= 1.0:
            raise ConsistencyError(f"outage {self.outage!r} outside [0, 1]")
        if self.outage + self.reliability != 1.0:
            raise ConsistencyError(
                f"outage {self.outage!r} and reliability {self.reliability!r} do not sum to 1")

    @classmethod
    def from_outage(cls, outage: float, scheme: Scheme, params: SchemeParams,
                    theta: Threshold) -> "OutageResult":
        return cls(outage, 1.0 - outage, scheme, params, theta)


def _silencing_outage_value(n: int, c: float, theta: float) -> float:
    if n == 0 or theta == 0.0:
        return 0.0
    return -math.expm1(-n * math.log1p(c * theta))


def outage_silencing(params: SchemeParams, theta: Threshold) -> OutageResult:
    """CDF of the SIR when k of the eta neighbors are silenced.

    k=0 is the uncoordinated (full interference) case; k=eta removes all
    interference and the outage is identically zero.
    """
    value = _silencing_outage_value(params.eta - params.k, _delta_alpha(params), theta.linear)
    return OutageResult.from_outage(value, Scheme.SILENCING, params, theta)


def outage_mrt(params: SchemeParams, theta: Threshold) -> OutageResult:
    """CDF of the SIR when k neighbors jointly transmit to the user.

    Requires at least one interferer (k <= eta-1) and delta < 1 strictly.
    The k=0 assembly reduces, term by term, to the silencing expression.
    """
    if params.k > params.eta - 1:
        raise DomainError(
            f"k exceeds eta-1 (k={params.k}, eta={params.eta}): MRT needs at least one interferer")
    if not params.delta < 1.0:
        raise DomainError("MRT requires delta < 1 strictly")
    k, eta = params.k, params.eta
    c = _delta_alpha(params)
    t = theta.linear
    if t == 0.0:
        return OutageResult.from_outage(0.0, Scheme.MRT, params, theta)
    if math.isinf(t):
        return OutageResult.from_outage(1.0, Scheme.MRT, params, theta)

    f1 = gauss_2f1(k, eta, 1 + k, -t)
    f2 = gauss_2f1(k, eta, 1 + k, (c - 1.0) * t / (1.0 + c * t))
    if not (f1 > 0.0 and f2 > 0.0):
        raise ConsistencyError(f"hypergeometric factors not positive: {f1!r}, {f2!r}")
    # F = exp(L) * (1 - exp(d)) with the log-magnitudes split so neither
    # exp overflows: theta^k growth in L is cancelled by f1's theta^(-k) decay.
    log_lead = (math.lgamma(eta) - math.lgamma(eta - k) - math.lgamma(1 + k)
                + k * math.log(t) + math.log(f1))
    log_ratio = -eta * math.log1p(c * t) + math.log(f2) - math.log(f1)
    value = -math.exp(log_lead) * math.expm1(log_ratio)

    if not -_CONSISTENCY_SLACK <= value <= 1.0 + _CONSISTENCY_SLACK:
        raise ConsistencyError(
            f"MRT outage {value!r} outside [0, 1] beyond slack "
            f"(eta={eta}, k={k}, delta={params.delta}, alpha={params.alpha}, theta={t})")
    value = min(max(value, 0.0), 1.0)
    return OutageResult.from_outage(value, Scheme.MRT, params, theta)


def reliability(scheme: Scheme, params: SchemeParams, theta: Threshold) -> OutageResult:
    """Dispatch on scheme; full interference ignores k and uses the k=0 CDF."""
    if scheme is Scheme.FULL_INTERFERENCE:
        base = params if params.k == 0 else replace(params, k=0)
        value = _silencing_outage_value(base.eta, _delta_alpha(base), theta.linear)
        return OutageResult.from_outage(value, scheme, base, theta)
    if scheme is Scheme.SILENCING:
        return outage_silencing(params, theta)
    if scheme is Scheme.MRT:
        return outage_mrt(params, theta)
    raise DomainError(f"unknown scheme {scheme!r}")
