"""Parameter records, scheme selection and threshold/rate conversions.

Geometry enters the closed forms only through the distance ratio
delta = d0/dj raised to the path-loss exponent alpha. The threshold theta is
stored linear; dB and rate views convert at the boundary (theta = 2^r - 1).
"""
import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError

_LN2 = math.log(2.0)


class Scheme(Enum):
    FULL_INTERFERENCE = "full-interference"
    SILENCING = "silencing"
    MRT = "mrt"

    @classmethod
    def parse(cls, text: str) -> "Scheme":
        key = text.strip().lower().replace("_", "-")
        aliases = {
            "full": cls.FULL_INTERFERENCE,
            "full-interference": cls.FULL_INTERFERENCE,
            "silencing": cls.SILENCING,
            "mrt": cls.MRT,
        }
        if key not in aliases:
            raise DomainError(f"unknown scheme {text!r} (choose full, silencing or mrt)")
        return aliases[key]


@dataclass(frozen=True)
class Threshold:
    """SIR decoding threshold, canonical linear value theta >= 0."""
    linear: float

    def __post_init__(self):
        v = self.linear
        if not isinstance(v, (int, float)) or math.isnan(v) or v < 0:
            raise DomainError(f"threshold must be a real >= 0, got {v!r}")
        object.__setattr__(self, "linear", float(v))

    @property
    def db(self) -> float:
        if self.linear == 0.0:
            return -math.inf
        return 10.0 * math.log10(self.linear)

    @property
    def rate(self) -> float:
        return math.log1p(self.linear) / _LN2


def theta_from_rate(r: float) -> Threshold:
    """Threshold for transmit rate r (bits/s/Hz): theta = 2^r - 1."""
    if not isinstance(r, (int, float)) or math.isnan(r) or r < 0:
        raise DomainError(f"rate must be a real >= 0, got {r!r}")
    return Threshold(math.expm1(r * _LN2))


def rate_from_theta(t: Threshold) -> float:
    """Rate whose decoding threshold is t: r = log2(1 + theta)."""
    return t.rate


def theta_from_db(x: float) -> Threshold:
    """Threshold from its decibel value: theta = 10^(x/10)."""
    if not isinstance(x, (int, float)) or math.isnan(x):
        raise DomainError(f"dB value must be a real, got {x!r}")
    return Threshold(10.0 ** (x / 10.0))


@dataclass(frozen=True)
class SchemeParams:
    """Topology and coordination level: eta neighbors, k of them coordinated.

    eta counts the non-typical RRHs; k of them are silenced (silencing) or
    transmit jointly (MRT); the rest interfere. delta = d0/dj in (0, 1],
    alpha > 2.
    """
    eta: int
    k: int
    delta: float
    alpha: float

    def __post_init__(self):
        if not isinstance(self.eta, int) or isinstance(self.eta, bool) or self.eta < 1:
            raise DomainError(f"eta must be an integer >= 1, got {self.eta!r}")
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 0:
            raise DomainError(f"k must be an integer >= 0, got {self.k!r}")
        if self.k > self.eta:
            raise DomainError(f"k exceeds eta (k={self.k}, eta={self.eta})")
        if not isinstance(self.delta, (int, float)) or not 0.0 < self.delta <= 1.0:
            raise DomainError(f"delta must lie in (0, 1], got {self.delta!r}")
        if not isinstance(self.alpha, (int, float)) or not self.alpha > 2.0:
            raise DomainError(f"alpha must be > 2, got {self.alpha!r}")
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "alpha", float(self.alpha))

    @classmethod
    def for_scheme(cls, scheme: Scheme, eta: int, k: int, delta: float, alpha: float) -> "SchemeParams":
        """Construct and reject scheme-incompatible combinations up front."""
        params = cls(eta, k, delta, alpha)
        if scheme is Scheme.MRT:
            if k > eta - 1:
                raise DomainError(
                    f"k exceeds eta-1 (k={k}, eta={eta}): MRT needs at least one interferer")
            if not delta < 1.0:
                raise DomainError("MRT requires delta < 1 strictly")
        elif scheme is Scheme.FULL_INTERFERENCE and k != 0:
            raise DomainError(f"full interference means k=0, got k={k}")
        return params

    @property
    def delta_alpha(self) -> float:
        """delta^alpha, the only way distance enters the closed forms."""
        return self.delta ** self.alpha
