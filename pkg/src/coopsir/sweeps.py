"""Grid evaluation and delimited output for the CLI and the figure writer.

Rows are emitted in grid order (scheme-major, then k, then theta or epsilon)
and numbers are serialized the same way on every run, so identical inputs
produce byte-identical files. CSV carries 9 significant digits for human
diffing; JSON carries full double precision (shortest round-trip repr).
"""
import csv
import io
import json
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, TextIO, Tuple

from .closedform import reliability
from .control import ReliabilityTarget, min_cooperating, rate_mrt, rate_silencing
from .errors import DomainError, UnboundedRateError
from .model import Scheme, SchemeParams, Threshold, theta_from_db
from .oracle import empirical_cdf_grid, mrt_cdf_quadrature, silencing_cdf_quadrature

UNBOUNDED = "unbounded"
UNACHIEVABLE = "unachievable"

CDF_COLUMNS = ("scheme", "eta", "k", "delta", "alpha", "theta_db", "theta_linear",
               "outage_cf", "reliability_cf", "outage_mc", "mc_ci_low", "mc_ci_high",
               "n_samples", "seed", "outage_quad")
RATE_COLUMNS = ("scheme", "eta", "k", "delta", "alpha", "epsilon", "rate")
MINK_COLUMNS = ("scheme", "eta", "delta", "alpha", "epsilon", "theta_db",
                "theta_linear", "k_min", "achieved_outage")

# an MC point estimate says nothing below ~100 expected hits; the CLI
# refuses such rows unless the caller explicitly accepts tail noise
MC_TAIL_MIN_HITS = 100.0


@dataclass(frozen=True)
class SweepSpec:
    """One CLI invocation's grid, validated up front.

    Full interference has no cooperation knob: it is the k=0 baseline, so it
    ignores the k grid and contributes a single curve.
    """
    schemes: Tuple[Scheme, ...]
    eta: int
    k_list: Tuple[int, ...]
    delta: float
    alpha: float
    theta_db_values: Tuple[float, ...] = ()
    epsilon_values: Tuple[float, ...] = ()
    mc_samples: Optional[int] = None
    seed: int = 0
    with_quadrature: bool = False
    workers: int = 1
    allow_deep_tails: bool = False

    def __post_init__(self):
        if not self.schemes:
            raise DomainError("at least one scheme is required")
        if not self.k_list:
            raise DomainError("k grid is empty")
        for scheme in self.schemes:
            for k in self.k_levels(scheme):
                SchemeParams.for_scheme(scheme, self.eta, k, self.delta, self.alpha)
        if self.mc_samples is not None and self.mc_samples < 1:
            raise DomainError(f"mc samples must be >= 1, got {self.mc_samples!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers!r}")

    def k_levels(self, scheme: Scheme) -> Tuple[int, ...]:
        if scheme is Scheme.FULL_INTERFERENCE:
            return (0,)
        return self.k_list

    def params(self, k: int) -> SchemeParams:
        return SchemeParams(eta=self.eta, k=k, delta=self.delta, alpha=self.alpha)


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    eta: int
    k: int
    delta: float
    alpha: float
    theta_db: float
    theta_linear: float
    outage_cf: float
    reliability_cf: float
    outage_mc: Optional[float] = None
    mc_ci_low: Optional[float] = None
    mc_ci_high: Optional[float] = None
    n_samples: Optional[int] = None
    seed: Optional[int] = None
    outage_quad: Optional[float] = None


@dataclass(frozen=True)
class RateRow:
    scheme: str
    eta: int
    k: int
    delta: float
    alpha: float
    epsilon: float
    rate: Optional[float]  # None means unbounded (k = eta under silencing)


@dataclass(frozen=True)
class MinKRow:
    scheme: str
    eta: int
    delta: float
    alpha: float
    epsilon: float
    theta_db: float
    theta_linear: float
    k_min: Optional[int]  # None means unachievable
    achieved_outage: float


def run_cdf(spec: SweepSpec) -> List[SweepRow]:
    """One row per (scheme, k, theta); MC grouped per curve on a shared stream."""
    if not spec.theta_db_values:
        raise DomainError("theta grid is empty")
    thetas = [theta_from_db(db) for db in spec.theta_db_values]
    rows = []
    for scheme in spec.schemes:
        for k in spec.k_levels(scheme):
            params = spec.params(k)
            results = [reliability(scheme, params, t) for t in thetas]
            estimates = None
            if spec.mc_samples is not None:
                floor = MC_TAIL_MIN_HITS / spec.mc_samples
                if not spec.allow_deep_tails:
                    for r, t in zip(results, thetas):
                        structural_zero = t.linear == 0.0 or (
                            scheme is not Scheme.MRT and params.k == spec.eta)
                        if r.outage < floor and not structural_zero:
                            raise DomainError(
                                f"outage {r.outage:.3g} at theta={t.db:g} dB is below the "
                                f"Monte Carlo resolution floor {floor:.3g} for "
                                f"{spec.mc_samples} samples; pass --tail-ok to sample anyway")
                estimates = empirical_cdf_grid(scheme, params, thetas,
                                               spec.mc_samples, spec.seed,
                                               workers=spec.workers)
            for i, (theta, res) in enumerate(zip(thetas, results)):
                quad = None
                if spec.with_quadrature:
                    # full interference is k=0 by construction, so the
                    # silencing reduction covers it
                    quad = (mrt_cdf_quadrature if scheme is Scheme.MRT
                            else silencing_cdf_quadrature)(params, theta)
                est = estimates[i] if estimates is not None else None
                rows.append(SweepRow(
                    scheme=scheme.value, eta=spec.eta, k=params.k,
                    delta=spec.delta, alpha=spec.alpha,
                    theta_db=spec.theta_db_values[i], theta_linear=theta.linear,
                    outage_cf=res.outage, reliability_cf=res.reliability,
                    outage_mc=est.value if est else None,
                    mc_ci_low=est.ci_low if est else None,
                    mc_ci_high=est.ci_high if est else None,
                    n_samples=est.n_samples if est else None,
                    seed=est.seed if est else None,
                    outage_quad=quad))
    return rows


def run_rate(spec: SweepSpec) -> List[RateRow]:
    """One row per (scheme, k, epsilon); k=eta under silencing marks unbounded."""
    if not spec.epsilon_values:
        raise DomainError("epsilon grid is empty")
    rows = []
    for scheme in spec.schemes:
        if scheme is Scheme.FULL_INTERFERENCE:
            raise DomainError("rate control applies to silencing and mrt only")
        for k in spec.k_list:
            params = spec.params(k)
            for eps in spec.epsilon_values:
                target = ReliabilityTarget(eps)
                try:
                    rate = (rate_mrt if scheme is Scheme.MRT else rate_silencing)(
                        params, target)
                except UnboundedRateError:
                    rate = None
                rows.append(RateRow(scheme=scheme.value, eta=spec.eta, k=k,
                                    delta=spec.delta, alpha=spec.alpha,
                                    epsilon=eps, rate=rate))
    return rows


def run_mink(spec: SweepSpec) -> List[MinKRow]:
    """One row per (scheme, epsilon, theta) with the minimum satisfying k."""
    if not spec.theta_db_values:
        raise DomainError("theta grid is empty")
    if not spec.epsilon_values:
        raise DomainError("epsilon grid is empty")
    rows = []
    for scheme in spec.schemes:
        for eps in spec.epsilon_values:
            target = ReliabilityTarget(eps)
            for db in spec.theta_db_values:
                theta = theta_from_db(db)
                res = min_cooperating(scheme, spec.eta, spec.delta, spec.alpha,
                                      theta, target)
                rows.append(MinKRow(scheme=scheme.value, eta=spec.eta,
                                    delta=spec.delta, alpha=spec.alpha,
                                    epsilon=eps, theta_db=db,
                                    theta_linear=theta.linear,
                                    k_min=res.k_min,
                                    achieved_outage=res.achieved_outage))
    return rows


def _csv_cell(name: str, value) -> str:
    if value is None:
        if name == "rate":
            return UNBOUNDED
        if name == "k_min":
            return UNACHIEVABLE
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "-inf" if value < 0 else "inf"
        return f"{value:.9g}"
    raise TypeError(f"unserializable cell {name}={value!r}")


def _json_cell(name: str, value):
    if value is None:
        if name == "rate":
            return UNBOUNDED
        if name == "k_min":
            return UNACHIEVABLE
        return None
    if isinstance(value, float) and math.isinf(value):
        return "-inf" if value < 0 else "inf"
    return value


def write_csv(rows: Sequence, columns: Sequence[str], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(c, getattr(row, c)) for c in columns])


def write_json(rows: Sequence, columns: Sequence[str], out: TextIO, kind: str) -> None:
    payload = {
        "kind": kind,
        "columns": list(columns),
        "rows": [{c: _json_cell(c, getattr(row, c)) for c in columns} for row in rows],
    }
    json.dump(payload, out, indent=2)
    out.write("\n")


def render(rows: Sequence, columns: Sequence[str], fmt: str, kind: str) -> str:
    buf = io.StringIO()
    if fmt == "csv":
        write_csv(rows, columns, buf)
    elif fmt == "json":
        write_json(rows, columns, buf, kind)
    else:
        raise DomainError(f"unknown format {fmt!r} (choose csv or json)")
    return buf.getvalue()
