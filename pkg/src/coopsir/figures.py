"""Figure set for the report subcommand.

Every figure lands as a PNG next to the CSV holding exactly the plotted
numbers, so each panel can be regenerated or re-plotted without rerunning
the sweep. All data comes from the same grid runners the CLI exposes.
"""
import os
from typing import List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .model import Scheme
from .sweeps import (
    CDF_COLUMNS,
    MINK_COLUMNS,
    RATE_COLUMNS,
    SweepSpec,
    SweepRow,
    render,
    run_cdf,
    run_mink,
    run_rate,
)

_DPI = 150
_SCHEME_STYLE = {
    "full-interference": dict(color="black", linestyle=":"),
    "silencing": dict(linestyle="--"),
    "mrt": dict(linestyle="-"),
}


def _style(scheme: str, k: int) -> dict:
    style = dict(_SCHEME_STYLE[scheme])
    if scheme != "full-interference":
        style["color"] = f"C{k % 10}"
    return style


def _curves(rows: Sequence[SweepRow]):
    """Group cdf rows into (scheme, k, rows) curves preserving grid order."""
    out = []
    for row in rows:
        if out and out[-1][0] == row.scheme and out[-1][1] == row.k:
            out[-1][2].append(row)
        else:
            out.append((row.scheme, row.k, [row]))
    return out


def _save(fig, rows, columns, kind: str, stem: str, out_dir: str) -> List[str]:
    png = os.path.join(out_dir, f"{stem}.png")
    csv_path = os.path.join(out_dir, f"{stem}.csv")
    fig.savefig(png, dpi=_DPI)
    plt.close(fig)
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render(rows, columns, "csv", kind))
    return [png, csv_path]


def _fig_sir_cdf(out_dir: str, mc_rows: Optional[List[SweepRow]]) -> List[str]:
    spec = SweepSpec(schemes=(Scheme.FULL_INTERFERENCE, Scheme.SILENCING, Scheme.MRT),
                     eta=10, k_list=(2, 6), delta=0.5, alpha=3.5,
                     theta_db_values=tuple(float(x) for x in range(-10, 31)))
    rows = run_cdf(spec)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for scheme, k, curve in _curves(rows):
        label = "full interference" if scheme == "full-interference" else f"{scheme}, k={k}"
        ax.plot([r.theta_db for r in curve], [r.outage_cf for r in curve],
                label=label, **_style(scheme, k))
    if mc_rows:
        for scheme, k, curve in _curves(mc_rows):
            ax.plot([r.theta_db for r in curve], [r.outage_mc for r in curve],
                    marker="o", linestyle="none", markersize=4, fillstyle="none",
                    color=_style(scheme, k).get("color", "black"))
        ax.plot([], [], marker="o", linestyle="none", fillstyle="none",
                color="gray", label="Monte Carlo")
    ax.set_xlabel("SIR threshold (dB)")
    ax.set_ylabel("outage probability")
    ax.set_title("Outage vs threshold, eta=10, delta=0.5, alpha=3.5")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, rows, CDF_COLUMNS, "cdf", "sir_cdf", out_dir)


def _fig_outage_tails(out_dir: str) -> List[str]:
    spec = SweepSpec(schemes=(Scheme.SILENCING, Scheme.MRT), eta=10,
                     k_list=(0, 2, 4, 6, 8), delta=0.5, alpha=3.5,
                     theta_db_values=tuple(float(x) for x in range(-10, 31)))
    rows = run_cdf(spec)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for scheme, k, curve in _curves(rows):
        xs = [r.theta_db for r in curve if r.outage_cf > 0]
        ys = [r.outage_cf for r in curve if r.outage_cf > 0]
        ax.semilogy(xs, ys, label=f"{scheme}, k={k}", **_style(scheme, k))
    ax.set_xlabel("SIR threshold (dB)")
    ax.set_ylabel("outage probability")
    ax.set_title("Cooperation deepens the outage tail (solid MRT, dashed silencing)")
    ax.set_ylim(1e-12, 1.5)
    ax.grid(alpha=0.3, which="both")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return _save(fig, rows, CDF_COLUMNS, "cdf", "outage_tails", out_dir)


def _fig_outage_vs_k(out_dir: str) -> List[str]:
    sil = SweepSpec(schemes=(Scheme.SILENCING,), eta=10,
                    k_list=tuple(range(11)), delta=0.5, alpha=3.5,
                    theta_db_values=(0.3,))
    mrt = SweepSpec(schemes=(Scheme.MRT,), eta=10, k_list=tuple(range(10)),
                    delta=0.5, alpha=3.5, theta_db_values=(0.3,))
    rows = run_cdf(sil) + run_cdf(mrt)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for scheme in ("silencing", "mrt"):
        pts = [(r.k, r.outage_cf) for r in rows if r.scheme == scheme and r.outage_cf > 0]
        ax.semilogy([p[0] for p in pts], [p[1] for p in pts], marker="o",
                    label=scheme, **_SCHEME_STYLE[scheme])
    ax.axhline(1e-5, color="red", linewidth=0.8)
    ax.annotate("outage budget 1e-5", xy=(0.3, 1.4e-5), color="red", fontsize=8)
    ax.annotate("silencing k=10: zero outage (off scale)", xy=(6.2, 3e-8), fontsize=8)
    ax.set_xlabel("cooperating radio heads k")
    ax.set_ylabel("outage probability at 0.3 dB")
    ax.set_title("Outage vs cooperation level at 0.3 dB")
    ax.grid(alpha=0.3, which="both")
    ax.legend()
    fig.tight_layout()
    return _save(fig, rows, CDF_COLUMNS, "cdf", "outage_vs_k", out_dir)


def _fig_rate_vs_k(out_dir: str) -> List[str]:
    spec = SweepSpec(schemes=(Scheme.SILENCING, Scheme.MRT), eta=10,
                     k_list=tuple(range(10)), delta=0.5, alpha=3.5,
                     epsilon_values=(1e-5,))
    rows = run_rate(spec)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for scheme in ("silencing", "mrt"):
        pts = [(r.k, r.rate) for r in rows if r.scheme == scheme and r.rate is not None]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                label=scheme, **_SCHEME_STYLE[scheme])
    ax.set_xlabel("cooperating radio heads k")
    ax.set_ylabel("rate meeting outage 1e-5 (bit/s/Hz)")
    ax.set_title("Reliability-constrained rate vs cooperation level")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return _save(fig, rows, RATE_COLUMNS, "rate", "rate_vs_k", out_dir)


def _fig_min_cooperation(out_dir: str) -> List[str]:
    eps = tuple(10.0 ** (-i) for i in range(1, 8))
    spec = SweepSpec(schemes=(Scheme.SILENCING, Scheme.MRT), eta=10,
                     k_list=(0,), delta=0.5, alpha=3.5,
                     theta_db_values=(0.3,), epsilon_values=eps)
    rows = run_mink(spec)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    floor = None
    for scheme in ("silencing", "mrt"):
        pts = [(r.epsilon, r.k_min) for r in rows
               if r.scheme == scheme and r.k_min is not None]
        ax.semilogx([p[0] for p in pts], [p[1] for p in pts], marker="o",
                    label=scheme, **_SCHEME_STYLE[scheme])
        missed = [r for r in rows if r.scheme == scheme and r.k_min is None]
        if missed:
            floor = max(r.achieved_outage for r in missed)
    if floor is not None:
        ax.axvline(floor, color="red", linewidth=0.8, linestyle="--")
        ax.annotate(f"mrt floor {floor:.2e}\n(unachievable to the left)",
                    xy=(floor * 1.2, 1.0), color="red", fontsize=8)
    ax.invert_xaxis()  # stricter budgets to the right
    ax.set_xlabel("outage budget")
    ax.set_ylabel("minimum cooperating radio heads")
    ax.set_title("Cooperation needed to meet an outage budget at 0.3 dB")
    ax.grid(alpha=0.3, which="both")
    ax.legend()
    fig.tight_layout()
    return _save(fig, rows, MINK_COLUMNS, "mink", "min_cooperation", out_dir)


def render_report(out_dir: str, mc_samples: Optional[int] = None, seed: int = 0,
                  workers: int = 1) -> List[str]:
    """Write the five-figure set plus data files; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    written: List[str] = []
    mc_rows = None
    if mc_samples is not None:
        overlay = SweepSpec(schemes=(Scheme.FULL_INTERFERENCE, Scheme.SILENCING,
                                     Scheme.MRT),
                            eta=10, k_list=(2, 6), delta=0.5, alpha=3.5,
                            theta_db_values=tuple(float(x) for x in range(-10, 31, 4)),
                            mc_samples=mc_samples, seed=seed, workers=workers,
                            allow_deep_tails=True)
        mc_rows = run_cdf(overlay)
        mc_path = os.path.join(out_dir, "sir_cdf_mc.csv")
        with open(mc_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(render(mc_rows, CDF_COLUMNS, "csv", "cdf"))
        written.append(mc_path)
    written += _fig_sir_cdf(out_dir, mc_rows)
    written += _fig_outage_tails(out_dir)
    written += _fig_outage_vs_k(out_dir)
    written += _fig_rate_vs_k(out_dir)
    written += _fig_min_cooperation(out_dir)
    return written
