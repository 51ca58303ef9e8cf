"""Matplotlib rendering of the report data series.

Figures are written next to the delimited output (same stem, ``.png``); the
CSV stays the primary machine-readable artifact and plots never feed back
into any computation.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams.update({
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 130,
    "savefig.bbox": "tight",
    "axes.grid": True,
    "grid.alpha": 0.3,
})


def plot_path_for(csv_path: Path) -> Path:
    return csv_path.with_suffix(".png")


def _finish(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def render_density(lambdas, density, empirical=None, title: str = "",
                   path: Path = Path("density.png")) -> Path:
    fig, ax = plt.subplots()
    if empirical is not None:
        ax.fill_between(lambdas, empirical, step="mid", alpha=0.35,
                        color="tab:gray", label="simulated")
    ax.plot(lambdas, density, color="tab:blue", lw=1.8, label="theoretical")
    ax.set_xlabel(r"eigenvalue $\lambda$")
    ax.set_ylabel("density")
    if title:
        ax.set_title(title)
    ax.legend()
    return _finish(fig, path)


def render_ratio_sweep(x: Sequence[float],
                       series: Dict[str, Sequence[Optional[float]]],
                       xlabel: str, title: str = "",
                       path: Path = Path("sweep.png")) -> Path:
    fig, ax = plt.subplots()
    markers = {"mp": "o", "tilted": "s"}
    for name, ys in series.items():
        pts = [(xi, yi) for xi, yi in zip(x, ys) if yi is not None]
        if not pts:
            continue
        xs, vals = zip(*pts)
        ax.plot(xs, vals, marker=markers.get(name, "."), label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("ratio of correct sensing")
    ax.set_ylim(0.0, 1.02)
    if title:
        ax.set_title(title)
    ax.legend()
    return _finish(fig, path)


def render_lookup(slices: Dict[float, List[Tuple[float, float, float, float]]],
                  title: str = "", path: Path = Path("lookup.png")) -> Path:
    """slices: scn -> list of (snr_db, sig_corr, noise_corr, sig_white)."""
    fig, ax = plt.subplots()
    for scn, rows in slices.items():
        snr = [r[0] for r in rows]
        ax.plot(snr, [r[1] for r in rows], marker="o",
                label=f"signal+corr noise, scn={scn:g}")
        ax.plot(snr, [r[2] for r in rows], ls="--", alpha=0.7,
                label=f"corr noise only, scn={scn:g}")
    first = next(iter(slices.values()))
    ax.plot([r[0] for r in first], [r[3] for r in first], ls=":", color="k",
            label="signal+white noise")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel(r"$\lambda_{max}$")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def render_mse(rows: List[Tuple[float, float, float]], title: str = "",
               path: Path = Path("mse.png")) -> Path:
    """rows: (scn, snr_db, mse) triples."""
    fig, ax = plt.subplots()
    scns = sorted({r[0] for r in rows})
    for scn in scns:
        pts = [(r[1], r[2]) for r in rows if r[0] == scn]
        ax.semilogy([x for x, _ in pts], [y for _, y in pts], marker="o",
                    label=f"scn={scn:g}")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("normalized MSE")
    if title:
        ax.set_title(title)
    ax.legend()
    return _finish(fig, path)
