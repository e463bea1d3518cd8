"""Matplotlib renderings of eigenvalue curves and pipeline outcomes.

Figures are written straight to files; matplotlib is imported lazily with the
Agg backend so the library stays importable on headless machines.
"""

from __future__ import annotations

import numpy as np

from .algebra import MatPath, path_from_dict
from .eig import eig_curves
from .spectral import spectrum_bands


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def render_curves(
    x: MatPath,
    out_path: str,
    partition=None,
    title: str | None = None,
    merge_tol: float = 1e-9,
) -> str:
    """Eigenvalue curves over s with the certified bands shaded."""
    plt = _pyplot()
    curves = eig_curves(x)
    report = spectrum_bands(curves, merge_tol=merge_tol)
    s = x.grid
    fig, ax = plt.subplots(figsize=(8, 5))
    for lo, hi in report.bands:
        ax.axhspan(lo, hi, color="tab:blue", alpha=0.08, lw=0)
    for k in range(x.n):
        ax.plot(s, curves.lam[:, k], lw=1.4, label=rf"$\lambda_{{{k + 1}}}$")
    if partition is not None:
        for t in partition:
            ax.axhline(t, color="gray", lw=0.5, ls=":")
    ax.set_xlabel("s")
    ax.set_ylabel("eigenvalue")
    ax.set_title(title or "eigenvalue curves")
    if x.n <= 8:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def render_report(x: MatPath, report: dict, out_path: str) -> str:
    """Two-panel summary of a pipeline run next to its JSON report.

    Left: input curves with the partition.  Right: the cleaned element and
    approximant values for a success, or the obstruction witnesses.
    """
    plt = _pyplot()
    xc = eig_curves(x)
    s = x.grid
    partition = report.get("partition", [])
    fig, axes = plt.subplots(1, 2, figsize=(12, 5), sharey=True)
    for ax in axes:
        for t in partition:
            ax.axhline(t, color="gray", lw=0.5, ls=":")
    for k in range(x.n):
        axes[0].plot(s, xc.lam[:, k], lw=1.4)
    axes[0].set_title("input x")
    axes[0].set_xlabel("s")
    axes[0].set_ylabel("eigenvalue")

    if report.get("schema") == "fsa-report/1":
        y = path_from_dict(report["y_final"])
        yc = eig_curves(y)
        d = report["d"]
        for t in partition:
            axes[1].axhspan(t - d, t + d, color="tab:green", alpha=0.12, lw=0)
        for k in range(y.n):
            axes[1].plot(s, yc.lam[:, k], lw=1.4)
        for v in report.get("spectrum_values", []):
            axes[1].axhline(v, color="tab:red", lw=1.0, ls="--")
        axes[1].set_title(
            f"cleaned element and approximant values "
            f"(||x-b|| <= {report['error_chain']['x_to_b']:.3g})"
        )
    else:
        y = path_from_dict(report["y_at_failure"])
        yc = eig_curves(y)
        for k in range(y.n):
            axes[1].plot(s, yc.lam[:, k], lw=1.4)
        cert = report["certificate"]
        t = cert["level"]
        delta = cert["delta"]
        axes[1].axhspan(t - delta, t + delta, color="tab:red", alpha=0.15, lw=0)
        axes[1].axhline(t, color="tab:red", lw=1.0)
        axes[1].plot(
            [cert["s_minus"], cert["s_plus"]],
            [cert["lambda_minus"], cert["lambda_plus"]],
            "kv",
            ms=8,
        )
        axes[1].set_title(f"obstructed at level {t:.4g} (budget {delta:.3g})")
    axes[1].set_xlabel("s")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
