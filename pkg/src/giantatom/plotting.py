"""Matplotlib figures written as SVG.

Output is byte-stable: the SVG id salt is fixed and the date stamp dropped.
"""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

golden_mean = (math.sqrt(5) - 1.0) / 2.0
fig_width = 5.0

STYLE = {
    "svg.hashsalt": "giantatom",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 2.5,
    "figure.figsize": (fig_width, fig_width * golden_mean),
    "axes.formatter.useoffset": False,
}

COLORS = {"data": "#2b8cbe", "model": "#d7301f", "alt": "#41ab5d", "marker": "#252525"}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def overlay(path, frequency, model, data=None, title="", ylabel="transmission"):
    """Data points with the model curve on top."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        if data is not None:
            ax.plot(frequency, data, "o", color=COLORS["data"], label="data", alpha=0.6)
        ax.plot(frequency, model, "-", color=COLORS["model"], label="model")
        ax.set_xlabel("frequency (GHz)")
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if data is not None:
            ax.legend(loc="best")
        return _save(fig, path)


def switch_figure(path, grid, gamma_c, t_carrier, ioa_roots, mioa_roots):
    """Effective coupling (top) and carrier transmission (bottom) versus omega0."""
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(fig_width, fig_width * 0.9))
        ax1.plot(grid, np.asarray(gamma_c) * 1e3, color=COLORS["alt"], ls="--", label="array factor")
        for r in ioa_roots:
            ax1.axvline(r, color=COLORS["marker"], lw=0.6, ls=":")
        ax1.set_ylabel(r"$\gamma_c$ (MHz)")
        ax2.plot(grid, t_carrier, color=COLORS["model"], label="with background channel")
        for r in mioa_roots:
            ax2.axvline(r, color=COLORS["marker"], lw=0.6, ls=":")
        ax2.set_ylabel(r"$T(\omega=\omega_0)$")
        ax2.set_xlabel(r"$\omega_0$ (GHz)")
        return _save(fig, path)


def oracle_figure(path, detunings, freq_abs, time_abs, rel_dev):
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(fig_width, fig_width * 0.9))
        d = np.asarray(detunings) * 1e3
        ax1.plot(d, freq_abs, "-", color=COLORS["model"], label="frequency domain")
        ax1.plot(d, time_abs, "o", color=COLORS["data"], label="time domain")
        ax1.set_ylabel(r"$|\sigma_-|$")
        ax1.legend(loc="best")
        ax2.semilogy(d, np.maximum(rel_dev, 1e-18), "s", color=COLORS["marker"])
        ax2.set_ylabel("relative deviation")
        ax2.set_xlabel("detuning (MHz)")
        return _save(fig, path)
