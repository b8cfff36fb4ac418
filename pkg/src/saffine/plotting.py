"""Figures written next to the CSV outputs of the command-line tool."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_profile(profile, path):
    """One line per curvature channel against the natural parameter."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 3.5))
        for i in range(profile.n - 1):
            ax.plot(profile.s, profile.chi[:, i], label=rf"$\chi_{i + 1}$")
        ax.set_xlabel("s")
        ax.set_ylabel("curvature")
        ax.legend(loc="best")
        _save(fig, path)


def plot_arclength(table, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 3.5))
        ax.plot(table.t, table.sigma)
        ax.set_xlabel("t")
        ax.set_ylabel(r"$\sigma(t)$")
        _save(fig, path)


def plot_curve(points, path, title=None):
    """Planar curves are drawn as is, space curves in 3-d; higher n uses the first three coordinates."""
    points = np.asarray(points)
    with plt.rc_context(STYLE):
        fig = plt.figure(figsize=(5, 5))
        if points.shape[1] == 2:
            ax = fig.add_subplot()
            ax.plot(points[:, 0], points[:, 1])
            ax.set_aspect("equal", adjustable="datalim")
            ax.set_xlabel("$x_1$")
            ax.set_ylabel("$x_2$")
        else:
            ax = fig.add_subplot(projection="3d")
            ax.plot(points[:, 0], points[:, 1], points[:, 2])
            ax.set_xlabel("$x_1$")
            ax.set_ylabel("$x_2$")
            ax.set_zlabel("$x_3$")
        if title:
            ax.set_title(title)
        _save(fig, path)
