"""Static figures for portraits, trajectories, sweeps and fold curves.

Figures are written with a fixed SVG hash salt and without a date stamp so
the files are reproducible byte for byte.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

COLORS = {
    "blue": "#0072B2",
    "orange": "#D55E00",
    "green": "#009E73",
    "pink": "#CC79A7",
    "grey": "#7F7F7F",
}

STYLE = {
    "svg.hashsalt": "lgallee",
    "font.size": 9,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.0,
    "savefig.bbox": "tight",
}


def _save(fig, path):
    path = str(path)
    metadata = {"Date": None} if path.endswith(".svg") else None
    if path.endswith(".png"):
        metadata = {"Software": None}
    fig.savefig(path, metadata=metadata)
    plt.close(fig)


def portrait_figure(data, path, title=None):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 4.0))
        for traj in data.trajectories:
            ax.plot(traj.x, traj.y, color=COLORS["grey"], lw=0.6, alpha=0.8)
        xs, ys = data.prey_nullcline.T
        ax.plot(xs, ys, color=COLORS["blue"], label="prey nullcline")
        px, py = data.predator_nullcline.T
        ax.plot(px, py, color=COLORS["orange"], ls="--", label="predator nullcline")
        for eq in data.equilibria:
            marker = "s" if eq.multiplicity > 1 else "o"
            ax.plot(eq.x, eq.y, marker, color="k", ms=5)
        ax.set_xlim(xs.min(), xs.max())
        finite = ys[np.isfinite(ys)]
        top = max(px.max(), finite.max() if finite.size else 0.0)
        ax.set_ylim(0.0, top)
        ax.set_xlabel("prey x")
        ax.set_ylabel("predator y")
        if title:
            ax.set_title(title)
        ax.legend(loc="upper right", frameon=False)
        _save(fig, path)


def trajectory_figure(traj, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.0))
        ax.plot(traj.t, traj.x, color=COLORS["blue"], label="x")
        ax.plot(traj.t, traj.y, color=COLORS["orange"], label="y")
        ax.set_xlabel("t")
        ax.legend(frameon=False)
        _save(fig, path)


def sweep_figure(grid, path, folds=None):
    a = np.array([row[0].a for row in grid])
    h = np.array([cell.h for cell in grid[0]])
    counts = np.array([[cell.n_positive_roots for cell in row] for row in grid])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.6))
        cmap = ListedColormap(["#FFFFFF", "#DCE9F5", "#F6D8C8", "#F5E6A3"])
        ax.pcolormesh(a, h, counts.T, cmap=cmap, vmin=-0.5, vmax=3.5, shading="nearest")
        if folds is not None:
            for branch in (folds.lower, folds.upper):
                if len(branch):
                    ax.plot(branch[:, 0], branch[:, 1], color="k", lw=1.0)
            ax.plot(folds.a1, folds.h1, "o", color=COLORS["orange"], ms=4)
        ax.set_xlabel("cooperation a")
        ax.set_ylabel("stocking h")
        ax.set_title("interior equilibria: 1 (blue), 3 (orange)")
        _save(fig, path)


def folds_figure(folds, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.6))
        for name, branch, color in (("lower", folds.lower, COLORS["blue"]), ("upper", folds.upper, COLORS["orange"])):
            if len(branch):
                ax.plot(branch[:, 0], branch[:, 1], color=color, label=f"{name} fold")
        ax.plot(folds.a1, folds.h1, "ko", ms=4, label="cusp")
        ax.set_xlabel("cooperation a")
        ax.set_ylabel("stocking h")
        ax.legend(frameon=False)
        _save(fig, path)
