"""Figures written next to the CSV output.  Uses the non-interactive Agg backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .geometry import Polygon  # noqa: E402


def plot_traces(poly: Polygon, traces: list[tuple[np.ndarray, np.ndarray]], path,
                exact: list[np.ndarray] | None = None, title: str = "Neumann trace") -> Path:
    """One panel per edge: computed trace, and the exact one when known."""
    n = poly.n
    cols = min(n, 3)
    rows = int(np.ceil(n / cols))
    fig, axes = plt.subplots(rows, cols, figsize=(4 * cols, 3 * rows), squeeze=False)
    for i, ax in enumerate(axes.flat):
        if i >= n:
            ax.axis("off")
            continue
        tau, val = traces[i]
        ax.plot(tau, val, label="computed")
        if exact is not None:
            ax.plot(tau, exact[i], "k--", lw=1, label="exact")
        ax.set_title(f"edge {i + 1}")
        ax.set_xlabel("tau")
    axes.flat[0].legend(fontsize="small")
    fig.suptitle(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_convergence(Ns, errors, residuals, path) -> Path:
    """``errors`` has one column per edge."""
    errors = np.atleast_2d(np.asarray(errors, dtype=float))
    fig, ax = plt.subplots(figsize=(5, 4))
    floor = np.finfo(float).tiny
    for k in range(errors.shape[1]):
        ax.semilogy(Ns, np.maximum(errors[:, k], floor), "o-", label=f"edge {k + 1}")
    ax.semilogy(Ns, np.maximum(residuals, floor), "ks--", label="relative residual")
    ax.set_xlabel("N")
    ax.set_ylabel("error")
    ax.legend(fontsize="small")
    fig.tight_layout()
    return _save(fig, path)


def plot_gradient(poly: Polygon, z, dqdz, path) -> Path:
    """Quiver of grad q = 2 conj(dq/dz) over the polygon outline."""
    z = np.asarray(z)
    g = 2 * np.conj(np.asarray(dqdz))
    fig, ax = plt.subplots(figsize=(5, 5))
    v = np.append(poly.vertices, poly.vertices[0])
    ax.plot(v.real, v.imag, "k-")
    ax.quiver(z.real, z.imag, g.real, g.imag, np.abs(g), cmap="viridis")
    ax.set_aspect("equal")
    ax.set_title("grad q")
    fig.tight_layout()
    return _save(fig, path)


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
