"""SVG renderings of the CSV tables (matplotlib, optional ``plot`` extra)."""

from typing import Any

import numpy as np

from . import tables, utils
from .exceptions import EnsembleException


def _pyplot() -> Any:
    try:
        import matplotlib
    except ImportError:
        raise EnsembleException(
            "Option `--svg` needs matplotlib, install it with `pip install wh-ensembles[plot]`") from None
    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "wh-ensembles"
    matplotlib.rcParams["svg.fonttype"] = "none"
    import matplotlib.pyplot as plt
    return plt


def _save(fig: Any, path: str) -> str:
    fig.savefig(path, format="svg", metadata={"Date": None})
    _pyplot().close(fig)
    utils.info(f"Wrote {path}")
    return path


def render_spectrum(csv_path: str, svg_path: str) -> str:
    """Eigenvalues against their position: plateau near 1, plunge near the area."""
    j, values = tables.read_columns(csv_path, "j", "lambda")
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(j, values, marker="o", markersize=2, linewidth=0.8)
    ax.axhline(0.5, color="grey", linewidth=0.5, linestyle="--")
    ax.set_xlabel("j")
    ax.set_ylabel("eigenvalue")
    ax.set_ylim(-0.05, 1.05)
    return _save(fig, svg_path)


def render_intensity(csv_path: str, svg_path: str) -> str:
    x, xi, rho = tables.read_columns(csv_path, "x", "xi", "rho")
    xs, xis = np.unique(x), np.unique(xi)
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    image = ax.imshow(rho.reshape(len(xs), len(xis)).T, origin="lower", vmin=0.0, vmax=1.0,
                      extent=(xs[0], xs[-1], xis[0], xis[-1]), cmap="viridis")
    fig.colorbar(image, ax=ax, label="one-point intensity")
    ax.set_xlabel("x")
    ax.set_ylabel("xi")
    return _save(fig, svg_path)
