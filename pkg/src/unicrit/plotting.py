"""PNG figures written next to the CSV outputs of the report commands."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .geometry.raster import PGM_LEVEL  # noqa: E402

STYLE = {
    "figure.figsize": (5.0, 3.6),
    "figure.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
    "lines.markersize": 3,
    "savefig.bbox": "tight",
    # fixed metadata keeps the PNG bytes reproducible
    "svg.hashsalt": "unicrit",
}


def _save(fig, path):
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_ray(ray, path, landing=None, title=None):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ref = complex(landing.point) if landing is not None else 0j
        pts = np.array([complex(z - ref) if landing is not None else complex(z)
                        for _, z in ray.samples])
        ax.plot(pts.real, pts.imag, ".-", color="C0", label=f"ray {ray.angle}")
        if landing is not None:
            ax.plot([0], [0], "x", color="C3", label="landing estimate")
            ax.set_xlabel("Re(z - landing)")
            ax.set_ylabel("Im(z - landing)")
        else:
            ax.set_xlabel("Re z")
            ax.set_ylabel("Im z")
        ax.set_aspect("equal", adjustable="datalim")
        ax.legend(loc="best")
        ax.set_title(title or f"{ray.plane} ray, d={ray.d}")
        return _save(fig, path)


def plot_series(xs, series, path, xlabel, ylabel, logx=True, logy=False, title=None):
    """One line per (label, ys) pair against a shared x axis."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for label, ys in series:
            pairs = [(x, y) for x, y in zip(xs, ys) if y is not None and np.isfinite(y)]
            if pairs:
                ax.plot(*zip(*pairs), "o-", label=label)
        if logx:
            ax.set_xscale("log", base=2)
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if len(series) > 1:
            ax.legend(loc="best")
        if title:
            ax.set_title(title)
        return _save(fig, path)


def plot_raster(raster, path, title=None):
    levels = np.array([PGM_LEVEL[k] for k in sorted(PGM_LEVEL)], dtype=float)
    img = levels[raster.cells]
    x0 = raster.center.real - raster.half_width
    x1 = raster.center.real + raster.half_width
    y0 = raster.center.imag - raster.half_height
    y1 = raster.center.imag + raster.half_height
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.imshow(img, cmap="gray", vmin=0, vmax=255, extent=(x0, x1, y0, y1),
                  interpolation="nearest")
        ax.grid(False)
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
        ax.set_title(title or f"{raster.plane} plane, d={raster.d}")
        return _save(fig, path)


def plot_landings(samples, path):
    pts = np.array([complex(s.landing.point) for s in samples if s.landing is not None])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 4.0))
        if pts.size:
            ax.plot(pts.real, pts.imag, ".", color="C0", alpha=0.6)
        t = np.linspace(0, 2 * np.pi, 400)
        ax.plot(2 * np.cos(t), 2 * np.sin(t), "--", color="0.6", lw=0.8)
        ax.set_aspect("equal")
        ax.set_xlabel("Re c")
        ax.set_ylabel("Im c")
        ax.set_title(f"{len(pts)} landing estimates")
        return _save(fig, path)
