"""Matplotlib figures written next to CLI reports (Agg backend, no display needed)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 3.8),
    "figure.dpi": 120,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 10,
    # fixed metadata keeps repeated runs byte-identical
    "svg.hashsalt": "pbitsim",
}


def figure_path(report_path, suffix: str, ext: str = ".png") -> Path:
    """``run.json`` -> ``run.<suffix>.png`` in the same directory."""
    p = Path(report_path)
    return p.with_name(f"{p.stem}.{suffix}{ext}")


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path


def plot_anneal(run, path) -> Path:
    """Energy and best-so-far energy of the best restart against beta."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        betas = np.asarray(run.schedule.betas) if run.schedule is not None else np.arange(len(run.energy_trace))
        ax.plot(betas, run.energy_trace, lw=1, label="energy")
        ax.plot(betas, run.best_trace, lw=1.5, label="best so far")
        ax.set_xlabel(r"$\beta$")
        ax.set_ylabel("energy")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_training(reconstruction, path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(np.arange(1, len(reconstruction) + 1), reconstruction, marker="o", ms=3)
        ax.set_xlabel("epoch")
        ax.set_ylabel("reconstruction error")
        return _save(fig, path)


def plot_images(images, shape, path, titles=None) -> Path:
    """Row of +-1 images, +1 drawn black."""
    images = np.atleast_2d(images)
    k = len(images)
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, k, figsize=(1.4 * k + 0.4, 1.8), squeeze=False)
        for j, ax in enumerate(axes[0]):
            ax.imshow(images[j].reshape(shape), cmap="gray_r", vmin=-1, vmax=1, interpolation="nearest")
            ax.set_xticks([])
            ax.set_yticks([])
            ax.grid(False)
            if titles is not None:
                ax.set_title(str(titles[j]), fontsize=8)
        return _save(fig, path)


def plot_vmc(result, path) -> Path:
    """Sampled (and exact, when tracked) variational energy against iteration, with the ED line."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        it = np.arange(len(result.energies))
        ax.plot(it, result.energies, lw=0.8, alpha=0.7, label="sampled")
        if result.exact_energies is not None:
            ax.plot(it, result.exact_energies, lw=1.5, label="exact for current RBM")
        if result.ground_energy is not None:
            ax.axhline(result.ground_energy, color="k", ls="--", lw=1, label="exact diagonalization")
        ax.set_xlabel("iteration")
        ax.set_ylabel("energy")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_bench(rows, path) -> Path:
    """Flips per parallel step and flips per second against network size, one line per sampler."""
    with plt.rc_context(STYLE):
        fig, (a1, a2) = plt.subplots(1, 2, figsize=(9, 3.6))
        for name in sorted({r["sampler"] for r in rows}):
            sel = sorted((r for r in rows if r["sampler"] == name), key=lambda r: r["n"])
            n = [r["n"] for r in sel]
            a1.loglog(n, [r["flips_per_step"] for r in sel], marker="o", label=name)
            a2.loglog(n, [r["flips_per_second"] for r in sel], marker="o", label=name)
        a1.set_xlabel("p-bits")
        a1.set_ylabel("flips per parallel step")
        a2.set_xlabel("p-bits")
        a2.set_ylabel("flips per second")
        a1.legend(frameon=False)
        return _save(fig, path)


def plot_trotter(estimate, exact, path) -> Path:
    """Per-qubit transverse magnetisation with error bars, against exact values when given."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        q = np.arange(len(estimate.sigma_x))
        ax.errorbar(q, estimate.sigma_x, yerr=estimate.sigma_x_se, fmt="o", label="Trotter estimate")
        if exact is not None:
            ax.plot(q, exact.sigma_x, "k_", ms=14, label="exact")
        ax.set_xlabel("qubit")
        ax.set_ylabel(r"$\langle\sigma^x\rangle$")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_embedding(emb, path) -> Path:
    """Chimera layout with visible chains drawn horizontally and hidden chains vertically."""
    L = emb.cell_size
    pos = {}
    for idx, (r, c, side, k) in enumerate(emb.chimera_nodes):
        x = c * (L + 2) + (k if side == 0 else L + 0.5)
        y = -(r * (L + 2) + (L + 0.5 if side == 0 else k))
        pos[idx] = (x, y)
    with plt.rc_context(STYLE):
        w = max(4.0, 0.35 * emb.cols * (L + 2))
        h = max(3.0, 0.35 * emb.rows * (L + 2))
        fig, ax = plt.subplots(figsize=(min(w, 16), min(h, 10)))
        for g, chain in enumerate(emb.chains):
            xs, ys = zip(*(pos[i] for i in chain))
            color = "tab:blue" if g < emb.n_visible else "tab:orange"
            ax.plot(xs, ys, "-", color=color, lw=1, alpha=0.7)
            ax.plot(xs, ys, "o", color=color, ms=3)
        ax.set_aspect("equal")
        ax.axis("off")
        ax.set_title(f"K_{{{emb.n_visible},{emb.n_hidden}}} on a {emb.rows} x {emb.cols} chimera grid")
        return _save(fig, path)
