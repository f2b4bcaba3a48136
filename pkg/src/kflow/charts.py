"""Matplotlib rendering of flow trajectories to SVG files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

# Fixed hash salt keeps SVG clip-path ids reproducible between runs.
_RC = {"svg.hashsalt": "kflow"}


def render_flow_chart(path, ts, series, labels, title):
    """One polyline per coefficient over flow time, 800x600 viewport."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(8.0, 6.0), dpi=100)
        for values, label in zip(series, labels):
            ax.plot(ts, values, label=label, linewidth=1.5)
        ax.set_xlabel("t")
        ax.set_ylabel("metric coefficients")
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
