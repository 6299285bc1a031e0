"""Figure rendering for sweep outputs.

The sweep command saves a PNG next to its CSV so a run is immediately
inspectable; plotting is display-only and never feeds back into results.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .sweeps import AXIS_EN_USER_DB, AXIS_INTER_USER_M, AXIS_USER_DN_DB

_AXIS_LABELS = {
    AXIS_USER_DN_DB: "user-to-DN gain ratio h_YD / h_XD (dB)",
    AXIS_EN_USER_DB: "EN-to-user gain ratio h_EX / h_EY (dB)",
    AXIS_INTER_USER_M: "inter-user distance (m)",
}

_STYLES = {
    "Cooperate": "o-",
    "NonCooperate": "s--",
    "RelayXtoY": "^:",
    "RelayYtoX": "v:",
    "RelayBest": "d-.",
}


def render_sweep_figure(rows, png_path, title=None) -> None:
    """Plot max-min throughput vs the swept value, one line per scheme."""
    by_scheme = {}
    sweep_var = rows[0].sweep_var if rows else ""
    for r in rows:
        if r.status == "ok":
            by_scheme.setdefault(r.scheme.value, []).append((r.sweep_value, r.R_common))

    fig, ax = plt.subplots(figsize=(6, 4))
    for scheme, pts in by_scheme.items():
        pts.sort()
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        ax.plot(xs, ys, _STYLES.get(scheme, "x-"), label=scheme, markersize=4)
    ax.set_xlabel(_AXIS_LABELS.get(sweep_var, sweep_var))
    ax.set_ylabel("max-min throughput (bits/s/Hz)")
    if title:
        ax.set_title(title)
    ax.grid(True, ls=":")
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=160)
    plt.close(fig)
