"""Figure layouts for preset run directories.

Each preset maps to one of three layouts: time series over kappa*t
(photon number, real quadrature, or the displaced-frame amplitude on a log
scale), per-branch spectrum gap curves, or parametric occupation-vs-photon
plots with the labeled-branch reference curve overlaid as a red dotted
line.  Rendering is read-only over the run directory.
"""

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, load_index, load_spectrum, load_trajectory

# preset -> (layout, trajectory column, log-y)
_TIME_SERIES = {
    "fig2": ("photon_number", False),
    "fig3": ("abs_c_u", True),
    "fig4": ("real_quadrature", False),
    "fig7": ("photon_number", False),
    "fig8": ("real_quadrature", False),
}
_SPECTRUM = {"fig5", "fig6"}
_PARAMETRIC = {"fig9", "fig10"}

_COLUMN_LABELS = {
    "photon_number": "photon number",
    "real_quadrature": "real quadrature",
    "abs_c_u": "|<c>_U|",
}


@dataclass(frozen=True)
class FigureRequest:
    """One rendering job: a preset layout applied to a run directory."""

    preset: str
    run_dir: str
    out_path: str
    log_amplitude: bool = True

    def __post_init__(self):
        known = set(_TIME_SERIES) | _SPECTRUM | _PARAMETRIC
        if self.preset not in known:
            raise ValueError(
                f"unknown preset {self.preset!r}; available: {sorted(known)}"
            )
        if not Path(self.run_dir).is_dir():
            raise SchemaError(f"run directory {self.run_dir} does not exist")


def _preset_runs(run_dir):
    """(name, directory) pairs listed by the preset index, in index order."""
    index = load_index(run_dir)
    pairs = []
    for entry in index["runs"]:
        name = entry.get("name")
        if name is None:
            raise SchemaError(
                f"{Path(run_dir) / 'preset_index.json'}: run entry missing column 'name'"
            )
        pairs.append((name, Path(run_dir) / name))
    return pairs


def _plot_series(ax, x, y, label, log_y):
    # a single sample still renders as a visible point
    marker = "o" if x.size == 1 else None
    if log_y:
        positive = y > 0
        ax.semilogy(x[positive], y[positive], marker=marker, label=label)
    else:
        ax.plot(x, y, marker=marker, label=label)


def _render_time_series(request, ax):
    column, log_y = _TIME_SERIES[request.preset]
    log_y = log_y and request.log_amplitude
    for name, run in _preset_runs(request.run_dir):
        traj_path = run / "trajectory.csv"
        if not traj_path.exists():
            continue
        traj = load_trajectory(traj_path)
        _plot_series(ax, traj["kappa_t"], traj[column], name, log_y)
    ax.set_xlabel("kappa t")
    ax.set_ylabel(_COLUMN_LABELS[column])


def _render_spectrum(request, ax):
    for name, run in _preset_runs(request.run_dir):
        spec_path = run / "spectrum.csv"
        if not spec_path.exists():
            continue
        spec = load_spectrum(spec_path)
        for branch in dict.fromkeys(spec["branch"]):
            sel = spec["branch"] == branch
            n = spec["n"][sel]
            gap = spec["gap_to_next"][sel]
            keep = ~np.isnan(gap)
            _plot_series(ax, n[keep], gap[keep], f"{name} branch {branch}", False)
    ax.set_xlabel("photon number n")
    ax.set_ylabel("per-photon cavity frequency")


def _render_parametric(request, ax):
    trajectories = []
    reference = None
    for name, run in _preset_runs(request.run_dir):
        if (run / "trajectory.csv").exists():
            trajectories.append((name, load_trajectory(run / "trajectory.csv")))
        elif (run / "spectrum.csv").exists():
            reference = load_spectrum(run / "spectrum.csv")
    for name, traj in trajectories:
        _plot_series(ax, traj["photon_number"], traj["transmon_occupation"], name, False)
    if reference is not None:
        for branch in dict.fromkeys(reference["branch"]):
            sel = reference["branch"] == branch
            ax.plot(
                reference["n"][sel],
                reference["transmon_occupation"][sel],
                "r:",
                label=f"reference branch {branch}",
            )
    ax.set_xlabel("photon number")
    ax.set_ylabel("transmon occupation")


def render(request: FigureRequest) -> str:
    """Write the requested figure and return the image path."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    try:
        if request.preset in _SPECTRUM:
            _render_spectrum(request, ax)
        elif request.preset in _PARAMETRIC:
            _render_parametric(request, ax)
        else:
            _render_time_series(request, ax)
        ax.set_title(request.preset)
        if ax.get_legend_handles_labels()[0]:
            ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(request.out_path, dpi=150)
    finally:
        plt.close(fig)
    return str(request.out_path)
