"""Rendering layouts, reference overlays, and the CLI wrapper."""

import hashlib
from pathlib import Path

import matplotlib.pyplot as plt
import pytest

from plot_kit.cli import main
from plot_kit.figures import (
    FigureRequest,
    _render_parametric,
    _render_time_series,
    render,
)
from plot_kit.schema import SchemaError

from contract_io import make_preset_dir, write_index, write_trajectory

ALL_PRESETS = [f"fig{i}" for i in range(2, 11)]


def _tree_digest(root: Path) -> dict:
    return {
        p: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


class TestRender:
    @pytest.mark.parametrize("preset", ALL_PRESETS)
    def test_every_preset_renders(self, preset, preset_dir, tmp_path):
        run = preset_dir(preset)
        out = tmp_path / f"{preset}.png"
        result = render(FigureRequest(preset=preset, run_dir=str(run), out_path=str(out)))
        assert Path(result) == out
        assert out.stat().st_size > 0

    def test_rendering_is_read_only(self, preset_dir, tmp_path):
        run = preset_dir("fig9")
        before = _tree_digest(run)
        render(
            FigureRequest(preset="fig9", run_dir=str(run), out_path=str(tmp_path / "a.png"))
        )
        render(
            FigureRequest(preset="fig9", run_dir=str(run), out_path=str(tmp_path / "b.png"))
        )
        assert _tree_digest(run) == before

    def test_amplitude_panel_uses_log_scale(self, preset_dir):
        run = preset_dir("fig3")
        fig, ax = plt.subplots()
        try:
            request = FigureRequest(
                preset="fig3", run_dir=str(run), out_path="unused.png"
            )
            _render_time_series(request, ax)
            assert ax.get_yscale() == "log"
        finally:
            plt.close(fig)

    def test_parametric_overlay_has_reference_curves(self, preset_dir):
        run = preset_dir("fig10")
        fig, ax = plt.subplots()
        try:
            request = FigureRequest(
                preset="fig10", run_dir=str(run), out_path="unused.png"
            )
            _render_parametric(request, ax)
            dotted = [ln for ln in ax.get_lines() if ln.get_linestyle() == ":"]
            # one reference curve per labeled branch
            assert len(dotted) == 2
        finally:
            plt.close(fig)

    def test_single_sample_trajectory_renders(self, tmp_path):
        d = tmp_path / "fig2"
        (d / "only").mkdir(parents=True)
        write_trajectory(d / "only" / "trajectory.csv", n_rows=1, transmon=False)
        write_index(d, ["only"])
        out = tmp_path / "point.png"
        render(FigureRequest(preset="fig2", run_dir=str(d), out_path=str(out)))
        assert out.stat().st_size > 0

    def test_unknown_preset_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="unknown preset"):
            FigureRequest(preset="fig1", run_dir=str(tmp_path), out_path="x.png")

    def test_missing_run_dir_rejected(self, tmp_path):
        with pytest.raises(SchemaError, match="does not exist"):
            FigureRequest(
                preset="fig2", run_dir=str(tmp_path / "absent"), out_path="x.png"
            )

    def test_schema_violation_propagates_column_name(self, preset_dir):
        run = preset_dir("fig2")
        traj = run / "run_a" / "trajectory.csv"
        traj.write_text(traj.read_text().replace("real_quadrature", "quad"))
        with pytest.raises(SchemaError, match="real_quadrature"):
            render(
                FigureRequest(preset="fig2", run_dir=str(run), out_path="unused.png")
            )


class TestCli:
    def test_success_exit_code(self, preset_dir, tmp_path):
        run = preset_dir("fig7")
        out = tmp_path / "fig7.png"
        assert main(["--preset", "fig7", "--run", str(run), "--out", str(out)]) == 0
        assert out.exists()

    def test_schema_error_exit_code(self, preset_dir, tmp_path, capsys):
        run = preset_dir("fig4")
        traj = run / "run_b" / "trajectory.csv"
        traj.write_text(traj.read_text().replace("abs_c_u", "amp"))
        code = main(
            ["--preset", "fig4", "--run", str(run), "--out", str(tmp_path / "x.png")]
        )
        assert code == 2
        assert "abs_c_u" in capsys.readouterr().err

    def test_unknown_preset_exit_code(self, tmp_path, capsys):
        code = main(
            ["--preset", "fig99", "--run", str(tmp_path), "--out", str(tmp_path / "x.png")]
        )
        assert code == 2
        assert "unknown preset" in capsys.readouterr().err
