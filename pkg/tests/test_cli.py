"""Scenario configs, file outputs, presets and exit codes."""

import json

import pytest
import yaml

from drsim.cli import (
    EXIT_ABORT,
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    PRESETS,
    TRAJECTORY_HEADER,
    ConfigError,
    ScenarioConfig,
    _parse_values,
    _set_field,
    dump_config,
    load_config,
    main,
    preset_configs,
    run,
    run_spectrum,
    sweep,
)


def tls_scenario(tmp_path, **overrides):
    raw = {
        "device": {"kind": "tls", "omega_q": 0.75, "g": 3.0e-2},
        "kappa": 7.2e-3,
        "n_max": 4,
        "outputs": str(tmp_path / "out"),
        "drive": {"amplitude": 1.0e-2, "omega_d": 1.0},
        "frame": "q_frame",
        "initial_branch": "g",
        "integrator": {"t_end": 20.0, "sample_dt": 5.0},
    }
    raw.update(overrides)
    return ScenarioConfig.from_dict(raw)


class TestConfigParsing:
    def test_round_trip_through_yaml(self, tmp_path):
        cfg = tls_scenario(tmp_path)
        path = tmp_path / "scenario.yaml"
        dump_config(cfg, path)
        loaded = load_config(path)
        assert loaded == cfg

    def test_unknown_field_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown config fields"):
            ScenarioConfig.from_dict({"device": {}, "kappa": 1e-3, "n_max": 3,
                                      "outputs": "x", "bogus": 1})

    def test_missing_field_rejected(self):
        with pytest.raises(ConfigError, match="missing config fields"):
            ScenarioConfig.from_dict({"device": {}})

    def test_unknown_device_kind_rejected(self, tmp_path):
        cfg = tls_scenario(tmp_path, device={"kind": "fluxonium"})
        with pytest.raises(ConfigError, match="device.kind"):
            cfg.build_model()

    def test_bad_device_parameter_rejected(self, tmp_path):
        cfg = tls_scenario(tmp_path, device={"kind": "tls", "omega_q": -1.0})
        with pytest.raises(ConfigError, match="device"):
            cfg.build_model()

    def test_bad_frame_rejected(self, tmp_path):
        cfg = tls_scenario(tmp_path, frame="rotating")
        with pytest.raises(ConfigError, match="frame"):
            cfg.frame_mode()

    def test_bad_branch_rejected(self, tmp_path):
        cfg = tls_scenario(tmp_path, initial_branch="f")
        with pytest.raises(ConfigError, match="initial_branch"):
            cfg.branch()

    def test_missing_drive_rejected_for_dynamics(self, tmp_path):
        cfg = tls_scenario(tmp_path, drive=None)
        with pytest.raises(ConfigError, match="drive"):
            cfg.validate(dynamics=True)

    def test_unreadable_config_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "missing.yaml")

    def test_unparsable_config_file(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("{::")
        with pytest.raises(ConfigError, match="cannot parse"):
            load_config(path)


class TestRun:
    def test_artifacts_and_schema(self, tmp_path):
        cfg = tls_scenario(tmp_path)
        record = run(cfg)
        out = tmp_path / "out"
        for name in ("trajectory.csv", "spectrum.csv", "config.yaml", "record.json"):
            assert (out / name).exists()
        lines = (out / "trajectory.csv").read_text().splitlines()
        assert lines[0] == TRAJECTORY_HEADER
        assert len(lines) == 1 + 5  # t = 0, 5, 10, 15, 20
        # TLS runs leave the transmon occupation column empty
        assert all(line.split(",")[7] == "" for line in lines[1:])
        assert record.status == "ok"
        rec = json.loads((out / "record.json").read_text())
        assert rec["version"]
        assert rec["diagnostics"]["n_accepted"] > 0

    def test_transmon_occupation_column_filled(self, tmp_path):
        cfg = tls_scenario(
            tmp_path,
            device={"kind": "transmon", "charge_cutoff": 2},
            kappa=1.619e-3,
            drive={"amplitude": 1.0e-2, "omega_d": 1.0015},
            integrator={"t_end": 10.0, "sample_dt": 5.0},
        )
        run(cfg)
        lines = (tmp_path / "out" / "trajectory.csv").read_text().splitlines()
        assert all(line.split(",")[7] != "" for line in lines[1:])

    def test_byte_reproducibility(self, tmp_path):
        cfg_a = tls_scenario(tmp_path, outputs=str(tmp_path / "a"))
        cfg_b = tls_scenario(tmp_path, outputs=str(tmp_path / "b"))
        run(cfg_a)
        run(cfg_b)
        assert (
            (tmp_path / "a" / "trajectory.csv").read_bytes()
            == (tmp_path / "b" / "trajectory.csv").read_bytes()
        )

    def test_abort_writes_partial_trajectory(self, tmp_path):
        from drsim.engine import IntegrationAbort

        cfg = tls_scenario(
            tmp_path,
            integrator={
                "t_end": 50.0,
                "sample_dt": 5.0,
                "rtol": 1e-13,
                "atol": 1e-15,
                "h_init": 5.0,
                "h_min": 5.0,
            },
        )
        with pytest.raises(IntegrationAbort):
            run(cfg)
        rec = json.loads((tmp_path / "out" / "record.json").read_text())
        assert rec["status"] == "aborted"
        assert (tmp_path / "out" / "trajectory.csv").exists()


class TestRunSpectrum:
    def test_dispersive_summary_written(self, tmp_path):
        cfg = ScenarioConfig.from_dict(
            {
                "device": {"kind": "transmon"},
                "kappa": 1.619e-3,
                "n_max": 12,
                "outputs": str(tmp_path / "spec"),
            }
        )
        run_spectrum(cfg)
        summary = json.loads((tmp_path / "spec" / "dispersive.json").read_text())
        assert summary["chi"] == pytest.approx(8.096e-4, abs=1e-6)
        assert summary["omega_c_ren"] == pytest.approx(1.001975, abs=1e-5)
        assert summary["n_crit"] == pytest.approx(8.0, abs=1e-9)
        head = (tmp_path / "spec" / "spectrum.csv").read_text().splitlines()[0]
        assert head == "branch,n,energy,gap_to_next,label_overlap,transmon_occupation"


class TestSweep:
    def test_child_runs_and_index(self, tmp_path):
        cfg = tls_scenario(tmp_path)
        results = sweep(
            cfg, "drive.amplitude", [5.0e-3, 1.0e-2], out_dir=tmp_path / "sweep"
        )
        assert len(results) == 2
        assert all("record" in r for r in results)
        index = json.loads((tmp_path / "sweep" / "sweep_index.json").read_text())
        assert index["parameter"] == "drive.amplitude"
        assert (tmp_path / "sweep" / "drive_amplitude_00" / "trajectory.csv").exists()

    def test_bad_parameter_path_rejected(self, tmp_path):
        cfg = tls_scenario(tmp_path)
        with pytest.raises(ConfigError, match="sweep parameter"):
            _set_field(cfg, "drive.nonsense", 1.0)
        with pytest.raises(ConfigError, match="sweep parameter"):
            _set_field(cfg, "nonsense", 1.0)

    def test_set_field_does_not_mutate_base(self, tmp_path):
        cfg = tls_scenario(tmp_path)
        child = _set_field(cfg, "drive.amplitude", 9.0e-3)
        assert cfg.drive["amplitude"] == 1.0e-2
        assert child.drive["amplitude"] == 9.0e-3

    def test_failed_child_recorded_not_fatal(self, tmp_path):
        cfg = tls_scenario(
            tmp_path,
            integrator={
                "t_end": 50.0,
                "sample_dt": 5.0,
                "rtol": 1e-13,
                "atol": 1e-15,
                "h_init": 5.0,
                "h_min": 5.0,
            },
        )
        results = sweep(cfg, "drive.amplitude", [1.0e-2], out_dir=tmp_path / "s")
        assert "error" in results[0]

    def test_parse_values(self):
        assert _parse_values("1e-3, 2.5e-2,7") == [1e-3, 2.5e-2, 7]


class TestPresets:
    def test_all_presets_validate(self):
        for name in PRESETS:
            spec, pairs = preset_configs(name, include_long=True)
            assert pairs
            assert spec["kind"] in ("dynamics", "spectrum")

    def test_expected_run_counts(self):
        counts = {}
        for name in PRESETS:
            _, pairs = preset_configs(name, include_long=True)
            counts[name] = len(pairs)
        assert counts == {
            "fig2": 4,
            "fig3": 3,
            "fig4": 8,
            "fig5": 1,
            "fig6": 1,
            "fig7": 4,
            "fig8": 16,
            "fig9": 7,
            "fig10": 5,
        }

    def test_unknown_preset_rejected(self):
        with pytest.raises(ConfigError, match="unknown preset"):
            preset_configs("fig99")


class TestMainExitCodes:
    def test_config_error_exit(self, tmp_path, capsys):
        path = tmp_path / "bad.yaml"
        path.write_text(yaml.safe_dump({"device": {"kind": "tls"}}))
        assert main(["run", str(path)]) == EXIT_CONFIG
        assert "config error" in capsys.readouterr().err

    def test_missing_config_exit(self, tmp_path):
        assert main(["run", str(tmp_path / "nope.yaml")]) == EXIT_CONFIG

    def test_abort_exit(self, tmp_path, capsys):
        cfg = tls_scenario(
            tmp_path,
            integrator={
                "t_end": 50.0,
                "sample_dt": 5.0,
                "rtol": 1e-13,
                "atol": 1e-15,
                "h_init": 5.0,
                "h_min": 5.0,
            },
        )
        path = tmp_path / "abort.yaml"
        dump_config(cfg, path)
        assert main(["run", str(path)]) == EXIT_ABORT
        assert "integrator abort" in capsys.readouterr().err

    def test_io_error_exit(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory")
        cfg = tls_scenario(tmp_path, outputs=str(blocker))
        path = tmp_path / "io.yaml"
        dump_config(cfg, path)
        assert main(["run", str(path)]) == EXIT_IO
        assert "i/o error" in capsys.readouterr().err

    def test_ok_exit(self, tmp_path):
        cfg = tls_scenario(tmp_path)
        path = tmp_path / "ok.yaml"
        dump_config(cfg, path)
        assert main(["run", str(path)]) == EXIT_OK

    def test_spectrum_subcommand(self, tmp_path):
        cfg = ScenarioConfig.from_dict(
            {
                "device": {"kind": "tls"},
                "kappa": 7.2e-3,
                "n_max": 8,
                "outputs": str(tmp_path / "spec"),
            }
        )
        path = tmp_path / "spec.yaml"
        dump_config(cfg, path)
        assert main(["spectrum", str(path)]) == EXIT_OK
        assert (tmp_path / "spec" / "dispersive.json").exists()
