"""Shared fixtures for plot_kit tests."""

import pytest

from contract_io import make_preset_dir


@pytest.fixture
def preset_dir(tmp_path):
    return lambda preset: make_preset_dir(tmp_path, preset)
