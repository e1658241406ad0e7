"""Shared fixtures: reference device models and small labeled spectra."""

import pytest

from drsim.spectrum import diagonalize_joint, label_branches
from helpers import make_tls, make_transmon


@pytest.fixture(scope="session")
def tls_model_small():
    return make_tls(n_max=12)


@pytest.fixture(scope="session")
def tls_spectrum_small(tls_model_small):
    return label_branches(diagonalize_joint(tls_model_small), tls_model_small)


@pytest.fixture(scope="session")
def transmon_model_small():
    return make_transmon(n_max=12)


@pytest.fixture(scope="session")
def transmon_spectrum_small(transmon_model_small):
    return label_branches(diagonalize_joint(transmon_model_small), transmon_model_small)
