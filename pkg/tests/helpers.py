"""Helpers shared across test modules."""

import numpy as np

from drsim.devices import TlsParams, TransmonParams, build_tls, build_transmon
from drsim.fock import TruncationSpec

TLS_KAPPA = 7.2e-3
TRANSMON_KAPPA = 1.619e-3
TRANSMON_OMEGA_D = 1.0015


def make_tls(n_max, kappa=TLS_KAPPA, **params):
    return build_tls(
        TlsParams(**params), TruncationSpec(n_max=n_max, q_dim=2), kappa=kappa
    )


def make_transmon(n_max, kappa=TRANSMON_KAPPA, **params):
    p = TransmonParams(**params)
    trunc = TruncationSpec(n_max=n_max, q_dim=2 * p.charge_cutoff + 1)
    return build_transmon(p, trunc, kappa=kappa)


def random_density_matrix(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
