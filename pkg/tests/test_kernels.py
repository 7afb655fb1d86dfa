import os
import subprocess
import sys

import numpy as np
import pytest

from spinvertex import kernels

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")


def _random_weights(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return A, B


@needs_numba
@pytest.mark.parametrize("n,L", [(2, 1), (2, 4), (3, 3), (4, 2)])
def test_diagonal_transfer_paths_agree(n, L):
    Wv, Wh = _random_weights(n, n * 10 + L)
    a = kernels.diagonal_transfer_numpy(Wv, Wh, L)
    b = kernels.diagonal_transfer_numba(Wv, Wh, L)
    assert np.max(np.abs(a - b)) <= 1e-13 * np.max(np.abs(a))


@needs_numba
@pytest.mark.parametrize("n,L", [(2, 1), (2, 2), (2, 3), (3, 2)])
def test_configuration_sum_paths_agree(n, L):
    Wv, Wh = _random_weights(n, n + L)
    a = kernels.configuration_sum_numpy(Wv, Wh, L)
    b = kernels.configuration_sum_numba(Wv, Wh, L)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_configuration_sum_chunking():
    Wv, Wh = _random_weights(2, 5)
    assert abs(kernels.configuration_sum_numpy(Wv, Wh, 3, chunk=7)
               - kernels.configuration_sum_numpy(Wv, Wh, 3)) < 1e-12


def test_configuration_sum_l1():
    Wv, Wh = _random_weights(3, 9)
    # a single site couples to itself on both bonds
    ref = np.sum(np.diag(Wv) * np.diag(Wh))
    assert abs(kernels.configuration_sum_numpy(Wv, Wh, 1) - ref) < 1e-14


def test_env_flag_selects_numpy():
    code = ("import spinvertex.kernels as k; "
            "print(k.USE_NUMBA, k.diagonal_transfer is k.diagonal_transfer_numpy)")
    env = dict(os.environ, SPINVERTEX_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert out == ["False", "True"]
