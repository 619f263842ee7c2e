import os
import subprocess
import sys

import numpy as np
import pytest
from conftest import random_reduced

from adplab import _accel, kernels
from adplab import phi_engine as pe

numba_only = pytest.mark.skipif(not _accel.HAS_NUMBA, reason="numba not installed")


@numba_only
@pytest.mark.parametrize("n", [1, 3, 12, 13, 15])
def test_phi_sum_backends_agree(rng, n):
    rc = random_reduced(rng, n, -1.0, 1.0, signed=True)
    tm, tp = pe.term_tables(rc, 3.0)
    a = kernels.get_backend("numpy").phi_sum(tm, tp, 1 / 3)
    b = kernels.get_backend("numba").phi_sum(tm, tp, 1 / 3)
    assert a == pytest.approx(b, rel=1e-12)


@numba_only
@pytest.mark.parametrize("n", [2, 12, 14])
def test_grad_sums_backends_agree(rng, n):
    rc = random_reduced(rng, n, 0.0, 1.0)
    tm, tp = pe.term_tables(rc, 2.5)
    ta, pa, qa = kernels.get_backend("numpy").phi_grad_sums(tm, tp, 2.5)
    tb, pb, qb = kernels.get_backend("numba").phi_grad_sums(tm, tp, 2.5)
    assert ta == pytest.approx(tb, rel=1e-12)
    assert qa == pytest.approx(qb, rel=1e-12)
    np.testing.assert_allclose(pa, pb, rtol=1e-12)


@numba_only
def test_sampled_kernels_backends_agree(rng):
    rc = random_reduced(rng, 9, 0.0, 1.0)
    signs = (2 * rng.integers(0, 2, size=(300, 9)) - 1).astype(np.int8)
    tm, tp = pe.term_tables(rc, 3.0)
    np.testing.assert_allclose(kernels.get_backend("numpy").mc_terms(tm, tp, signs, 1 / 3),
                               kernels.get_backend("numba").mc_terms(tm, tp, signs, 1 / 3),
                               rtol=1e-13)
    a1, d1 = pe.paired_samples(rc, 3.0, signs, backend="numpy")
    a2, d2 = pe.paired_samples(rc, 3.0, signs, backend="numba")
    np.testing.assert_allclose(a1, a2, rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(d1, d2, rtol=1e-11, atol=1e-14)


@pytest.mark.parametrize("backend", ["numpy", pytest.param("numba", marks=numba_only)])
def test_sweeps_are_bit_reproducible(rng, backend):
    rc = random_reduced(rng, 16, 0.0, 1.0)
    first = pe.phi_gradient(rc, 3.0, backend=backend)
    second = pe.phi_gradient(rc, 3.0, backend=backend)
    assert first[0] == second[0]
    np.testing.assert_array_equal(first[1], second[1])


@numba_only
def test_thread_count_does_not_change_result(rng):
    import numba
    rc = random_reduced(rng, 16, 0.0, 1.0)
    before = numba.get_num_threads()
    try:
        _accel.set_threads(1)
        one = pe.phi_exact(rc, 3.0, backend="numba").value
        _accel.set_threads(numba.config.NUMBA_NUM_THREADS)
        many = pe.phi_exact(rc, 3.0, backend="numba").value
    finally:
        numba.set_num_threads(before)
    assert one == many


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.parametrize("flag, expected", [("1", "numpy"), ("", "numba" if _accel.HAS_NUMBA else "numpy")])
def test_env_flag_selects_backend(flag, expected):
    env = dict(os.environ, ADPLAB_DISABLE_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "from adplab import kernels; print(kernels.BACKEND_NAME)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected
