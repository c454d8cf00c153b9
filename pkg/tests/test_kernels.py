import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgbeam import _kernels


def _random_quads(rng, n):
    """Convex quads: jittered unit squares scaled to random sizes."""
    base = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    jitter = rng.uniform(-0.2, 0.2, size=(n, 4, 2))
    scale = rng.uniform(0.5, 20.0, size=(n, 1, 2))
    return (base + jitter) * scale


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), nu=st.floats(0.0, 0.45))
def test_backends_agree(seed, nu):
    rng = np.random.default_rng(seed)
    xy = _random_quads(rng, 30)
    E = rng.uniform(7e4, 3.8e5, 30)
    ue = rng.standard_normal((30, 8))
    k_np = _kernels.stiffness_numpy(xy, E, nu, 50.0)
    k_nb = _kernels.stiffness_numba(xy, E, nu, 50.0)
    np.testing.assert_allclose(k_nb, k_np, rtol=1e-12, atol=1e-12 * np.abs(k_np).max())
    s_np = _kernels.centroid_stress_numpy(xy, E, nu, ue)
    s_nb = _kernels.centroid_stress_numba(xy, E, nu, ue)
    np.testing.assert_allclose(s_nb, s_np, rtol=1e-12, atol=1e-12 * np.abs(s_np).max())


def test_stiffness_has_rigid_body_nullspace():
    rng = np.random.default_rng(0)
    xy = _random_quads(rng, 5)
    K = _kernels.element_stiffness_batch(xy, np.full(5, 1e5), 0.3, 1.0)
    for k, q in zip(K, xy):
        assert np.allclose(k, k.T, rtol=0, atol=1e-10 * np.abs(k).max())
        ev = np.linalg.eigvalsh(k)
        assert np.sum(ev < 1e-10 * ev.max()) == 3
        rot = np.column_stack([-q[:, 1], q[:, 0]]).ravel()
        assert np.abs(k @ rot).max() <= 1e-9 * np.abs(k).max() * np.abs(rot).max()


def test_constant_strain_gives_exact_stress():
    xy = _random_quads(np.random.default_rng(1), 4)
    eps = np.array([1e-3, -2e-4, 5e-4])  # (e_xx, e_yy, gamma_xy)
    u = np.stack([eps[0] * xy[..., 0] + 0.5 * eps[2] * xy[..., 1], eps[1] * xy[..., 1] + 0.5 * eps[2] * xy[..., 0]], -1)
    s = _kernels.centroid_stress_batch(xy, np.full(4, 2e5), 0.25, u.reshape(4, 8))
    expected = 2e5 * _kernels.plane_stress_matrix(0.25) @ eps
    np.testing.assert_allclose(s, np.tile(expected, (4, 1)), rtol=1e-12)


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("0", "numba" if _kernels.numba_available else "numpy")])
def test_env_flag_selects_backend(flag, expected):
    env = dict(os.environ, FGBEAM_NO_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from fgbeam import _kernels; print(_kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == expected
