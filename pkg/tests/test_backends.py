"""Compiled and pure-Python kernels must agree to roundoff; the package
works with either selected at import."""

import math

import pytest

from conelab import _pykernels

try:
    from conelab import _kernels
except ImportError:
    _kernels = None

needs_compiled = pytest.mark.skipif(_kernels is None,
                                    reason="compiled kernels not built")


@needs_compiled
def test_series_kernel_agreement():
    cases = [
        (3.0, -0.5, 2.0, 0.3),
        (999.5, -0.5, 500.0, 0.52),
        (1.0, 8.0, 3.5, 0.45),
        (-2.0, 1.3, 0.7, -0.4),
    ]
    for (a, b, c, s) in cases:
        vc, ec, tc, okc = _kernels.hyp2f1_series(a, b, c, s, 1e-15, 1e-280, 40000)
        vp, ep, tp, okp = _pykernels.hyp2f1_series(a, b, c, s, 1e-15, 1e-280, 40000)
        assert okc and okp
        assert tc == tp
        assert vc == vp  # statement-identical summation


@needs_compiled
def test_shoot_kernel_agreement():
    args = (1.0, -5.6e-6, 1e-6, 0.517, 7.0, 1.0, -5.7, 0.0, 0.0,
            1e-11, 1e-300, 0.01, 1_000_000)
    uc, vc, zc, okc = _kernels.robin_shoot(*args)
    up, vp, zp, okp = _pykernels.robin_shoot(*args)
    assert okc and okp and zc == zp
    assert math.isclose(uc, up, rel_tol=1e-12)
    assert math.isclose(vc, vp, rel_tol=1e-12)


def test_backend_name_exposed():
    import conelab
    assert conelab.BACKEND_NAME in ("compiled", "python")


def test_pure_fallback_env(tmp_path):
    # a fresh interpreter with CONELAB_PURE=1 must select the fallback
    import os
    import subprocess
    import sys
    env = dict(os.environ, CONELAB_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "import conelab; print(conelab.BACKEND_NAME)"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"
