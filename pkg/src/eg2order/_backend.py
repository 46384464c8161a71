"""Pick the kernel implementation at import time.

The compiled extension runs a scalar loop, which beats numpy by an order of
magnitude on the short arrays produced by bisection and finite differences.
On long grids numpy's vectorized exp/log wins, so when the extension is
available calls are routed by array size.  Set ``EG2ORDER_PURE_PYTHON=1`` to
force the numpy fallback everywhere (the test-suite exercises both).
"""

import os

import numpy as np

from eg2order import _kernels_py

# arrays at least this long go to numpy even when the extension is built
VECTOR_THRESHOLD = 1024


class _SizeDispatch:
    """Kernel namespace that sends short arrays to ``small`` and long ones to ``large``."""

    def __init__(self, small, large, threshold=VECTOR_THRESHOLD):
        self.small, self.large, self.threshold = small, large, threshold

    def _pick(self, x):
        return self.small if np.size(x) < self.threshold else self.large

    def component_terms(self, theta, phi, alpha, x):
        return self._pick(x).component_terms(theta, phi, alpha, x)

    def system_terms(self, thetas, phis, alphas, x):
        return self._pick(x).system_terms(thetas, phis, alphas, x)


def available():
    """Names of the importable kernel backends."""
    names = ["python"]
    try:
        from eg2order import _kernels  # noqa: F401
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


def get(name):
    if name == "python":
        return _kernels_py
    if name == "cython":
        from eg2order import _kernels
        return _kernels
    if name == "auto":
        if "cython" in available():
            return _SizeDispatch(get("cython"), _kernels_py)
        return _kernels_py
    raise ValueError(f"unknown backend {name!r}")


if os.environ.get("EG2ORDER_PURE_PYTHON", "") not in ("", "0"):
    BACKEND = "python"
else:
    BACKEND = available()[0]
kernels = get("auto") if BACKEND == "cython" else _kernels_py
