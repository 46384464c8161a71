"""Exponentiated Gumbel type-II lifetime distribution and its kernels.

The distribution has support ``x > 0`` and cdf

    F(x) = 1 - (1 - exp(-theta * x**-phi)) ** alpha

with scale ``theta`` and shape parameters ``phi`` (inner) and ``alpha``
(outer).  All evaluations go through log-space kernels so that the tails
neither underflow nor lose relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from eg2order._backend import kernels


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class ContractError(ValueError):
    """A structural precondition (e.g. common parameters) does not hold."""


@dataclass(frozen=True)
class EG2Params:
    """Parameters ``(theta, phi, alpha)`` of one component."""

    theta: float
    phi: float
    alpha: float

    def __post_init__(self):
        for name in ("theta", "phi", "alpha"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float, np.floating, np.integer)):
                raise DomainError(f"{name} must be a real number, got {v!r}")
            if not math.isfinite(v) or v <= 0:
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")
            object.__setattr__(self, name, float(v))

    def as_tuple(self):
        return (self.theta, self.phi, self.alpha)


def _check_x(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("x must be finite and > 0")
    return arr


def _ret(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _terms(p, x):
    arr = _check_x(x)
    return arr, kernels.component_terms(p.theta, p.phi, p.alpha, np.atleast_1d(arr))


def cdf(p: EG2Params, x):
    """Distribution function ``1 - (1 - exp(-theta x^-phi))^alpha``."""
    arr, (log_sf, log_cdf, _, _) = _terms(p, x)
    out = np.where(log_sf < 0, -np.expm1(log_sf), np.exp(log_cdf))
    return _ret(out.reshape(arr.shape), x)


def survival(p: EG2Params, x):
    """Reliability function, evaluated from its own closed form."""
    arr, (log_sf, _, _, _) = _terms(p, x)
    return _ret(np.exp(log_sf).reshape(arr.shape), x)


def log_pdf(p: EG2Params, x):
    arr, (log_sf, _, log_h, _) = _terms(p, x)
    return _ret((log_sf + log_h).reshape(arr.shape), x)


def pdf(p: EG2Params, x):
    """Density ``alpha theta phi x^(-phi-1) e^(-theta x^-phi) u^(alpha-1)``
    with ``u = 1 - e^(-theta x^-phi)``."""
    return _ret(np.exp(np.asarray(log_pdf(p, x))), x)


def hazard(p: EG2Params, x):
    """Failure rate ``pdf / survival``.

    Raises OverflowError where the survival function underflows to zero.
    """
    arr, (log_sf, _, log_h, _) = _terms(p, x)
    if np.any(np.exp(log_sf) == 0.0):
        raise OverflowError("survival underflows to 0; hazard is not representable")
    return _ret(np.exp(log_h).reshape(arr.shape), x)


def reversed_hazard(p: EG2Params, x):
    """Reversed failure rate ``pdf / cdf``.

    Raises OverflowError where the cdf underflows to zero (x near 0).
    """
    arr, (_, log_cdf, _, log_r) = _terms(p, x)
    if np.any(np.exp(log_cdf) == 0.0):
        raise OverflowError("cdf underflows to 0; reversed hazard is not representable")
    return _ret(np.exp(log_r).reshape(arr.shape), x)


# -- kernels ----------------------------------------------------------------

# below this distance from u = 1 the kernels switch to their two-term expansions
_NEAR_ONE = 1e-8
VARPHI_CAP = 1e15


def _kernel_args(alpha, u):
    a = np.asarray(alpha, dtype=float)
    v = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise DomainError("alpha must be finite and > 0")
    if not np.all(np.isfinite(v)) or np.any(v <= 0) or np.any(v >= 1):
        raise DomainError("u must lie strictly inside (0, 1)")
    a, v = np.broadcast_arrays(a, v)
    return a, v, np.ndim(alpha) == 0 and np.ndim(u) == 0


def eta_kernel(alpha, u):
    """``u^alpha log(u) / (1 - u^alpha)``; negative, tends to ``-1/alpha`` as u -> 1."""
    a, v, scalar = _kernel_args(alpha, u)
    eps = 1.0 - v
    log_u = np.log(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(a * log_u) * log_u / -np.expm1(a * log_u)
    near = eps < _NEAR_ONE
    out = np.where(near, -1.0 / a + eps / 2.0, out)
    return float(out) if scalar else out


def gamma_kernel(alpha, u):
    """``alpha (1-u) u^(alpha-1) / (1 - u^alpha)``; identically 1 at alpha = 1."""
    a, v, scalar = _kernel_args(alpha, u)
    eps = 1.0 - v
    log_u = np.log(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = a * eps * np.exp((a - 1.0) * log_u) / -np.expm1(a * log_u)
    out = np.where(eps < _NEAR_ONE, 1.0 - (a - 1.0) * eps / 2.0, out)
    return float(out) if scalar else out


def varphi_kernel(alpha, u, cap=VARPHI_CAP):
    """``alpha u^(alpha-1) / (1 - u^alpha)``.

    Diverges as u -> 1; values above ``cap`` raise OverflowError.
    """
    a, v, scalar = _kernel_args(alpha, u)
    eps = 1.0 - v
    log_u = np.log(v)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = a * np.exp((a - 1.0) * log_u) / -np.expm1(a * log_u)
        out = np.where(eps < _NEAR_ONE, (1.0 - (a - 1.0) * eps / 2.0) / eps, out)
    if np.any(~np.isfinite(out)) or np.any(out > cap):
        raise OverflowError(f"varphi kernel exceeds cap {cap:g}")
    return float(out) if scalar else out
