"""Vectorized numpy implementation of the grid kernels.

Used when the compiled ``_kernels`` extension is unavailable, or when
``EG2ORDER_PURE_PYTHON=1`` is set.  Both modules expose the same two
functions with identical semantics; see ``_kernels.pyx``.
"""

import numpy as np

_LN2 = np.log(2.0)
# exp(-z) underflows a little past 745; switch to log-space well before that.
_Z_LOGSPACE = 700.0
# below this, 1 - u is small enough for the cubic expansion of the weight.
_SERIES_EPS = 1e-4


# below this, log(1 - exp(-z)) = log z - z/2 to double precision; also keeps
# log_u finite once z itself underflows
_Z_TINY = 1e-8


def _log1mexp(t):
    """log(1 - exp(-t)) for t > 0, accurate at both ends."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    small = t < _LN2
    with np.errstate(divide="ignore"):
        out[small] = np.log(-np.expm1(-t[small]))
        out[~small] = np.log1p(-np.exp(-t[~small]))
    return out


def _component(theta, phi, alpha, x):
    logx = np.log(x)
    log_z = np.log(theta) - phi * logx
    z = np.exp(log_z)
    e = np.exp(-z)
    log_u = _log1mexp(z)
    tiny = z < _Z_TINY
    log_u[tiny] = log_z[tiny] - 0.5 * z[tiny]
    log_sf = alpha * log_u
    log_alpha = np.log(alpha)

    deep = z > _Z_LOGSPACE
    log_cdf = np.empty_like(z)
    # log_sf == 0 can only happen in the deep tail, which takes the other branch
    with np.errstate(divide="ignore"):
        log_cdf[~deep] = _log1mexp(-log_sf[~deep])
    log_cdf[deep] = log_alpha - z[deep]

    log_scale = np.log(phi) + log_z - logx
    # log(expm1(z)) == z + log_u
    log_hazard = log_alpha + log_scale - z - log_u

    log_w = np.empty_like(z)
    near = e < _SERIES_EPS
    en = e[near]
    a = alpha
    delta = en * (-(a - 1.0) / 2.0 + en * ((a * a - 6.0 * a + 5.0) / 12.0
                                           + en * (a * a - 4.0 * a + 3.0) / 8.0))
    log_w[near] = np.log1p(delta)
    far = ~near
    log_w[far] = (log_alpha - z[far] + (alpha - 1.0) * log_u[far]
                  - log_cdf[far])
    log_rhazard = log_scale + log_w
    return log_sf, log_cdf, log_hazard, log_rhazard


def component_terms(theta, phi, alpha, x):
    """Per-point log-space terms of one component.

    Returns ``(log_sf, log_cdf, log_hazard, log_rhazard)`` as float arrays
    shaped like ``x``.
    """
    x = np.ascontiguousarray(x, dtype=float)
    return _component(float(theta), float(phi), float(alpha), x)


def _logsumexp(stack):
    m = stack.max(axis=0)
    safe = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        return safe + np.log(np.exp(stack - safe).sum(axis=0))


def system_terms(thetas, phis, alphas, x):
    """Series/parallel aggregates over components.

    Returns ``(log_sf_series, log_cdf_parallel, log_hazard_sum,
    log_rhazard_sum)`` where the last two are log of the summed component
    hazards and reversed hazards.
    """
    x = np.ascontiguousarray(x, dtype=float)
    n = len(thetas)
    log_sf = np.zeros_like(x)
    log_cdf = np.zeros_like(x)
    haz = np.empty((n,) + x.shape)
    rhaz = np.empty((n,) + x.shape)
    for k in range(n):
        s, c, h, r = _component(float(thetas[k]), float(phis[k]), float(alphas[k]), x)
        log_sf += s
        log_cdf += c
        haz[k] = h
        rhaz[k] = r
    return log_sf, log_cdf, _logsumexp(haz), _logsumexp(rhaz)
