"""Series and parallel systems of independent heterogeneous EG2 components.

A series system fails with its first component (lifetime ``X_{1:n}``), a
parallel system with its last (``X_{n:n}``).  Products over components are
accumulated in log space.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from eg2order._backend import kernels
from eg2order.core import ContractError, DomainError, EG2Params, _check_x

# relative tolerance for deciding that theta/phi are shared across components
_COMMON_RTOL = 1e-12


class SystemKind(enum.Enum):
    SERIES = "series"
    PARALLEL = "parallel"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"system kind must be 'series' or 'parallel', got {value!r}") from None


@dataclass(frozen=True)
class ComponentSet:
    """Ordered components of one system."""

    components: tuple

    def __post_init__(self):
        comps = tuple(c if isinstance(c, EG2Params) else EG2Params(*c) for c in self.components)
        if not comps:
            raise DomainError("a component set needs at least one component")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_arrays(cls, thetas, phis, alphas):
        thetas, phis, alphas = np.broadcast_arrays(
            np.asarray(thetas, float), np.asarray(phis, float), np.asarray(alphas, float))
        return cls(tuple(EG2Params(t, p, a) for t, p, a in
                         zip(np.atleast_1d(thetas), np.atleast_1d(phis), np.atleast_1d(alphas))))

    @classmethod
    def from_matrix(cls, matrix, phi):
        """Components from a 2 x n ``[alphas; thetas]`` matrix and a common phi."""
        return cls.from_arrays(matrix.thetas, phi, matrix.alphas)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    @property
    def thetas(self):
        return np.array([c.theta for c in self.components])

    @property
    def phis(self):
        return np.array([c.phi for c in self.components])

    @property
    def alphas(self):
        return np.array([c.alpha for c in self.components])

    def is_homogeneous(self):
        """True when every component shares theta and phi."""
        return (np.allclose(self.thetas, self.thetas[0], rtol=_COMMON_RTOL, atol=0)
                and np.allclose(self.phis, self.phis[0], rtol=_COMMON_RTOL, atol=0))

    def permuted(self, order: Sequence[int]):
        return ComponentSet(tuple(self.components[i] for i in order))


@dataclass(frozen=True)
class SystemGrid:
    """Log-space evaluation of both system types on a set of abscissae."""

    x: np.ndarray
    log_sf_series: np.ndarray
    log_cdf_parallel: np.ndarray
    log_hazard_sum: np.ndarray
    log_rhazard_sum: np.ndarray
    components: Optional["ComponentSet"] = None

    def _complement(self, log_p, which):
        # log(1 - exp(log_p)); once exp(log_p) rounds to 1 the complement is
        # the sum of the component complements to first order
        out = _log1mexp_neg(log_p)
        lost = -log_p < _LOST
        if self.components is not None and lost.any():
            terms = [kernels.component_terms(c.theta, c.phi, c.alpha, self.x[lost])[which]
                     for c in self.components]
            out[lost] = np.logaddexp.reduce(np.array(terms), axis=0)
        return out

    def log_sf(self, kind):
        if SystemKind.parse(kind) is SystemKind.SERIES:
            return self.log_sf_series
        return self._complement(self.log_cdf_parallel, 0)

    def log_cdf(self, kind):
        if SystemKind.parse(kind) is SystemKind.PARALLEL:
            return self.log_cdf_parallel
        return self._complement(self.log_sf_series, 1)

    def sf(self, kind):
        if SystemKind.parse(kind) is SystemKind.SERIES:
            return np.exp(self.log_sf_series)
        return -np.expm1(self.log_cdf_parallel)

    def cdf(self, kind):
        if SystemKind.parse(kind) is SystemKind.PARALLEL:
            return np.exp(self.log_cdf_parallel)
        return -np.expm1(self.log_sf_series)

    def log_pdf(self, kind):
        if SystemKind.parse(kind) is SystemKind.SERIES:
            return self.log_sf_series + self.log_hazard_sum
        return self.log_cdf_parallel + self.log_rhazard_sum

    def pdf(self, kind):
        return np.exp(self.log_pdf(kind))

    def log_hazard(self, kind):
        """Log failure rate of the system lifetime."""
        if SystemKind.parse(kind) is SystemKind.SERIES:
            return self.log_hazard_sum
        return self.log_pdf(kind) - self.log_sf(kind)

    def log_rhazard(self, kind):
        """Log reversed failure rate of the system lifetime."""
        if SystemKind.parse(kind) is SystemKind.PARALLEL:
            return self.log_rhazard_sum
        return self.log_pdf(kind) - self.log_cdf(kind)


# below this 1 - exp(t) has lost its relative precision
_LOST = 1e-290


def _log1mexp_neg(t):
    # log(1 - exp(t)) for t <= 0
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(t > -np.log(2.0), np.log(-np.expm1(t)), np.log1p(-np.exp(t)))


def evaluate(cs: ComponentSet, x) -> SystemGrid:
    arr = np.atleast_1d(_check_x(x)).astype(float)
    s, c, h, r = kernels.system_terms(cs.thetas, cs.phis, cs.alphas, arr)
    return SystemGrid(arr, s, c, h, r, cs)


def _scalar_or_array(values, x):
    return float(values[0]) if np.ndim(x) == 0 else values.reshape(np.shape(x))


def series_survival(cs: ComponentSet, x):
    """``prod_i (1 - exp(-theta_i x^-phi_i))^alpha_i``."""
    return _scalar_or_array(np.exp(evaluate(cs, x).log_sf_series), x)


def parallel_cdf(cs: ComponentSet, x):
    """``prod_i [1 - (1 - exp(-theta_i x^-phi_i))^alpha_i]``."""
    return _scalar_or_array(np.exp(evaluate(cs, x).log_cdf_parallel), x)


def system_survival(cs, kind, x):
    return _scalar_or_array(evaluate(cs, x).sf(kind), x)


def system_cdf(cs, kind, x):
    return _scalar_or_array(evaluate(cs, x).cdf(kind), x)


def system_pdf(cs: ComponentSet, kind, x):
    """Density of the series (minimum) or parallel (maximum) lifetime.

    Series: ``survival * sum(hazard_i)``; parallel: ``cdf * sum(rhazard_i)``.
    """
    return _scalar_or_array(evaluate(cs, x).pdf(kind), x)


def _require_homogeneous(cs):
    if not cs.is_homogeneous():
        raise ContractError("all components must share theta and phi")


# for 1 - u below this the weight gamma(alpha, u) uses its cubic expansion
_SERIES_EPS = 1e-4


def _weight_sum(alphas, e, log_u):
    """``sum_i gamma(alpha_i, u)`` with ``u = 1 - e``.

    Near ``u = 1`` the sum is ``n + delta`` with delta built from power sums of
    alpha, so two alpha-vectors with equal totals are compared through
    ``sum(alpha**2)`` alone and rounding cannot reverse their order.
    """
    n = len(alphas)
    s1 = float(np.sum(alphas))
    s2 = float(np.sum(alphas * alphas))
    near = e < _SERIES_EPS
    out = np.empty_like(e)
    en = e[near]
    c1 = -(s1 - n) / 2.0
    c2 = (s2 - 6.0 * s1 + 5.0 * n) / 12.0
    c3 = (s2 - 4.0 * s1 + 3.0 * n) / 8.0
    out[near] = n + en * (c1 + en * (c2 + en * c3))
    far = ~near
    if np.any(far):
        a = alphas[:, None]
        lu = log_u[far][None, :]
        ef = e[far][None, :]
        out[far] = np.sum(a * ef * np.exp((a - 1.0) * lu) / -np.expm1(a * lu), axis=0)
    return out


def homogeneous_rhazard(cs: ComponentSet, x):
    """Array form of :func:`parallel_reversed_hazard` (no scalar unwrapping)."""
    _require_homogeneous(cs)
    arr = np.atleast_1d(_check_x(x)).astype(float)
    theta, phi = cs.thetas[0], cs.phis[0]
    z = theta * np.exp(-phi * np.log(arr))
    e = np.exp(-z)
    with np.errstate(divide="ignore"):
        log_u = np.where(z < np.log(2.0), np.log(-np.expm1(-z)), np.log1p(-e))
    return (phi * z / arr) * _weight_sum(cs.alphas, e, log_u)


def parallel_reversed_hazard(cs: ComponentSet, x):
    """Reversed failure rate of a parallel system with common theta and phi.

    ``theta phi x^(-phi-1) e^(-theta x^-phi) * sum_i varphi(alpha_i, u)``,
    which equals the sum of the component reversed hazards.
    """
    return _scalar_or_array(homogeneous_rhazard(cs, x), x)


def series_pdf_homogeneous(cs: ComponentSet, x):
    """Closed-form density of the series lifetime for common theta and phi.

    Depends on the alphas only through their total ``s``:
    ``theta phi x^(-phi-1) e^(-theta x^-phi) s u^(s-1)``.
    """
    _require_homogeneous(cs)
    arr = np.atleast_1d(_check_x(x)).astype(float)
    theta, phi, s = cs.thetas[0], cs.phis[0], float(np.sum(cs.alphas))
    z = theta * np.exp(-phi * np.log(arr))
    with np.errstate(divide="ignore"):
        log_u = np.where(z < np.log(2.0), np.log(-np.expm1(-z)), np.log1p(-np.exp(-z)))
    logf = np.log(s * phi * z / arr) - z + (s - 1.0) * log_u
    return _scalar_or_array(np.exp(logf), x)


def homogeneous_series_log_ratio(cs_a: ComponentSet, cs_b: ComponentSet, x):
    """``log f_A - log f_B`` for two series systems sharing one (theta, phi).

    The common factor cancels exactly, leaving
    ``log(s_A/s_B) + (s_A - s_B) log u``.
    """
    _require_homogeneous(cs_a)
    _require_homogeneous(cs_b)
    if not (np.isclose(cs_a.thetas[0], cs_b.thetas[0], rtol=_COMMON_RTOL, atol=0)
            and np.isclose(cs_a.phis[0], cs_b.phis[0], rtol=_COMMON_RTOL, atol=0)):
        raise ContractError("both systems must share theta and phi")
    arr = np.atleast_1d(_check_x(x)).astype(float)
    theta, phi = cs_a.thetas[0], cs_a.phis[0]
    sa, sb = float(np.sum(cs_a.alphas)), float(np.sum(cs_b.alphas))
    z = theta * np.exp(-phi * np.log(arr))
    with np.errstate(divide="ignore"):
        log_u = np.where(z < np.log(2.0), np.log(-np.expm1(-z)), np.log1p(-np.exp(-z)))
    return np.log(sa / sb) + (sa - sb) * log_u
