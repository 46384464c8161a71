"""Exponentiated Gumbel type-II components in series and parallel systems:
distribution functions, majorization tools and stochastic-order checks."""

__version__ = "0.1.0"

from eg2order._backend import BACKEND  # noqa: E402
from eg2order.core import (  # noqa: E402
    ContractError,
    DomainError,
    EG2Params,
    cdf,
    eta_kernel,
    gamma_kernel,
    hazard,
    pdf,
    reversed_hazard,
    survival,
    varphi_kernel,
)
from eg2order.systems import ComponentSet, SystemKind  # noqa: E402

__all__ = [
    "BACKEND", "ComponentSet", "ContractError", "DomainError", "EG2Params", "SystemKind",
    "cdf", "eta_kernel", "gamma_kernel", "hazard", "pdf", "reversed_hazard", "survival",
    "varphi_kernel",
]
