"""Compound loss distributions by direct numerical inversion of the characteristic function."""

from .models import (
    GPD,
    CompoundModel,
    DomainError,
    Lognormal,
    NegBinomial,
    Poisson,
    SingleLoss,
)

__all__ = [
    "GPD",
    "CompoundModel",
    "DomainError",
    "Lognormal",
    "NegBinomial",
    "Poisson",
    "SingleLoss",
]
