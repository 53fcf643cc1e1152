"""Hadamard quantum walk on the line with non-local initial conditions."""

from .analytic import (
    AnalyticInitial,
    analytic_prob,
    analytic_prob_pair,
    analytic_survival,
    asymptotic_survival_exponent,
    bessel_j,
    bessel_j_orders,
)
from .core import (
    Custom,
    Localized,
    NormalizationError,
    SiteAmplitudes,
    SymmetricPair,
    WalkState,
    evolve,
    hadamard,
    make_initial,
    step,
)
from .observables import (
    TimeSeries,
    asymptotic_entropy,
    coin_density,
    entanglement_entropy,
    fit_decay_exponent,
    probability_profile,
    record_series,
    survival,
    variance,
)

__version__ = "0.1.0"
