"""
Measurements on walk states and time-series analysis.

Position observables (profile, survival, variance) come from
``P(x, t) = |a_x|² + |b_x|²``. Coin-position entanglement is the von Neumann
entropy, in bits, of the 2×2 coin density matrix left after tracing out
position. Decay exponents are read off block-averaged log-log fits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .core import WalkState, trajectory

__all__ = [
    "FitError",
    "ProbabilityProfile",
    "TimeSeries",
    "CoinDensityMatrix",
    "DecayFit",
    "probability_profile",
    "survival",
    "variance",
    "coin_density",
    "entanglement_entropy",
    "asymptotic_entropy",
    "fit_decay_exponent",
    "record_series",
    "DEFAULT_SMOOTHING",
    "MIN_FIT_BLOCKS",
]

DEFAULT_SMOOTHING = 32
MIN_FIT_BLOCKS = 10
_MATRIX_TOL = 1e-12


class FitError(ValueError):
    """A power-law fit could not be carried out on the requested window."""


@dataclass(frozen=True, eq=False)
class ProbabilityProfile:
    """Position distribution ``p(x)`` of a state at step ``t``."""

    t: int
    x: NDArray[np.int64]
    p: NDArray[np.float64]

    def at(self, x: int) -> float:
        i = x - int(self.x[0])
        return float(self.p[i]) if 0 <= i < self.p.size else 0.0


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Samples ``(t, value)`` of one observable; ``t`` strictly increasing."""

    t: NDArray[np.int64]
    values: NDArray[np.float64]
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.t, dtype=np.int64)
        v = np.asarray(self.values, dtype=np.float64)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValueError("t and values must be 1-D arrays of equal length")
        if t.size and (t[0] < 0 or np.any(np.diff(t) <= 0)):
            raise ValueError("sample times must be non-negative and strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("time series values must be finite")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return int(self.t.size)

    def in_window(self, t_min: int, t_max: int) -> "TimeSeries":
        keep = (self.t >= t_min) & (self.t <= t_max)
        return TimeSeries(self.t[keep], self.values[keep], self.label)


@dataclass(frozen=True, eq=False)
class CoinDensityMatrix:
    """Reduced coin state ``rho`` in the basis (|R>, |L>)."""

    rho: NDArray[np.complex128]

    def __post_init__(self):
        rho = np.array(self.rho, dtype=np.complex128)
        if rho.shape != (2, 2):
            raise ValueError(f"coin density matrix must be 2x2 (got shape {rho.shape})")
        if np.max(np.abs(rho - rho.conj().T)) > _MATRIX_TOL:
            raise ValueError("coin density matrix is not Hermitian")
        tr = rho[0, 0].real + rho[1, 1].real
        if abs(tr - 1.0) > _MATRIX_TOL:
            raise ValueError(f"coin density matrix has trace {tr!r}, expected 1")
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)

    def eigenvalues(self) -> tuple[float, float]:
        """Descending eigenvalues, clamped to [0, 1]."""
        r11 = self.rho[0, 0].real
        r22 = self.rho[1, 1].real
        r12 = self.rho[0, 1]
        tr = r11 + r22
        gap = math.sqrt((r11 - r22) ** 2 + 4.0 * (r12.real**2 + r12.imag**2))
        hi = min(max(0.5 * (tr + gap), 0.0), 1.0)
        lo = min(max(0.5 * (tr - gap), 0.0), 1.0)
        return hi, lo


@dataclass(frozen=True)
class DecayFit:
    """Result of a log-log least-squares fit ``ln y = exponent·ln t + intercept``."""

    exponent: float
    intercept: float
    window: tuple[int, int]
    smoothing_width: int
    rms_residual: float
    n_blocks: int

    def __post_init__(self):
        if not self.window[0] < self.window[1]:
            raise ValueError(f"fit window must satisfy t_min < t_max (got {self.window})")
        if self.smoothing_width < 1:
            raise ValueError("smoothing_width must be >= 1")
        if self.rms_residual < 0:
            raise ValueError("rms_residual must be >= 0")


def _site_probs(state: WalkState) -> NDArray[np.float64]:
    a, b = state.a, state.b
    return a.real**2 + a.imag**2 + b.real**2 + b.imag**2


def probability_profile(state: WalkState) -> ProbabilityProfile:
    """``p(x) = |a_x|² + |b_x|²`` over the stored window of ``state``."""
    return ProbabilityProfile(state.t, state.positions, _site_probs(state))


def survival(state: WalkState, s: int) -> float:
    """Probability of finding the walker in ``[-s, s]``."""
    if s < 0:
        raise ValueError(f"survival half-width s must be non-negative (got {s})")
    lo = max(-s, state.x_min) - state.x_min
    hi = min(s, state.x_max) - state.x_min
    if lo > hi:
        return 0.0
    p = _site_probs(state)[lo : hi + 1]
    return float(min(max(p.sum(), 0.0), 1.0))


def variance(state: WalkState) -> float:
    """Position variance ``Σ x² p - (Σ x p)²``."""
    p = _site_probs(state)
    x = state.positions.astype(np.float64)
    mean = float(np.dot(x, p))
    return float(np.dot(x * x, p) - mean * mean)


def coin_density(state: WalkState) -> CoinDensityMatrix:
    """Coin state after tracing out position."""
    a, b = state.a, state.b
    r11 = float(np.vdot(a, a).real)
    r22 = float(np.vdot(b, b).real)
    r12 = complex(np.vdot(b, a))  # Σ a_x b_x*
    return CoinDensityMatrix(np.array([[r11, r12], [r12.conjugate(), r22]]))


def entanglement_entropy(rho: CoinDensityMatrix) -> float:
    """
    Von Neumann entropy of the coin in bits, ``-Σ λ log2 λ`` with ``0 log 0 = 0``.

    Accepts a ``CoinDensityMatrix`` or a raw 2×2 array (validated on the way in).
    """
    if not isinstance(rho, CoinDensityMatrix):
        rho = CoinDensityMatrix(rho)
    total = 0.0
    for lam in rho.eigenvalues():
        if lam > 0.0:
            total -= lam * math.log2(lam)
    return min(max(total, 0.0), 1.0)


def asymptotic_entropy(series: TimeSeries, window: tuple[int, int]) -> float:
    """
    Long-time entanglement estimate: mean of the samples with ``t`` in ``window``.

    Windows starting at ``t >= 100`` are the intended use; shorter transients
    bias the mean.
    """
    t_min, t_max = window
    sel = series.in_window(t_min, t_max)
    if len(sel) == 0:
        raise ValueError(f"no samples in window [{t_min}, {t_max}]")
    return float(sel.values.mean())


def _block_means(t: NDArray, y: NDArray, width: int) -> tuple[NDArray, NDArray]:
    n = t.size // width
    used = n * width
    return (
        t[:used].astype(np.float64).reshape(n, width).mean(axis=1),
        y[:used].reshape(n, width).mean(axis=1),
    )


def fit_decay_exponent(
    series: TimeSeries,
    window: tuple[int, int],
    smoothing_width: int = DEFAULT_SMOOTHING,
) -> DecayFit:
    """
    Fit ``y ∝ t^exponent`` to a time series.

    The samples inside ``window`` are cut into consecutive blocks of
    ``smoothing_width`` samples (a trailing partial block is dropped); block
    means of ``t`` and ``y`` are then fitted by ordinary least squares in
    log-log space.

    Raises
    ------
    FitError
        If the window yields fewer than 10 blocks or any block mean is not
        strictly positive.
    """
    t_min, t_max = int(window[0]), int(window[1])
    if t_min >= t_max:
        raise FitError(f"fit window must satisfy t_min < t_max (got [{t_min}, {t_max}])")
    if t_min < 1:
        raise FitError(f"fit window must start at t >= 1 (got {t_min})")
    if smoothing_width < 1:
        raise FitError(f"smoothing width must be >= 1 (got {smoothing_width})")

    sel = series.in_window(t_min, t_max)
    tb, yb = _block_means(sel.t, sel.values, smoothing_width)
    if tb.size < MIN_FIT_BLOCKS:
        raise FitError(
            f"window [{t_min}, {t_max}] gives {tb.size} blocks of {smoothing_width} samples;"
            f" at least {MIN_FIT_BLOCKS} are needed"
        )
    if np.any(yb <= 0):
        raise FitError("smoothed series has non-positive values; cannot take logarithms")

    lx, ly = np.log(tb), np.log(yb)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return DecayFit(
        exponent=float(slope),
        intercept=float(intercept),
        window=(t_min, t_max),
        smoothing_width=int(smoothing_width),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        n_blocks=int(tb.size),
    )



def record_series(
    state: WalkState,
    steps: int,
    s: int = 0,
    every: int = 1,
    observables: Sequence[str] = ("survival", "entropy", "variance"),
) -> dict[str, TimeSeries]:
    """
    Evolve ``state`` for ``steps`` steps and sample observables along the way.

    ``observables`` picks from ``"survival"`` (window ``[-s, s]``), ``"entropy"``,
    ``"variance"`` and ``"norm"``. Samples are taken at the starting time, then
    every ``every`` steps, and always at the final step.
    """
    funcs = {
        "survival": lambda st: survival(st, s),
        "entropy": lambda st: entanglement_entropy(coin_density(st)),
        "variance": variance,
        "norm": WalkState.norm,
    }
    unknown = set(observables) - funcs.keys()
    if unknown:
        raise ValueError(f"unknown observables: {sorted(unknown)}")
    times: list[int] = []
    samples: dict[str, list[float]] = {name: [] for name in observables}
    for snap in trajectory(state, steps, every):
        times.append(snap.t)
        for name in observables:
            samples[name].append(funcs[name](snap))
    return {name: TimeSeries(np.array(times), np.array(vals), name) for name, vals in samples.items()}
