"""
Bessel-function expressions for the long-time Hadamard walk distribution.

All probabilities are evaluated at the scaled time ``tau = t / sqrt(2)``.
For an initial state with amplitudes ``a_y(0), b_y(0)`` the distribution is

    P_x(t) = Σ_{y,y'} (-1)^{y+y'} [a_y a_{y'}* + b_y b_{y'}*] J_{x-y}(tau) J_{x-y'}(tau)

and for the symmetric pair ``|-k> ± |k>`` it collapses to
``½ [J_{x+k}(tau) ± J_{x-k}(tau)]²``.

Integer-order Bessel functions are computed here by Miller's downward
recurrence normalised with ``J_0 + 2 Σ_{m≥1} J_{2m} = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .core import Custom, InitialCondition, initial_sites

__all__ = [
    "BesselArgument",
    "AnalyticInitial",
    "bessel_j",
    "bessel_j_orders",
    "bessel_j_table",
    "analytic_prob",
    "analytic_profile",
    "analytic_prob_pair",
    "pair_closed_form_k1",
    "analytic_survival",
    "asymptotic_survival_exponent",
    "MAX_ORDER",
    "MAX_ENTRIES",
]

MAX_ORDER = 10**6
MAX_ENTRIES = 10**4

_BIG = 1e250
_SMALL = 1e-250


@dataclass(frozen=True)
class BesselArgument:
    """Scaled time ``tau = t/√2``."""

    tau: float

    def __post_init__(self):
        if not math.isfinite(self.tau) or self.tau < 0:
            raise ValueError(f"tau must be finite and non-negative (got {self.tau})")

    @classmethod
    def from_step(cls, t: int) -> "BesselArgument":
        return cls(t / math.sqrt(2.0))


@dataclass(frozen=True)
class AnalyticInitial:
    """Initial amplitudes ``(y, a_y(0), b_y(0))`` for the Bessel-sum distribution."""

    entries: tuple[tuple[int, complex, complex], ...]

    def __init__(self, entries: Sequence[tuple[int, complex, complex]]):
        if len(entries) > MAX_ENTRIES:
            raise ValueError(
                f"{len(entries)} initial sites exceeds the supported maximum of {MAX_ENTRIES}"
            )
        # reuse the simulator's validation so both routes accept the same inputs
        sites = initial_sites(Custom(entries))
        object.__setattr__(self, "entries", tuple(sites))

    @classmethod
    def from_condition(cls, cond: InitialCondition) -> "AnalyticInitial":
        return cls(initial_sites(cond))


def _start_order(n_max: int, tau_max: float) -> int:
    reach = max(n_max, math.ceil(tau_max))
    m = reach + math.ceil(10.0 * math.sqrt(reach)) + 20
    return m + (m % 2)


def _check_tau(tau: float) -> None:
    if not math.isfinite(tau):
        raise ValueError(f"tau must be finite (got {tau})")
    if tau < 0:
        raise ValueError(f"Bessel argument tau must be non-negative (got {tau})")


def bessel_j(n: int, tau: float) -> float:
    """
    Integer-order Bessel function of the first kind ``J_n(tau)``.

    Parameters
    ----------
    n : int
        Order, ``|n| <= 10**6``. Negative orders use ``J_{-n} = (-1)^n J_n``.
    tau : float
        Non-negative argument.

    Raises
    ------
    ValueError
        For negative or non-finite ``tau`` or ``|n|`` beyond ``10**6``.
    """
    n = int(n)
    tau = float(tau)
    _check_tau(tau)
    m = abs(n)
    if m > MAX_ORDER:
        raise ValueError(f"|n| must be <= {MAX_ORDER} (got {n})")
    sign = -1.0 if (n < 0 and m % 2) else 1.0
    if tau == 0.0:
        return 1.0 if m == 0 else 0.0

    # scalar Miller loop; only J_m is kept
    start = _start_order(m, tau)
    two_over_tau = 2.0 / tau
    j_next, j_cur = 0.0, 1e-30
    norm = 0.0
    kept = 0.0
    for order in range(start, 0, -1):
        if order == m:
            kept = j_cur
        if order % 2 == 0:
            norm += 2.0 * j_cur
        j_prev = order * two_over_tau * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > _BIG:
            j_cur *= _SMALL
            j_next *= _SMALL
            norm *= _SMALL
            kept *= _SMALL
    # j_cur now holds the unnormalised J_0
    if m == 0:
        kept = j_cur
    norm += j_cur
    return sign * kept / norm


def bessel_j_table(n_max: int, taus: ArrayLike) -> NDArray[np.float64]:
    """
    ``J_n(tau)`` for ``n = 0..n_max`` and every ``tau`` in ``taus``.

    One downward pass serves every order and every argument. Returns an array
    of shape ``(len(taus), n_max + 1)``.
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=np.float64))
    if taus.ndim != 1:
        raise ValueError("taus must be one-dimensional")
    if not np.all(np.isfinite(taus)):
        raise ValueError("tau must be finite")
    if np.any(taus < 0):
        raise ValueError(f"Bessel argument tau must be non-negative (got {taus.min()})")
    n_max = int(n_max)
    if n_max < 0 or n_max > MAX_ORDER:
        raise ValueError(f"n_max must be in [0, {MAX_ORDER}] (got {n_max})")

    out = np.zeros((taus.size, n_max + 1))
    zero = taus == 0.0
    out[zero, 0] = 1.0
    live = ~zero
    if not live.any():
        return out

    tau = taus[live]
    start = _start_order(n_max, float(tau.max()))
    two_over_tau = 2.0 / tau
    cols = tau.size
    j_next = np.zeros(cols)
    j_cur = np.full(cols, 1e-30)
    norm = np.zeros(cols)
    raw = np.zeros((n_max + 1, cols))
    scale_at = np.zeros((n_max + 1, cols), dtype=np.int64)
    rescales = np.zeros(cols, dtype=np.int64)

    for order in range(start, -1, -1):
        if order <= n_max:
            raw[order] = j_cur
            scale_at[order] = rescales
        if order % 2 == 0:
            norm += j_cur if order == 0 else 2.0 * j_cur
        if order == 0:
            break
        j_prev = order * two_over_tau * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        big = np.abs(j_cur) > _BIG
        if big.any():
            j_cur[big] *= _SMALL
            j_next[big] *= _SMALL
            norm[big] *= _SMALL
            rescales[big] += 1

    lag = rescales[None, :] - scale_at
    with np.errstate(under="ignore"):
        factor = np.power(_SMALL, lag.astype(np.float64))
        out[live] = (raw * factor / norm[None, :]).T
    return out


def bessel_j_orders(n_max: int, tau: float) -> NDArray[np.float64]:
    """``[J_0(tau), ..., J_{n_max}(tau)]`` from a single recurrence pass."""
    _check_tau(float(tau))
    return bessel_j_table(n_max, [tau])[0]


def _signed_lookup(table: NDArray, orders: NDArray) -> NDArray:
    """Index a non-negative-order table with arbitrary integer orders."""
    mag = np.abs(orders)
    vals = table[..., mag]
    odd_neg = (orders < 0) & (mag % 2 == 1)
    return np.where(odd_neg, -vals, vals)


def _require_step(t: int) -> None:
    if t < 1:
        raise ValueError(f"analytic expressions require t >= 1 (got {t})")


def analytic_profile(xs: ArrayLike, t: int, init: AnalyticInitial) -> NDArray[np.float64]:
    """
    Bessel-sum distribution ``P_x(t)`` at every position in ``xs``.

    The double sum over ``y, y'`` has Hermitian coefficients
    ``a_y a_{y'}* + b_y b_{y'}*``, so it equals ``|A_x|² + |B_x|²`` with
    ``A_x = Σ_y (-1)^y a_y J_{x-y}(tau)`` (same for ``B``). That factored
    form is evaluated here; it is real by construction and costs O(#sites).
    """
    _require_step(t)
    xs = np.atleast_1d(np.asarray(xs, dtype=np.int64))
    ys = np.array([y for y, _, _ in init.entries], dtype=np.int64)
    a0 = np.array([a for _, a, _ in init.entries], dtype=np.complex128)
    b0 = np.array([b for _, _, b in init.entries], dtype=np.complex128)
    parity = np.where(ys % 2 == 0, 1.0, -1.0)

    orders = xs[:, None] - ys[None, :]
    n_max = int(np.abs(orders).max())
    tau = t / math.sqrt(2.0)
    jn = _signed_lookup(bessel_j_orders(n_max, tau), orders)
    amp_a = jn @ (parity * a0)
    amp_b = jn @ (parity * b0)
    return amp_a.real**2 + amp_a.imag**2 + amp_b.real**2 + amp_b.imag**2


def analytic_prob(x: int, t: int, init: AnalyticInitial) -> float:
    """Bessel-sum probability ``P_x(t)`` of finding the walker at ``x``."""
    return float(analytic_profile([x], t, init)[0])


def analytic_prob_pair(x: int, t: int, k: int, sign: int) -> float:
    """``½ [J_{x+k}(tau) + sign·J_{x-k}(tau)]²`` for the symmetric pair ``±k``."""
    _require_step(t)
    if k < 1:
        raise ValueError(f"k must be >= 1 (got {k})")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1 (got {sign})")
    tau = t / math.sqrt(2.0)
    return 0.5 * (bessel_j(x + k, tau) + sign * bessel_j(x - k, tau)) ** 2


def pair_closed_form_k1(x: int, t: int, sign: int) -> float:
    """
    Recurrence-reduced form of the ``k = 1`` pair distribution.

    ``+``: ``2 x² (J_x/tau)²``; ``-``: ``2 (x J_x/tau - J_{x-1})²``.
    """
    _require_step(t)
    tau = t / math.sqrt(2.0)
    jx = bessel_j(x, tau)
    if sign == 1:
        return 2.0 * x * x * (jx / tau) ** 2
    if sign == -1:
        return 2.0 * (x * jx / tau - bessel_j(x - 1, tau)) ** 2
    raise ValueError(f"sign must be +1 or -1 (got {sign})")


def analytic_survival(init: AnalyticInitial, s: int, times: Iterable[int]) -> NDArray[np.float64]:
    """
    Bessel-sum survival probability ``Σ_{|x|≤s} P_x(t)`` for each ``t``.

    All times share one batched recurrence pass.
    """
    if s < 0:
        raise ValueError(f"s must be non-negative (got {s})")
    times = np.asarray(list(times), dtype=np.int64)
    if times.size == 0:
        return np.zeros(0)
    if times.min() < 1:
        raise ValueError(f"analytic expressions require t >= 1 (got {times.min()})")
    xs = np.arange(-s, s + 1)
    ys = np.array([y for y, _, _ in init.entries], dtype=np.int64)
    a0 = np.array([a for _, a, _ in init.entries], dtype=np.complex128)
    b0 = np.array([b for _, _, b in init.entries], dtype=np.complex128)
    parity = np.where(ys % 2 == 0, 1.0, -1.0)
    orders = xs[:, None] - ys[None, :]

    table = bessel_j_table(int(np.abs(orders).max()), times / math.sqrt(2.0))
    jn = _signed_lookup(table, orders)  # (times, xs, ys)
    amp_a = jn @ (parity * a0)
    amp_b = jn @ (parity * b0)
    probs = amp_a.real**2 + amp_a.imag**2 + amp_b.real**2 + amp_b.imag**2
    return probs.sum(axis=1)


def asymptotic_survival_exponent(k: int, sign: int) -> int:
    """
    Predicted long-time power of ``t`` in the pair survival probability.

    -3 (enhanced) for odd ``k`` with ``+`` and even ``k`` with ``-``;
    -1 (normal) otherwise.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1 (got {k})")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1 (got {sign})")
    odd = k % 2 == 1
    enhanced = (odd and sign == 1) or (not odd and sign == -1)
    return -3 if enhanced else -1

